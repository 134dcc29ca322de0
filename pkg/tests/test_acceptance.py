"""Acceptance gate: one check per headline criterion, each reporting PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -v``; the summary at the end of the
session lists every criterion. ``python3 tests/test_acceptance.py`` runs the same
checks without pytest.
"""

from __future__ import annotations

import time

import numpy as np
from oracles import jacobian_density_error, line_element_fd_error, random_increment, random_interior_point, random_state

from gaussgeo.channels import ChannelClass, classify_dets, classify_one_mode, det_invariants, inequality_residuals
from gaussgeo.choi import ReferenceMarginal, channel_to_cj, cj_to_channel, is_cj_nonsteerable, is_cj_separable
from gaussgeo.regions import RegionLabel, entangled_mu_min, region_grid, separable_mu_max
from gaussgeo.sampling import random_channel, random_cp_channel, random_marginal
from gaussgeo.symplectic import is_physical, symplectic_form
from gaussgeo.volumes import (
    QuadratureConfig,
    Region,
    montecarlo_volumes,
    relative_volume,
    v_analytic,
    v_gc_analytic,
    volume_quadrature,
)

RESULTS: dict[int, tuple[bool, str]] = {}
MU_SIGMAS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
Z99 = 2.5758293035489004


def record(number: int, title: str, passed: bool, detail: str) -> None:
    RESULTS[number] = (passed, f"{title}: {detail}")
    print(f"ACCEPTANCE {number} {'PASS' if passed else 'FAIL'} {title}: {detail}")
    assert passed, detail


def test_1_quadrature_matches_closed_forms():
    t0 = time.perf_counter()
    worst = 0.0
    cfg = QuadratureConfig(rel_tol=1e-7)
    for ms in MU_SIGMAS:
        for region in Region:
            got = volume_quadrature(region, ms, cfg).value
            worst = max(worst, abs(got - v_analytic(region, ms)) / v_analytic(region, ms))
    elapsed = time.perf_counter() - t0
    record(1, "quadrature vs closed forms", worst <= 1e-6 and elapsed < 60,
           f"max rel err {worst:.2e} (tol 1e-6), {elapsed:.1f} s (limit 60 s)")


def test_2_relative_volume_curves():
    grid = (np.arange(1000) + 0.5) / 1000
    eb, icb = relative_volume("EB", grid), relative_volume("ICB", grid)
    in_unit = bool(np.all((eb >= 0) & (eb <= 1) & (icb >= 0) & (icb <= 1)))
    ordered = bool(np.all(eb <= icb))
    monotone = bool(np.all(np.diff(eb) >= 0) and np.all(np.diff(icb) >= 0))
    record(2, "relative volume curves", in_unit and ordered and monotone,
           f"in [0,1]={in_unit}, EB<=ICB={ordered}, nondecreasing={monotone} on 1000 points")


def _channels_with_dets(d, n):
    """One-mode triples with prescribed determinants, stacked."""
    s = np.sqrt(np.abs(d))
    M = np.zeros(d.shape + (2, 2))
    M[..., 0, 0] = s
    M[..., 1, 1] = np.sign(d) * s
    N = np.sqrt(n)[..., None, None] * np.eye(2)
    return M, N


def test_3_determinant_regions_nested():
    d, n = np.meshgrid(np.linspace(-3, 3, 400), np.linspace(0, 9, 400), indexing="ij")
    d, n = d.ravel(), n.ravel()
    tol = 1e-12
    cp, eb, icb = inequality_residuals(d, n)
    in_cp = cp >= -tol
    in_eb = in_cp & (eb >= -tol)
    in_icb = in_cp & (icb >= -tol)
    nesting = int(np.count_nonzero(in_eb & ~in_icb) + np.count_nonzero(in_icb & ~in_cp))
    cls = classify_dets(d, n)
    label_bad = int(
        np.count_nonzero((cls == ChannelClass.EB) != in_eb)
        + np.count_nonzero((cls >= ChannelClass.ICBNotEB) != in_icb)
        + np.count_nonzero((cls >= ChannelClass.CPOnly) != in_cp)
    )
    # matrix-level check on constructed channels, thermal reference nu = 2
    M, N = _channels_with_dets(d, n)
    x = np.diag([np.sqrt(3.0), -np.sqrt(3.0)])
    Mt = np.swapaxes(M, -1, -2)
    sigma = np.zeros(d.shape + (4, 4))
    sigma[..., :2, :2] = N + 2.0 * Mt @ M
    sigma[..., :2, 2:] = Mt @ x
    sigma[..., 2:, :2] = x @ M
    sigma[..., 2:, 2:] = 2.0 * np.eye(2)
    om = symplectic_form(2)
    steer = np.zeros((4, 4))
    steer[2:, 2:] = om[:2, :2]
    theta = np.diag([-1.0, 1.0, 1.0, 1.0])
    m_cp = np.linalg.eigvalsh(sigma + 1j * om)[..., 0] >= -1e-9
    m_eb = m_cp & (np.linalg.eigvalsh(theta @ sigma @ theta + 1j * om)[..., 0] >= -1e-9)
    m_icb = m_cp & (np.linalg.eigvalsh(sigma + 1j * steer)[..., 0] >= -1e-9)
    away = (np.abs(cp) > 1e-6) & (np.abs(eb) > 1e-6) & (np.abs(icb) > 1e-6)
    matrix_bad = int(np.count_nonzero(away & ((m_cp != in_cp) | (m_eb != in_eb) | (m_icb != in_icb))))
    passed = nesting == 0 and label_bad == 0 and matrix_bad == 0
    record(3, "EB in ICB in CP on 400x400 grid", passed,
           f"nesting violations {nesting}, label mismatches {label_bad}, matrix-test mismatches {matrix_bad}")


def test_4_cj_round_trip():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(10_000):
        ch = random_cp_channel(rng)
        back = cj_to_channel(channel_to_cj(ch, random_marginal(rng, nu_range=(1.05, 5.0))))
        worst = max(worst, np.abs(back.M - ch.M).max(), np.abs(back.N - ch.N).max(), np.abs(back.c - ch.c).max())
    record(4, "CJ round trip", worst <= 1e-9, f"max componentwise error {worst:.2e} over 10^4 channels (tol 1e-9)")


def test_5_determinant_tests_match_matrix_tests():
    rng = np.random.default_rng(5)
    band = 1e-9
    counts = {"CP": [0, 0], "EB": [0, 0], "ICB": [0, 0]}
    # CP on arbitrary triples: physicality of the formal CJ state
    for _ in range(10_000):
        ch = random_channel(rng)
        cp, _, _ = inequality_residuals(*det_invariants(ch))
        if abs(cp) < band:
            continue
        cj = channel_to_cj(ch, random_marginal(rng), check_cp=False)
        counts["CP"][0] += 1
        counts["CP"][1] += (classify_one_mode(ch) >= ChannelClass.CPOnly) == is_physical(cj.sigma)
    # EB and ICB on CP triples: PPT and steering tests
    for _ in range(10_000):
        ch = random_cp_channel(rng)
        _, eb, icb = inequality_residuals(*det_invariants(ch))
        cls = classify_one_mode(ch)
        cj = channel_to_cj(ch, random_marginal(rng))
        if abs(eb) >= band:
            counts["EB"][0] += 1
            counts["EB"][1] += (cls == ChannelClass.EB) == is_cj_separable(cj)
        if abs(icb) >= band:
            counts["ICB"][0] += 1
            counts["ICB"][1] += (cls >= ChannelClass.ICBNotEB) == is_cj_nonsteerable(cj)
    passed = all(total == agree and total > 5000 for total, agree in counts.values())
    detail = ", ".join(f"{k} {a}/{t}" for k, (t, a) in counts.items())
    record(5, "determinant vs matrix classification", passed, f"agreement {detail}")


def test_6_line_element_matches_overlap():
    rng = np.random.default_rng(6)
    worst = 0.0
    for i in range(1000):
        n = 1 + i % 2
        sigma = random_state(rng, n)
        d_sigma, d_ell = random_increment(rng, n, sigma)
        worst = max(worst, line_element_fd_error(sigma, d_sigma, d_ell, 1e-4))
    record(6, "line element vs overlap distance", worst <= 1e-2,
           f"max rel err {worst:.2e} at step 1e-4 over 500 one-mode + 500 two-mode states (tol 1e-2)")


def test_7_jacobian_identity():
    rng = np.random.default_rng(7)
    worst = max(jacobian_density_error(*random_interior_point(rng)) for _ in range(1000))
    record(7, "density Jacobian identity", worst <= 1e-5, f"max rel err {worst:.2e} over 10^3 interior points (tol 1e-5)")


def test_8_region_grids():
    problems = []
    counts: dict[float, list[int]] = {}
    for ms in (0.2, 0.5, 0.8):
        g = region_grid(ms, 201)
        lab, frac, mu, ma = g["label"], g["entangled_fraction"], g["mu"], g["mu_a"]
        if not np.all(np.isin(lab, [int(v) for v in RegionLabel])):
            problems.append(f"{ms}: unlabelled points")
        if not np.all(frac[lab == RegionLabel.Separable] == 0.0):
            problems.append(f"{ms}: separable fraction != 0")
        if not np.all(frac[lab == RegionLabel.Entangled] == 1.0):
            problems.append(f"{ms}: entangled fraction != 1")
        co = lab == RegionLabel.Coexistence
        if not np.all((frac[co] > 0) & (frac[co] < 1)):
            problems.append(f"{ms}: coexistence fraction outside (0,1)")
        if not np.all((mu[co] > separable_mu_max(ma[co], ms)) & (mu[co] < entangled_mu_min(ma[co], ms))):
            problems.append(f"{ms}: coexistence cell outside its window")
        ns = g["nonsteerable"].reshape(201, 201)
        mu2, ma2 = mu.reshape(201, 201), ma.reshape(201, 201)
        if not np.array_equal(ns, mu2 <= ma2):
            problems.append(f"{ms}: steering flag off the diagonal")
        # along each mu_A column the flag switches exactly once, at mu = mu_A
        flips = np.argmax(~ns, axis=0)
        expected = np.searchsorted(mu2[:, 0], ma2[0], side="right")
        if not np.array_equal(flips[:-1], expected[:-1]) or not np.all(ns[:, -1]):
            problems.append(f"{ms}: steering flip misplaced")
        counts[ms] = np.bincount(lab, minlength=4).tolist()
    detail = "; ".join(problems) if problems else "labels Unphys/Sep/Coex/Ent " + ", ".join(
        f"mu_s={ms}: {c}" for ms, c in counts.items()
    )
    record(8, "region grids", not problems, detail)


def test_9_monte_carlo_calibration():
    truth = v_gc_analytic(0.5)
    covered = 0
    for seed in range(100):
        est = montecarlo_volumes(0.5, 10**6, seed=seed)
        covered += abs(est.volumes[0] - truth) <= Z99 * est.std_errors[0]
    record(9, "Monte Carlo calibration", covered >= 95, f"{covered}/100 runs cover V_GC(0.5) in the 99% CI (need >= 95)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
