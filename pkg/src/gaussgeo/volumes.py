"""Volumes of one-mode Gaussian channel classes.

All volumes are reported per unit volume of the local symplectic group and
the CJ phase angle (the divergent constant ``C`` is set to 1), so only ratios
carry physical meaning. Three independent routes are provided:

* closed forms (:func:`v_gc_analytic`, :func:`v_ebc_analytic`, :func:`v_icbc_analytic`),
* nested adaptive quadrature over ``(mu_A, mu)`` with the ``Delta`` integral done
  exactly (the density does not depend on ``Delta``),
* stratified importance-sampling Monte Carlo over ``(mu_A, mu, Delta)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import kernels
from .errors import GaussGeoError, ValidationError
from .regions import delta_bounds_array, entangled_mu_min, mu_window, separable_mu_max

SQRT2 = np.sqrt(2.0)
_NORM = 18018.0 * SQRT2


class Region(str, enum.Enum):
    CP = "CP"
    SEP = "SEP"
    NS = "NS"


class Method(str, enum.Enum):
    Analytic = "analytic"
    Quadrature = "quadrature"
    MonteCarlo = "mc"


class EstimationError(GaussGeoError, RuntimeError):
    """A numerical estimator could not produce a value."""


@dataclass(frozen=True)
class VolumeResult:
    value: float
    method: Method
    error_estimate: float = 0.0
    n_evals: int = 0
    converged: bool = True


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-7
    max_evals: int = 5_000_000
    #: QUADPACK's adaptive Gauss-Kronrod pair on finite intervals
    inner_rule: str = "gauss-kronrod-21"

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValidationError("rel_tol must be positive")
        if self.max_evals < 1:
            raise ValidationError("max_evals must be positive")


def _check_mu_sigma(mu_sigma):
    arr = np.asarray(mu_sigma, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValidationError("mu_sigma must lie in the open interval (0, 1)")
    return arr


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def v_gc_analytic(mu_sigma):
    """Volume of all one-mode Gaussian channels: ``[4 + m^{9/2}(9m^2 - 13)] / (18018 sqrt2 m^3)``."""
    m = _check_mu_sigma(mu_sigma)
    return _scalar_or_array((4.0 + m**4.5 * (9.0 * m * m - 13.0)) / (_NORM * m**3))


def v_ebc_analytic(mu_sigma):
    """Volume of entanglement breaking channels: ``sqrt(m) (1-m)^2 (11 + 9m) / (18018 sqrt2)``."""
    m = _check_mu_sigma(mu_sigma)
    return _scalar_or_array(np.sqrt(m) * (1.0 - m) ** 2 * (11.0 + 9.0 * m) / _NORM)


def v_icbc_analytic(mu_sigma):
    """Volume of incompatibility breaking channels."""
    m = _check_mu_sigma(mu_sigma)
    inner = -13.0 * m + 9.0 * m**3 - 8.0 * SQRT2 * (7.0 * m - 11.0) / (1.0 + m) ** 3.5
    return _scalar_or_array(np.sqrt(m) * inner / _NORM)


def v_analytic(region: Region | str, mu_sigma):
    fn = {Region.CP: v_gc_analytic, Region.SEP: v_ebc_analytic, Region.NS: v_icbc_analytic}[Region(region)]
    return fn(mu_sigma)


def relative_volume(kind: str, mu_sigma):
    """``V_EBC / V_GC`` (``kind="EB"``) or ``V_ICBC / V_GC`` (``kind="ICB"``) on ``(0, 1)``."""
    if kind == "EB":
        num = v_ebc_analytic(mu_sigma)
    elif kind == "ICB":
        num = v_icbc_analytic(mu_sigma)
    else:
        raise ValidationError(f"kind must be 'EB' or 'ICB', got {kind!r}")
    return _scalar_or_array(np.asarray(num) / np.asarray(v_gc_analytic(mu_sigma)))


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------


def _density(mu_a, mu_sigma, mu):
    return mu**5.5 / (64.0 * SQRT2 * mu_a**3 * mu_sigma**2)


def delta_length(region: Region, mu_a, mu_sigma, mu):
    """Length of the seralian interval belonging to ``region`` at fixed purities."""
    lo, hi, thr = delta_bounds_array(mu_a, mu_sigma, mu)
    if region is Region.SEP:
        lo = np.maximum(lo, thr)
    length = np.maximum(hi - lo, 0.0)
    if region is Region.NS:
        length = np.where(np.asarray(mu) <= mu_a, length, 0.0)
    return _scalar_or_array(length)


class _Counter:
    def __init__(self, fn):
        self.fn = fn
        self.n = 0

    def __call__(self, *args):
        self.n += 1
        return self.fn(*args)


def volume_quadrature(region: Region | str, mu_sigma: float, cfg: QuadratureConfig | None = None) -> VolumeResult:
    """Integrate the volume density over ``region`` by nested adaptive quadrature.

    Order of integration is ``Delta`` (exact), then ``mu`` over its window,
    then ``mu_A`` over ``(0, 1)``. Every kink of the integrands is passed to
    QUADPACK as a breakpoint: in ``mu`` the separable/entangled thresholds
    and ``mu = mu_A``; in ``mu_A`` the points ``mu_sigma`` and
    ``2 mu_sigma / (1 + mu_sigma)`` where ``mu_A`` leaves the window.
    """
    region = Region(region)
    cfg = cfg or QuadratureConfig()
    ms = float(_check_mu_sigma(mu_sigma))
    inner_tol = 0.1 * cfg.rel_tol
    state = {"inner_err": 0.0, "ok": True}

    def integrand_mu(mu, mu_a):
        return _density(mu_a, ms, mu) * delta_length(region, mu_a, ms, mu)

    f_mu = _Counter(integrand_mu)

    def integrand_a(mu_a):
        lo, hi = mu_window(mu_a, ms)
        if region is Region.NS:
            hi = min(hi, mu_a)
        if hi <= lo:
            return 0.0
        pts = [p for p in (separable_mu_max(mu_a, ms), entangled_mu_min(mu_a, ms), mu_a) if lo < p < hi]
        val, err, info = integrate.quad(
            f_mu, lo, hi, args=(mu_a,), points=pts or None, epsabs=0.0, epsrel=inner_tol, limit=200, full_output=1
        )[:3]
        state["inner_err"] = max(state["inner_err"], err)
        if f_mu.n > cfg.max_evals:
            state["ok"] = False
        return val

    outer_pts = [p for p in (ms, 2.0 * ms / (1.0 + ms)) if 0.0 < p < 1.0]
    value, err = integrate.quad(
        integrand_a, 0.0, 1.0, points=outer_pts, epsabs=0.0, epsrel=cfg.rel_tol, limit=200
    )
    error = err + state["inner_err"]
    converged = state["ok"] and error <= cfg.rel_tol * abs(value) * 10.0
    return VolumeResult(float(value), Method.Quadrature, float(error), f_mu.n, bool(converged))


# --------------------------------------------------------------------------
# Monte Carlo
# --------------------------------------------------------------------------

_REGION_INDEX = {Region.CP: 0, Region.SEP: 1, Region.NS: 2}


@dataclass(frozen=True)
class MonteCarloEstimate:
    """All three volumes from one sample stream, with standard errors."""

    mu_sigma: float
    volumes: np.ndarray
    std_errors: np.ndarray
    ratio_eb: float
    ratio_eb_se: float
    ratio_icb: float
    ratio_icb_se: float
    n_samples: int
    n_accepted: int

    def result(self, region: Region | str) -> VolumeResult:
        i = _REGION_INDEX[Region(region)]
        return VolumeResult(float(self.volumes[i]), Method.MonteCarlo, float(self.std_errors[i]), self.n_samples)


def _stratum_sizes(n_samples: int, n_strata: int) -> list[int]:
    base, extra = divmod(n_samples, n_strata)
    return [base + (1 if k < extra else 0) for k in range(n_strata)]


def montecarlo_volumes(
    mu_sigma: float, n_samples: int, seed: int, n_strata: int = 64, backend: str | None = None
) -> MonteCarloEstimate:
    """Estimate ``V_GC``, ``V_EBC`` and ``V_ICBC`` by stratified importance sampling.

    ``mu_A`` is split into ``n_strata`` equal strata, each with its own
    counter-based Philox stream spawned from ``seed``, so the result is
    bit-identical for a given ``(seed, n_samples, n_strata, backend)``.
    The standard errors combine per-stratum sample variances; ratio errors
    use the delta method with the within-stratum covariances.
    """
    ms = float(_check_mu_sigma(mu_sigma))
    if n_samples < 1000:
        raise ValidationError("n_samples must be at least 1000")
    if n_strata < 1 or n_samples < 2 * n_strata:
        raise ValidationError("need at least two samples per stratum")
    edges = np.linspace(0.0, 1.0, n_strata + 1)
    streams = np.random.SeedSequence(int(seed)).spawn(n_strata)
    total = np.zeros(3)
    var = np.zeros(3)
    cov = np.zeros(2)  # (CP, SEP), (CP, NS)
    accepted = 0
    for k, (n_k, ss) in enumerate(zip(_stratum_sizes(n_samples, n_strata), streams)):
        rng = np.random.Generator(np.random.Philox(ss))
        u = rng.random((3, n_k))
        m = kernels.mc_moments(u[0], u[1], u[2], edges[k], edges[k + 1], ms, backend=backend)
        mean = m[:3] / n_k
        total += mean
        var += (m[3:6] / n_k - mean**2) * n_k / (n_k - 1) / n_k
        cov += (m[6:8] / n_k - mean[0] * mean[1:]) * n_k / (n_k - 1) / n_k
        accepted += int(m[8])
    if accepted == 0:
        raise EstimationError("no Monte Carlo sample fell inside the physical region")
    se = np.sqrt(np.maximum(var, 0.0))
    ratios, ratio_se = [], []
    for j in (1, 2):
        r = total[j] / total[0]
        v = (var[j] - 2.0 * r * cov[j - 1] + r * r * var[0]) / total[0] ** 2
        ratios.append(float(r))
        ratio_se.append(float(np.sqrt(max(v, 0.0))))
    return MonteCarloEstimate(ms, total, se, ratios[0], ratio_se[0], ratios[1], ratio_se[1], int(n_samples), accepted)


def volume_montecarlo(region: Region | str, mu_sigma: float, n_samples: int, seed: int, **kwargs) -> VolumeResult:
    est = montecarlo_volumes(mu_sigma, n_samples, seed, **kwargs)
    res = est.result(region)
    if res.value <= 0.0:
        raise EstimationError(f"no Monte Carlo sample fell inside region {Region(region).value}")
    return res
