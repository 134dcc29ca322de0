"""Hilbert-Schmidt line and volume elements on Gaussian states.

Two-mode states are described up to local symplectic transformations by the
standard form::

    W = [[nu_A I,  G],
         [G,  nu_s I]],    G = diag(gamma_plus, gamma_minus),

or equivalently by the purity-seralian coordinates ``(mu_A, mu_s, mu, Delta)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ValidationError
from .symplectic import GaussianState, as_symmetric, hs_overlap
from .tolerances import TOL_RECON

SQRT2 = np.sqrt(2.0)


def line_element(st: GaussianState, d_sigma, d_ell=None) -> float:
    """Squared Hilbert-Schmidt length ``ds^2`` of the increment ``(dSigma, dell)`` at ``st``.

    ``ds^2 = (2 Tr[(S^-1 dS)^2] + Tr[S^-1 dS]^2 + 8 dl^T S^-1 dl) / (16 sqrt(det S))``
    """
    sigma = st.sigma
    d_sigma = as_symmetric(d_sigma, "dSigma")
    if d_sigma.shape != sigma.shape:
        raise ValidationError(f"dSigma has shape {d_sigma.shape}, expected {sigma.shape}")
    d_ell = np.zeros(sigma.shape[0]) if d_ell is None else np.asarray(d_ell, dtype=float)
    if d_ell.shape != (sigma.shape[0],):
        raise ValidationError("dEll has the wrong length")
    det = np.linalg.det(sigma)
    if not det > 0:
        raise PreconditionError("line element needs an invertible covariance matrix")
    x = np.linalg.solve(sigma, d_sigma)
    quad = d_ell @ np.linalg.solve(sigma, d_ell)
    return float((2.0 * np.trace(x @ x) + np.trace(x) ** 2 + 8.0 * quad) / (16.0 * np.sqrt(det)))


def hs_distance_squared(a: GaussianState, b: GaussianState) -> float:
    """Exact ``Tr[(rho_a - rho_b)^2]`` from the overlap formula."""
    return hs_overlap(a, a) + hs_overlap(b, b) - 2.0 * hs_overlap(a, b)


def displacement_factor(n: int, sigma) -> float:
    """Factor ``2^-n (det Sigma)^{-(n+1)/2}`` contributed by displacements to the volume element."""
    s = as_symmetric(sigma, "covariance matrix")
    if s.shape != (2 * n, 2 * n):
        raise ValidationError(f"expected a {2 * n}x{2 * n} matrix, got {s.shape}")
    det = np.linalg.det(s)
    if not det > 0:
        raise PreconditionError("displacement factor needs det(Sigma) > 0")
    return float(2.0**-n * det ** (-(n + 1) / 2.0))


@dataclass(frozen=True)
class StandardForm:
    nu_a: float
    nu_sigma: float
    gamma_plus: float
    gamma_minus: float

    def matrix(self) -> np.ndarray:
        a, b, gp, gm = self.nu_a, self.nu_sigma, self.gamma_plus, self.gamma_minus
        return np.array([[a, 0, gp, 0], [0, a, 0, gm], [gp, 0, b, 0], [0, gm, 0, b]], dtype=float)


@dataclass(frozen=True)
class PuritySeralian:
    mu_a: float
    mu_sigma: float
    mu: float
    delta: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.mu_a, self.mu_sigma, self.mu, self.delta)


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _two_mode(sigma) -> np.ndarray:
    s = as_symmetric(sigma, "two-mode covariance")
    if s.shape != (4, 4):
        raise ValidationError(f"two-mode (4x4) covariance matrix required, got {s.shape}")
    return s


def purity_seralian(sigma) -> PuritySeralian:
    """Local symplectic invariants read directly off the blocks of a two-mode ``Sigma``."""
    s = _two_mode(sigma)
    det_a, det_b, det_c = _det2(s[:2, :2]), _det2(s[2:, 2:]), _det2(s[2:, :2])
    det = np.linalg.det(s)
    if det_a <= 0 or det_b <= 0 or det <= 0:
        raise PreconditionError("purities need positive definite marginals and Sigma")
    return PuritySeralian(
        float(1.0 / np.sqrt(det_a)), float(1.0 / np.sqrt(det_b)), float(1.0 / np.sqrt(det)), det_a + det_b + 2.0 * det_c
    )


def to_standard_form(sigma) -> StandardForm:
    """Standard-form parameters of a two-mode covariance matrix.

    ``gamma_plus^2`` and ``gamma_minus^2`` are the roots of
    ``x^2 - s x + p^2 = 0`` with ``p = det Gamma`` and
    ``s = (p^2 + nu_A^2 nu_s^2 - det Sigma) / (nu_A nu_s)``; the sign of
    ``gamma_minus`` is that of ``p`` so that ``gamma_plus >= |gamma_minus|``.
    """
    s = _two_mode(sigma)
    det_a, det_b = _det2(s[:2, :2]), _det2(s[2:, 2:])
    if det_a <= 0 or det_b <= 0:
        raise PreconditionError("standard form needs invertible, positive marginal blocks")
    nu_a, nu_s = np.sqrt(det_a), np.sqrt(det_b)
    p = _det2(s[2:, :2])
    total = p * p + det_a * det_b - np.linalg.det(s)
    ssum = total / (nu_a * nu_s)
    disc = ssum * ssum - 4.0 * p * p
    scale = max(1.0, ssum * ssum)
    if disc < -TOL_RECON * scale or ssum < -TOL_RECON * max(1.0, abs(ssum)):
        raise PreconditionError("no real standard form: covariance matrix is not physical")
    root = np.sqrt(max(disc, 0.0))
    gp2 = max(0.5 * (ssum + root), 0.0)
    gp = np.sqrt(gp2)
    gm = p / gp if gp > 0 else 0.0
    return StandardForm(float(nu_a), float(nu_s), float(gp), float(gm))


def standard_to_purity(sf: StandardForm) -> PuritySeralian:
    nn = sf.nu_a * sf.nu_sigma
    prod = (sf.gamma_plus**2 - nn) * (sf.gamma_minus**2 - nn)
    if not prod > 0:
        raise PreconditionError("standard form has non-positive determinant")
    return PuritySeralian(
        1.0 / sf.nu_a,
        1.0 / sf.nu_sigma,
        1.0 / np.sqrt(prod),
        sf.nu_a**2 + sf.nu_sigma**2 + 2.0 * sf.gamma_plus * sf.gamma_minus,
    )


def _eps(delta: float, k: float, mu: float) -> float:
    radicand = (delta - k) ** 2 - 4.0 / mu**2
    if radicand < 0:
        if radicand < -TOL_RECON * max(1.0, (delta - k) ** 2):
            raise PreconditionError("purity-seralian point lies outside the physical region")
        radicand = 0.0
    return np.sqrt(radicand)


def purity_to_standard(ps: PuritySeralian) -> StandardForm:
    """Inverse of :func:`standard_to_purity` on the physical region.

    With ``eps_pm = sqrt((Delta - (mu_A +- mu_s)^2 / (mu_A mu_s)^2)^2 - 4 / mu^2)``
    and ``k = sqrt(mu_A mu_s) / 4``::

        gamma_plus  = k (eps_plus + eps_minus)
        gamma_minus = k (eps_minus - eps_plus)

    so that ``gamma_plus * gamma_minus = (Delta - nu_A^2 - nu_s^2) / 2``.
    """
    ma, ms, mu, delta = ps.as_tuple()
    if not (0 < ma <= 1 and 0 < ms <= 1 and 0 < mu <= 1):
        raise ValidationError("purities must lie in (0, 1]")
    pp = ma * ma * ms * ms
    k_plus, k_minus = (ma + ms) ** 2 / pp, (ma - ms) ** 2 / pp
    lo = 2.0 / mu + k_minus
    hi = min(k_plus - 2.0 / mu, 1.0 + 1.0 / mu**2)
    slack = TOL_RECON * max(1.0, abs(delta))
    if not (lo - slack <= delta <= hi + slack):
        raise PreconditionError(f"Delta = {delta:.12g} outside the physical interval [{lo:.12g}, {hi:.12g}]")
    eps_plus = _eps(delta, k_plus, mu)
    eps_minus = _eps(delta, k_minus, mu)
    k = np.sqrt(ma * ms) / 4.0
    return StandardForm(1.0 / ma, 1.0 / ms, float(k * (eps_plus + eps_minus)), float(k * (eps_minus - eps_plus)))


def volume_density_standard(sf: StandardForm) -> float:
    """``sqrt(det G)`` in the coordinates ``(nu_A, gamma_plus, gamma_minus)``.

    Both factors ``gamma^2 - nu_A nu_s`` are negative on physical states, so
    fractional powers are taken of absolute values and the result is >= 0.
    """
    nn = sf.nu_a * sf.nu_sigma
    fp = abs(sf.gamma_plus**2 - nn)
    fm = abs(sf.gamma_minus**2 - nn)
    if fp == 0 or fm == 0:
        raise PreconditionError("volume density is singular at gamma^2 = nu_A nu_sigma")
    num = sf.nu_a**2 * sf.nu_sigma**3 * abs(sf.gamma_plus**2 - sf.gamma_minus**2)
    return float(num / (32.0 * SQRT2 * fp**4.25 * fm**4.25))


def volume_density_purity(ps: PuritySeralian) -> float:
    """Volume density ``mu^{11/2} / (64 sqrt2 mu_A^3 mu_s^2)`` in ``(mu_A, mu, Delta)``; independent of ``Delta``."""
    if not (0 < ps.mu_a <= 1 and 0 < ps.mu_sigma <= 1 and 0 < ps.mu <= 1):
        raise ValidationError("purities must lie in (0, 1]")
    return float(ps.mu**5.5 / (64.0 * SQRT2 * ps.mu_a**3 * ps.mu_sigma**2))
