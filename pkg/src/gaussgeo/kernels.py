"""Hot numeric kernels for the volume estimators.

Every kernel exists twice: an explicit-loop version compiled with numba and a
vectorised pure-numpy version. The active backend is chosen at import time
from the environment variable ``GAUSSGEO_BACKEND`` (``numba`` or ``numpy``);
it defaults to numba when importable. ``set_backend`` switches at runtime,
which the tests and the benchmark use to compare the two paths.

Both versions consume the same pre-drawn uniforms, so they agree to rounding.

Region codes: 0 = all CP channels, 1 = separable CJ state (EB),
2 = non-steerable CJ state (ICB).
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


DENSITY_CONST = 1.0 / (64.0 * math.sqrt(2.0))
#: exponent of mu in the volume density, plus one (the importance pdf normaliser)
MU_POWER = 6.5

_BACKENDS = ("numba", "numpy")


def _default_backend() -> str:
    requested = os.environ.get("GAUSSGEO_BACKEND", "numba").strip().lower()
    if requested not in _BACKENDS:
        raise ValueError(f"GAUSSGEO_BACKEND must be one of {_BACKENDS}, got {requested!r}")
    if requested == "numba" and not HAVE_NUMBA:
        return "numpy"
    return requested


_backend = _default_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in _BACKENDS:
        raise ValueError(f"backend must be one of {_BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


@njit(cache=True)
def window_max(mu_a, mu_sigma):
    p = mu_a * mu_sigma
    return p / (p + abs(mu_a - mu_sigma))


def stratum_mu_cap(a_lo: float, a_hi: float, mu_sigma: float) -> float:
    """Upper end of the global-purity window over a stratum of ``mu_A``.

    The window maximum increases in ``mu_A`` below ``mu_sigma`` and decreases
    above it, so it is attained at ``mu_A = clip(mu_sigma, a_lo, a_hi)``.
    """
    return float(window_max(min(max(mu_sigma, a_lo), a_hi), mu_sigma))


# --------------------------------------------------------------------------
# Monte Carlo: importance sampling of mu, uniform mu_A and Delta in a box
# --------------------------------------------------------------------------
#
# Within a stratum [a_lo, a_hi] of mu_A:
#   mu_A  = a_lo + (a_hi - a_lo) u1
#   mu    = cap * u2^(1/6.5)             pdf 6.5 mu^5.5 / cap^6.5
#   Delta = uniform on [2/mu, min(K - 2/mu, 1 + 1/mu^2)], K = (mu_A + mu_s)^2 / (mu_A mu_s)^2
# The density mu^5.5 cancels against the pdf, leaving the weight
#   c cap^6.5 / (6.5 mu_A^3 mu_s^2) * (Delta box width) * (a_hi - a_lo)
# which is accumulated where the point satisfies the region inequalities.
#
# Returned moments (length 9): sums of w_r for r = 0, 1, 2, sums of w_r^2,
# the cross sums w_0 w_1, w_0 w_2, and the number of accepted samples.


@njit(cache=True)
def _mc_moments_numba(u1, u2, u3, a_lo, a_hi, mu_sigma, cap):
    out = np.zeros(9)
    width_a = a_hi - a_lo
    ms2 = mu_sigma * mu_sigma
    scale = DENSITY_CONST * cap**MU_POWER / (MU_POWER * ms2) * width_a
    inv_pow = 1.0 / MU_POWER
    for i in range(u1.shape[0]):
        ma = a_lo + width_a * u1[i]
        mu = cap * u2[i] ** inv_pow
        if mu <= 0.0:
            continue
        pp = (ma * mu_sigma) ** 2
        b0 = 2.0 / mu
        b1 = min((ma + mu_sigma) ** 2 / pp - 2.0 / mu, 1.0 + 1.0 / (mu * mu))
        if b1 <= b0:
            continue
        delta = b0 + (b1 - b0) * u3[i]
        p = ma * mu_sigma
        if mu < p or mu > p / (p + abs(ma - mu_sigma)):
            continue
        lo = 2.0 / mu + (ma - mu_sigma) ** 2 / pp
        if delta < lo or delta > b1:
            continue
        w = scale * (b1 - b0) / (ma * ma * ma)
        out[0] += w
        out[3] += w * w
        out[8] += 1.0
        if delta >= 2.0 / (ma * ma) + 2.0 / ms2 - 1.0 - 1.0 / (mu * mu):
            out[1] += w
            out[4] += w * w
            out[6] += w * w
        if mu <= ma:
            out[2] += w
            out[5] += w * w
            out[7] += w * w
    return out


def _mc_moments_numpy(u1, u2, u3, a_lo, a_hi, mu_sigma, cap):
    width_a = a_hi - a_lo
    ms2 = mu_sigma * mu_sigma
    scale = DENSITY_CONST * cap**MU_POWER / (MU_POWER * ms2) * width_a
    ma = a_lo + width_a * u1
    mu = cap * u2 ** (1.0 / MU_POWER)
    with np.errstate(divide="ignore", invalid="ignore"):
        pp = (ma * mu_sigma) ** 2
        b0 = 2.0 / mu
        b1 = np.minimum((ma + mu_sigma) ** 2 / pp - 2.0 / mu, 1.0 + 1.0 / (mu * mu))
        delta = b0 + (b1 - b0) * u3
        p = ma * mu_sigma
        lo = 2.0 / mu + (ma - mu_sigma) ** 2 / pp
        cp = (
            (mu > 0.0)
            & (b1 > b0)
            & (mu >= p)
            & (mu <= p / (p + np.abs(ma - mu_sigma)))
            & (delta >= lo)
            & (delta <= b1)
        )
        w = np.where(cp, scale * (b1 - b0) / (ma * ma * ma), 0.0)
        sep = cp & (delta >= 2.0 / (ma * ma) + 2.0 / ms2 - 1.0 - 1.0 / (mu * mu))
        ns = cp & (mu <= ma)
    w_sep = np.where(sep, w, 0.0)
    w_ns = np.where(ns, w, 0.0)
    w2 = w * w
    return np.array(
        [
            w.sum(),
            w_sep.sum(),
            w_ns.sum(),
            w2.sum(),
            (w_sep * w_sep).sum(),
            (w_ns * w_ns).sum(),
            (w * w_sep).sum(),
            (w * w_ns).sum(),
            float(np.count_nonzero(cp)),
        ]
    )


def mc_moments(u1, u2, u3, a_lo, a_hi, mu_sigma, backend=None):
    """Weighted sums over one ``mu_A`` stratum; see module comments for the layout."""
    cap = stratum_mu_cap(a_lo, a_hi, mu_sigma)
    fn = _mc_moments_numba if (backend or _backend) == "numba" else _mc_moments_numpy
    return fn(
        np.ascontiguousarray(u1, dtype=np.float64),
        np.ascontiguousarray(u2, dtype=np.float64),
        np.ascontiguousarray(u3, dtype=np.float64),
        float(a_lo),
        float(a_hi),
        float(mu_sigma),
        cap,
    )


# --------------------------------------------------------------------------
# Brute-force midpoint Riemann sum on a tensor grid
# --------------------------------------------------------------------------
#
# mu_A cells tile (0, 1); for each mu_A, mu cells tile the physical window
# [mu_A mu_s, mu_max(mu_A)]; for each (mu_A, mu), Delta cells tile the box
# [2/mu, min(K - 2/mu, 1 + 1/mu^2)] whose top is the upper seralian bound. Each cell contributes
# density * cell volume when its centre satisfies the region inequalities.
# Nothing is integrated analytically, unlike the quadrature route.


@njit(cache=True)
def _riemann_numba(mu_sigma, n):
    out = np.zeros(3)
    h = 1.0 / n
    ms2 = mu_sigma * mu_sigma
    for i in range(n):
        ma = (i + 0.5) * h
        p = ma * mu_sigma
        pp = p * p
        mu_hi = p / (p + abs(ma - mu_sigma))
        hm = (mu_hi - p) / n
        thr_a = 2.0 / (ma * ma) + 2.0 / ms2 - 1.0
        for j in range(n):
            mu = p + (j + 0.5) * hm
            b0 = 2.0 / mu
            b1 = min((ma + mu_sigma) ** 2 / pp - 2.0 / mu, 1.0 + 1.0 / (mu * mu))
            if b1 <= b0:
                continue
            hd = (b1 - b0) / n
            lo = 2.0 / mu + (ma - mu_sigma) ** 2 / pp
            hi = b1
            thr = thr_a - 1.0 / (mu * mu)
            dv = DENSITY_CONST * mu**5.5 / (ma * ma * ma * ms2) * h * hm * hd
            ns = mu <= ma
            for k in range(n):
                d = b0 + (k + 0.5) * hd
                if d < lo or d > hi:
                    continue
                out[0] += dv
                if d >= thr:
                    out[1] += dv
                if ns:
                    out[2] += dv
    return out


def _riemann_numpy(mu_sigma, n):
    out = np.zeros(3)
    h = 1.0 / n
    ms2 = mu_sigma * mu_sigma
    frac = ((np.arange(n) + 0.5) / n)[None, :]
    for i in range(n):
        ma = (i + 0.5) * h
        p = ma * mu_sigma
        pp = p * p
        hm = (p / (p + abs(ma - mu_sigma)) - p) / n
        mu = p + frac.T * (hm * n)
        b0 = 2.0 / mu
        b1 = np.minimum((ma + mu_sigma) ** 2 / pp - 2.0 / mu, 1.0 + 1.0 / (mu * mu))
        col = b1 > b0
        d = b0 + (b1 - b0) * frac
        lo = 2.0 / mu + (ma - mu_sigma) ** 2 / pp
        hi = b1
        inside = col & (d >= lo) & (d <= hi)
        dv = DENSITY_CONST * mu**5.5 / (ma**3 * ms2) * h * hm * (b1 - b0) / n
        cells = np.where(inside, dv, 0.0)
        thr = 2.0 / (ma * ma) + 2.0 / ms2 - 1.0 - 1.0 / (mu * mu)
        out[0] += cells.sum()
        out[1] += np.where(d >= thr, cells, 0.0).sum()
        out[2] += np.where(mu <= ma, cells, 0.0).sum()
    return out


def riemann_volumes(mu_sigma: float, n: int, backend=None) -> np.ndarray:
    """Midpoint Riemann sums ``[V_CP, V_SEP, V_NS]`` on an ``n^3`` grid."""
    fn = _riemann_numba if (backend or _backend) == "numba" else _riemann_numpy
    return fn(float(mu_sigma), int(n))
