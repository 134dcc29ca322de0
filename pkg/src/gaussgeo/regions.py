"""Regions of purity-seralian space that correspond to channel classes.

For fixed marginal purities ``(mu_A, mu_s)`` a CJ state of a legitimate
one-mode channel has global purity ``mu`` in the window
``[mu_A mu_s, mu_A mu_s / (mu_A mu_s + |mu_A - mu_s|)]`` and seralian
``Delta`` between the bounds returned by :func:`delta_bounds`. Separability
(entanglement breaking) holds iff ``Delta >= 2/mu_A^2 + 2/mu_s^2 - 1 - 1/mu^2``
and non-steerability (incompatibility breaking) iff ``mu <= mu_A``.

Functions named ``*_array`` accept broadcastable arrays and never raise on
unphysical points; the scalar functions validate their arguments.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ValidationError
from .geometry import PuritySeralian
from .tolerances import TOL_CLASS


class RegionLabel(enum.IntEnum):
    Unphysical = 0
    Separable = 1
    Coexistence = 2
    Entangled = 3


@dataclass(frozen=True)
class DeltaBounds:
    lo: float
    hi: float
    sep_threshold: float
    physical: bool = True

    @property
    def length(self) -> float:
        return max(self.hi - self.lo, 0.0)


def _check_purity(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 < x <= 1.0:
        raise ValidationError(f"{name} must lie in (0, 1], got {x!r}")
    return x


def mu_window(mu_a, mu_sigma):
    """Physical window ``(mu_min, mu_max)`` for the global purity."""
    prod = np.multiply(mu_a, mu_sigma)
    return prod, prod / (prod + np.abs(np.subtract(mu_a, mu_sigma)))


def separable_mu_max(mu_a, mu_sigma):
    """Largest ``mu`` for which every compatible ``Delta`` is separable."""
    prod = np.multiply(mu_a, mu_sigma)
    return prod / (np.add(mu_a, mu_sigma) - prod)


def entangled_mu_min(mu_a, mu_sigma):
    """Smallest ``mu`` for which every compatible ``Delta`` is entangled."""
    prod = np.multiply(mu_a, mu_sigma)
    return prod / np.sqrt(np.square(mu_a) + np.square(mu_sigma) - prod * prod)


def delta_bounds_array(mu_a, mu_sigma, mu):
    """``(lo, hi, sep_threshold)`` arrays; no validation."""
    mu_a, mu_sigma, mu = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (mu_a, mu_sigma, mu)))
    pp = (mu_a * mu_sigma) ** 2
    lo = 2.0 / mu + (mu_a - mu_sigma) ** 2 / pp
    hi = np.minimum(-2.0 / mu + (mu_a + mu_sigma) ** 2 / pp, 1.0 + 1.0 / mu**2)
    thr = 2.0 / mu_a**2 + 2.0 / mu_sigma**2 - 1.0 - 1.0 / mu**2
    return lo, hi, thr


def delta_bounds(mu_a: float, mu_sigma: float, mu: float) -> DeltaBounds:
    """Seralian range at fixed purities.

    Points outside the physical ``mu`` window are reported with
    ``physical=False`` rather than raising.
    """
    mu_a, mu_sigma, mu = (_check_purity(n, v) for n, v in (("mu_A", mu_a), ("mu_sigma", mu_sigma), ("mu", mu)))
    lo, hi, thr = (float(v) for v in delta_bounds_array(mu_a, mu_sigma, mu))
    w_lo, w_hi = mu_window(mu_a, mu_sigma)
    physical = bool(w_lo - TOL_CLASS <= mu <= w_hi + TOL_CLASS)
    return DeltaBounds(lo, hi, thr, physical)


def separability_residual(ps: PuritySeralian) -> float:
    """``1 + 1/mu^2 + Delta - 2/mu_A^2 - 2/mu_s^2``; separable iff >= 0."""
    return 1.0 + 1.0 / ps.mu**2 + ps.delta - 2.0 / ps.mu_a**2 - 2.0 / ps.mu_sigma**2


def is_separable_ps(ps: PuritySeralian, tol: float = TOL_CLASS) -> bool:
    return bool(separability_residual(ps) >= -tol)


def is_nonsteerable_ps(ps: PuritySeralian, tol: float = TOL_CLASS) -> bool:
    """Steering needs only ``mu`` and ``mu_A``: non-steerable iff ``mu <= mu_A``."""
    return bool(ps.mu <= ps.mu_a + tol)


def classify_purities_array(mu_a, mu_sigma, mu, tol: float = TOL_CLASS) -> np.ndarray:
    """Elementwise :class:`RegionLabel` codes (``int8``)."""
    mu_a, mu_sigma, mu = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (mu_a, mu_sigma, mu)))
    w_lo, w_hi = mu_window(mu_a, mu_sigma)
    sep_max = separable_mu_max(mu_a, mu_sigma)
    ent_min = entangled_mu_min(mu_a, mu_sigma)
    label = np.full(mu.shape, RegionLabel.Coexistence, dtype=np.int8)
    label[mu >= ent_min - tol] = RegionLabel.Entangled
    label[mu <= sep_max + tol] = RegionLabel.Separable
    label[(mu < w_lo - tol) | (mu > w_hi + tol)] = RegionLabel.Unphysical
    return label


def classify_by_purities(mu_a: float, mu_sigma: float, mu: float) -> RegionLabel:
    for name, v in (("mu_A", mu_a), ("mu_sigma", mu_sigma), ("mu", mu)):
        _check_purity(name, v)
    return RegionLabel(int(classify_purities_array(mu_a, mu_sigma, mu)))


def entangled_fraction_array(mu_a, mu_sigma, mu) -> np.ndarray:
    """Fraction of the seralian interval that is entangled; NaN where unphysical.

    The volume density does not depend on ``Delta``, so the conditional
    volume fraction is the ratio of interval lengths.
    """
    label = classify_purities_array(mu_a, mu_sigma, mu)
    lo, hi, thr = delta_bounds_array(mu_a, mu_sigma, mu)
    width = hi - lo
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.clip((np.minimum(hi, thr) - lo) / width, 0.0, 1.0)
    frac = np.where(label == RegionLabel.Separable, 0.0, frac)
    frac = np.where(label == RegionLabel.Entangled, 1.0, frac)
    return np.where(label == RegionLabel.Unphysical, np.nan, frac)


def entangled_fraction(mu_a: float, mu_sigma: float, mu: float) -> float:
    label = classify_by_purities(mu_a, mu_sigma, mu)
    if label is RegionLabel.Unphysical:
        raise PreconditionError("entangled fraction is undefined at an unphysical point")
    return float(entangled_fraction_array(mu_a, mu_sigma, mu))


def region_grid(mu_sigma: float, n: int):
    """Labelled ``n x n`` grid over ``(mu, mu_A)`` in ``(0, 1]^2``.

    Returns a dict of flat arrays in row-major order (``mu`` slow, ``mu_A``
    fast): ``mu``, ``mu_a``, ``label``, ``entangled_fraction``, ``nonsteerable``.
    """
    _check_purity("mu_sigma", mu_sigma)
    if int(n) != n or n < 2:
        raise ValidationError(f"grid size must be an integer >= 2, got {n!r}")
    axis = np.linspace(1.0 / n, 1.0, int(n))
    mu, mu_a = (a.ravel() for a in np.meshgrid(axis, axis, indexing="ij"))
    return {
        "mu": mu,
        "mu_a": mu_a,
        "label": classify_purities_array(mu_a, mu_sigma, mu),
        "entangled_fraction": entangled_fraction_array(mu_a, mu_sigma, mu),
        "nonsteerable": mu <= mu_a + TOL_CLASS,
    }
