"""Reproducible random generators for states, symplectic maps and channels.

Every function takes a :class:`numpy.random.Generator`; nothing touches
global random state. Channel sampling draws the entries of ``M`` and ``N``
uniformly, symmetrises ``N`` and rejects until the matrix-level CP test
passes, so a given seed always yields the same sequence of channels.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .channels import GaussianChannel, is_cp_general
from .choi import ReferenceMarginal
from .symplectic import symplectic_form


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def random_symplectic_1mode(rng: np.random.Generator, max_cond: float = 10.0) -> np.ndarray:
    """``R(a) diag(e^r, e^-r) R(b)`` with condition number ``e^{2|r|} <= max_cond``."""
    r_max = 0.5 * np.log(max_cond)
    r = rng.uniform(-r_max, r_max)
    a, b = rng.uniform(0.0, 2.0 * np.pi, size=2)
    return rotation(a) @ np.diag([np.exp(r), np.exp(-r)]) @ rotation(b)


def random_local_symplectic(rng: np.random.Generator, max_cond: float = 10.0) -> np.ndarray:
    out = np.zeros((4, 4))
    out[:2, :2] = random_symplectic_1mode(rng, max_cond)
    out[2:, 2:] = random_symplectic_1mode(rng, max_cond)
    return out


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """``exp(Omega H)`` for a random symmetric ``H``; symplectic by construction."""
    h = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return expm(symplectic_form(n) @ (0.5 * (h + h.T)))


def random_physical_cov(
    n: int, rng: np.random.Generator, nu_range: tuple[float, float] = (1.0, 10.0), scale: float = 0.5
) -> np.ndarray:
    S = random_symplectic(n, rng, scale)
    nu = rng.uniform(*nu_range, size=n)
    sigma = S.T @ np.diag(np.repeat(nu, 2)) @ S
    return 0.5 * (sigma + sigma.T)


def random_channel(rng: np.random.Generator, low: float = -2.0, high: float = 2.0) -> GaussianChannel:
    """One-mode triple with uniform entries; not necessarily CP."""
    M = rng.uniform(low, high, size=(2, 2))
    N = rng.uniform(low, high, size=(2, 2))
    c = rng.uniform(low, high, size=2)
    return GaussianChannel(M, 0.5 * (N + N.T), c)


def random_cp_channel(rng: np.random.Generator, low: float = -2.0, high: float = 2.0) -> GaussianChannel:
    while True:
        ch = random_channel(rng, low, high)
        if is_cp_general(ch):
            return ch


def random_marginal(
    rng: np.random.Generator,
    nu_range: tuple[float, float] = (1.05, 5.0),
    max_cond: float = 4.0,
    displaced: bool = True,
) -> ReferenceMarginal:
    """Squeezed thermal reference marginal with ``nu`` drawn uniformly from ``nu_range``."""
    nu = rng.uniform(*nu_range)
    S = random_symplectic_1mode(rng, max_cond)
    ell = rng.uniform(-1.0, 1.0, size=2) if displaced else np.zeros(2)
    return ReferenceMarginal(nu * (S.T @ S), ell)
