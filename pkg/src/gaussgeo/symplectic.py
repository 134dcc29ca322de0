"""Symplectic linear algebra and Gaussian-state primitives.

Conventions: quadratures are ordered ``(q_1, p_1, ..., q_n, p_n)`` and the
vacuum has covariance matrix ``I``, so a real symmetric ``Sigma`` is a
covariance matrix iff ``Sigma + i Omega >= 0``. States are handled purely
through ``(Sigma, ell)``; no Fock-space objects appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, ValidationError
from .tolerances import TOL_PSD, TOL_SYM, TOL_SYMPL

OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA_1.setflags(write=False)


def symplectic_form(n: int) -> np.ndarray:
    """Return the ``2n x 2n`` symplectic form ``Omega = omega (+) ... (+) omega``."""
    if int(n) != n or n < 1:
        raise ValidationError(f"mode count must be a positive integer, got {n!r}")
    return np.kron(np.eye(int(n)), OMEGA_1)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def as_symmetric(sigma, name: str = "matrix") -> np.ndarray:
    """Validate ``sigma`` as a real symmetric ``2n x 2n`` array and return it as float.

    The input is symmetrised to remove sub-tolerance asymmetry.
    """
    s = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
        raise ValidationError(f"{name} must be a square matrix of even size, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise ValidationError(f"{name} has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(s - s.T)) > TOL_SYM * scale:
        raise ValidationError(f"{name} is not symmetric")
    return 0.5 * (s + s.T)


def mode_count(sigma) -> int:
    return np.shape(sigma)[0] // 2


def min_eig_hermitian(h: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix (or a stack of them)."""
    return np.linalg.eigvalsh(h)[..., 0]


def is_physical(sigma, tol: float = TOL_PSD) -> bool:
    """True iff ``Sigma + i Omega`` is positive semidefinite up to ``tol``."""
    s = as_symmetric(sigma, "covariance matrix")
    omega = symplectic_form(mode_count(s))
    return bool(min_eig_hermitian(s + 1j * omega) >= -tol)


def is_symplectic(S, tol: float = TOL_SYMPL) -> bool:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        return False
    omega = symplectic_form(S.shape[0] // 2)
    return bool(np.max(np.abs(S.T @ omega @ S - omega)) <= tol)


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state given by its covariance matrix and displacement vector.

    Physicality is not enforced here so that formal (e.g. perturbed) matrices
    can still be fed to :func:`hs_overlap` and the line element; use
    :func:`is_physical` where it matters.
    """

    sigma: np.ndarray
    ell: np.ndarray = field(default=None)

    def __post_init__(self):
        s = as_symmetric(self.sigma, "covariance matrix")
        ell = np.zeros(s.shape[0]) if self.ell is None else np.asarray(self.ell, dtype=float)
        if ell.shape != (s.shape[0],):
            raise ValidationError(
                f"displacement must have length {s.shape[0]}, got shape {ell.shape}"
            )
        object.__setattr__(self, "sigma", _readonly(s))
        object.__setattr__(self, "ell", _readonly(ell))

    @property
    def n(self) -> int:
        return self.sigma.shape[0] // 2

    def is_physical(self) -> bool:
        return is_physical(self.sigma)


@dataclass(frozen=True)
class WilliamsonDecomposition:
    """``Sigma = S^T D S`` with ``S`` symplectic and ``D = diag(nu_1, nu_1, ..., nu_n, nu_n)``."""

    S: np.ndarray
    nu: np.ndarray

    @property
    def D(self) -> np.ndarray:
        return np.diag(np.repeat(self.nu, 2))

    def reconstruct(self) -> np.ndarray:
        return self.S.T @ self.D @ self.S


def _sqrtm_psd(s: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(s)
    return (v * np.sqrt(w)) @ v.T


def williamson(sigma) -> WilliamsonDecomposition:
    """Williamson normal form of a positive definite ``Sigma``.

    The symplectic eigenvalues are the moduli of the eigenvalues of
    ``i Omega Sigma``. They are obtained from the Hermitian matrix
    ``K = Sigma^{1/2} (i Omega) Sigma^{1/2}``, which is similar to
    ``i Omega Sigma`` but has an orthonormal eigenbasis even when symplectic
    eigenvalues are degenerate. Eigenvalues come in pairs ``+-nu``; each
    ``nu`` is the average of the two moduli.

    Returns
    -------
    WilliamsonDecomposition
        ``nu`` sorted in descending order, ``S`` symplectic with
        ``S.T @ D @ S == Sigma``. For degenerate ``nu`` the choice of ``S`` is
        arbitrary within the stabiliser.
    """
    s = as_symmetric(sigma, "covariance matrix")
    n = mode_count(s)
    w = np.linalg.eigvalsh(s)
    if w[0] <= 0:
        raise PreconditionError("Williamson decomposition needs a positive definite matrix")
    root = _sqrtm_psd(s)
    omega = symplectic_form(n)
    k = root @ (1j * omega) @ root
    evals, evecs = np.linalg.eigh(0.5 * (k + k.conj().T))
    # eigh sorts ascending: -nu_max..-nu_min, +nu_min..+nu_max
    nu = 0.5 * (evals[n:][::-1] - evals[:n])
    pos = evecs[:, n:][:, ::-1]
    # K u = nu u with u = x + i y gives A x = nu y, A y = -nu x for A = root Omega root;
    # columns (sqrt2 y, sqrt2 x) bring root Omega root to nu_k * omega blocks.
    basis = np.empty((2 * n, 2 * n))
    basis[:, 0::2] = np.sqrt(2.0) * pos.imag
    basis[:, 1::2] = np.sqrt(2.0) * pos.real
    d_inv_sqrt = np.repeat(1.0 / np.sqrt(nu), 2)
    S = d_inv_sqrt[:, None] * (basis.T @ root)
    return WilliamsonDecomposition(S=_readonly(S), nu=_readonly(nu))


def symplectic_eigenvalues(sigma) -> np.ndarray:
    return williamson(sigma).nu


def purity(sigma) -> float:
    """Purity ``Tr rho^2 = 1 / sqrt(det Sigma)``."""
    s = as_symmetric(sigma, "covariance matrix")
    det = np.linalg.det(s)
    if det <= 0:
        raise PreconditionError(f"purity needs det(Sigma) > 0, got {det:g}")
    return float(1.0 / np.sqrt(det))


def hs_overlap(a: GaussianState, b: GaussianState) -> float:
    """Hilbert-Schmidt overlap ``Tr[rho_a rho_b]`` of two Gaussian states.

    ``det((Sigma_a + Sigma_b)/2)^{-1/2} * exp(-(l_a - l_b)^T (Sigma_a + Sigma_b)^{-1} (l_a - l_b) / 2)``
    """
    if a.n != b.n:
        raise ValidationError(f"mode counts differ: {a.n} vs {b.n}")
    total = a.sigma + b.sigma
    det_half = np.linalg.det(0.5 * total)
    if not det_half > 0:
        raise PreconditionError("Sigma_a + Sigma_b must be positive definite")
    d = a.ell - b.ell
    quad = d @ np.linalg.solve(total, d)
    return float(np.exp(-0.5 * quad) / np.sqrt(det_half))
