"""Choi-Jamiolkowski correspondence between one-mode channels and two-mode states.

The CJ state of a channel ``(M, N, c)`` relative to a reference marginal
``(Sigma_s, ell_s)`` has covariance::

    [[N + M^T Sigma_s M,  M^T X],
     [X M,                Sigma_s]],     X = S_s^T Z_s S_s,

with ``Sigma_s = S_s^T (nu I) S_s`` and ``Z_s = sqrt(nu^2 - 1) diag(1, -1)``.
Mode ordering is (output mode A, reference mode).

``S_s`` is fixed only up to a left rotation by the Williamson decomposition,
and ``X`` is not rotation invariant, so the reference symplectic is pinned to
the unique symmetric positive definite choice ``S_s = (Sigma_s / nu)^{1/2}``.
Both directions of the map use the same rule, so the correspondence is a
function of ``Sigma_s`` alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import GaussianChannel, is_cp_general
from .errors import PreconditionError, ValidationError
from .symplectic import (
    OMEGA_1,
    GaussianState,
    _readonly,
    as_symmetric,
    is_physical,
    min_eig_hermitian,
    symplectic_form,
    williamson,
)
from .tolerances import TOL_PSD, TOL_RANK

SIGMA_3 = np.diag([1.0, -1.0])
THETA_PPT = np.diag([-1.0, 1.0, 1.0, 1.0])
_ZERO_2 = np.zeros((2, 2))
STEERING_FORM = np.block([[_ZERO_2, _ZERO_2], [_ZERO_2, OMEGA_1]])


def _positive_symplectic(sigma: np.ndarray, nu: float) -> np.ndarray:
    w, v = np.linalg.eigh(sigma / nu)
    return (v * np.sqrt(w)) @ v.T


@dataclass(frozen=True)
class ReferenceMarginal:
    """One-mode reference state of full symplectic rank (``nu > 1``)."""

    sigma: np.ndarray
    ell: np.ndarray = None
    nu: float = field(init=False)
    S: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        s = as_symmetric(self.sigma, "reference covariance")
        if s.shape != (2, 2):
            raise ValidationError(f"reference marginal must be one-mode (2x2), got {s.shape}")
        ell = np.zeros(2) if self.ell is None else np.asarray(self.ell, dtype=float)
        if ell.shape != (2,):
            raise ValidationError("reference displacement must have length 2")
        if not is_physical(s):
            raise PreconditionError("reference marginal is not a physical covariance matrix")
        nu = float(williamson(s).nu[0])
        if nu - 1.0 <= TOL_RANK:
            raise PreconditionError(
                f"reference marginal must have full symplectic rank (nu > 1 + {TOL_RANK:g}), got nu = {nu:.12g}"
            )
        object.__setattr__(self, "sigma", _readonly(s))
        object.__setattr__(self, "ell", _readonly(ell))
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "S", _readonly(_positive_symplectic(s, nu)))

    @classmethod
    def thermal(cls, nu: float) -> "ReferenceMarginal":
        return cls(nu * np.eye(2))

    @classmethod
    def from_purity(cls, mu_sigma: float) -> "ReferenceMarginal":
        return cls.thermal(1.0 / mu_sigma)

    @property
    def purity(self) -> float:
        return 1.0 / self.nu

    @property
    def Z(self) -> np.ndarray:
        return np.sqrt(self.nu**2 - 1.0) * SIGMA_3

    @property
    def correlation(self) -> np.ndarray:
        """``X = S^T Z S``, the off-diagonal block of the reference state."""
        return self.S.T @ self.Z @ self.S


@dataclass(frozen=True)
class CJState:
    """Two-mode Gaussian state ordered as (output mode A, reference mode)."""

    state: GaussianState

    def __post_init__(self):
        if self.state.n != 2:
            raise ValidationError(f"CJ state must be two-mode, got {self.state.n} modes")

    @classmethod
    def from_arrays(cls, sigma, ell=None) -> "CJState":
        return cls(GaussianState(sigma, ell))

    @property
    def sigma(self) -> np.ndarray:
        return self.state.sigma

    @property
    def ell(self) -> np.ndarray:
        return self.state.ell

    @property
    def sigma_a(self) -> np.ndarray:
        return self.sigma[:2, :2]

    @property
    def gamma(self) -> np.ndarray:
        """Lower-left block ``Gamma`` of ``[[Sigma_A, Gamma^T], [Gamma, Sigma_s]]``."""
        return self.sigma[2:, :2]

    @property
    def sigma_ref(self) -> np.ndarray:
        return self.sigma[2:, 2:]

    def marginal(self) -> ReferenceMarginal:
        return ReferenceMarginal(self.sigma_ref, self.ell[2:])


def reference_state(marg: ReferenceMarginal) -> CJState:
    """The state ``rho_Omega`` both of whose marginals equal the reference."""
    x = marg.correlation
    sigma = np.block([[marg.sigma, x], [x, marg.sigma]])
    return CJState.from_arrays(sigma, np.concatenate([marg.ell, marg.ell]))


def channel_to_cj(ch: GaussianChannel, marg: ReferenceMarginal, check_cp: bool = True) -> CJState:
    """CJ state ``(Lambda (x) 1)(rho_Omega)`` of a one-mode channel.

    Parameters
    ----------
    check_cp : bool
        Reject channels that are not completely positive. Passing ``False``
        returns the formal (unphysical) covariance of a non-CP map; intended
        for research use only.
    """
    if ch.M.shape != (2, 2):
        raise ValidationError("Choi-Jamiolkowski map is implemented for one-mode channels only")
    if check_cp and not is_cp_general(ch):
        raise PreconditionError("channel is not completely positive")
    M = ch.M
    x = marg.correlation
    sigma = np.block([[ch.N + M.T @ marg.sigma @ M, M.T @ x], [x @ M, marg.sigma]])
    ell = np.concatenate([ch.c + M.T @ marg.ell, marg.ell])
    return CJState.from_arrays(sigma, ell)


def cj_to_channel(cj: CJState) -> GaussianChannel:
    """Recover ``(M, N, c)`` from a CJ state; inverse of :func:`channel_to_cj`."""
    if not cj.state.is_physical():
        raise PreconditionError("CJ state is not physical")
    marg = cj.marginal()
    M = np.linalg.solve(marg.correlation, cj.gamma)
    N = cj.sigma_a - M.T @ marg.sigma @ M
    c = cj.ell[:2] - M.T @ marg.ell
    return GaussianChannel(M, 0.5 * (N + N.T), c)


def is_cj_separable(cj: CJState, tol: float = TOL_PSD) -> bool:
    """PPT test: ``Theta Sigma Theta + i Omega >= 0`` with ``Theta = diag(-1, 1, 1, 1)``."""
    ppt = THETA_PPT @ cj.sigma @ THETA_PPT
    return bool(min_eig_hermitian(ppt + 1j * symplectic_form(2)) >= -tol)


def is_cj_nonsteerable(cj: CJState, tol: float = TOL_PSD) -> bool:
    """Non-steerability test ``Sigma + i (0 (+) omega) >= 0`` (``omega`` on the reference mode)."""
    return bool(min_eig_hermitian(cj.sigma + 1j * STEERING_FORM) >= -tol)
