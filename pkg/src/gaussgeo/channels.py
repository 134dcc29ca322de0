"""Gaussian channels ``(M, N, c)`` and their determinant classification.

A channel acts on an input state by ``Sigma -> M^T Sigma M + N`` and
``ell -> M^T ell + c``. With ``n_A`` input and ``n_B`` output modes ``M`` has
shape ``(2 n_A, 2 n_B)``, ``N`` is ``2 n_B x 2 n_B`` symmetric and ``c`` has
length ``2 n_B``.

For one-mode channels complete positivity, entanglement breaking and
incompatibility breaking reduce to inequalities between ``det N`` and
``det M``::

    CP   det N >= (det M - 1)^2
    EB   det N >= (det M + 1)^2
    ICB  det N >= (det M)^2
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .symplectic import GaussianState, _readonly, as_symmetric, min_eig_hermitian, symplectic_form
from .tolerances import TOL_CLASS, TOL_PSD


class ChannelClass(enum.IntEnum):
    """Nested channel classes, ordered so that a larger value is a smaller set."""

    NotCP = 0
    CPOnly = 1
    ICBNotEB = 2
    EB = 3


@dataclass(frozen=True)
class GaussianChannel:
    M: np.ndarray
    N: np.ndarray
    c: np.ndarray = None

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        if M.ndim != 2 or M.shape[0] % 2 or M.shape[1] % 2:
            raise ValidationError(f"M must be a 2n_A x 2n_B matrix, got shape {M.shape}")
        N = as_symmetric(self.N, "N")
        if N.shape[0] != M.shape[1]:
            raise ValidationError(f"N has shape {N.shape} but M maps to dimension {M.shape[1]}")
        c = np.zeros(N.shape[0]) if self.c is None else np.asarray(self.c, dtype=float)
        if c.shape != (N.shape[0],):
            raise ValidationError(f"c must have length {N.shape[0]}, got shape {c.shape}")
        object.__setattr__(self, "M", _readonly(M))
        object.__setattr__(self, "N", _readonly(N))
        object.__setattr__(self, "c", _readonly(c))

    @property
    def n_in(self) -> int:
        return self.M.shape[0] // 2

    @property
    def n_out(self) -> int:
        return self.M.shape[1] // 2

    def then(self, other: "GaussianChannel") -> "GaussianChannel":
        """Composite channel: apply ``self`` first, then ``other``."""
        if other.n_in != self.n_out:
            raise ValidationError("output of the first channel does not feed the second")
        M2 = other.M
        return GaussianChannel(self.M @ M2, M2.T @ self.N @ M2 + other.N, M2.T @ self.c + other.c)


def identity_channel(n: int = 1) -> GaussianChannel:
    return GaussianChannel(np.eye(2 * n), np.zeros((2 * n, 2 * n)), np.zeros(2 * n))


def prepare_vacuum_channel(n: int = 1) -> GaussianChannel:
    """Replace any input by the vacuum: ``M = 0``, ``N = I``."""
    return GaussianChannel(np.zeros((2 * n, 2 * n)), np.eye(2 * n), np.zeros(2 * n))


def attenuator(eta: float, n: int = 1) -> GaussianChannel:
    """Pure-loss channel of transmissivity ``eta`` in ``[0, 1]``."""
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"transmissivity must lie in [0, 1], got {eta}")
    eye = np.eye(2 * n)
    return GaussianChannel(np.sqrt(eta) * eye, (1.0 - eta) * eye)


def amplifier(gain: float, n: int = 1) -> GaussianChannel:
    """Quantum-limited amplifier with ``gain >= 1``."""
    if gain < 1.0:
        raise ValidationError(f"gain must be >= 1, got {gain}")
    eye = np.eye(2 * n)
    return GaussianChannel(np.sqrt(gain) * eye, (gain - 1.0) * eye)


def apply(ch: GaussianChannel, st: GaussianState) -> GaussianState:
    if st.n != ch.n_in:
        raise ValidationError(f"channel expects {ch.n_in} input modes, state has {st.n}")
    M = ch.M
    return GaussianState(M.T @ st.sigma @ M + ch.N, M.T @ st.ell + ch.c)


def cp_matrix(ch: GaussianChannel) -> np.ndarray:
    """Hermitian matrix ``N - i M^T Omega_A M + i Omega_B`` whose positivity is CP."""
    om_a = symplectic_form(ch.n_in)
    om_b = symplectic_form(ch.n_out)
    return ch.N - 1j * (ch.M.T @ om_a @ ch.M) + 1j * om_b


def is_cp_general(ch: GaussianChannel, tol: float = TOL_PSD) -> bool:
    """Matrix-level complete positivity test, valid for any mode counts."""
    return bool(min_eig_hermitian(cp_matrix(ch)) >= -tol)


def _require_one_mode(ch: GaussianChannel) -> None:
    if ch.M.shape != (2, 2):
        raise ValidationError(f"one-mode channel required, got M of shape {ch.M.shape}")


def det_invariants(ch: GaussianChannel) -> tuple[float, float]:
    """``(det M, det N)`` of a one-mode channel."""
    _require_one_mode(ch)
    M, N = ch.M, ch.N
    return (
        float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]),
        float(N[0, 0] * N[1, 1] - N[0, 1] * N[1, 0]),
    )


def inequality_residuals(det_m, det_n):
    """Residuals ``det N - bound`` for the CP, EB and ICB inequalities.

    Works elementwise on arrays. A residual ``>= 0`` means the inequality holds.
    """
    det_m = np.asarray(det_m, dtype=float)
    det_n = np.asarray(det_n, dtype=float)
    return det_n - (det_m - 1.0) ** 2, det_n - (det_m + 1.0) ** 2, det_n - det_m**2


def classify_dets(det_m, det_n, tol: float = TOL_CLASS):
    """Channel class codes (``ChannelClass`` values) from determinants, elementwise.

    Returns an ``int8`` array, or a :class:`ChannelClass` for scalar input.
    """
    cp, eb, icb = inequality_residuals(det_m, det_n)
    out = np.where(
        cp < -tol,
        ChannelClass.NotCP,
        np.where(eb >= -tol, ChannelClass.EB, np.where(icb >= -tol, ChannelClass.ICBNotEB, ChannelClass.CPOnly)),
    ).astype(np.int8)
    if out.ndim == 0:
        return ChannelClass(int(out))
    return out


def classify_one_mode(ch: GaussianChannel, tol: float = TOL_CLASS) -> ChannelClass:
    """Class of a one-mode channel from ``det M`` and ``det N``.

    The determinant inequalities fix ``|det N|`` but not the sign of ``N``;
    a negative definite ``N`` can satisfy all three while the map is not
    CP. Such channels (``tr N < 0``) are reported as ``NotCP``.
    """
    if np.trace(ch.N) < -tol:
        _require_one_mode(ch)
        return ChannelClass.NotCP
    return classify_dets(*det_invariants(ch), tol=tol)
