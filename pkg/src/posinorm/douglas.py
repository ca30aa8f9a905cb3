"""Range inclusion, factorization and majorization for pairs of matrices.

For ``A`` and ``B`` with the same number of rows the following agree:
``AA* <= alpha^2 BB*`` for some alpha, ``R(A) subset R(B)``, and ``A = BC``
for some ``C``.  The smallest admissible alpha equals the spectral norm of
the minimal-norm factor ``C = pinv(B) A``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .numeric import (
    DEFAULT_TOL,
    DimensionError,
    PreconditionError,
    ToleranceContext,
    adjoint,
    as_matrix,
    is_psd,
    norm2,
    normalize_phase,
    pinv_solve,
    range_basis,
    require_square,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DouglasResult:
    """Outcome of a range-inclusion test ``R(A) subset R(B)``.

    ``margin`` is the first singular value of the augmented matrix beyond
    ``rank(B)`` divided by the rank cutoff: values below 1 mean included,
    values near 1 are near misses.
    """

    included: bool
    alpha_min: float | None
    factor_C: np.ndarray | None = field(repr=False)
    residual: float
    witness: np.ndarray | None = field(repr=False)
    margin: float


class Domination(NamedTuple):
    alpha: float
    maximizer: np.ndarray | None


def _inclusion_decision(A, B, tol):
    nA, nB = norm2(A), norm2(B)
    RB = range_basis(B, tol)
    if nA == 0.0:
        return True, 0.0, RB
    parts = [A / nA] if nB == 0.0 else [B / nB, A / nA]
    aug = np.hstack(parts)
    s = np.linalg.svd(aug, compute_uv=False)
    cut = tol.rank_cutoff(aug.shape) * s[0]
    r_aug = int(np.count_nonzero(s > cut))
    extra = float(s[RB.rank]) if s.size > RB.rank else 0.0
    margin = extra / cut if cut > 0 else (math.inf if extra > 0 else 0.0)
    # ties at the cutoff count as NOT included
    included = r_aug <= RB.rank and not (cut > 0 and extra >= cut)
    return included, margin, RB


def range_included(A, B, tol: ToleranceContext = DEFAULT_TOL) -> DouglasResult:
    """Decide ``R(A) subset R(B)`` and build the minimal Douglas factor.

    Inclusion holds when appending the (normalized) columns of ``A`` to
    those of ``B`` does not raise the numerical rank.  When it fails the
    witness is a unit vector in ``R(B)``'s orthogonal complement reached by
    ``A``: the top left singular vector of ``(I - P_B) A``.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"row mismatch: A is {A.shape}, B is {B.shape}")
    included, margin, RB = _inclusion_decision(A, B, tol)
    C = pinv_solve(B, A, tol)
    residual = norm2(B @ C - A)
    if included:
        return DouglasResult(True, norm2(C), C, residual, None, margin)
    E = A - RB.basis @ (RB.basis.conj().T @ A)
    U, _, _ = np.linalg.svd(E)
    return DouglasResult(False, None, None, residual, normalize_phase(U[:, 0]), margin)


def _require_psd(M, tol, name):
    M = require_square(M, name)
    try:
        psd = is_psd(M, tol).psd
    except PreconditionError:
        raise PreconditionError(f"{name} is not Hermitian") from None
    if not psd:
        raise PreconditionError(f"{name} is not positive semidefinite")
    return (M + M.conj().T) / 2


def psd_domination(M, N, tol: ToleranceContext = DEFAULT_TOL) -> Domination:
    """Smallest ``alpha`` with ``M <= alpha^2 N`` and a maximizing vector.

    The generalized Rayleigh quotient ``<Mx, x> / <Nx, x>`` is maximized
    over ``R(N)`` by projecting the pencil onto an orthonormal basis of
    ``R(N)``, where it is Hermitian-definite.  ``alpha`` is infinite when
    ``R(M)`` is not contained in ``R(N)``.
    """
    M = _require_psd(M, tol, "M")
    N = _require_psd(N, tol, "N")
    if M.shape != N.shape:
        raise DimensionError(f"shape mismatch: {M.shape} vs {N.shape}")
    if norm2(M) == 0.0:
        return Domination(0.0, None)
    included, _, RN = _inclusion_decision(M, N, tol)
    if not included:
        return Domination(math.inf, None)
    V = RN.basis
    Mr = V.conj().T @ M @ V
    Nr = V.conj().T @ N @ V
    w, Y = scipy.linalg.eigh((Mr + Mr.conj().T) / 2, (Nr + Nr.conj().T) / 2)
    return Domination(math.sqrt(max(float(w[-1]), 0.0)), normalize_phase(V @ Y[:, -1]))


def psd_domination_alpha(M, N, tol: ToleranceContext = DEFAULT_TOL) -> float:
    """Smallest ``alpha >= 0`` with ``M <= alpha^2 N`` (``inf`` if none)."""
    return psd_domination(M, N, tol).alpha


def posinormal_Q(T, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray | None:
    """A PSD ``Q`` with ``T T* = T* Q T``, or ``None`` if ``T`` is not posinormal.

    Uses ``Q = L L*`` where ``L = pinv(T*) T`` is the minimal solution of
    ``T = T* L``.
    """
    T = require_square(T, "T")
    Ts = adjoint(T)
    res = range_included(T, Ts, tol)
    if not res.included:
        return None
    L = res.factor_C
    Q = L @ L.conj().T
    Q = (Q + Q.conj().T) / 2
    nT = norm2(T)
    defect = norm2(T @ Ts - Ts @ Q @ T)
    if defect > tol.residual_tol * max(nT * nT, 1e-300) or not is_psd(Q, tol).psd:
        log.warning("posinormal witness failed verification (residual %.3e)", defect)
        return None
    return Q
