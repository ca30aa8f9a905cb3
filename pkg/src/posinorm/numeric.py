"""Dense complex matrix primitives shared by every analysis module.

Every rank, kernel and range decision in the package goes through the single
SVD threshold policy carried by :class:`ToleranceContext`, so verdicts coming
from different modules cannot contradict each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.linalg import subspace_angles

EPS = float(np.finfo(np.float64).eps)


class PosinormError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(PosinormError, ValueError):
    """An input violates the documented precondition of an operation."""


class DimensionError(PosinormError, ValueError):
    """Operand shapes are incompatible."""


@dataclass(frozen=True)
class ToleranceContext:
    """Numerical surrogates for exact range/kernel statements.

    Parameters
    ----------
    rank_rel_tol : float or None
        Singular values at or below ``rank_rel_tol * sigma_max`` count as
        zero.  ``None`` selects ``eps * max(rows, cols)`` for each matrix.
    psd_tol : float
        Allowed eigenvalue negativity, relative to the matrix norm.
    residual_tol : float
        Allowed factorization residual, relative to the operand norm.
    """

    rank_rel_tol: float | None = None
    psd_tol: float = 1e-10
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel_tol", "psd_tol", "residual_tol"):
            value = getattr(self, name)
            if value is None and name == "rank_rel_tol":
                continue
            if not (0.0 <= float(value) < 1.0) or math.isnan(value):
                raise ValueError(f"{name} must lie in [0, 1), got {value!r}")

    @classmethod
    def uniform(cls, value: float) -> "ToleranceContext":
        """All three tolerances set to ``value`` (the ``--tol`` semantics)."""
        return cls(rank_rel_tol=value, psd_tol=value, residual_tol=value)

    def rank_cutoff(self, shape: Sequence[int]) -> float:
        if self.rank_rel_tol is None:
            return EPS * max(max(shape), 1)
        return self.rank_rel_tol

    def loosened(self, factor: float, shape: Sequence[int]) -> "ToleranceContext":
        """Copy with the relative rank cutoff multiplied by ``factor`` (>= 1)."""
        factor = max(float(factor), 1.0)
        rel = min(self.rank_cutoff(shape) * factor, 0.5)
        return ToleranceContext(rel, self.psd_tol, self.residual_tol)

    def as_dict(self) -> dict:
        return {
            "rank_rel_tol": self.rank_rel_tol,
            "psd_tol": self.psd_tol,
            "residual_tol": self.residual_tol,
        }


DEFAULT_TOL = ToleranceContext()


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal column basis of a kernel or range."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)
    rank: int

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def distance(self, vectors) -> float:
        """Largest norm of the component of ``vectors`` outside this subspace."""
        V = np.asarray(vectors, dtype=complex)
        if V.ndim == 1:
            V = V[:, None]
        if V.shape[1] == 0:
            return 0.0
        R = V - self.basis @ (self.basis.conj().T @ V)
        return float(np.max(np.linalg.norm(R, axis=0)))


class PsdResult(NamedTuple):
    psd: bool
    min_eigenvalue: float


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``M`` to a 2-D complex128 array."""
    A = np.asarray(M)
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {A.shape}")
    A = A.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def require_square(M, name: str = "matrix") -> np.ndarray:
    A = as_matrix(M, name)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    return A


def adjoint(M) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(M).conj().T


def norm2(M) -> float:
    """Spectral norm; zero for empty matrices."""
    A = np.asarray(M)
    if A.size == 0:
        return 0.0
    if A.ndim == 2 and A.shape[0] == A.shape[1] > 8 and np.array_equal(A, A.conj().T):
        return float(np.abs(np.linalg.eigvalsh(A)).max())
    return float(np.linalg.norm(A, 2))


def _cutoff(s, shape, tol, reference):
    scale = float(s[0]) if s.size else 0.0
    if reference is not None:
        scale = max(scale, float(reference))
    return tol.rank_cutoff(shape) * scale


def numerical_rank(M, tol: ToleranceContext = DEFAULT_TOL, reference=None) -> int:
    """Count singular values above ``rank_cutoff * sigma_max``.

    ``reference`` replaces ``sigma_max`` by ``max(sigma_max, reference)``,
    for matrices whose rounding error scales with something larger than
    their own norm (e.g. normalized powers).
    """
    A = as_matrix(M)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.count_nonzero(s > _cutoff(s, A.shape, tol, reference)))


def _svd_split(A, tol, reference):
    U, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = int(np.count_nonzero(s > _cutoff(s, A.shape, tol, reference))) if s.size else 0
    return U, s, Vh, r


def kernel_basis(M, tol: ToleranceContext = DEFAULT_TOL, reference=None) -> SubspaceBasis:
    A = as_matrix(M)
    n = A.shape[1]
    if A.size == 0:
        return SubspaceBasis(n, np.eye(n, dtype=complex), n)
    _, _, Vh, r = _svd_split(A, tol, reference)
    basis = Vh[r:].conj().T
    return SubspaceBasis(n, basis, n - r)


def range_basis(M, tol: ToleranceContext = DEFAULT_TOL, reference=None) -> SubspaceBasis:
    A = as_matrix(M)
    m = A.shape[0]
    if A.size == 0:
        return SubspaceBasis(m, np.zeros((m, 0), dtype=complex), 0)
    U, _, _, r = _svd_split(A, tol, reference)
    return SubspaceBasis(m, U[:, :r], r)


def pinv_solve(B, A, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Minimal-norm least-squares solution ``C = pinv(B) @ A``.

    The pseudoinverse uses the shared rank cutoff, so ``B @ C`` is the
    orthogonal projection of ``A`` onto the numerical range of ``B``.
    """
    B = as_matrix(B, "B")
    A = as_matrix(A, "A")
    if B.shape[0] != A.shape[0]:
        raise DimensionError(f"row mismatch: B is {B.shape}, A is {A.shape}")
    if B.size == 0:
        return np.zeros((B.shape[1], A.shape[1]), dtype=complex)
    U, s, Vh = np.linalg.svd(B, full_matrices=False)
    r = int(np.count_nonzero(s > _cutoff(s, B.shape, tol, None)))
    return Vh[:r].conj().T @ ((U[:, :r].conj().T @ A) / s[:r, None])


def hermitian_defect(M) -> float:
    """Spectral norm of ``M - M*``."""
    A = as_matrix(M)
    D = A - A.conj().T
    if not D.any():
        return 0.0
    # i(M - M*) is Hermitian, so eigvalsh gives the norm cheaply
    return float(np.abs(np.linalg.eigvalsh(1j * D)).max())


def is_psd(M, tol: ToleranceContext = DEFAULT_TOL, scale=None) -> PsdResult:
    """Decide ``M >= 0`` and report the smallest eigenvalue.

    ``M`` is symmetrized before the eigensolve.  Comparisons are relative
    to ``max(||M||, scale)``; pass ``scale`` when ``M`` is a difference of
    larger quantities (a commutator, say) whose rounding is not bounded by
    ``||M||``.

    Raises
    ------
    PreconditionError
        If ``M`` is not Hermitian within ``residual_tol``.
    """
    A = require_square(M)
    if A.size == 0:
        return PsdResult(True, 0.0)
    w = np.linalg.eigvalsh((A + A.conj().T) / 2)
    ref = max(abs(float(w[0])), abs(float(w[-1])))
    if scale is not None:
        ref = max(ref, float(scale))
    if hermitian_defect(A) > tol.residual_tol * ref:
        raise PreconditionError("matrix is not Hermitian within residual_tol")
    lam_min = float(w[0])
    return PsdResult(lam_min >= -tol.psd_tol * ref, lam_min)


def hermitian_sqrt(M, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix via eigendecomposition.

    Eigenvalues in ``[-psd_tol * ||M||, 0)`` are clipped to zero; anything
    more negative is rejected.
    """
    A = require_square(M)
    if hermitian_defect(A) > tol.residual_tol * max(norm2(A), 1e-300):
        raise PreconditionError("matrix is not Hermitian within residual_tol")
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    if w.size and w[0] < -tol.psd_tol * max(abs(w[0]), abs(w[-1])):
        raise PreconditionError(f"matrix is not PSD (min eigenvalue {w[0]:.3e})")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def max_principal_angle(U: SubspaceBasis, V: SubspaceBasis) -> float:
    if U.rank == 0 or V.rank == 0:
        return 0.0 if U.rank == V.rank else math.pi / 2
    return float(np.max(subspace_angles(U.basis, V.basis)))


def subspaces_equal(U: SubspaceBasis, V: SubspaceBasis, angle_tol: float = 1e-7) -> bool:
    """Equal dimension and largest principal angle within ``angle_tol``."""
    return U.rank == V.rank and max_principal_angle(U, V) <= angle_tol


def product_tolerance(tol: ToleranceContext, factors, product) -> ToleranceContext:
    """Rank policy for a matrix formed as a product of ``factors``.

    Rounding in a k-fold product is of order ``k * eps * prod ||F_i||``,
    which dwarfs ``eps * ||product||`` when the product is much smaller than
    the norm bound.  The relative cutoff is scaled up by that ratio.
    """
    product = np.asarray(product)
    pn = norm2(product)
    bound = math.prod(norm2(F) for F in factors)
    if pn == 0.0 or bound == 0.0:
        return tol
    return tol.loosened(len(factors) * bound / pn, product.shape)


def matrix_power(T, n: int) -> np.ndarray:
    """``T**n`` by repeated multiplication (``n >= 0``)."""
    A = require_square(T)
    if n < 0:
        raise ValueError("power must be nonnegative")
    return np.linalg.matrix_power(A, n)


def normalize_phase(v) -> np.ndarray:
    """Unit vector with its largest-magnitude entry real and positive."""
    v = np.asarray(v, dtype=complex).ravel()
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return v
    v = v / nv
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])
