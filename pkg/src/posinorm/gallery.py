"""Concrete constructions: the projection-pair blow-up and class exemplars.

With ``P = diag(1, 0)`` and the projections ``P_k`` below, ``beta P <=
(P + P_k)^2`` forces ``beta <= 1/k``.  Summing ``K`` blocks, the smallest
``alpha`` with ``A <= alpha^2 B^2`` is ``sqrt(K)``, while ``A <= B`` keeps
the square-root pair uniformly dominated.  The growth of ``sqrt(K)`` is the
finite shadow of an infinite operator that is posinormal with a
non-posinormal square.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .douglas import psd_domination_alpha, range_included
from .numeric import (
    DEFAULT_TOL,
    ToleranceContext,
    adjoint,
    hermitian_sqrt,
    is_psd,
    norm2,
    range_basis,
    subspaces_equal,
)
from .shifts import WeightSequence, build_shift_truncation


@dataclass(frozen=True)
class Example1Config:
    K: int
    depth: int = 5

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.depth < 3:
            raise ValueError("depth must be >= 3")

    @property
    def block(self) -> int:
        return 2 * self.K

    @property
    def size(self) -> int:
        return self.depth * self.block


@dataclass(frozen=True)
class BlowupReport:
    K: int
    per_block_beta: tuple[float, ...]
    alpha_half: float
    alpha_full: float
    witness_k: int


def build_P_Pk(k: int) -> tuple[np.ndarray, np.ndarray]:
    """``P = diag(1, 0)`` and ``P_k = (1/k) [[k-1, sqrt(k-1)], [sqrt(k-1), 1]]``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    P = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    r = math.sqrt(k - 1)
    Pk = np.array([[k - 1, r], [r, 1.0]], dtype=complex) / k
    for M in (P, Pk):
        if norm2(M @ M - M) > 1e-12 or norm2(M - adjoint(M)) > 1e-12:
            raise AssertionError("constructed matrix is not an orthogonal projection")
    return P, Pk


def build_AB(K: int, tol: ToleranceContext = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Block-diagonal ``A = sum P`` and ``B = sum (P + P_k)`` over ``k = 1..K``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    blocks_A, blocks_B = [], []
    for k in range(1, K + 1):
        P, Pk = build_P_Pk(k)
        blocks_A.append(P)
        blocks_B.append(P + Pk)
    A = scipy.linalg.block_diag(*blocks_A)
    B = scipy.linalg.block_diag(*blocks_B)
    if not is_psd(B - A, tol).psd:
        raise AssertionError("B - A is not positive semidefinite")
    return A, B


def block_beta(k: int, tol: ToleranceContext = DEFAULT_TOL) -> float:
    """Largest ``beta`` with ``beta P <= (P + P_k)^2``."""
    P, Pk = build_P_Pk(k)
    S = P + Pk
    alpha = psd_domination_alpha(P, S @ S, tol)
    return 1.0 / (alpha * alpha)


def blowup_report(K: int, tol: ToleranceContext = DEFAULT_TOL) -> BlowupReport:
    A, B = build_AB(K, tol)
    betas = tuple(block_beta(k, tol) for k in range(1, K + 1))
    alpha_full = psd_domination_alpha(A, B @ B, tol)
    half = range_included(hermitian_sqrt(A, tol), hermitian_sqrt(B, tol), tol)
    if not half.included:
        raise AssertionError("square-root range inclusion failed")
    witness_k = int(np.argmin(betas)) + 1
    return BlowupReport(K, betas, half.alpha_min, alpha_full, witness_k)


def example1_blocks(K: int, tol: ToleranceContext = DEFAULT_TOL) -> dict[str, np.ndarray]:
    A, B = build_AB(K, tol)
    return {"A": A, "B": B, "A_half": hermitian_sqrt(A, tol), "B_half": hermitian_sqrt(B, tol)}


def build_example1_T(cfg: Example1Config, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Block-subdiagonal truncation: ``A^1/2, A^1/2, B^1/2, B^1/2, ...`` below the diagonal."""
    blocks = example1_blocks(cfg.K, tol)
    b = cfg.block
    T = np.zeros((cfg.size, cfg.size), dtype=complex)
    for i in range(cfg.depth - 1):
        sub = blocks["A_half"] if i < 2 else blocks["B_half"]
        T[(i + 1) * b:(i + 2) * b, i * b:(i + 1) * b] = sub
    return T


def block(M: np.ndarray, i: int, j: int, size: int) -> np.ndarray:
    """Block ``(i, j)`` (0-based) of a matrix partitioned into ``size x size`` blocks."""
    return M[i * size:(i + 1) * size, j * size:(j + 1) * size]


@dataclass(frozen=True)
class SquareBlockCheck:
    """Deviations of ``T^2`` blocks from the expected pattern."""

    product_defect: float
    block_defects: dict = field(default_factory=dict)

    @property
    def max_defect(self) -> float:
        return max([self.product_defect, *self.block_defects.values()])


def verify_example1_square(cfg: Example1Config, tol: ToleranceContext = DEFAULT_TOL) -> SquareBlockCheck:
    """Compare ``T^2`` with ``A``, ``B^1/2 A^1/2``, ``B``, ``B``, ... below the second diagonal."""
    blocks = example1_blocks(cfg.K, tol)
    T = build_example1_T(cfg, tol)
    T2 = np.linalg.matrix_power(T, 2)
    b = cfg.block
    expected = {0: blocks["A"], 1: blocks["B_half"] @ blocks["A_half"]}
    defects = {}
    for i in range(cfg.depth - 2):
        want = expected.get(i, blocks["B"])
        defects[f"({i + 3},{i + 1})"] = norm2(block(T2, i + 2, i, b) - want)
    return SquareBlockCheck(norm2(T2 - T @ T), defects)


def example1_range_table(cfg: Example1Config, tol: ToleranceContext = DEFAULT_TOL) -> dict[str, list[bool]]:
    """Compare block components of ``R(T)`` and ``R(T*)`` with the expected ranges.

    ``R(T)`` splits as ``{0} + R(A^1/2) + R(A^1/2) + R(B^1/2) + ...`` and
    ``R(T*)`` as ``R(A^1/2) + R(A^1/2) + R(B^1/2) + ...``.  Only interior
    block rows are compared: the truncation zeroes the last block column
    of ``T``.  Returns one flag per interior block row for each range.
    """
    blocks = example1_blocks(cfg.K, tol)
    T = build_example1_T(cfg, tol)
    b = cfg.block
    RA = range_basis(blocks["A_half"], tol)
    RB = range_basis(blocks["B_half"], tol)

    def component(R, i):
        return range_basis(R.basis[i * b:(i + 1) * b, :], tol, reference=1.0)

    def expected_T(i):
        return RA if i in (1, 2) else RB

    def expected_Ts(i):
        return RA if i in (0, 1) else RB

    RT = range_basis(T, tol)
    RTs = range_basis(adjoint(T), tol)
    rows = range(1, cfg.depth - 1)
    return {
        "R(T)": [subspaces_equal(component(RT, i), expected_T(i)) for i in rows],
        "R(T*)": [subspaces_equal(component(RTs, i), expected_Ts(i)) for i in rows],
        "R(T) first component is zero": [component(RT, 0).rank == 0],
    }


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    matrix: np.ndarray = field(repr=False)
    expected: dict


def backward_shift_plus_2I(n: int = 5) -> np.ndarray:
    if n < 2:
        raise ValueError("n must be >= 2")
    return 2 * np.eye(n, dtype=complex) + np.eye(n, k=1, dtype=complex)


def remark1c_gallery(n: int = 5, L: int = 4) -> list[GalleryEntry]:
    """Exemplars separating the classes, with the verdicts they must receive."""
    return [
        GalleryEntry(
            "jordan_2x2",
            np.array([[1, 1], [0, 1]], dtype=complex),
            {"invertible": True, "posinormal": True, "coposinormal": True,
             "dominant": False, "hyponormal": False},
        ),
        GalleryEntry(
            "backward_shift_plus_2I",
            backward_shift_plus_2I(n),
            {"invertible": True, "posinormal": True, "coposinormal": True, "dominant": False},
        ),
        GalleryEntry(
            "bilateral_reciprocal_shift",
            build_shift_truncation(WeightSequence.bilateral_reciprocal(), L),
            {"hyponormal": False},
        ),
    ]

