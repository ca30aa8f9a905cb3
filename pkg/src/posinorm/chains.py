"""Kernel and range chains of matrix powers: ascent, descent and stabilization.

Powers are formed from ``T / ||T||`` so that magnitudes neither overflow nor
underflow, and rank cutoffs are taken relative to the norm bound
``||T||^n`` (scaled to 1) with a factor ``n`` for accumulated rounding.
Scaling never changes a kernel or a range.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .numeric import (
    DEFAULT_TOL,
    SubspaceBasis,
    ToleranceContext,
    adjoint,
    kernel_basis,
    norm2,
    range_basis,
    require_square,
    subspaces_equal,
)

ANGLE_TOL = 1e-7


@dataclass(frozen=True)
class ChainProfile:
    op_dim: int
    kernel_dims: tuple[int, ...]
    range_ranks: tuple[int, ...]
    ascent: int
    descent: int


def power_tolerance(tol: ToleranceContext, n: int, shape) -> ToleranceContext:
    return tol.loosened(max(n, 1), shape)


def scaled_powers(T, n_last: int):
    """Yield ``(n, T^n / ||T||^n)`` for ``n = 0..n_last``."""
    T = require_square(T, "T")
    d = T.shape[0]
    nT = norm2(T)
    P = np.eye(d, dtype=complex)
    yield 0, P
    S = T / nT if nT > 0 else T
    for n in range(1, n_last + 1):
        P = P @ S
        yield n, P


def power_subspaces(T, n: int, tol: ToleranceContext = DEFAULT_TOL) -> tuple[SubspaceBasis, SubspaceBasis]:
    """(kernel, range) bases of ``T^n`` under the chain rank policy."""
    T = require_square(T, "T")
    for k, P in scaled_powers(T, n):
        if k == n:
            t = power_tolerance(tol, n, P.shape)
            return kernel_basis(P, t, reference=1.0), range_basis(P, t, reference=1.0)
    raise ValueError("n must be nonnegative")


def _first_repeat(seq):
    for i in range(len(seq) - 1):
        if seq[i + 1] == seq[i]:
            return i
    return len(seq) - 1


def chain_profile(T, tol: ToleranceContext = DEFAULT_TOL, n_max: int | None = None) -> ChainProfile:
    """Kernel dimensions and ranks of ``T^n`` for ``n = 0..n_max``.

    ``n_max`` defaults to the dimension of ``T``, which always suffices for
    both chains to stabilize.  Ascent and descent are determined from a
    run of length ``max(n_max, dim) + 1`` even if ``n_max`` is smaller.
    """
    T = require_square(T, "T")
    d = T.shape[0]
    if n_max is None:
        n_max = d
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n_last = max(n_max, d) + 1
    kdims, ranks = [], []
    for n, P in scaled_powers(T, n_last):
        t = power_tolerance(tol, n, P.shape)
        K = kernel_basis(P, t, reference=1.0)
        R = range_basis(P, t, reference=1.0)
        kdims.append(K.rank)
        ranks.append(R.rank)
    return ChainProfile(
        op_dim=d,
        kernel_dims=tuple(kdims[: n_max + 1]),
        range_ranks=tuple(ranks[: n_max + 1]),
        ascent=_first_repeat(kdims),
        descent=_first_repeat(ranks),
    )


class AscentPowerCheck(NamedTuple):
    ascent_power_le_j: bool
    ascent_le_jk: bool
    descent_power_le_j: bool
    descent_le_jk: bool

    @property
    def agree(self) -> bool:
        return (self.ascent_power_le_j == self.ascent_le_jk
                and self.descent_power_le_j == self.descent_le_jk)


def check_remark2c(T, tol: ToleranceContext = DEFAULT_TOL, j: int = 1, k: int = 1) -> AscentPowerCheck:
    """Evaluate both sides of ``asc(T^k) <= j <=> asc(T) <= jk`` (and for descent).

    The chain of ``T^k`` is computed from the matrix ``T^k`` itself, not read
    off the chain of ``T``, so agreement is a genuine check.
    """
    if j < 1 or k < 1:
        raise ValueError("j and k must be >= 1")
    T = require_square(T, "T")
    base = chain_profile(T, tol)
    Tk = None
    for n, P in scaled_powers(T, k):
        Tk = P
    pk = chain_profile(Tk, power_tolerance(tol, k, Tk.shape))
    return AscentPowerCheck(
        pk.ascent <= j, base.ascent <= j * k,
        pk.descent <= j, base.descent <= j * k,
    )


@dataclass(frozen=True)
class StabilizationReport:
    k: int
    precondition_met: bool
    ascent: int
    descent: int
    adjoint_ascent: int
    adjoint_descent: int
    ranges_stable: bool
    kernels_stable: bool
    adjoint_ranges_stable: bool
    adjoint_kernels_stable: bool

    @property
    def holds(self) -> bool:
        if not self.precondition_met:
            return False
        return (
            self.ascent == self.descent <= self.k
            and self.adjoint_ascent == self.adjoint_descent <= self.k
            and self.ranges_stable and self.kernels_stable
            and self.adjoint_ranges_stable and self.adjoint_kernels_stable
        )


def _stable_from(T, k, n_max, tol):
    Kk, Rk = power_subspaces(T, k, tol)
    ranges_ok = kernels_ok = True
    for n in range(k + 1, n_max + 1):
        Kn, Rn = power_subspaces(T, n, tol)
        ranges_ok &= subspaces_equal(Rn, Rk, ANGLE_TOL)
        kernels_ok &= subspaces_equal(Kn, Kk, ANGLE_TOL)
    return ranges_ok, kernels_ok


def check_lemma2(T, tol: ToleranceContext = DEFAULT_TOL, k: int = 1, n_max: int | None = None) -> StabilizationReport:
    """Check ``dsc = asc <= k`` and stabilization of ranges and kernels from ``k`` on.

    Finite matrices have closed ranges, so the adjoint statements are
    checked as well.  ``k = 0`` is treated as ``k = 1``.  An unmet
    precondition ``asc(T) <= k`` is reported, not raised.
    """
    T = require_square(T, "T")
    k = max(int(k), 1)
    d = T.shape[0]
    if n_max is None:
        n_max = d + 1
    n_max = max(n_max, k + 1)
    prof = chain_profile(T, tol)
    Ts = adjoint(T)
    aprof = chain_profile(Ts, tol)
    met = prof.ascent <= k
    if met:
        r_ok, k_ok = _stable_from(T, k, n_max, tol)
        ar_ok, ak_ok = _stable_from(Ts, k, n_max, tol)
    else:
        r_ok = k_ok = ar_ok = ak_ok = False
    return StabilizationReport(k, met, prof.ascent, prof.descent, aprof.ascent, aprof.descent,
                        r_ok, k_ok, ar_ok, ak_ok)


def adjoint_ascent_bounded(T, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """``asc(T*) <= dsc(T)`` (always finite here, every descent is)."""
    T = require_square(T, "T")
    return chain_profile(adjoint(T), tol).ascent <= chain_profile(T, tol).descent
