"""Membership tests for posinormal, hyponormal, dominant and related classes.

All verdicts are about the matrix as given.  A truncated infinite operator
(a shift cut to ``L x L``, say) can lose properties at the cut, so reports
carry a ``scope`` label and never claim the infinite-dimensional answer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .douglas import range_included
from .numeric import (
    DEFAULT_TOL,
    ToleranceContext,
    adjoint,
    is_psd,
    kernel_basis,
    norm2,
    normalize_phase,
    numerical_rank,
    require_square,
)

SCOPE = "finite-dimensional"
CLUSTER_GAP = 1e-8
# slack for "hyponormal implies alpha_min <= 1" under psd_tol rounding
HYPONORMAL_ALPHA_SLACK = 1e-6


@dataclass(frozen=True)
class Verdict:
    holds: bool
    alpha_min: float | None = None
    witness: np.ndarray | None = field(default=None, repr=False)
    min_eigenvalue: float | None = None


@dataclass(frozen=True)
class EigenvalueAlphaEntry:
    lam: complex
    alpha_lambda: float
    multiplicity: int


@dataclass(frozen=True)
class DominanceVerdict:
    holds: bool
    table: tuple[EigenvalueAlphaEntry, ...]
    witness: np.ndarray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class ClassificationReport:
    posinormal: Verdict
    coposinormal: Verdict
    quasiposinormal: bool
    coquasiposinormal: bool
    hyponormal: Verdict
    cohyponormal: Verdict
    normal: bool
    dominant: DominanceVerdict
    codominant: DominanceVerdict
    invertible: bool
    witnesses: dict = field(default_factory=dict, repr=False)
    scope: str = SCOPE

    def verdicts(self) -> dict[str, bool]:
        return {
            "posinormal": self.posinormal.holds,
            "coposinormal": self.coposinormal.holds,
            "quasiposinormal": self.quasiposinormal,
            "coquasiposinormal": self.coquasiposinormal,
            "hyponormal": self.hyponormal.holds,
            "cohyponormal": self.cohyponormal.holds,
            "normal": self.normal,
            "dominant": self.dominant.holds,
            "codominant": self.codominant.holds,
            "invertible": self.invertible,
        }

    def violations(self) -> list[str]:
        """Hierarchy constraints the verdicts fail to respect (ideally none)."""
        v = self.verdicts()
        out = []
        if v["posinormal"] and not v["quasiposinormal"]:
            out.append("posinormal without quasiposinormal")
        if v["hyponormal"]:
            a = self.posinormal.alpha_min
            if not v["posinormal"] or a is None or a > 1 + HYPONORMAL_ALPHA_SLACK:
                out.append("hyponormal without posinormal alpha <= 1")
        if v["normal"] != (v["hyponormal"] and v["cohyponormal"]):
            out.append("normal disagrees with hyponormal and cohyponormal")
        if v["invertible"] and not (v["posinormal"] and v["coposinormal"]):
            out.append("invertible without posinormal and coposinormal")
        if v["dominant"] and not v["posinormal"]:
            out.append("dominant without posinormal")
        # rank(T) = rank(T*) collapses the posinormal family in finite dimensions
        family = {v[k] for k in ("posinormal", "coposinormal", "quasiposinormal", "coquasiposinormal")}
        if len(family) > 1:
            out.append("posinormal family verdicts disagree")
        return out


def _kernel_gap_witness(T, Ts, tol):
    K = kernel_basis(T, tol)
    if K.rank == 0:
        return None
    _, _, Vh = np.linalg.svd(Ts @ K.basis)
    return normalize_phase(K.basis @ Vh[0].conj())


def is_posinormal(T, tol: ToleranceContext = DEFAULT_TOL) -> Verdict:
    """``R(T) subset R(T*)``, with the smallest ``alpha`` in ``||T*x|| <= alpha ||Tx||``.

    On failure the witness is a unit ``x`` with ``Tx ~ 0`` and ``T*x``
    as large as possible.
    """
    T = require_square(T, "T")
    Ts = adjoint(T)
    res = range_included(T, Ts, tol)
    if res.included:
        return Verdict(True, res.alpha_min)
    return Verdict(False, None, _kernel_gap_witness(T, Ts, tol))


def is_coposinormal(T, tol: ToleranceContext = DEFAULT_TOL) -> Verdict:
    return is_posinormal(adjoint(require_square(T, "T")), tol)


def is_quasiposinormal(T, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """``N(T) subset N(T*)``: every kernel vector of ``T`` is annihilated by ``T*``."""
    T = require_square(T, "T")
    K = kernel_basis(T, tol)
    if K.rank == 0:
        return True
    leak = np.linalg.norm(adjoint(T) @ K.basis, axis=0).max()
    return bool(leak <= tol.residual_tol * norm2(T))


def is_coquasiposinormal(T, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    return is_quasiposinormal(adjoint(require_square(T, "T")), tol)


def is_hyponormal(T, tol: ToleranceContext = DEFAULT_TOL) -> Verdict:
    """``T*T - TT* >= 0``; the witness is the most negative eigenvector."""
    T = require_square(T, "T")
    Ts = adjoint(T)
    D = Ts @ T - T @ Ts
    D = (D + D.conj().T) / 2
    nT = norm2(T)
    psd, lam = is_psd(D, tol, scale=nT * nT)
    if psd:
        return Verdict(True, min_eigenvalue=lam)
    _, V = np.linalg.eigh(D)
    return Verdict(False, witness=normalize_phase(V[:, 0]), min_eigenvalue=lam)


def is_cohyponormal(T, tol: ToleranceContext = DEFAULT_TOL) -> Verdict:
    return is_hyponormal(adjoint(require_square(T, "T")), tol)


def is_normal(T, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """``||T*T - TT*|| <= psd_tol ||T||^2`` (hyponormal and cohyponormal at once)."""
    T = require_square(T, "T")
    Ts = adjoint(T)
    nT = norm2(T)
    D = Ts @ T - T @ Ts
    return norm2((D + D.conj().T) / 2) <= tol.psd_tol * nT * nT


def cluster_eigenvalues(eigs, gap: float) -> list[tuple[complex, int]]:
    """Single-linkage clusters of ``eigs`` at distance ``<= gap``.

    Returns (mean, size) per cluster; the mean of a cluster is far more
    accurate than its members when the eigenvalue is defective.
    """
    eigs = np.asarray(eigs, dtype=complex)
    n = eigs.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= gap:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = [(complex(np.mean(eigs[idx])), len(idx)) for idx in groups.values()]
    clusters.sort(key=lambda c: (round(c[0].real, 12), round(c[0].imag, 12)))
    return clusters


def is_dominant(T, tol: ToleranceContext = DEFAULT_TOL) -> DominanceVerdict:
    """``lambda I - T`` posinormal for every complex ``lambda``.

    Off the spectrum ``lambda I - T`` is invertible and hence posinormal,
    so only (clustered) eigenvalues are tested.
    """
    T = require_square(T, "T")
    n = T.shape[0]
    eigs = np.linalg.eigvals(T)
    table = []
    witness = None
    for lam, mult in cluster_eigenvalues(eigs, CLUSTER_GAP * norm2(T)):
        v = is_posinormal(lam * np.eye(n) - T, tol)
        alpha = v.alpha_min if v.holds else math.inf
        table.append(EigenvalueAlphaEntry(lam, alpha, mult))
        if not v.holds and witness is None:
            witness = v.witness
    holds = all(math.isfinite(e.alpha_lambda) for e in table)
    return DominanceVerdict(holds, tuple(table), witness)


def is_codominant(T, tol: ToleranceContext = DEFAULT_TOL) -> DominanceVerdict:
    return is_dominant(adjoint(require_square(T, "T")), tol)


def classify(T, tol: ToleranceContext = DEFAULT_TOL) -> ClassificationReport:
    """Full class report for a square matrix."""
    T = require_square(T, "T")
    pos = is_posinormal(T, tol)
    copos = is_coposinormal(T, tol)
    hyp = is_hyponormal(T, tol)
    cohyp = is_cohyponormal(T, tol)
    dom = is_dominant(T, tol)
    codom = is_codominant(T, tol)
    invertible = numerical_rank(T, tol) == T.shape[0]

    witnesses = {}
    for name, w in (
        ("posinormal", pos.witness),
        ("coposinormal", copos.witness),
        ("hyponormal", hyp.witness),
        ("cohyponormal", cohyp.witness),
        ("dominant", dom.witness),
        ("codominant", codom.witness),
    ):
        if w is not None:
            witnesses[name] = w
    if not invertible:
        K = kernel_basis(T, tol)
        if K.rank:
            witnesses["invertible"] = normalize_phase(K.basis[:, 0])

    return ClassificationReport(
        posinormal=pos,
        coposinormal=copos,
        quasiposinormal=is_quasiposinormal(T, tol),
        coquasiposinormal=is_coquasiposinormal(T, tol),
        hyponormal=hyp,
        cohyponormal=cohyp,
        normal=is_normal(T, tol),
        dominant=dom,
        codominant=codom,
        invertible=invertible,
        witnesses=witnesses,
    )
