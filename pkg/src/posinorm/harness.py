"""Seeded instance generators and randomized property suites.

Every trial draws its own 64-bit seed from ``(master_seed, suite)`` through
:class:`numpy.random.SeedSequence`, so a suite result does not depend on
scheduling, and any failing trial can be replayed from its seed alone.

Generated matrices are scaled to ``||T|| in [0.1, 10]`` and built from
blocks with singular values in ``[0.5, 2]`` so that rank decisions sit far
from the cutoff.  Draws that still land near it are resampled and counted.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
import scipy.linalg
import scipy.stats

from .chains import chain_profile, check_lemma2, check_remark2c, scaled_powers
from .classes import is_coposinormal, is_posinormal, is_quasiposinormal
from .douglas import psd_domination, psd_domination_alpha, range_included
from .numeric import (
    PreconditionError,
    ToleranceContext,
    adjoint,
    kernel_basis,
    norm2,
    numerical_rank,
    product_tolerance,
    require_square,
)

HARNESS_TOL = ToleranceContext(rank_rel_tol=1e-10)
BOUND_TOL = 1e-6
MAX_RESAMPLES = 200
# scaled powers must keep every singular value out of this band
GAP_BAND = (1e-12, 1e-7)
MAX_POWER = 5

GENERATOR_KINDS = (
    "dense-gaussian",
    "ep",
    "normal",
    "commuting-pair",
    "star-commuting-pair",
    "singular-with-kernel-inclusion",
    "commuting-gram",
    "nilpotent-augmented",
)


class ResampleLimitError(RuntimeError):
    pass


# -- generators -------------------------------------------------------------

def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    if d == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return scipy.stats.unitary_group.rvs(d, random_state=rng)


def complex_gaussian(rng, m: int, n: int) -> np.ndarray:
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / math.sqrt(2)


def controlled_matrix(rng, r: int, lo: float = 0.5, hi: float = 2.0) -> np.ndarray:
    """Random ``r x r`` matrix with singular values uniform in ``[lo, hi]``."""
    s = rng.uniform(lo, hi, r)
    return haar_unitary(r, rng) @ np.diag(s) @ haar_unitary(r, rng)


def random_phases(rng, n: int) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(n))


def _rescale(T, rng):
    n = norm2(T)
    if n == 0.0:
        return T
    return T * (10.0 ** rng.uniform(-1.0, 1.0) / n)


def _well_separated(T, n_last: int) -> bool:
    lo, hi = GAP_BAND
    for _, P in scaled_powers(T, n_last):
        s = np.linalg.svd(P, compute_uv=False)
        if np.any((s > lo) & (s < hi)):
            return False
    return True


def _conditioned(T, limit: float = 1e4) -> bool:
    """Nonzero singular values within ``limit`` of the largest, zeros clearly zero."""
    s = np.linalg.svd(T, compute_uv=False)
    if s[0] == 0.0:
        return True
    s = s / s[0]
    return not np.any((s > GAP_BAND[0]) & (s < 1.0 / limit))


def _gen_dense(rng, d):
    r = int(rng.integers(1, d + 1))
    return complex_gaussian(rng, d, r) @ complex_gaussian(rng, r, d)


def _ep_core(rng, d, r):
    U = haar_unitary(d, rng)
    core = np.zeros((d, d), dtype=complex)
    if r:
        core[:r, :r] = controlled_matrix(rng, r)
    return U @ core @ adjoint(U)


def _gen_ep(rng, d):
    return _ep_core(rng, d, int(rng.integers(1, d + 1)))


def _gen_kernel_inclusion(rng, d):
    return _ep_core(rng, d, int(rng.integers(1, d)))


def _normal_diag(rng, d, min_zero=0):
    lam = rng.uniform(0.5, 2.0, d) * random_phases(rng, d)
    z = int(rng.integers(min_zero, d))
    lam[rng.permutation(d)[:z]] = 0.0
    return lam


def _gen_normal(rng, d):
    U = haar_unitary(d, rng)
    return U @ np.diag(_normal_diag(rng, d)) @ adjoint(U)


def _partition(rng, d):
    """Random composition of ``d`` into positive parts."""
    cuts = np.sort(rng.choice(np.arange(1, d), size=int(rng.integers(0, d)), replace=False)) if d > 1 else []
    edges = [0, *cuts, d]
    return [int(b - a) for a, b in zip(edges[:-1], edges[1:])]


def _gen_commuting_pair(rng, d):
    """Normal ``S`` with one eigenvalue per block; ``T`` EP on each block."""
    U = haar_unitary(d, rng)
    sizes = _partition(rng, d)
    mu = rng.uniform(0.5, 2.0, len(sizes)) * random_phases(rng, len(sizes))
    if len(sizes) > 1 and rng.random() < 0.3:
        mu[int(rng.integers(len(sizes)))] = 0.0
    S_diag, T_blocks = [], []
    for m, sz in zip(mu, sizes):
        S_diag += [m] * sz
        T_blocks.append(_ep_core(rng, sz, int(rng.integers(0 if sz > 1 else 1, sz + 1))))
    S = U @ np.diag(S_diag) @ adjoint(U)
    T = U @ scipy.linalg.block_diag(*T_blocks) @ adjoint(U)
    return (S, T)


def _gen_star_commuting_pair(rng, d):
    """``Y (x) I`` and ``I (x) X`` plus a direct sum of functions of one normal matrix."""
    blocks_S, blocks_T = [], []
    rest = d
    if d >= 4 and rng.random() < 0.8:
        p = int(rng.integers(2, d // 2 + 1))
        q = int(rng.integers(2, d // p + 1))
        Y = _ep_core(rng, p, int(rng.integers(1, p + 1)))
        X = _ep_core(rng, q, int(rng.integers(1, q + 1)))
        blocks_S.append(np.kron(Y, np.eye(q)))
        blocks_T.append(np.kron(np.eye(p), X))
        rest = d - p * q
    if rest:
        lam = _normal_diag(rng, rest)
        deg = int(rng.integers(1, 3))
        blocks_S.append(np.diag(lam ** deg))
        blocks_T.append(np.diag(np.conj(lam) * rng.uniform(0.5, 2.0)))
    U = haar_unitary(d, rng)
    S = U @ scipy.linalg.block_diag(*blocks_S) @ adjoint(U)
    T = U @ scipy.linalg.block_diag(*blocks_T) @ adjoint(U)
    return (S, T)


def _gen_commuting_gram(rng, d):
    """``U D P U*`` with ``P`` a permutation that maps the zero set of ``D`` to itself."""
    dvals = rng.uniform(0.5, 2.0, d) * random_phases(rng, d)
    z = int(rng.integers(0, d))
    zero = rng.permutation(d)[:z]
    dvals[zero] = 0.0
    nonzero = np.setdiff1d(np.arange(d), zero)
    sigma = np.arange(d)
    sigma[nonzero] = rng.permutation(nonzero)
    sigma[zero] = rng.permutation(zero)
    P = np.eye(d)[:, sigma]
    U = haar_unitary(d, rng)
    return U @ np.diag(dvals) @ P @ adjoint(U)


def _jordan_nilpotent(sizes):
    return scipy.linalg.block_diag(*[np.eye(s, k=1) for s in sizes])


def _gen_nilpotent_augmented(rng, d):
    """``S (J + R) S^-1``: Jordan nilpotent part ``J`` and invertible ``R``."""
    m = int(rng.integers(1, d + 1))
    J = _jordan_nilpotent(_partition(rng, m))
    blocks = [J]
    if d > m:
        lam = rng.uniform(0.8, 1.25, d - m) * random_phases(rng, d - m)
        W = controlled_matrix(rng, d - m, 0.7, 1.4)
        blocks.append(W @ np.diag(lam) @ np.linalg.inv(W))
    S = controlled_matrix(rng, d, 0.7, 1.4)
    return S @ scipy.linalg.block_diag(*blocks) @ np.linalg.inv(S)


_GENERATORS: dict[str, Callable] = {
    "dense-gaussian": _gen_dense,
    "ep": _gen_ep,
    "normal": _gen_normal,
    "commuting-pair": _gen_commuting_pair,
    "star-commuting-pair": _gen_star_commuting_pair,
    "singular-with-kernel-inclusion": _gen_kernel_inclusion,
    "commuting-gram": _gen_commuting_gram,
    "nilpotent-augmented": _gen_nilpotent_augmented,
}


class Sample(NamedTuple):
    value: object
    resamples: int


@dataclass(frozen=True)
class GeneratorSpec:
    """A random instance, fully determined by ``(kind, dim, seed)``."""

    kind: str
    dim: int
    seed: int

    def __post_init__(self):
        if self.kind not in _GENERATORS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if not 1 <= self.dim <= 32:
            raise ValueError("dim must lie in 1..32")
        if self.kind == "singular-with-kernel-inclusion" and self.dim < 2:
            raise ValueError("kernel-inclusion instances need dim >= 2")

    def sample(self) -> Sample:
        rng = np.random.default_rng(self.seed)
        gen = _GENERATORS[self.kind]
        for attempt in range(MAX_RESAMPLES):
            value = gen(rng, self.dim)
            mats = value if isinstance(value, tuple) else (value,)
            if any(norm2(M) > 0 and not _conditioned(M) for M in mats):
                continue
            mats = tuple(_rescale(M, rng) for M in mats)
            return Sample(mats if isinstance(value, tuple) else mats[0], attempt)
        raise ResampleLimitError(f"{self.kind} dim={self.dim}: no well-posed draw")

    def generate(self):
        return self.sample().value


# -- results ---------------------------------------------------------------

@dataclass(frozen=True)
class Failure:
    seed: int
    property_id: str
    measured: dict


@dataclass(frozen=True)
class TrialOutcome:
    failures: tuple[Failure, ...] = ()
    resampled: int = 0
    skipped: bool = False


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    failures: tuple[Failure, ...]
    resampled: int = 0
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self, timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "resampled": self.resampled,
            "failures": [
                {"seed": f.seed, "property": f.property_id, "measured": f.measured}
                for f in self.failures
            ],
        }
        if timing:
            out["elapsed"] = self.elapsed
        return out


class _Recorder:
    def __init__(self, seed):
        self.seed = seed
        self.failures: list[Failure] = []

    def check(self, ok, prop: str, **measured):
        if not ok:
            self.failures.append(Failure(self.seed, prop, {k: _plain(v) for k, v in measured.items()}))
        return bool(ok)


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    return str(v)


def _pick_dim(rng, dims):
    return int(dims[int(rng.integers(len(dims)))])


def _power_tol(tol, T, n, Tn):
    return product_tolerance(tol, [T] * n, Tn)


def _snap(P, factors, tol):
    """Exact zero for a product that is pure rounding relative to its factors."""
    bound = math.prod(norm2(F) for F in factors)
    if norm2(P) <= tol.rank_cutoff(P.shape) * len(factors) * bound:
        return np.zeros_like(P)
    return P


def _alpha(T, tol):
    v = is_posinormal(T, tol)
    return v.alpha_min if v.holds else math.inf


# -- trials ------------------------------------------------------------------

def ep_power_verdicts(T, tol: ToleranceContext = HARNESS_TOL, n_max: int = MAX_POWER):
    """Posinormal and coposinormal verdicts of ``T^n``, ``n = 1..n_max``, for EP ``T``.

    Raises
    ------
    PreconditionError
        If ``T`` is not EP, i.e. outside the generator contract.
    """
    T = require_square(T, "T")
    if not (is_posinormal(T, tol).holds and is_coposinormal(T, tol).holds):
        raise PreconditionError("input is not EP (range-Hermitian)")
    out = []
    Tn = np.eye(T.shape[0], dtype=complex)
    for n in range(1, n_max + 1):
        Tn = Tn @ T
        t = _power_tol(tol, T, n, Tn)
        out.append((n, is_posinormal(Tn, t).holds, is_coposinormal(Tn, t).holds))
    return out


def _trial_t1c1(seed, dims, tol):
    rng = np.random.default_rng(seed)
    d = _pick_dim(rng, dims)
    rec = _Recorder(seed)
    s = GeneratorSpec("ep", d, int(rng.integers(2**63))).sample()
    for n, pos, copos in ep_power_verdicts(s.value, tol):
        rec.check(pos and copos, "t1c1.ep_power", n=n, dim=d, posinormal=pos, coposinormal=copos)
    # eventually EP: U (R + N) U* with N nilpotent of index k
    if d >= 3:
        m = int(rng.integers(2, d))
        k = m if rng.random() < 0.5 else int(rng.integers(2, m + 1))
        sizes = [k]
        while sum(sizes) < m:
            sizes.append(int(rng.integers(1, min(k, m - sum(sizes)) + 1)))
        core = scipy.linalg.block_diag(controlled_matrix(rng, d - m), _jordan_nilpotent(sizes))
        U = haar_unitary(d, rng)
        T = U @ core @ adjoint(U)
        Tn = np.eye(d, dtype=complex)
        for n in range(1, k + 3):
            Tn = Tn @ T
            t = _power_tol(tol, T, n, Tn)
            pos = is_posinormal(Tn, t).holds
            copos = is_coposinormal(Tn, t).holds
            rec.check(pos == (n >= k), "t1c1.eventual_posinormal", n=n, k=k, dim=d, posinormal=pos)
            rec.check(copos == (n >= k), "t1c1.eventual_coposinormal", n=n, k=k, dim=d, coposinormal=copos)
    return TrialOutcome(tuple(rec.failures), s.resamples)


def square_cube_constants(T, tol: ToleranceContext = HARNESS_TOL) -> dict:
    """``alpha``, ``beta`` and the posinormality constants of ``T^2`` and ``T^3``.

    ``beta`` is the smallest constant with ``(TT*)^2 <= beta^2 (T*T)^2``.
    """
    T = require_square(T, "T")
    Ts = adjoint(T)
    G, H = T @ Ts, Ts @ T
    T2, T3 = T @ T, T @ T @ T
    return {
        "alpha": _alpha(T, tol),
        "beta": psd_domination_alpha(G @ G, H @ H, product_tolerance(tol, [G, G], G @ G)),
        "gram_inclusion": range_included(G, H, product_tolerance(tol, [T, Ts], G)).included,
        "alpha2": _alpha(T2, _power_tol(tol, T, 2, T2)),
        "alpha3": _alpha(T3, _power_tol(tol, T, 3, T3)),
        "gram_commutator": norm2(G @ H - H @ G) / max(norm2(T) ** 4, 1e-300),
    }


def _trial_t3(seed, dims, tol):
    rng = np.random.default_rng(seed)
    d = _pick_dim(rng, dims)
    rec = _Recorder(seed)
    s = GeneratorSpec("commuting-gram", d, int(rng.integers(2**63))).sample()
    c = square_cube_constants(s.value, tol)
    a, b = c["alpha"], c["beta"]
    rec.check(math.isfinite(a), "t3.posinormal", dim=d, alpha=a)
    rec.check(c["gram_commutator"] <= tol.residual_tol, "t3.grams_commute", commutator=c["gram_commutator"])
    rec.check(c["gram_inclusion"] == math.isfinite(b), "t3.gram_inclusion_equivalence",
              inclusion=c["gram_inclusion"], beta=b)
    rec.check(c["alpha2"] <= a * a * b + BOUND_TOL, "t3.square_bound", alpha=a, beta=b, alpha2=c["alpha2"])
    rec.check(c["alpha3"] <= a ** 9 + BOUND_TOL, "t3.cube_bound", alpha=a, alpha3=c["alpha3"])
    rec.check(b <= a * a + BOUND_TOL, "t3.beta_le_alpha_squared", alpha=a, beta=b)
    return TrialOutcome(tuple(rec.failures), s.resamples)


def _range_containment(S, T, ST, tol):
    t = product_tolerance(tol, [S, T], ST)
    return all(range_included(ST, M, t).included for M in (S, T, adjoint(S), adjoint(T)))


def _trial_t4(seed, dims, tol):
    rng = np.random.default_rng(seed)
    d = _pick_dim(rng, dims)
    rec = _Recorder(seed)
    star = rng.random() < 0.5
    kind = "star-commuting-pair" if star else "commuting-pair"
    s = GeneratorSpec(kind, d, int(rng.integers(2**63))).sample()
    S, T = s.value
    nS, nT = norm2(S), norm2(T)
    defect = norm2(T @ adjoint(S) - adjoint(S) @ T)
    if star:
        rec.check(defect <= tol.residual_tol * nS * nT, "t4a.star_commute", defect=defect)
    else:
        rec.check(norm2(S @ T - T @ S) <= tol.residual_tol * nS * nT, "t4b.commute",
                  defect=norm2(S @ T - T @ S))
        rec.check(defect <= 1e-10 * nS * nT, "t4b.fuglede", defect=defect, bound=1e-10 * nS * nT)
    aS, aT = _alpha(S, tol), _alpha(T, tol)
    ST = _snap(S @ T, [S, T], tol)
    aST = _alpha(ST, product_tolerance(tol, [S, T], ST))
    prefix = "t4a" if star else "t4b"
    rec.check(math.isfinite(aS) and math.isfinite(aT), f"{prefix}.factors_posinormal", alpha_S=aS, alpha_T=aT)
    rec.check(aST <= aS * aT + BOUND_TOL, f"{prefix}.product_bound", alpha_S=aS, alpha_T=aT, alpha_ST=aST)
    if math.isfinite(aST):
        rec.check(_range_containment(S, T, ST, tol), "t4.range_containment", dim=d)
    return TrialOutcome(tuple(rec.failures), s.resamples)


def _trial_t5(seed, dims, tol):
    rng = np.random.default_rng(seed)
    d = _pick_dim(rng, [x for x in dims if x >= 2] or [2])
    rec = _Recorder(seed)
    s = GeneratorSpec("singular-with-kernel-inclusion", d, int(rng.integers(2**63))).sample()
    T = s.value
    Ts = adjoint(T)
    k1 = kernel_basis(T, tol).rank
    rec.check(is_quasiposinormal(T, tol), "t5.generator_contract", dim=d)
    Tn = np.eye(d, dtype=complex)
    for n in range(1, MAX_POWER + 1):
        Tn = Tn @ T
        t = _power_tol(tol, T, n, Tn)
        K = kernel_basis(Tn, t)
        rec.check(K.rank == k1, "t5.kernel_constant", n=n, dim_kernel=K.rank, dim_kernel_1=k1)
        Tsn = np.linalg.matrix_power(Ts, n)
        leak = norm2(Tsn @ K.basis) if K.rank else 0.0
        bound = tol.residual_tol * norm2(T) ** n
        rec.check(leak <= bound, "t5.kernel_inclusion", n=n, leak=leak, bound=bound)
        rec.check(is_quasiposinormal(Tn, t), "t5.quasiposinormal_power", n=n)
        rec.check(is_posinormal(Tn, t).holds, "t5.posinormal_power", n=n)
    prof = chain_profile(T, tol)
    rec.check(prof.ascent <= 1, "t5.ascent_le_1", ascent=prof.ascent)
    return TrialOutcome(tuple(rec.failures), s.resamples)


def douglas_sampled_ratio(A, B, x) -> float:
    """``||A* x|| / ||B* x||`` (``inf`` when only the denominator vanishes)."""
    num = np.linalg.norm(adjoint(A) @ x)
    den = np.linalg.norm(adjoint(B) @ x)
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return float(num / den)


def _trial_douglas(seed, dims, tol):
    rng = np.random.default_rng(seed)
    d = _pick_dim(rng, dims)
    rec = _Recorder(seed)
    m = int(rng.integers(1, d + 1))
    constructed = bool(rng.random() < 0.5)
    sB = GeneratorSpec("dense-gaussian", d, int(rng.integers(2**63))).sample()
    B = sB.value
    resampled = sB.resamples
    if constructed:
        C = complex_gaussian(rng, d, m)
        A = B @ C
        expected = True
    else:
        r = int(rng.integers(1, min(d, m) + 1))
        A = complex_gaussian(rng, d, r) @ complex_gaussian(rng, r, m)
        A = _rescale(A, rng)
        expected = numerical_rank(B, tol) == d
    res = range_included(A, B, tol)
    dom = psd_domination(A @ adjoint(A), B @ adjoint(B), product_tolerance(tol, [A, adjoint(A)], A @ adjoint(A)))
    factor_ok = res.residual <= tol.residual_tol * max(norm2(A), 1e-300)
    majorized = math.isfinite(dom.alpha)
    rec.check(res.included == majorized == factor_ok, "douglas.three_way",
              included=res.included, majorized=majorized, factorizes=factor_ok, residual=res.residual)
    rec.check(res.included == expected, "douglas.ground_truth", included=res.included, expected=expected,
              constructed=constructed)
    if res.included:
        a = res.alpha_min
        rec.check(abs(a - dom.alpha) <= BOUND_TOL, "douglas.alpha_pencil", alpha=a, pencil=dom.alpha)
        X = complex_gaussian(rng, d, 64)
        sampled = max((douglas_sampled_ratio(A, B, X[:, j]) for j in range(X.shape[1])), default=0.0)
        peak = douglas_sampled_ratio(A, B, dom.maximizer) if dom.maximizer is not None else 0.0
        oracle = max(sampled, peak)
        rec.check(abs(oracle - a) <= BOUND_TOL, "douglas.alpha_oracle", alpha=a, oracle=oracle, sampled=sampled)
        if constructed:
            rec.check(a <= norm2(C) + 1e-8, "douglas.factor_bound", alpha=a, norm_C=norm2(C))
    elif res.witness is not None:
        w = res.witness
        leak = np.linalg.norm(adjoint(B) @ w) / max(norm2(B), 1e-300)
        reach = np.linalg.norm(adjoint(A) @ w) / max(norm2(A), 1e-300)
        rec.check(leak <= 1e-8 and reach > 1e-8, "douglas.witness", leak=leak, reach=reach)
    return TrialOutcome(tuple(rec.failures), resampled)


CHAIN_KINDS = ("dense-gaussian", "nilpotent-augmented", "ep")


def _trial_chains(seed, dims, tol):
    rng = np.random.default_rng(seed)
    d = _pick_dim(rng, dims)
    rec = _Recorder(seed)
    kind = CHAIN_KINDS[int(rng.integers(len(CHAIN_KINDS)))]
    resampled = 0
    for _ in range(MAX_RESAMPLES):
        s = GeneratorSpec(kind, d, int(rng.integers(2**63))).sample()
        resampled += s.resamples
        T = s.value
        if _well_separated(T, d + 1):
            break
        resampled += 1
    else:
        raise ResampleLimitError(f"{kind} dim={d}: powers not well separated")
    prof = chain_profile(T, tol)
    rec.check(all(np.diff(prof.kernel_dims) >= 0), "chains.kernel_monotone", kernel_dims=prof.kernel_dims)
    rec.check(all(np.diff(prof.range_ranks) <= 0), "chains.range_monotone", range_ranks=prof.range_ranks)
    rec.check(prof.ascent == prof.descent, "chains.asc_eq_dsc", kind=kind, ascent=prof.ascent, descent=prof.descent)
    rec.check(all(a + b == d for a, b in zip(prof.kernel_dims, prof.range_ranks)),
              "chains.rank_nullity", kernel_dims=prof.kernel_dims, range_ranks=prof.range_ranks)
    for k in (1, 2, 3):
        for j in (1, 2, 3):
            c = check_remark2c(T, tol, j, k)
            rec.check(c.agree, "chains.ascent_power_biconditional", j=j, k=k, kind=kind, values=tuple(c))
    aprof = chain_profile(adjoint(T), tol)
    rec.check(aprof.ascent <= prof.descent, "chains.adjoint_ascent", adjoint_ascent=aprof.ascent,
              descent=prof.descent)
    rep = check_lemma2(T, tol, max(prof.ascent, 1))
    rec.check(rep.holds, "chains.stabilization", kind=kind, k=rep.k, ascent=rep.ascent)
    if kind == "ep":
        rec.check(prof.ascent <= 1, "chains.ep_ascent", ascent=prof.ascent)
    return TrialOutcome(tuple(rec.failures), resampled)


SUITES: dict[str, tuple[Callable, tuple[int, ...]]] = {
    "douglas": (_trial_douglas, tuple(range(2, 17))),
    "t1c1": (_trial_t1c1, tuple(range(2, 13))),
    "t3": (_trial_t3, tuple(range(2, 11))),
    "t4": (_trial_t4, tuple(range(2, 11))),
    "t5": (_trial_t5, tuple(range(2, 13))),
    "chains": (_trial_chains, tuple(range(2, 9))),
}
SUITE_NAMES = tuple(SUITES)


def trial_seeds(master_seed: int, suite: str, trials: int) -> list[int]:
    """Per-trial 64-bit seeds; a fixed function of ``(master_seed, suite)``."""
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), SUITE_NAMES.index(suite)])
    return [int(x) for x in ss.generate_state(trials, dtype=np.uint64)]


def _resolve_dims(suite, dims):
    if dims is None:
        return SUITES[suite][1]
    dims = tuple(int(x) for x in dims)
    if not dims or min(dims) < 2 or max(dims) > 32:
        raise ValueError("dims must be a nonempty subset of 2..32")
    return dims


def _run_one(args):
    suite, seed, dims, tol = args
    return SUITES[suite][0](seed, dims, tol)


def run_suite(suite: str, trials: int, dims=None, master_seed: int = 0,
              tol: ToleranceContext = HARNESS_TOL, workers: int = 1) -> SuiteResult:
    """Run ``trials`` seeded trials of ``suite``; results merge in trial order."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dims = _resolve_dims(suite, dims)
    jobs = [(suite, s, dims, tol) for s in trial_seeds(master_seed, suite, trials)]
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            outcomes = list(ex.map(_run_one, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        outcomes = [_run_one(j) for j in jobs]
    elapsed = time.perf_counter() - t0
    failures = tuple(f for o in outcomes for f in o.failures)
    return SuiteResult(suite, trials, failures, sum(o.resampled for o in outcomes), elapsed)


def replay(suite: str, seed: int, dims=None, tol: ToleranceContext = HARNESS_TOL) -> TrialOutcome:
    """Re-run the single trial with per-trial ``seed``."""
    return _run_one((suite, int(seed), _resolve_dims(suite, dims), tol))


def suite_douglas(trials, dims=None, master_seed=0, **kw) -> SuiteResult:
    return run_suite("douglas", trials, dims, master_seed, **kw)


def suite_theorem1_corollary1(trials, dims=None, master_seed=0, **kw) -> SuiteResult:
    return run_suite("t1c1", trials, dims, master_seed, **kw)


def suite_theorem3(trials, dims=None, master_seed=0, **kw) -> SuiteResult:
    return run_suite("t3", trials, dims, master_seed, **kw)


def suite_theorem4(trials, dims=None, master_seed=0, **kw) -> SuiteResult:
    return run_suite("t4", trials, dims, master_seed, **kw)


def suite_theorem5(trials, dims=None, master_seed=0, **kw) -> SuiteResult:
    return run_suite("t5", trials, dims, master_seed, **kw)


def suite_chains(trials, dims=None, master_seed=0, **kw) -> SuiteResult:
    return run_suite("chains", trials, dims, master_seed, **kw)
