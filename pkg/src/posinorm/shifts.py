"""Weighted shifts and their powers, analysed through diagonal Gram formulas.

A unilateral shift sends ``e_k -> w_k e_{k+1}`` (weights indexed from 1).
``S^n S*^n`` and ``S*^n S^n`` are diagonal, so posinormality of ``S^n``
reduces to boundedness of ratios of window products of weights.  Window
products are accumulated as sums of logarithms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .numeric import PosinormError

UNILATERAL = "unilateral"
BILATERAL = "bilateral"
DEFAULT_HORIZON = 1000
# running sup growing by more than this over the last horizon doubling => divergent
DIVERGENCE_FACTOR = 10.0

BILREC_NOTE = "weight at k=0 undefined for 1/|k|; substituted 1 (weights are 1/max(|k|,1))"


class ZeroWeightError(PosinormError, ValueError):
    """A weight sequence contains a zero term (the shift is not injective)."""


@dataclass(frozen=True)
class WeightSequence:
    """Weight generator ``k -> w_k``.

    ``kind`` is one of ``const``, ``pow``, ``recip``, ``bilrecip``,
    ``geom`` or ``list``; ``list`` repeats its values cyclically.
    """

    kind: str
    params: tuple[float, ...] = ()
    support: str = UNILATERAL

    def __post_init__(self):
        if self.kind not in ("const", "pow", "recip", "bilrecip", "geom", "list"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.support not in (UNILATERAL, BILATERAL):
            raise ValueError(f"unknown support {self.support!r}")
        if self.kind == "bilrecip" and self.support != BILATERAL:
            object.__setattr__(self, "support", BILATERAL)
        if self.kind in ("const", "geom") and self.params[0] == 0:
            raise ZeroWeightError(f"{self.kind} weight with parameter 0")
        if self.kind == "list":
            if not self.params:
                raise ValueError("explicit weight list is empty")
            if any(p == 0 for p in self.params):
                raise ZeroWeightError("weight list contains a zero term")
            if not all(math.isfinite(p) for p in self.params):
                raise ValueError("weight list has non-finite terms")

    @classmethod
    def constant(cls, c: float) -> "WeightSequence":
        return cls("const", (float(c),))

    @classmethod
    def power(cls, p: float) -> "WeightSequence":
        return cls("pow", (float(p),))

    @classmethod
    def reciprocal(cls) -> "WeightSequence":
        return cls("recip")

    @classmethod
    def bilateral_reciprocal(cls) -> "WeightSequence":
        return cls("bilrecip", (), BILATERAL)

    @classmethod
    def geometric(cls, r: float) -> "WeightSequence":
        return cls("geom", (float(r),))

    @classmethod
    def explicit(cls, values, support: str = UNILATERAL) -> "WeightSequence":
        return cls("list", tuple(float(v) for v in values), support)

    @property
    def bilateral(self) -> bool:
        return self.support == BILATERAL

    @property
    def note(self) -> str | None:
        return BILREC_NOTE if self.kind == "bilrecip" else None

    def _check_index(self, k):
        k = np.asarray(k, dtype=np.int64)
        if not self.bilateral and np.any(k < 1):
            raise IndexError("unilateral weights are indexed from 1")
        return k

    def log_abs(self, k) -> np.ndarray:
        """``log |w_k|`` for integer ``k`` (array-valued)."""
        k = self._check_index(k)
        kf = k.astype(float)
        if self.kind == "const":
            return np.full(kf.shape, math.log(abs(self.params[0])))
        if self.kind == "pow":
            if self.bilateral:
                kf = np.maximum(np.abs(kf), 1.0)
            return self.params[0] * np.log(kf)
        if self.kind == "recip":
            return -np.log(np.maximum(np.abs(kf), 1.0) if self.bilateral else kf)
        if self.kind == "bilrecip":
            return -np.log(np.maximum(np.abs(kf), 1.0))
        if self.kind == "geom":
            return kf * math.log(abs(self.params[0]))
        vals = np.log(np.abs(np.asarray(self.params)))
        offset = 0 if self.bilateral else 1
        return vals[np.mod(k - offset, len(self.params))]

    def __call__(self, k) -> np.ndarray:
        """Weight values ``w_k`` (signs kept for ``list``/``geom``/``const``)."""
        k = self._check_index(k)
        mag = np.exp(self.log_abs(k))
        if self.kind == "list":
            offset = 0 if self.bilateral else 1
            return np.sign(np.asarray(self.params)[np.mod(k - offset, len(self.params))]) * mag
        if self.kind in ("const", "geom"):
            sign = math.copysign(1.0, self.params[0])
            if self.kind == "geom" and sign < 0:
                return np.where(k % 2 == 0, 1.0, -1.0) * mag
            return sign * mag
        return mag

    def describe(self) -> str:
        if self.kind in ("recip", "bilrecip"):
            return self.kind
        if self.kind == "list":
            return "list:" + ",".join(format(p, ".17g") for p in self.params)
        return f"{self.kind}:{format(self.params[0], '.17g')}"


@dataclass(frozen=True)
class ShiftVerdict:
    """Supremum of window-product ratios for ``S^n``.

    ``sup_value`` is ``inf`` when the ratios are unbounded (``infinite``).
    ``gap_bound`` is ``(sup_k |w_k| / |w_{k+n}|)^n`` and ``bound_n_squared``
    is ``(sup_k |w_k| / |w_{k+1}|)^(n^2)``; the chain
    ``sup_value <= gap_bound <= bound_n_squared`` holds whenever the
    adjacent-ratio sup is finite.
    """

    n: int
    sup_value: float
    infinite: bool
    horizon: int
    closed_form: bool
    base_sup: float
    gap_bound: float
    bound_n_squared: float
    argmax: int | None = None

    @property
    def estimate(self) -> bool:
        return not self.closed_form


def shift_gram_diagonals(w: WeightSequence, n: int, L: int) -> tuple[np.ndarray, np.ndarray]:
    """First ``L`` diagonal entries of ``S^n S*^n`` and ``S*^n S^n`` (unilateral).

    Entry ``m`` (1-based) of ``S^n S*^n`` is 0 for ``m <= n`` and
    ``prod_{k=m-n}^{m-1} |w_k|^2`` after; entry ``m`` of ``S*^n S^n`` is
    ``prod_{k=m}^{m+n-1} |w_k|^2``.
    """
    if w.bilateral:
        raise ValueError("gram diagonals are defined here for unilateral shifts")
    if n < 1 or L < 2 * n:
        raise ValueError("need n >= 1 and L >= 2n")
    lw = w.log_abs(np.arange(1, L + n))
    csum = np.concatenate([[0.0], np.cumsum(lw)])

    def window(start):  # sum of log|w_k| for k = start..start+n-1 (start >= 1)
        return csum[start - 1 + n] - csum[start - 1]

    m = np.arange(1, L + 1)
    ss_adj = np.zeros(L)
    tail = m > n
    ss_adj[tail] = np.exp(2 * window(m[tail] - n))
    adj_ss = np.exp(2 * window(m))
    return ss_adj, adj_ss


def _log_window_ratios(w: WeightSequence, n: int, idx: np.ndarray) -> np.ndarray:
    """``log`` of the window ratio at each position in ``idx``.

    Unilateral: position ``j >= 0`` compares ``w_{j+1..j+n}`` against
    ``w_{j+n+1..j+2n}``.  Bilateral: position ``k`` compares
    ``w_{k-n..k-1}`` against ``w_{k..k+n-1}``.
    """
    start = idx + 1 if not w.bilateral else idx - n
    lo, hi = int(start.min()), int(start.max()) + 2 * n
    lw = w.log_abs(np.arange(lo, hi))
    csum = np.concatenate([[0.0], np.cumsum(lw)])
    s0 = start - lo
    top = csum[s0 + n] - csum[s0]
    bottom = csum[s0 + 2 * n] - csum[s0 + n]
    return top - bottom


def _log_gap_ratios(w: WeightSequence, n: int, idx: np.ndarray) -> np.ndarray:
    """``log |w_k| - log |w_{k+n}|`` at each k in ``idx``."""
    return w.log_abs(idx) - w.log_abs(idx + n)


def _scan(fn, w, n, J):
    """Horizon sup of ``fn`` plus the divergence heuristic."""
    if w.bilateral:
        idx = np.arange(-J, J + 1)
        half = np.abs(idx) <= J // 2
    else:
        first = 0 if fn is _log_window_ratios else 1
        idx = np.arange(first, first + J + 1)
        half = idx <= first + J // 2
    vals = fn(w, n, idx)
    i = int(np.argmax(vals))
    top = float(vals[i])
    growth = top - float(vals[half].max())
    divergent = growth > math.log(DIVERGENCE_FACTOR)
    return top, divergent, int(idx[i])


def _safe_exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _closed_form(w: WeightSequence, n: int):
    """(window sup, gap sup ** n) in closed form, or ``None``.

    Power law ``k^p``: the window ratio ``[(j+1)...(j+n)/((j+n+1)...(j+2n))]^p``
    is monotone in ``j``; for ``p < 0`` the sup sits at ``j = 0`` and equals
    ``C(2n, n)^|p|``, for ``p >= 0`` it is the limit 1.  Geometric ``r^k``
    gives the constant ratio ``|r|^(-n^2)``.
    """
    if w.bilateral:
        return None
    if w.kind == "const":
        return 1.0, 1.0
    if w.kind in ("pow", "recip"):
        p = -1.0 if w.kind == "recip" else w.params[0]
        if p >= 0:
            return 1.0, 1.0
        window = float(math.comb(2 * n, n)) if p == -1.0 else _safe_exp(-p * math.log(math.comb(2 * n, n)))
        gap = float((1 + n) ** n) if p == -1.0 else _safe_exp(-p * n * math.log(1 + n))
        return window, gap
    if w.kind == "geom":
        lr = math.log(abs(w.params[0]))
        return _safe_exp(-n * n * lr), _safe_exp(-n * n * lr)
    return None


def _bilrecip_window_exact(w, n):
    # window ratios are < 1 for k <= -n and decrease to 1 for k > n, so the
    # sup is attained for -n <= k <= n + 1
    idx = np.arange(-n, n + 2)
    vals = _log_window_ratios(w, n, idx)
    i = int(np.argmax(vals))
    gidx = np.arange(-n - 1, 2)
    g = _log_gap_ratios(w, n, gidx)
    return _safe_exp(float(vals[i])), _safe_exp(n * float(g.max())), int(idx[i])


def _sup_values(w, n, J):
    """(window sup, gap sup ** n, infinite, closed_form, argmax)."""
    cf = _closed_form(w, n)
    if cf is not None:
        # for k^p with p >= 0 the sup 1 is a limit, not attained
        attained = not (w.kind == "pow" and w.params[0] > 0)
        return cf[0], cf[1], math.isinf(cf[0]), True, 0 if attained else None
    if w.kind == "bilrecip":
        s, g, arg = _bilrecip_window_exact(w, n)
        return s, g, False, True, arg
    top, div, arg = _scan(_log_window_ratios, w, n, J)
    gtop, gdiv, _ = _scan(_log_gap_ratios, w, n, J)
    s = math.inf if div else _safe_exp(top)
    g = math.inf if gdiv else _safe_exp(n * gtop)
    return s, g, div, False, None if div else arg


def shift_power_sup(w: WeightSequence, n: int, J: int = DEFAULT_HORIZON) -> ShiftVerdict:
    """Sup over positions of the window-product ratio for ``S^n``.

    Closed forms are used for constant, power-law, reciprocal and geometric
    weights (and an exact finite scan for the bilateral reciprocal).  Other
    sequences are scanned over a horizon of ``J`` positions and flagged
    infinite when the running sup still grows by more than a factor 10 over
    the last doubling of the horizon.
    """
    if n < 1 or J < 1:
        raise ValueError("need n >= 1 and J >= 1")
    s, g, infinite, closed, arg = _sup_values(w, n, J)
    s1, _, inf1, _, _ = _sup_values(w, 1, J)
    base = math.inf if inf1 else s1
    if math.isfinite(base):
        try:
            bound = base ** (n * n)
        except OverflowError:
            bound = math.inf
    else:
        bound = math.inf
    return ShiftVerdict(n, s, infinite, J, closed, base, g, bound, arg)


class ShiftPosinormality(NamedTuple):
    posinormal: bool
    alpha: float


def shift_posinormal(w: WeightSequence, n: int, J: int = DEFAULT_HORIZON) -> ShiftPosinormality:
    """``S^n`` posinormal iff the window sup is finite; ``alpha`` is that sup."""
    v = shift_power_sup(w, n, J)
    return ShiftPosinormality(not v.infinite, v.sup_value)


def shift_coposinormal(w: WeightSequence, n: int, J: int = DEFAULT_HORIZON) -> ShiftPosinormality:
    """``S*^n`` posinormal, i.e. ``S*^n S^n <= alpha^2 S^n S*^n``.

    Never true for a unilateral shift: ``S^n S*^n`` vanishes on the first
    ``n`` basis vectors while ``S*^n S^n`` does not.
    """
    if not w.bilateral:
        return ShiftPosinormality(False, math.inf)
    if w.kind == "bilrecip":
        # mirror image of the posinormal case: the sup sits in -n-1 <= k <= n
        vals = -_log_window_ratios(w, n, np.arange(-n - 2, n + 3))
        return ShiftPosinormality(True, _safe_exp(float(vals.max())))
    idx = np.arange(-J, J + 1)
    vals = -_log_window_ratios(w, n, idx)
    top = float(vals.max())
    growth = top - float(vals[np.abs(idx) <= J // 2].max())
    if growth > math.log(DIVERGENCE_FACTOR):
        return ShiftPosinormality(False, math.inf)
    return ShiftPosinormality(True, _safe_exp(top))


def build_shift_truncation(w: WeightSequence, L: int) -> np.ndarray:
    """Finite section of the shift.

    Unilateral: ``L x L`` with ``w_1..w_{L-1}`` on the subdiagonal.
    Bilateral: ``(2L+1) x (2L+1)`` on indices ``k = -L..L`` (basis position
    ``k + L``), with entry ``(k+1, k)`` equal to ``w_k`` for ``k = -L..L-1``.
    """
    if L < 2:
        raise ValueError("L must be >= 2")
    if w.bilateral:
        size = 2 * L + 1
        sub = w(np.arange(-L, L))
    else:
        size = L
        sub = w(np.arange(1, L))
    return np.diag(np.asarray(sub, dtype=complex), -1)
