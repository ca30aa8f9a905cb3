"""Command-line interface, matrix files and canonical JSON reports.

Exit codes: 0 success, 2 parse or usage error, 3 dimension error, 4 zero
weight, 5 resource guard, 6 property-suite failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import harness
from .chains import chain_profile
from .classes import classify, is_coposinormal, is_hyponormal, is_posinormal, is_quasiposinormal
from .gallery import Example1Config, blowup_report, example1_range_table, verify_example1_square
from .numeric import (
    DEFAULT_TOL,
    DimensionError,
    ToleranceContext,
    norm2,
    product_tolerance,
)
from .shifts import (
    BILATERAL,
    DEFAULT_HORIZON,
    UNILATERAL,
    WeightSequence,
    ZeroWeightError,
    shift_coposinormal,
    shift_posinormal,
    shift_power_sup,
)

SCHEMA_VERSION = "1"
MAX_DIM = 4096
CURVE_DENSE_LIMIT = 128
RANGE_TABLE_LIMIT = 1024
TOL_ENV = "POSINORM_TOL"

EXIT_OK, EXIT_PARSE, EXIT_DIM, EXIT_ZERO_WEIGHT, EXIT_RESOURCE, EXIT_SUITE = 0, 2, 3, 4, 5, 6


class ParseError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


# -- matrix files ------------------------------------------------------------

def _reject_constant(name):
    raise ParseError(f"non-finite number {name} in input")


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ParseError(f"{where}: non-finite value")
    return x


def parse_matrix(text: str) -> np.ndarray:
    """Parse a MatrixFile: ``{"rows", "cols", "data": [[[re, im], ...], ...]}``."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    missing = {"rows", "cols", "data"} - doc.keys()
    if missing:
        raise ParseError(f"missing field(s): {', '.join(sorted(missing))}")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    for name, v in (("rows", rows), ("cols", cols)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ParseError(f"{name} must be a positive integer")
    if rows > MAX_DIM or cols > MAX_DIM:
        raise ResourceError(f"matrix dimensions exceed {MAX_DIM}")
    if not isinstance(data, list) or len(data) != rows:
        raise ParseError(f"data must be a list of {rows} rows")
    M = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"row {i} must have {cols} entries")
        for j, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise ParseError(f"entry ({i},{j}) must be a [re, im] pair")
            M[i, j] = complex(_number(entry[0], f"entry ({i},{j})"), _number(entry[1], f"entry ({i},{j})"))
    return M


def matrix_document(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"rows": M.shape[0], "cols": M.shape[1], "data": [[complex(z) for z in row] for row in M]}


def read_matrix(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_matrix(text)


# -- canonical emission ------------------------------------------------------

def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        x = 0.0  # no negative zero
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _scalar(v) -> str | None:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _float(float(v))
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    return None


def _normalize(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.ndarray):
        return [_normalize(x) for x in v.tolist()]
    if isinstance(v, (tuple, list)):
        return [_normalize(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _normalize(x) for k, x in v.items()}
    return v


def _is_flat(v) -> bool:
    return all(_scalar(x) is not None for x in v)


def _emit(v, indent: int) -> str:
    s = _scalar(v)
    if s is not None:
        return s
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_emit(v[k], indent + 1)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list):
        # short lists (scalars, or [re, im]-style rows of scalars) stay on one line
        if _is_flat(v) or all(isinstance(x, list) and _is_flat(x) and len(x) <= 2 for x in v):
            return "[" + ", ".join(_emit(x, 0) for x in v) + "]"
        if not v:
            return "[]"
        return "[\n" + ",\n".join(inner + _emit(x, indent + 1) for x in v) + "\n" + pad + "]"
    raise TypeError(f"cannot emit {type(v).__name__}")


def emit(obj) -> str:
    """Canonical JSON: sorted keys, 17 significant digits, complex as ``[re, im]``."""
    return _emit(_normalize(obj), 0) + "\n"


def render_text(obj, indent: int = 0) -> str:
    obj = _normalize(obj)
    lines = []
    pad = "  " * indent
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, dict) or (isinstance(v, list) and v and not _is_flat(v)
                                       and not all(isinstance(x, list) and _is_flat(x) for x in v)):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_emit(v, 0)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.append(f"{pad}[{i}]")
            lines.append(render_text(v, indent + 1))
    else:
        lines.append(pad + _emit(obj, 0))
    return "\n".join(line for line in lines if line)


def report(command: dict, tol: ToleranceContext, result: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "tolerance": tol.as_dict(), "result": result}


# -- payloads ----------------------------------------------------------------

def classification_payload(rep) -> dict:
    def dom(d):
        return {
            "holds": d.holds,
            "table": [{"lambda": e.lam, "alpha": e.alpha_lambda, "multiplicity": e.multiplicity,
                       "posinormal": math.isfinite(e.alpha_lambda)}
                      for e in d.table],
        }

    return {
        "verdicts": rep.verdicts(),
        "alpha_min": rep.posinormal.alpha_min,
        "co_alpha_min": rep.coposinormal.alpha_min,
        "hyponormal_min_eigenvalue": rep.hyponormal.min_eigenvalue,
        "cohyponormal_min_eigenvalue": rep.cohyponormal.min_eigenvalue,
        "dominance": dom(rep.dominant),
        "codominance": dom(rep.codominant),
        "witnesses": {k: np.asarray(v) for k, v in rep.witnesses.items()},
        "hierarchy_violations": rep.violations(),
        "scope": rep.scope,
    }


def _square(M) -> np.ndarray:
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"matrix must be square, got {M.shape[0]}x{M.shape[1]}")
    return M


def power_fragments(T, max_n: int, tol: ToleranceContext) -> list[dict]:
    out = []
    P = np.eye(T.shape[0], dtype=complex)
    for n in range(1, max_n + 1):
        P = P @ T
        if norm2(P) <= tol.rank_cutoff(P.shape) * n * norm2(T) ** n:
            P = np.zeros_like(P)  # rounding residue of a vanishing power
        t = product_tolerance(tol, [T] * n, P)
        pos = is_posinormal(P, t)
        out.append({
            "n": n,
            "posinormal": pos.holds,
            "alpha_min": pos.alpha_min,
            "coposinormal": is_coposinormal(P, t).holds,
            "quasiposinormal": is_quasiposinormal(P, t),
            "hyponormal": is_hyponormal(P, t).holds,
        })
    return out


def chain_payload(prof) -> dict:
    return {
        "kernel_dims": list(prof.kernel_dims),
        "range_ranks": list(prof.range_ranks),
        "ascent": prof.ascent,
        "descent": prof.descent,
    }


def parse_weights(spec: str, bilateral: bool = False) -> WeightSequence:
    """Weight grammar: ``const:c``, ``pow:p``, ``recip``, ``bilrecip``, ``geom:r``, ``list:a,b,...``."""
    support = BILATERAL if bilateral else UNILATERAL
    kind, _, arg = spec.strip().partition(":")

    def real(s):
        try:
            v = float(s)
        except ValueError:
            raise ParseError(f"bad number {s!r} in weight spec {spec!r}") from None
        if not math.isfinite(v):
            raise ParseError(f"non-finite number in weight spec {spec!r}")
        return v

    if kind in ("recip", "bilrecip"):
        if arg:
            raise ParseError(f"{kind} takes no parameter")
        if kind == "recip":
            return WeightSequence("recip", (), support)
        return WeightSequence.bilateral_reciprocal()
    if kind in ("const", "pow", "geom"):
        if not arg:
            raise ParseError(f"{kind} needs a parameter, e.g. {kind}:1")
        return WeightSequence(kind, (real(arg),), support)
    if kind == "list":
        if not arg:
            raise ParseError("list needs at least one weight")
        return WeightSequence("list", tuple(real(a) for a in arg.split(",")), support)
    raise ParseError(f"unknown weight kind {kind!r}")


def shift_payload(w: WeightSequence, ns, horizon: int) -> dict:
    rows = []
    for n in ns:
        v = shift_power_sup(w, n, horizon)
        pos = shift_posinormal(w, n, horizon)
        row = {
            "n": n,
            "sup_value": v.sup_value,
            "infinite": v.infinite,
            "closed_form": v.closed_form,
            "estimate": v.estimate,
            "argmax": v.argmax,
            "base_sup": v.base_sup,
            "gap_bound": v.gap_bound,
            "bound_n_squared": v.bound_n_squared,
            "bound_holds": bool(math.isinf(v.base_sup) or v.sup_value <= v.bound_n_squared * (1 + 1e-12)),
            "posinormal": pos.posinormal,
            "alpha": pos.alpha,
            "coposinormal": shift_coposinormal(w, n, horizon).posinormal,
        }
        rows.append(row)
    out = {"weights": w.describe(), "support": w.support, "horizon": horizon, "powers": rows}
    if w.note:
        out["note"] = w.note
    return out


def curve_points(k_max: int) -> list[int]:
    """Every ``K`` up to 128, then doublings, always ending at ``k_max``."""
    pts = list(range(1, min(k_max, CURVE_DENSE_LIMIT) + 1))
    k = CURVE_DENSE_LIMIT * 2
    while k < k_max:
        pts.append(k)
        k *= 2
    if pts[-1] != k_max:
        pts.append(k_max)
    return pts


def example1_payload(k_max: int, depth: int, tol: ToleranceContext) -> dict:
    if 2 * k_max * depth > MAX_DIM:
        raise ResourceError(f"2*K*depth = {2 * k_max * depth} exceeds {MAX_DIM}")
    top = blowup_report(k_max, tol)
    table = [{"k": k, "inverse_k": 1.0 / k, "beta": b} for k, b in enumerate(top.per_block_beta, start=1)]
    curve = []
    for K in curve_points(k_max):
        r = top if K == k_max else blowup_report(K, tol)
        curve.append({"K": K, "alpha_half": r.alpha_half, "alpha_full": r.alpha_full, "sqrt_K": math.sqrt(K)})
    cfg = Example1Config(k_max, depth)
    sq = verify_example1_square(cfg, tol)
    out = {
        "K": k_max,
        "depth": depth,
        "beta_table": table,
        "curve": curve,
        "square_blocks": {"max_defect": sq.max_defect, "block_defects": sq.block_defects,
                          "product_defect": sq.product_defect},
    }
    if cfg.size <= RANGE_TABLE_LIMIT:
        out["range_components"] = example1_range_table(cfg, tol)
    else:
        out["range_components"] = None
    return out


# -- CLI ---------------------------------------------------------------------

def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _tolerance_value(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {s!r}") from None
    if not (0.0 <= v < 1.0):
        raise argparse.ArgumentTypeError("tolerance must lie in [0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="plain-text report")
    common.add_argument("--tol", type=_tolerance_value, default=None,
                        help=f"uniform tolerance for rank, PSD and residual tests (env {TOL_ENV})")

    p = argparse.ArgumentParser(prog="posinorm", description="Posinormality toolkit for matrices and weighted shifts.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="class membership report for a matrix file")
    c.add_argument("path")

    pw = sub.add_parser("powers", parents=[common], help="verdicts for powers T^1..T^N and the chain profile")
    pw.add_argument("path")
    pw.add_argument("--max-n", type=_positive_int, default=5)

    sh = sub.add_parser("shift", parents=[common], help="window-product analysis of a weighted shift")
    sh.add_argument("--weights", required=True, help="const:c | pow:p | recip | bilrecip | geom:r | list:a,b,...")
    sh.add_argument("--n", type=_positive_int, nargs="+", default=[1])
    sh.add_argument("--horizon", type=_positive_int, default=DEFAULT_HORIZON)
    sh.add_argument("--bilateral", action="store_true", help="two-sided weights (bilrecip always is)")

    e = sub.add_parser("example1", parents=[common], help="projection-pair blow-up tables")
    e.add_argument("--k-max", type=_positive_int, required=True)
    e.add_argument("--depth", type=int, default=5)

    ck = sub.add_parser("check", parents=[common], help="run randomized property suites")
    ck.add_argument("--suite", required=True, choices=[*harness.SUITE_NAMES, "all"])
    ck.add_argument("--trials", type=_positive_int, default=100)
    ck.add_argument("--dim", type=int, default=None, help="largest dimension (default: per-suite range)")
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--workers", type=_positive_int, default=1)
    ck.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")
    return p


def _tolerance(args, default: ToleranceContext) -> ToleranceContext:
    if args.tol is not None:
        return ToleranceContext.uniform(args.tol)
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return ToleranceContext.uniform(_tolerance_value(env))
        except argparse.ArgumentTypeError as exc:
            raise ParseError(f"{TOL_ENV}: {exc}") from None
    return default


def _run(args) -> tuple[dict, int]:
    cmd = args.command
    if cmd == "classify":
        tol = _tolerance(args, DEFAULT_TOL)
        T = _square(read_matrix(args.path))
        return report({"name": cmd, "path": args.path}, tol, classification_payload(classify(T, tol))), EXIT_OK

    if cmd == "powers":
        tol = _tolerance(args, DEFAULT_TOL)
        T = _square(read_matrix(args.path))
        frags = power_fragments(T, args.max_n, tol)
        prof = chain_profile(T, tol)
        posinormal = frags[0]["posinormal"]
        result = {
            "powers": frags,
            "chain": chain_payload(prof),
            "posinormal_ascent_check": {"posinormal": posinormal, "ascent": prof.ascent,
                                        "consistent": (not posinormal) or prof.ascent <= 1},
        }
        return report({"name": cmd, "path": args.path, "max_n": args.max_n}, tol, result), EXIT_OK

    if cmd == "shift":
        tol = _tolerance(args, DEFAULT_TOL)
        w = parse_weights(args.weights, args.bilateral)
        ns = sorted(set(args.n))
        echo = {"name": cmd, "weights": args.weights, "n": ns, "horizon": args.horizon, "bilateral": args.bilateral}
        return report(echo, tol, shift_payload(w, ns, args.horizon)), EXIT_OK

    if cmd == "example1":
        tol = _tolerance(args, DEFAULT_TOL)
        if args.depth < 3:
            raise ParseError("--depth must be >= 3")
        echo = {"name": cmd, "k_max": args.k_max, "depth": args.depth}
        return report(echo, tol, example1_payload(args.k_max, args.depth, tol)), EXIT_OK

    if cmd == "check":
        tol = _tolerance(args, harness.HARNESS_TOL)
        dims = None
        if args.dim is not None:
            if not 2 <= args.dim <= 32:
                raise ParseError("--dim must lie in 2..32")
            dims = tuple(range(2, args.dim + 1))
        names = harness.SUITE_NAMES if args.suite == "all" else (args.suite,)
        results = [harness.run_suite(n, args.trials, dims, args.seed, tol, args.workers) for n in names]
        for r in results:
            print(f"{r.name}: {r.trials} trials, {len(r.failures)} failures, {r.elapsed:.2f}s", file=sys.stderr)
        passed = all(r.passed for r in results)
        echo = {"name": cmd, "suite": args.suite, "trials": args.trials, "dim": args.dim, "seed": args.seed}
        result = {"passed": passed, "suites": [r.as_dict(timing=args.timing) for r in results]}
        if args.timing:
            result["elapsed"] = sum(r.elapsed for r in results)
        return report(echo, tol, result), EXIT_OK if passed else EXIT_SUITE

    raise ParseError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PARSE
    try:
        doc, code = _run(args)
    except ParseError as exc:
        print(f"posinorm: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionError as exc:
        print(f"posinorm: dimension error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except ZeroWeightError as exc:
        print(f"posinorm: zero weight (shift not injective): {exc}", file=sys.stderr)
        return EXIT_ZERO_WEIGHT
    except ResourceError as exc:
        print(f"posinorm: resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"posinorm: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = render_text(doc) + "\n" if args.fmt == "text" else emit(doc)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
