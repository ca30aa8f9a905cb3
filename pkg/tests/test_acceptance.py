"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line, printed in the terminal summary, before
asserting.  Harness runs use a fixed master seed so failures can be replayed.
"""
import contextlib
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from posinorm.classes import classify
from posinorm.gallery import block_beta, blowup_report
from posinorm.harness import run_suite
from posinorm.numeric import adjoint
from posinorm.shifts import WeightSequence, build_shift_truncation, shift_gram_diagonals, shift_power_sup

SEED = 7
GOLDEN = (1 + math.sqrt(5)) / 2


@contextlib.contextmanager
def criterion(record, number, title):
    """Yield a dict for ``ok``/``detail``; an exception records FAIL."""
    state = {"ok": False, "detail": ""}
    try:
        yield state
    except Exception as exc:
        record(number, title, False, f"error: {type(exc).__name__}: {exc}")
        raise
    record(number, title, state["ok"], state["detail"])


def failures_matching(result, *prefixes):
    return [f for f in result.failures if f.property_id.startswith(prefixes)]


def test_c01_block_beta(record_criterion):
    with criterion(record_criterion, 1, "per-block beta = 1/k") as c:
        t0 = time.perf_counter()
        errs = {k: abs(block_beta(k) - 1 / k) for k in (1, 2, 3, 4, 9, 100)}
        elapsed = time.perf_counter() - t0
        c["ok"] = max(errs.values()) <= 1e-9 and elapsed < 1.0
        c["detail"] = f"max err {max(errs.values()):.1e}, {elapsed:.3f}s"
    assert c["ok"], errs


def test_c02_blowup(record_criterion):
    with criterion(record_criterion, 2, "blow-up alpha_full = sqrt(K), alpha_half <= 1") as c:
        Ks = (1, 4, 16, 64, 256)
        t0 = time.perf_counter()
        reps = [blowup_report(K) for K in Ks]
        elapsed = time.perf_counter() - t0
        full = [r.alpha_full for r in reps]
        err = max(abs(a - math.sqrt(K)) for a, K in zip(full, Ks))
        increasing = all(b > a for a, b in zip(full, full[1:]))
        half_ok = all(r.alpha_half <= 1 + 1e-10 for r in reps)
        c["ok"] = err <= 1e-8 and increasing and half_ok and elapsed < 5.0
        c["detail"] = f"max err {err:.1e}, {elapsed:.2f}s"
    assert c["ok"], (full, [r.alpha_half for r in reps])


def test_c03_douglas_suite(record_criterion):
    with criterion(record_criterion, 3, "Douglas three-way agreement, 500 trials") as c:
        r = run_suite("douglas", 500, master_seed=SEED)
        c["ok"] = r.passed and r.elapsed < 10.0
        c["detail"] = f"{len(r.failures)} failures, {r.elapsed:.2f}s"
    assert c["ok"], r.failures[:5]


def test_c04_reciprocal_shift(record_criterion):
    with criterion(record_criterion, 4, "reciprocal shift s_n exact, Gram diagonals") as c:
        w = WeightSequence.reciprocal()
        vs = [shift_power_sup(w, n) for n in (1, 2, 3)]
        exact = [v.sup_value for v in vs] == [2, 6, 20] and all(v.closed_form for v in vs)
        s1 = vs[0].sup_value
        bounded = all(v.sup_value <= s1 ** (v.n * v.n) for v in vs)
        bounded &= vs[1].bound_n_squared == 16 and vs[2].bound_n_squared == 512
        L = 64
        S = build_shift_truncation(w, L)
        err = 0.0
        for n in (1, 2, 3):
            Sn = np.linalg.matrix_power(S, n)
            a, b = shift_gram_diagonals(w, n, L)
            inner = slice(n, L - n)
            err = max(err,
                      np.abs(np.diag(Sn @ adjoint(Sn)).real - a)[inner].max(),
                      np.abs(np.diag(adjoint(Sn) @ Sn).real - b)[inner].max())
        c["ok"] = exact and bounded and err <= 1e-12
        c["detail"] = f"s = {[v.sup_value for v in vs]}, Gram err {err:.1e}"
    assert c["ok"]


def test_c05_ep_powers(record_criterion):
    with criterion(record_criterion, 5, "EP powers posinormal and coposinormal, 500 trials") as c:
        r = run_suite("t1c1", 500, master_seed=SEED)
        ep = failures_matching(r, "t1c1.")
        c["ok"] = not ep and r.passed and r.elapsed < 20.0
        c["detail"] = f"{len(ep)} EP failures, {len(r.failures)} total, {r.elapsed:.2f}s"
    assert c["ok"], r.failures[:5]


def test_c06_commuting_gram_constants(record_criterion):
    with criterion(record_criterion, 6, "commuting-gram constant bounds, 300 trials") as c:
        r = run_suite("t3", 300, master_seed=SEED)
        bounds = failures_matching(r, "t3.square_bound", "t3.cube_bound")
        c["ok"] = not bounds and r.passed
        c["detail"] = f"{len(bounds)} bound failures, {len(r.failures)} total"
    assert c["ok"], r.failures[:5]


def test_c07_product_constants(record_criterion):
    with criterion(record_criterion, 7, "product bound, Fuglede residual, range containment") as c:
        # about half the trials are star-commuting; 1000 keeps each variant above 300
        r = run_suite("t4", 1000, master_seed=SEED)
        c["ok"] = r.passed
        c["detail"] = f"{len(r.failures)} failures, {r.elapsed:.2f}s"
    assert c["ok"], r.failures[:5]


def test_c08_kernel_inclusion_chains(record_criterion):
    with criterion(record_criterion, 8, "kernel constant and kernel inclusion, 500 trials") as c:
        r = run_suite("t5", 500, master_seed=SEED)
        core = failures_matching(r, "t5.kernel_constant", "t5.kernel_inclusion")
        c["ok"] = not core and r.passed
        c["detail"] = f"{len(core)} kernel failures, {len(r.failures)} total"
    assert c["ok"], r.failures[:5]


def test_c09_chains(record_criterion):
    with criterion(record_criterion, 9, "ascent = descent, biconditional, adjoint ascent, 1000 trials") as c:
        r = run_suite("chains", 1000, master_seed=SEED)
        c["ok"] = r.passed
        c["detail"] = f"{len(r.failures)} failures, {r.resampled} resamples, {r.elapsed:.2f}s"
    assert c["ok"], r.failures[:5]


def test_c10_gallery(record_criterion):
    with criterion(record_criterion, 10, "Jordan block and bilateral truncation verdicts") as c:
        rep = classify(np.array([[1.0, 1.0], [0.0, 1.0]]))
        v = rep.verdicts()
        jordan = (v["posinormal"] and v["coposinormal"] and not v["dominant"] and not v["hyponormal"]
                  and abs(rep.posinormal.alpha_min - GOLDEN) <= 1e-8)
        T = build_shift_truncation(WeightSequence.bilateral_reciprocal(), 4)
        bil = T.shape == (9, 9) and not classify(T).verdicts()["hyponormal"]
        c["ok"] = jordan and bil
        c["detail"] = f"alpha_min {rep.posinormal.alpha_min:.10f}"
    assert c["ok"]


@pytest.mark.slow
def test_c11_cli_determinism(record_criterion):
    with criterion(record_criterion, 11, "check --suite all byte-identical across runs") as c:
        argv = [sys.executable, "-m", "posinorm", "check", "--suite", "all", "--trials", "200", "--seed", "42"]
        procs = [subprocess.Popen(argv, stdout=subprocess.PIPE, stderr=subprocess.PIPE) for _ in range(2)]
        outs = [p.communicate(timeout=600) for p in procs]
        codes = [p.returncode for p in procs]
        same = outs[0][0] == outs[1][0] and len(outs[0][0]) > 0
        c["ok"] = same and codes == [0, 0]
        c["detail"] = f"exit codes {codes}, {len(outs[0][0])} bytes"
    assert c["ok"], [o[1][-500:] for o in outs]
