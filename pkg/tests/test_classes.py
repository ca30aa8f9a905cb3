import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posinorm.classes import (
    classify,
    cluster_eigenvalues,
    is_dominant,
    is_hyponormal,
    is_normal,
    is_posinormal,
    is_quasiposinormal,
)
from posinorm.gallery import backward_shift_plus_2I
from posinorm.harness import HARNESS_TOL as TOL, GeneratorSpec
from posinorm.numeric import adjoint, kernel_basis, norm2
from posinorm.shifts import WeightSequence, build_shift_truncation

from .helpers import cgauss, e, parallel

seeds = st.integers(0, 2**63 - 1)
JORDAN = np.array([[1.0, 1.0], [0.0, 1.0]])
NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]])
GOLDEN = (1 + math.sqrt(5)) / 2


def test_jordan_block_posinormal_constant():
    v = is_posinormal(JORDAN)
    # oracle: spectral norm of (T*)^-1 T from the explicit inverse
    oracle = np.linalg.svd(np.array([[1.0, 0.0], [-1.0, 1.0]]) @ JORDAN, compute_uv=False)[0]
    assert v.holds
    assert v.alpha_min == pytest.approx(GOLDEN, abs=1e-12)
    assert v.alpha_min == pytest.approx(oracle, abs=1e-12)


def test_nilpotent_witness():
    v = is_posinormal(NILPOTENT)
    assert not v.holds and v.alpha_min is None
    assert parallel(v.witness, e(0, 2))
    assert np.linalg.norm(NILPOTENT @ v.witness) < 1e-12
    assert np.linalg.norm(adjoint(NILPOTENT) @ v.witness) > 0.5


def test_zero_matrix():
    v = is_posinormal(np.zeros((3, 3)))
    assert v.holds and v.alpha_min == 0.0


@pytest.mark.parametrize("T, expected", [
    (np.diag([2.0, 3.0, 1j]), True),
    (NILPOTENT, False),
    (np.diag([0.0, 1.0]), True),
])
def test_quasiposinormal_examples(T, expected):
    assert is_quasiposinormal(T) is expected


def test_hyponormal_examples(rng):
    S4 = build_shift_truncation(WeightSequence.constant(1.0), 4)
    D = adjoint(S4) @ S4 - S4 @ adjoint(S4)
    assert np.allclose(D, np.diag([1.0, 0.0, 0.0, -1.0]))
    v = is_hyponormal(S4)
    assert not v.holds and v.min_eigenvalue == pytest.approx(-1.0)
    assert parallel(v.witness, e(3, 4))
    N = GeneratorSpec("normal", 5, 11).generate()
    assert is_hyponormal(N).holds
    v = is_hyponormal(JORDAN)
    assert not v.holds and v.min_eigenvalue < 0


def test_dominance_examples():
    d = is_dominant(JORDAN)
    assert not d.holds
    assert len(d.table) == 1 and d.table[0].multiplicity == 2
    assert d.table[0].lam == pytest.approx(1.0)
    assert math.isinf(d.table[0].alpha_lambda)
    N = GeneratorSpec("normal", 6, 3).generate()
    assert is_dominant(N).holds
    d = is_dominant(2 * np.eye(2) + NILPOTENT)
    assert not d.holds and d.table[0].lam == pytest.approx(2.0)


def test_cluster_eigenvalues():
    clusters = cluster_eigenvalues([1.0, 1.0 + 1e-10, 2.0, 1.0 - 5e-9], 1e-8)
    assert [m for _, m in clusters] == [3, 1]
    assert clusters[0][0] == pytest.approx((3.0 + 1e-10 - 5e-9) / 3, abs=1e-15)


def test_classify_examples():
    r = classify(JORDAN)
    v = r.verdicts()
    assert v["invertible"] and v["posinormal"] and v["coposinormal"]
    assert not v["dominant"] and not v["hyponormal"]
    assert r.violations() == []
    assert r.scope == "finite-dimensional"

    v = classify(GeneratorSpec("normal", 4, 99).generate()).verdicts()
    assert v["normal"] and v["hyponormal"] and v["dominant"] and v["posinormal"]

    r = classify(NILPOTENT)
    assert not any(r.verdicts().values())
    assert {"posinormal", "coposinormal", "hyponormal", "dominant", "invertible"} <= r.witnesses.keys()


def test_backward_shift_plus_2I():
    T = backward_shift_plus_2I(5)
    v = classify(T).verdicts()
    assert v["invertible"] and v["posinormal"] and v["coposinormal"] and not v["dominant"]


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(2, 7), st.sampled_from(["dense-gaussian", "ep", "normal", "nilpotent-augmented"]))
def test_hierarchy_and_finite_collapse(seed, d, kind):
    T = GeneratorSpec(kind, d, seed).generate()
    r = classify(T, TOL)
    assert r.violations() == []
    K, Ks = kernel_basis(T, TOL), kernel_basis(adjoint(T), TOL)
    same_kernel = K.rank == Ks.rank and (K.rank == 0 or Ks.distance(K.basis) < 1e-8)
    assert r.posinormal.holds == same_kernel
    if r.posinormal.holds:
        # N(T^2) = N(T)
        assert kernel_basis(T @ T, TOL).rank == K.rank
    if r.hyponormal.holds:
        assert r.posinormal.alpha_min <= 1 + 1e-6


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 6), st.floats(0.01, 100))
def test_cone_property(seed, d, gamma):
    T = GeneratorSpec("ep", d, seed).generate()
    a, b = classify(T), classify(gamma * T)
    assert a.verdicts() == b.verdicts()
    assert b.posinormal.alpha_min == pytest.approx(a.posinormal.alpha_min, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_direct_sum_and_tensor(seed, d1, d2):
    rng = np.random.default_rng(seed)
    kinds = ["ep", "nilpotent-augmented"]
    T1 = GeneratorSpec(kinds[int(rng.integers(2))], max(d1, 2), int(rng.integers(2**62))).generate()
    T2 = GeneratorSpec("ep", max(d2, 2), int(rng.integers(2**62))).generate()
    v1, v2 = is_posinormal(T1, TOL), is_posinormal(T2, TOL)
    S = np.block([[T1, np.zeros((T1.shape[0], T2.shape[1]))], [np.zeros((T2.shape[0], T1.shape[1])), T2]])
    vs = is_posinormal(S, TOL)
    assert vs.holds == (v1.holds and v2.holds)
    if vs.holds:
        assert vs.alpha_min == pytest.approx(max(v1.alpha_min, v2.alpha_min), rel=1e-8, abs=1e-12)
    if v1.holds and v2.holds:
        vt = is_posinormal(np.kron(T1, T2), TOL)
        assert vt.holds
        assert vt.alpha_min <= v1.alpha_min * v2.alpha_min * (1 + 1e-8)


def test_normal_check_scale_invariant(rng):
    U = np.linalg.qr(cgauss(rng, 5, 5))[0]
    N = U @ np.diag(cgauss(rng, 5, 1).ravel()) @ adjoint(U)
    assert is_normal(N) and is_normal(1e6 * N) and is_normal(1e-6 * N)
    assert not is_normal(JORDAN)
    assert norm2(N) > 0
