from __future__ import annotations

import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ghirano import testkit
from ghirano.core import (
    Cluster,
    DEFAULT_POLICY,
    NumericPolicy,
    as_cmatrix,
    classify,
    commutant_basis,
    commutes,
    eigenvalues,
    in_comm2,
    is_nilpotent,
    nilpotency,
    nilpotency_ratio,
    pinv,
    rank,
    residual,
)
from ghirano.errors import DimensionError

N = np.array([[0, 1], [0, 0]], dtype=complex)

small = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def cmatrices(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(arrays(float, (n, n), elements=small), arrays(float, (n, n), elements=small)).map(
            lambda t: t[0] + 1j * t[1]
        )
    )


class TestPolicy:
    def test_defaults(self):
        p = NumericPolicy()
        assert (p.tol_rank, p.tol_spec, p.tol_residual, p.max_dim) == (1e-10, 1e-6, 1e-8, 64)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"tol_rank": 0.0},
            {"tol_spec": -1.0},
            {"tol_residual": float("nan")},
            {"tol_rank": 1e-3, "tol_spec": 1e-6},
            {"max_dim": 0},
            {"max_dim": 2.5},
            {"tol_rank": True},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            NumericPolicy(**kwargs)


class TestValidation:
    @pytest.mark.parametrize("bad", [np.zeros((0, 0)), np.zeros((2, 3)), np.zeros(3)])
    def test_rejects_bad_shape(self, bad):
        with pytest.raises(DimensionError):
            as_cmatrix(bad)

    @pytest.mark.parametrize("bad", [[[1, np.nan], [0, 1]], [[np.inf]]])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError, match="finite"):
            as_cmatrix(bad)

    def test_copy_is_readonly_complex(self):
        src = np.eye(2)
        a = as_cmatrix(src)
        assert a.dtype == complex and not a.flags.writeable
        src[0, 0] = 5
        assert a[0, 0] == 1

    def test_dimension_guard(self):
        with pytest.raises(DimensionError):
            rank(np.eye(5), NumericPolicy(max_dim=4))


class TestRank:
    def test_examples(self):
        assert rank(np.eye(2)) == 2
        assert rank(np.zeros((3, 3))) == 0
        assert rank([[1, 1], [1, 1]]) == 1

    @given(cmatrices())
    @settings(max_examples=60, deadline=None)
    def test_transpose_and_bound(self, a):
        r = rank(a)
        assert r == rank(a.T)
        assert 0 <= r <= a.shape[0]


class TestPinv:
    def test_examples(self):
        assert np.allclose(pinv(np.eye(3)), np.eye(3))
        assert np.allclose(pinv(np.zeros((2, 2))), 0)
        assert np.allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))

    def test_penrose_identities(self):
        r = np.random.default_rng(7)
        tol = DEFAULT_POLICY.tol_residual
        for _ in range(100):
            n = int(r.integers(1, 9))
            k = int(r.integers(1, n + 1))
            a = testkit._random_matrix(r, n, k) @ testkit._random_matrix(r, k, n)
            x = pinv(a)
            assert residual(a @ x @ a, a, a, x, a) <= tol
            assert residual(x @ a @ x, x, x, a, x) <= tol
            assert residual((a @ x).conj().T, a @ x, a, x) <= tol
            assert residual((x @ a).conj().T, x @ a, x, a) <= tol


class TestEigenvalues:
    def test_examples(self):
        assert np.allclose(eigenvalues(np.diag([1, -1, 0])), [1, -1, 0])
        assert np.allclose(eigenvalues(N), [0, 0])
        assert np.allclose(eigenvalues([[1, 1], [0, 1]]), [1, 1])

    def test_ordering(self):
        vals = eigenvalues(np.diag([1j, -1, 1, 0.5, -1j]))
        # modulus, then real part, then imaginary part, all descending
        assert np.allclose(vals, [1, 1j, -1j, -1, 0.5])


class TestCommutes:
    def test_examples(self, rng):
        assert commutes(np.diag([1, 2]), np.diag([3, 4]))
        assert not commutes(N, N.T)
        a = testkit._random_matrix(rng, 4, 4)
        assert commutes(a, np.eye(4))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            commutes(np.eye(2), np.eye(3))

    @given(cmatrices(4), st.data())
    @settings(max_examples=40, deadline=None)
    def test_symmetric_and_reflexive(self, a, data):
        n = a.shape[0]
        b = data.draw(arrays(float, (n, n), elements=small))
        assert commutes(a, a)
        assert commutes(a, b) == commutes(b, a)


class TestDoubleCommutant:
    def test_examples(self, rng):
        a = testkit._random_matrix(rng, 3, 3)
        assert in_comm2(a, np.eye(3))
        assert in_comm2(np.diag([1, 2]), np.diag([5, 7]))
        assert not in_comm2(N, N.T)

    def test_commutant_of_identity_is_everything(self):
        assert len(commutant_basis(np.eye(3))) == 9

    def test_commutant_of_distinct_diagonal(self):
        assert len(commutant_basis(np.diag([1.0, 2.0, 3.0]))) == 3

    def test_guard(self):
        with pytest.raises(DimensionError):
            in_comm2(np.eye(40), np.eye(40))


class TestNilpotency:
    def test_examples(self):
        assert is_nilpotent(N)
        assert not is_nilpotent(np.eye(2))
        assert is_nilpotent([[1, 1], [-1, -1]])

    def test_zero_matrix(self):
        assert nilpotency_ratio(np.zeros((3, 3))) == 0.0

    def test_rejects_small_eigenvalues(self):
        # eigenvalue 0.5 next to a large nilpotent part
        a = np.array([[0.5, 100.0], [0.0, 0.0]])
        assert not is_nilpotent(a)

    def test_disagreement_is_a_warning(self, caplog):
        # eigenvalues of the perturbed block are ~1e-3, outside tol_spec, yet a^4 ~ 1e-12
        a = np.diag([1.0, 1.0, 1.0], 1) + np.diag([0.0] * 3 + [1e-12])[::-1].T
        with caplog.at_level(logging.DEBUG, logger="ghirano.core"):
            rep = nilpotency(a)
        assert rep.nilpotent and not rep.spectral_nilpotent
        assert rep.warning

    def test_weakly_commuting_nilpotent_closure(self):
        for fam in testkit.WEAK_PAIR_FAMILIES:
            for seed in range(30):
                p = testkit.gen_weak_comm_pair(seed, 1 + seed % 8, fam, nilpotent=True)
                assert p.weak_comm
                assert is_nilpotent(p.a + p.b)
                assert is_nilpotent(p.a @ p.b)

    def test_spectral_and_power_tests_agree_on_small_blocks(self):
        r = np.random.default_rng(3)
        eigs = testkit.HIRANO_EIGS + testkit.NEGATIVE_EIGS
        for _ in range(300):
            n = int(r.integers(1, 9))
            spec = testkit.random_spec(r, n, eigs, float(r.uniform(1, 100)), max_block=2)
            a = testkit.gen_jordan(spec).a
            want = all(lam == 0 for lam in spec.eigenvalues)
            assert classify(a).is_qnil == is_nilpotent(a) == want

    def test_large_blocks_fall_back_to_power_test(self):
        # a size-3 block scatters its eigenvalues by ~u^(1/3), beyond tol_spec
        r = np.random.default_rng(4)
        warned = 0
        for _ in range(50):
            spec = testkit.random_spec(r, 3, (0,), float(r.uniform(1, 100)), max_block=3)
            spec = testkit.JordanSpec([(0, 3)], spec.similarity_seed, spec.cond_bound)
            rep = nilpotency(testkit.gen_jordan(spec).a)
            assert rep.nilpotent
            warned += bool(rep.warning)
            assert bool(rep.warning) == (not rep.spectral_nilpotent)
        assert warned > 0


class TestClassify:
    def test_examples(self):
        rep = classify(np.diag([1, -1, 0]))
        assert rep.cluster == (Cluster.ONE, Cluster.MINUS_ONE, Cluster.ZERO)
        assert rep.is_hirano
        rep = classify(np.diag([2, 0]))
        assert rep.cluster == (Cluster.OTHER, Cluster.ZERO)
        assert not rep.is_hirano
        rep = classify(N)
        assert rep.cluster == (Cluster.ZERO, Cluster.ZERO) and rep.is_qnil

    @given(cmatrices(4))
    @settings(max_examples=40, deadline=None)
    def test_flag_chain(self, a):
        rep = classify(a)
        assert (not rep.is_qnil) or rep.is_gs_drazin
        assert (not rep.is_gs_drazin) or rep.is_hirano

    def test_to_dict(self):
        d = classify(np.diag([1, 0])).to_dict()
        assert d["cluster"] == ["One", "Zero"] and d["is_gs_drazin"] is True
