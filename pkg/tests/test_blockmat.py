from __future__ import annotations

import numpy as np
import pytest

from ghirano import testkit
from ghirano.blockmat import (
    Block2x2,
    aligned_split_hirano,
    cross_split_hirano,
    schur_data,
    schur_hirano,
    triangular_hirano,
)
from ghirano.core import DEFAULT_POLICY, classify, eigenvalues
from ghirano.errors import DimensionError, PreconditionError
from ghirano.hirano import hirano_inverse

N = np.array([[0, 1], [0, 0]], dtype=complex)
TOL = DEFAULT_POLICY.tol_residual


def m(*blocks):
    return Block2x2(*(np.atleast_2d(np.asarray(x, dtype=complex)) for x in blocks))


def condition(fn, block):
    with pytest.raises(PreconditionError) as exc:
        fn(block)
    return exc.value.condition


class TestBlock2x2:
    def test_assembled(self):
        b = m([[1]], [[2, 3]], [[4], [5]], np.eye(2))
        assert b.sizes == (1, 2)
        assert np.allclose(b.assembled, [[1, 2, 3], [4, 1, 0], [5, 0, 1]])

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            m([[1]], [[1]], [[1]], np.eye(2))
        with pytest.raises(DimensionError):
            m([[1]], [[1, 1]], [[1, 1]], np.eye(2))
        with pytest.raises(DimensionError):
            m(np.zeros((1, 2)), [[1]], [[1]], [[1]])


class TestTriangular:
    def test_examples(self):
        assert triangular_hirano(m(1, 5, 0, -1))
        assert triangular_hirano(m(N, [[3], [4]], [[0, 0]], 0))
        assert condition(triangular_hirano, m(2, 1, 0, 0)) == "A has generalized Hirano inverse"
        assert condition(triangular_hirano, m(1, 0, 1, 1)) == "C=0"

    def test_certificate_is_upper_triangular(self):
        r = np.random.default_rng(61)
        for _ in range(40):
            p, q = int(r.integers(1, 5)), int(r.integers(1, 5))
            a = testkit.gen_jordan(testkit.random_spec(r, p, testkit.HIRANO_EIGS, 10.0, max_block=2)).a
            d = testkit.gen_jordan(testkit.random_spec(r, q, testkit.HIRANO_EIGS, 10.0, max_block=2)).a
            b = testkit._random_matrix(r, p, q)
            blk = Block2x2(a, b, np.zeros((q, p)), d)
            assert triangular_hirano(blk)
            cert = hirano_inverse(blk.assembled)
            lower = cert.b[p:, :p]
            assert np.linalg.norm(lower) <= TOL * (1 + np.linalg.norm(cert.b))

    def test_spectrum_is_union(self):
        r = np.random.default_rng(62)
        for _ in range(40):
            p, q = int(r.integers(1, 5)), int(r.integers(1, 5))
            a = testkit.gen_jordan(testkit.random_mixed_spec(r, p)).a
            d = testkit.gen_jordan(testkit.random_mixed_spec(r, q)).a
            blk = Block2x2(a, testkit._random_matrix(r, p, q), np.zeros((q, p)), d)
            got = eigenvalues(blk.assembled)
            want = np.concatenate([eigenvalues(a), eigenvalues(d)])
            # blocks have size <= 2, so eigenvalues scatter by at most ~sqrt(u) * cond
            for lam in want:
                assert np.min(np.abs(got - lam)) <= 1e-6
            assert len(got) == len(want)


class TestCrossSplit:
    def test_examples(self):
        assert cross_split_hirano(m(np.diag([1, 0]), np.zeros((2, 1)), np.zeros((1, 2)), -1))
        assert cross_split_hirano(m(N, [[1], [0]], [[0, 0]], 0))
        assert cross_split_hirano(m(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2)))

    def test_degenerate_case_forces_zero_c(self):
        blk = m(np.eye(2), np.zeros((2, 2)), [[1, 0], [0, 0]], np.eye(2))
        assert condition(cross_split_hirano, blk) == "CA(I-A^π)=D^πDC"

    def test_named_conditions(self):
        assert condition(cross_split_hirano, m(1, 1, 1, 1)) == "BC=CB=0"
        assert condition(cross_split_hirano, m(2, 0, 0, 1)) == "A has generalized Hirano inverse"
        assert condition(cross_split_hirano, m(1, 0, 0, 3)) == "D has generalized Hirano inverse"
        # A = 1 has A^π = 0, but AB != 0 with D = 0 still needs A^π A B = 0 = B D (I - D^π)
        assert condition(cross_split_hirano, m(0, 1, 0, 1)) == "A^πAB=BD(I-D^π)"


class TestAlignedSplit:
    def test_examples(self):
        assert aligned_split_hirano(m(np.diag([1, -1]), np.zeros((2, 1)), np.zeros((1, 2)), 1))
        assert aligned_split_hirano(m(N, [[1], [0]], [[0, 0]], 0))
        assert aligned_split_hirano(m(np.diag([1, 0]), np.zeros((2, 1)), np.zeros((1, 2)), 1))

    def test_named_conditions(self):
        assert condition(aligned_split_hirano, m(1, 0, 1, 0)) == "CA(I-A^π)=(I-D^π)DC"
        # D = N has D^π = I, so B D D^π = BN is nonzero while A^π A B = 0
        assert condition(aligned_split_hirano, m(0, [[1, 0]], [[0], [0]], N)) == "A^πAB=BDD^π"


class TestSchur:
    def test_example_with_spectrum(self):
        blk = m(1, 0, 1, 0)
        assert schur_hirano(blk)
        sd = schur_data(blk)
        assert sd.schur_ok and np.allclose(sd.W, [[1]])
        assert np.allclose(sorted(eigenvalues(blk.assembled).real), [0, 1])

    def test_examples(self):
        assert schur_hirano(m(np.eye(2), np.zeros((2, 1)), np.zeros((1, 2)), 0))
        blk = m(1, 1, 1, 1)
        assert np.allclose(schur_data(blk).W, [[2]])
        assert condition(schur_hirano, blk) == "AW has generalized Hirano inverse"

    def test_named_conditions(self):
        assert condition(schur_hirano, m(1, 1, 1, 0)) == "D=CA^dB"
        assert condition(schur_hirano, m(2, 0, 0, 0)) == "A has generalized Hirano inverse"
        # A = 0 has A^π = 1, so A^π B C = BC must vanish
        assert condition(schur_hirano, m(0, 1, 1, 0)) == "A^πBC=0"

    def test_assembled_agrees_with_classify(self):
        blk = m(1, 0, 1, 0)
        assert classify(blk.assembled).is_hirano
