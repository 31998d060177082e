"""Basis enumeration, norms, and polar decomposition."""

import math
from fractions import Fraction

import numpy as np
import pytest

from bergtoep.indexing import (
    DomainError,
    Partition,
    ShiftVector,
    basis_index,
    decompose,
    enumerate_basis,
    monomial_norm_sq_ball,
    monomial_norm_sq_projective,
    reconstruct,
)


def test_basis_size_is_binomial():
    for n, m in [(1, 0), (1, 5), (2, 3), (3, 4), (4, 2)]:
        basis = enumerate_basis(n, m)
        assert len(basis) == math.comb(n + m, n)
        assert len(set(basis)) == len(basis)


def test_basis_graded_lex_order():
    basis = enumerate_basis(2, 2)
    assert basis == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    degrees = [sum(a) for a in basis]
    assert degrees == sorted(degrees)


def test_basis_membership():
    for alpha in enumerate_basis(3, 4):
        assert sum(alpha) <= 4
        assert all(a >= 0 for a in alpha)


def test_basis_index_round_trip():
    basis = enumerate_basis(3, 3)
    index = basis_index(basis)
    for i, alpha in enumerate(basis):
        assert index[alpha] == i


def test_projective_norm_exact_values():
    # ||z^alpha||^2 = alpha! (m - |alpha|)! / m!
    assert monomial_norm_sq_projective((0,), 3) == Fraction(1)
    assert monomial_norm_sq_projective((1,), 3) == Fraction(1, 3)
    assert monomial_norm_sq_projective((2, 1), 3) == Fraction(2, 6)
    assert monomial_norm_sq_projective((1, 1), 4) == Fraction(2 * 1, 24)


def test_projective_norm_rejects_overflow_degree():
    with pytest.raises(DomainError):
        monomial_norm_sq_projective((3, 1), 3)


def test_ball_norm_matches_gamma_ratio():
    # ||z^alpha||^2 = alpha! Gamma(n+lam+1) / Gamma(n+|alpha|+lam+1)
    val = monomial_norm_sq_ball((1, 0), 0.0, 2)
    assert val == pytest.approx(1.0 * math.gamma(3) / math.gamma(4))
    val = monomial_norm_sq_ball((2, 1), 1.5, 2)
    expect = 2.0 * math.gamma(4.5) / math.gamma(7.5)
    assert val == pytest.approx(expect, rel=1e-13)


def test_partition_blocks():
    k = Partition((2, 1, 3))
    assert k.n == 6
    assert k.num_blocks == 3
    assert k.block_slice(1) == slice(2, 3)
    assert k.block((0, 1, 2, 3, 4, 5), 2) == (3, 4, 5)


def test_partition_rejects_nonpositive_parts():
    with pytest.raises((DomainError, ValueError)):
        Partition((2, 0))


def test_shift_vector_modes():
    k = Partition((2, 1))
    ShiftVector((1, -1, 0), mode="blockwise-zero", partition=k)
    ShiftVector((1, 0, -1), mode="total-zero")
    with pytest.raises((DomainError, ValueError)):
        ShiftVector((1, 0, -1), mode="blockwise-zero", partition=k)
    with pytest.raises((DomainError, ValueError)):
        ShiftVector((1, 0, 0), mode="total-zero")


def test_polar_decompose_reconstruct():
    k = Partition((2, 1))
    rng = np.random.default_rng(7)
    for _ in range(20):
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        d = decompose(z, k)
        back = reconstruct(d, k)
        assert np.allclose(back, z, atol=1e-13)


def test_polar_decompose_zero_conventions():
    k = Partition((2,))
    d = decompose(np.array([0j, 0j]), k)
    # zero coordinates take phase 1, zero-radius blocks uniform directions
    assert np.allclose(d.t, 1.0)
    assert np.allclose(d.s[0], 1 / np.sqrt(2))
