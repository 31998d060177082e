"""Symbol model: validation, evaluation, conjugation, phase invariance."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergtoep.indexing import Partition
from bergtoep.symbols import (
    ExtendedFactor,
    MultiSphereFactor,
    PhaseMonomial,
    Product,
    QuasiRadial,
    SingleSphereFactor,
    ValidationError,
    conjugate,
    evaluate_symbol,
    evaluate_symbol_batch,
    flatten,
    total_shift,
    validate_product,
)

K21 = Partition((2, 1))


def test_block_shift_must_sum_to_zero():
    with pytest.raises(ValidationError):
        MultiSphereFactor(0, "1", (1, 0))
    with pytest.raises(ValidationError):
        PhaseMonomial((1, 1, -1))
    MultiSphereFactor(0, "1", (2, -2))  # fine


def test_validate_product_structure():
    ok = Product((QuasiRadial("r1"), MultiSphereFactor(0, "s1", (1, -1)),
                  SingleSphereFactor(1, "sig1", (0,))))
    validate_product(ok, K21)
    with pytest.raises(ValidationError):
        validate_product(Product((QuasiRadial("r1"), QuasiRadial("r2"))), K21)
    with pytest.raises(ValidationError):
        validate_product(Product((MultiSphereFactor(0, "1", (1, -1)),
                                  MultiSphereFactor(0, "s1", (0, 0)))), K21)
    with pytest.raises(ValidationError):
        validate_product(MultiSphereFactor(0, "1", (1, 0, -1)), K21)
    with pytest.raises(ValidationError):
        validate_product(MultiSphereFactor(5, "1", (0, 0)), K21)
    with pytest.raises(ValidationError):
        validate_product(PhaseMonomial((1, -1)), K21)


def test_total_shift_accumulates_blocks_and_phases():
    psi = Product((
        MultiSphereFactor(0, "1", (1, -1)),
        SingleSphereFactor(1, "1", (0,)),
        PhaseMonomial((0, 1, -1)),
    ))
    assert total_shift(psi, K21) == (1, 0, -1)


def test_quasi_radial_evaluation():
    a = QuasiRadial("r1^2/(r1^2 + r2^2)")
    z = np.array([3.0, 4.0, 5.0], dtype=complex)  # r1=5, r2=5
    assert evaluate_symbol(a, z, K21) == pytest.approx(0.5)


def test_multisphere_evaluation():
    psi = MultiSphereFactor(0, "s1^2", (1, -1))
    z = np.array([1.0, 1.0j, 2.0], dtype=complex)
    # s1 = 1/sqrt(2), phases t = (1, i): value = 0.5 * 1 * (i)^(-1)
    assert evaluate_symbol(psi, z, K21) == pytest.approx(0.5 * (-1j))


def test_single_sphere_evaluation_uses_global_cosines():
    psi = SingleSphereFactor(0, "sig1^2 + sig2^2", (0, 0))
    z = np.array([1.0, 1.0, 1.0], dtype=complex)
    assert evaluate_symbol(psi, z, K21) == pytest.approx(2.0 / 3.0)


def test_extended_evaluation_mixes_radii_and_cosines():
    psi = ExtendedFactor(0, "r2 * s1^2", (0, 0))
    z = np.array([1.0, 1.0, 2.0], dtype=complex)
    assert evaluate_symbol(psi, z, K21) == pytest.approx(2 * 0.5)


def test_conjugate_flips_shifts():
    psi = Product((QuasiRadial("r1"), MultiSphereFactor(0, "s1", (2, -2)),
                   PhaseMonomial((1, -1, 0))))
    flipped = [f.p for f in flatten(conjugate(psi))[1:]]
    assert flipped == [(-2, 2), (-1, 1, 0)]
    z = np.array([1 + 1j, 2 - 1j, 0.5j])
    v = evaluate_symbol(psi, z, K21)
    w = evaluate_symbol(conjugate(psi), z, K21)
    assert w == pytest.approx(np.conj(v))


def test_zero_coordinate_conventions():
    psi = Product((MultiSphereFactor(0, "s1", (1, -1)),))
    z = np.zeros(3, dtype=complex)
    # phases of zero coordinates are 1, zero block direction is uniform
    assert evaluate_symbol(psi, z, K21) == pytest.approx(1 / np.sqrt(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0, 2 * np.pi))
def test_blockwise_zero_phase_invariance(seed, theta):
    """Blockwise-zero symbols are insensitive to a common phase per block."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    psi = Product((
        QuasiRadial("r1^2/(1 + r1^2 + r2^2)"),
        MultiSphereFactor(0, "s1^2", (1, -1)),
        ExtendedFactor(1, "r1*r2", (0,)),
    ))
    zt = z.copy()
    zt[:2] *= np.exp(1j * theta)  # common phase on block 0
    v, w = evaluate_symbol_batch(psi, np.stack([z, zt]), K21)
    assert abs(v - w) < 1e-12
