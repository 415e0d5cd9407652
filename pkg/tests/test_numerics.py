import numpy as np
import pytest

from remimo.errors import InvalidParameterError
from remimo.numerics import (RngStream, compose_stream_id, det2,
                             frobenius_norm, hadamard, herm, sample_cgauss,
                             sample_lognormal)


def test_cgauss_zero_variance_is_exactly_zero():
    rng = RngStream(1, 0)
    assert sample_cgauss(rng, 0.0) == 0j
    assert np.all(sample_cgauss(rng, 0.0, (3, 3)) == 0)


def test_cgauss_sample_power():
    rng = RngStream(2, 0)
    z = sample_cgauss(rng, 2.0, 1_000_000)
    power = np.mean(np.abs(z) ** 2)
    assert 1.99 <= power <= 2.01
    # halves split evenly between quadratures
    assert abs(np.var(z.real) - 1.0) < 0.01
    assert abs(np.var(z.imag) - 1.0) < 0.01


def test_cgauss_deterministic_for_fixed_key():
    a = sample_cgauss(RngStream(7, 3), 1.0, 16)
    b = sample_cgauss(RngStream(7, 3), 1.0, 16)
    np.testing.assert_array_equal(a, b)


def test_cgauss_rejects_negative_variance():
    with pytest.raises(InvalidParameterError):
        sample_cgauss(RngStream(1, 0), -1e-9)


def test_lognormal_degenerate():
    assert sample_lognormal(RngStream(3, 0), 0.0, 0.0) == 1.0


def test_lognormal_median_and_positivity():
    rng = RngStream(4, 0)
    x = sample_lognormal(rng, 0.0, 9.0, 1_000_000)
    assert np.all(x > 0)
    assert 0.9 <= np.median(x) <= 1.1


def test_lognormal_rejects_negative_sigma():
    with pytest.raises(InvalidParameterError):
        sample_lognormal(RngStream(1, 0), 0.0, -0.1)


def test_frobenius_norm_basics():
    assert frobenius_norm(np.eye(2)) == pytest.approx(np.sqrt(2))
    assert frobenius_norm(np.zeros((2, 2))) == 0.0
    assert frobenius_norm(np.array([[3, 0], [0, 4]])) == pytest.approx(5.0)


def test_hadamard_norm_inequality():
    rng = RngStream(5, 0)
    for _ in range(1000):
        a = sample_cgauss(rng, 1.0, (2, 2))
        b = sample_cgauss(rng, 1.0, (2, 2))
        lhs = frobenius_norm(hadamard(a, b))
        rhs = frobenius_norm(a) * np.max(np.abs(b))
        assert lhs <= rhs + 1e-12


def test_gram_determinant_is_real_psd():
    rng = RngStream(6, 0)
    a = sample_cgauss(rng, 1.0, (10_000, 2, 2))
    gram = np.conj(np.swapaxes(a, 1, 2)) @ a
    dets = np.linalg.det(gram)
    assert np.max(np.abs(dets.imag)) < 1e-12
    assert np.min(dets.real) >= -1e-12


def test_stream_ids_are_uncorrelated():
    x = RngStream(42, 1).standard_normal(100_000)
    y = RngStream(42, 2).standard_normal(100_000)
    rho = np.corrcoef(x, y)[0, 1]
    assert abs(rho) < 0.01


def test_distinct_keys_give_distinct_sequences():
    a = RngStream(42, 1).standard_normal(4)
    b = RngStream(42, 2).standard_normal(4)
    c = RngStream(43, 1).standard_normal(4)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_compose_stream_id():
    assert compose_stream_id(0, 0) == 0
    assert compose_stream_id(1, 2) == (1 << 32) | 2
    with pytest.raises(InvalidParameterError):
        compose_stream_id(1 << 32, 0)


def test_herm_involution_and_det2():
    rng = RngStream(8, 0)
    m = sample_cgauss(rng, 1.0, (2, 2))
    np.testing.assert_array_equal(herm(herm(m)), m)
    assert det2(m) == pytest.approx(np.linalg.det(m))
