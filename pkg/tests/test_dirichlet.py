import math
from fractions import Fraction

import numpy as np
import pytest

from lfunlab.dirichlet import (CoeffSeries, additive_char_decomposition_error,
                               chu_vandermonde_check, convolve,
                               detector_coefficients, dirichlet_primes,
                               log_l_coefficients,
                               twist_coefficient_decomposition_error,
                               vandermonde_solve)
from lfunlab.errors import SearchCapError, ValidationError


def series(vals):
    return CoeffSeries(np.asarray(vals, dtype=complex))


def test_convolution_identity():
    e = series([0, 1, 0, 0, 0, 0])          # identity under Dirichlet product
    b = series([0, 3, 1, 4, 1, 5])
    assert np.allclose(convolve(e, b).values, b.values)


def test_convolution_divisor_count():
    n = 12
    ones = series([0] + [1] * n)
    d = convolve(ones, ones)
    assert d[12] == 6.0
    assert d[6] == 4.0


def test_convolution_inverse_roundtrip(delta):
    # invert a by forward substitution (independent of convolve), then check
    n = 300
    a = delta.coeffs[:n + 1]
    inv = np.zeros(n + 1, dtype=complex)
    inv[1] = 1.0
    for m in range(2, n + 1):
        acc = 0.0
        for d in range(2, m + 1):
            if m % d == 0:
                acc += a[d] * inv[m // d]
        inv[m] = -acc
    prod = convolve(series(a), series(inv))
    expect = np.zeros(n + 1)
    expect[1] = 1.0
    assert np.max(np.abs(prod.values - expect)) < 1e-6   # tau(n) is large; abs scale


def test_log_l_prime_values(delta):
    ell = log_l_coefficients(delta, 100)
    for p in (2, 3, 5, 7):
        assert abs(ell[p] - delta.a(p)) < 1e-12 * max(1.0, abs(delta.a(p)))
    assert abs(ell[4] - (-1760.0)) < 1e-9
    assert ell[6] == 0.0


def test_exp_log_consistency(delta):
    # L = exp(log L): a(n) log n = sum_{d|n, d>1} l(d) log d a(n/d)
    n_max = 1000
    ell = log_l_coefficients(delta, n_max).values
    a = np.zeros(n_max + 1, dtype=complex)
    a[1] = 1.0
    for n in range(2, n_max + 1):
        acc = 0.0
        for d in range(2, n + 1):
            if n % d == 0 and ell[d] != 0:
                acc += ell[d] * math.log(d) * a[n // d]
        a[n] = acc / math.log(n)
    rel = np.abs(a[1:] - delta.coeffs[1:n_max + 1]) \
        / np.maximum(1.0, np.abs(delta.coeffs[1:n_max + 1]))
    assert float(np.max(rel)) < 1e-9


def test_detector_coefficients_values(delta):
    c = detector_coefficients(delta, 100)
    assert c[1] == 0.0
    assert abs(c[2] - (-24 * math.log(2) ** 2)) < 1e-10
    assert abs(c[2] - (-11.5309)) < 1e-4
    assert abs(c[4] - (-6464 * math.log(2) ** 2)) < 1e-9


def test_detector_coefficients_independent_product(delta):
    # oracle: naive O(n^2) product of the a-series with the twice
    # differentiated log-series
    n_max = 200
    ell = log_l_coefficients(delta, n_max).values
    c = detector_coefficients(delta, n_max).values
    for n in range(1, n_max + 1):
        acc = 0.0
        for d in range(1, n + 1):
            if n % d == 0:
                m = n // d
                acc += delta.a(d) * ell[m] * math.log(m) ** 2
        assert abs(c[n] - acc) < 1e-9 * max(1.0, abs(acc))


def test_char_decomposition_exact():
    assert additive_char_decomposition_error(3) < 1e-14
    assert additive_char_decomposition_error(7) < 1e-13
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23):
        assert additive_char_decomposition_error(q) < 1e-12


def test_twist_coeff_decomposition(delta):
    assert twist_coefficient_decomposition_error(delta, 5, 1000) < 1e-9
    assert twist_coefficient_decomposition_error(delta, 11, 500) < 1e-9


def test_dirichlet_primes_examples():
    assert dirichlet_primes(2, 1, 3) == [2, 3, 5]
    assert dirichlet_primes(3, 4, 3) == [3, 7, 11]
    assert dirichlet_primes(2, 5, 2) == [2, 7]


def test_dirichlet_primes_gcd_guard():
    with pytest.raises(ValidationError):
        dirichlet_primes(2, 4, 3)


def test_dirichlet_primes_cap():
    with pytest.raises(SearchCapError):
        dirichlet_primes(1, 1, 10, cap=20)   # only 8 primes below 20


def test_vandermonde_examples():
    assert vandermonde_solve([2], 0) == [Fraction(1)]
    assert vandermonde_solve([2, 3], 0) == [Fraction(-2), Fraction(3)]
    assert vandermonde_solve([2, 3], 1) == [Fraction(6), Fraction(-6)]


def test_vandermonde_exact_all_m0():
    primes = dirichlet_primes(2, 1, 8)
    for m0 in range(8):
        c = vandermonde_solve(primes, m0)   # self-verifies exactly
        assert len(c) == 8


def test_vandermonde_distinctness():
    with pytest.raises(ValidationError):
        vandermonde_solve([2, 2], 0)


def test_chu_vandermonde():
    assert chu_vandermonde_check(0, 7)
    assert chu_vandermonde_check(1, 7)
    assert chu_vandermonde_check(3, 12)
    assert all(chu_vandermonde_check(m, k)
               for m in range(0, 11) for k in range(1, 21))
