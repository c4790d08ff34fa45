import cmath
import math

import numpy as np
import pytest

from lfunlab.errors import ValidationError
from lfunlab.local import (LocalFactor, abundance_report, euler_factor_value,
                           local_factor, local_zero_count, local_zeros,
                           rankin_average)
from lfunlab.newforms import Newform, ramanujan_delta


def test_local_factor_q2(delta):
    lf = local_factor(delta, 2)
    # roots of X^2 + 24 X + 2048: -12 +- i sqrt(1904)
    assert abs(lf.alpha - complex(-12.0, math.sqrt(1904))) < 1e-9
    assert abs(lf.beta - complex(-12.0, -math.sqrt(1904))) < 1e-9
    assert abs(abs(lf.alpha) - 2 ** 5.5) < 1e-10
    assert abs(lf.theta - math.atan2(math.sqrt(1904), -12.0)) < 1e-12
    assert abs(lf.theta - 1.8392) < 1e-4
    assert not lf.is_square


def test_satake_modulus_all_small_primes(delta):
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        lf = local_factor(delta, q)
        assert abs(abs(lf.alpha) - q ** 5.5) < 1e-10 * q ** 5.5
        assert abs(abs(lf.beta) - q ** 5.5) < 1e-10 * q ** 5.5
        assert abs(lf.alpha * lf.beta - 2 ** 0 * q ** 11) < 1e-9 * q ** 11
        assert abs(lf.alpha + lf.beta - delta.a(q)) < 1e-9 * max(1, abs(delta.a(q)))


def test_never_square_for_delta(delta):
    for q in (2, 3, 5, 7, 11, 13):
        assert not local_factor(delta, q).is_square


def test_ramified_prime_rejected(delta):
    from lfunlab.characters import character_table
    from lfunlab.newforms import twist_newform
    chars = character_table(5)
    quad = next(ch for ch in chars[1:] if np.allclose(ch.values.imag, 0.0))
    ft = twist_newform(delta, quad)
    with pytest.raises(ValidationError):
        local_factor(ft, 5)


def test_local_zeros_q2(delta):
    lf = local_factor(delta, 2)
    zs = local_zeros(lf, 0.0, 10.0)
    ords = [z["ordinate"] for z in zs]
    assert abs(ords[0] - lf.theta / math.log(2)) < 1e-12
    assert abs(ords[0] - 2.6534) < 1e-4
    assert abs(ords[1] - (2 * math.pi - lf.theta) / math.log(2)) < 1e-12
    assert abs(ords[1] - 6.4114) < 1e-4
    assert all(z["simple"] for z in zs)
    assert all(abs(z["s"].real - 5.5) < 1e-12 for z in zs)
    for z in zs:
        assert abs(euler_factor_value(lf, z["s"])) < 1e-12


def test_local_zeros_spacing(delta):
    lf = local_factor(delta, 3)
    zs = local_zeros(lf, 0.0, 30.0)
    from_alpha = [z["ordinate"] for z in zs
                  if abs((z["ordinate"] * math.log(3) - lf.theta)
                         % (2 * math.pi)) < 1e-9]
    gaps = np.diff(from_alpha)
    assert np.allclose(gaps, 2 * math.pi / math.log(3))


def test_local_zero_count_formula(delta):
    # two families, each with period 2 pi / log q
    for q in (2, 3, 5):
        lf = local_factor(delta, q)
        for T in (5.0, 10.0, 25.0):
            count = local_zero_count(lf, T)
            explicit = len(local_zeros(lf, 0.0, T))
            assert count == explicit
            approx = T * math.log(q) / math.pi
            assert abs(count - approx) <= 2.0


def test_square_case_synthetic():
    f = ramanujan_delta(16)
    coeffs = f.coeffs.copy()
    coeffs[2] = 2 * 2 ** 5.5          # forces alpha = beta
    coeffs[4] = coeffs[2] ** 2 - 2 ** 11
    coeffs[6] = coeffs[2] * coeffs[3]
    coeffs[8] = coeffs[2] * coeffs[4] - 2 ** 11 * coeffs[2]
    coeffs[10] = coeffs[2] * coeffs[5]
    coeffs[12] = coeffs[4] * coeffs[3]
    coeffs[14] = coeffs[2] * coeffs[7]
    coeffs[16] = coeffs[2] * coeffs[8] - 2 ** 11 * coeffs[4]
    g = Newform(weight=12, level=1, nebentypus=f.nebentypus, root_number=1.0,
                coeffs=coeffs, n_max=16, label="square-case")
    lf = local_factor(g, 2)
    assert lf.is_square
    zs = local_zeros(lf, 0.0, 10.0)
    assert zs and all(not z["simple"] for z in zs)


def test_rankin_average(delta):
    v = rankin_average(delta, delta.n_max)
    assert 0.85 < v < 1.15
    assert abs(rankin_average(delta, 2) - 576.0 / 2048.0) < 1e-15


def test_rankin_zero_form():
    f = ramanujan_delta(64)
    coeffs = np.zeros(65, dtype=complex)
    coeffs[1] = 1.0
    g = Newform(weight=12, level=1, nebentypus=f.nebentypus, root_number=1.0,
                coeffs=coeffs, n_max=64, label="zeros")
    assert rankin_average(g, 64) == 0.0


def test_abundance(delta):
    assert abundance_report(delta, delta.n_max) == 1.0


def test_abundance_no_data(delta):
    with pytest.raises(ValidationError):
        abundance_report(delta, 1)
