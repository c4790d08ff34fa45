import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from lfunlab.characters import character_table
from lfunlab.dirichlet import detector_coefficients
from lfunlab.errors import TailBoundError, ValidationError
from lfunlab.evaluate import l_value
from lfunlab.local import local_factor
from lfunlab.newforms import twist_newform
from lfunlab.twists import (additive_twist, detector_additive_value,
                            detector_twist_value, exp_alpha_table)


def test_exp_alpha_table():
    t = exp_alpha_table(Fraction(1, 4), 9)
    assert abs(t[1] - 1j) < 1e-15
    assert abs(t[4] - 1.0) < 1e-15
    assert abs(t[6] - (-1.0)) < 1e-15


def test_additive_integer_alpha_is_untwisted(delta_big):
    v, _ = additive_twist("L", delta_big, 8.0, 1, 60000, quad_tol=1e-5)
    assert abs(v - l_value(delta_big, 8.0)) < 1e-9


def test_additive_periodicity(delta_big):
    v1, _ = additive_twist("L", delta_big, 8.0, Fraction(1, 3), 30000, quad_tol=1e-4)
    v2, _ = additive_twist("L", delta_big, 8.0, Fraction(4, 3), 30000, quad_tol=1e-4)
    assert v1 == v2


def test_additive_alternating_oracle(delta_big):
    v, _ = additive_twist("L", delta_big, 8.0, Fraction(1, 2), 50000, quad_tol=1e-4)
    oracle = math.fsum(delta_big.a(n).real * (-1) ** n * n ** -8.0
                       for n in range(1, 50001))
    assert abs(v - oracle) < 1e-12


def test_additive_convergence_margin(delta_big):
    with pytest.raises(ValidationError):
        additive_twist("L", delta_big, 6.5, Fraction(1, 3), 30000)


def test_additive_tail_refusal(delta_big):
    with pytest.raises(TailBoundError):
        additive_twist("D", delta_big, 7.2, Fraction(1, 3), 1000, quad_tol=1e-12)


def test_twisted_detector_coefficients_identity(delta):
    # c_{f x chi}(n) = c_f(n) chi(n): complete multiplicativity distributes
    chars = character_table(5)
    quad = next(ch for ch in chars[1:] if np.allclose(ch.values.imag, 0.0))
    ft = twist_newform(delta, quad)
    n_max = 1000
    c_twist = detector_coefficients(ft, n_max).values
    c_plain = detector_coefficients(delta, n_max).values
    mask = np.array([quad.values[n % 5] for n in range(n_max + 1)])
    assert np.max(np.abs(c_twist - c_plain * mask)) < 1e-9 * np.max(np.abs(c_plain))


def test_mult_twist_series_overlap(delta_big):
    chars = character_table(5)
    quad = next(ch for ch in chars[1:] if np.allclose(ch.values.imag, 0.0))
    n = delta_big.n_max
    c = detector_coefficients(delta_big, n).values
    mask = np.array([quad.values[m % 5] for m in range(n + 1)])
    idx = np.arange(1, n + 1, dtype=float)
    ser = complex(np.dot(c[1:] * mask[1:], idx ** -8.0))
    got = detector_twist_value(delta_big, quad, 8.0)
    assert abs(got - ser) < 1e-7


def test_mult_twist_conjugation_symmetry(delta):
    chars = character_table(5)
    chi = next(ch for ch in chars[1:] if not np.allclose(ch.values.imag, 0.0))
    v = detector_twist_value(delta, chi, 8.0)
    v_bar = detector_twist_value(delta, chi.conjugate(), 8.0)
    assert abs(v_bar - np.conj(v)) < 1e-8 * max(1.0, abs(v))


def test_mult_twist_rejects_trivial(delta):
    with pytest.raises(ValidationError):
        detector_twist_value(delta, character_table(5)[0], 8.0)


def test_additive_assembly_overlap(delta_big):
    dv = detector_additive_value(delta_big, 5, 8.0)
    ser, _ = additive_twist("D", delta_big, 8.0, Fraction(1, 5),
                            delta_big.n_max, quad_tol=1e-4)
    assert abs(dv - ser) < 1e-6


def test_additive_assembly_overlap_complex_s(delta_big):
    s = 8.0 + 3.0j
    dv = detector_additive_value(delta_big, 3, s)
    ser, _ = additive_twist("D", delta_big, s, Fraction(1, 3),
                            delta_big.n_max, quad_tol=1e-4)
    assert abs(dv - ser) < 1e-6


def test_pole_exhibition_q2(delta):
    lf = local_factor(delta, 2)
    s0 = complex(5.5, lf.theta / math.log(2))
    scaled = []
    for dist in (1e-2, 1e-3, 1e-4):
        val = detector_additive_value(delta, 2, s0 + dist)
        scaled.append(abs(val) * dist)
    assert abs(detector_additive_value(delta, 2, s0 + 1e-4)) >= 1e3
    assert max(scaled) / min(scaled) < 2.0
