import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from lfunlab.dirichlet import detector_coefficients
from lfunlab.errors import PoleError, TailBoundError, ValidationError
from lfunlab.evaluate import (EvalSettings, completed_detector, completed_l,
                              d2_funceq_residual, detector_from_derivatives,
                              detector_value, detector_value_omit_prime,
                              l_value, l_with_derivatives)
from lfunlab.local import euler_factor_value, local_factor
from lfunlab.newforms import Newform, ramanujan_delta
from lfunlab.quadrature import cauchy_derivatives
from lfunlab.zeros import scan_zeros


def test_funceq_residual_spot(delta):
    s = 4.0 + 5.0j
    lhs = completed_l(delta, s)
    rhs = delta.root_number * completed_l(delta, 12 - s)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_lambda_real_on_critical_line(delta):
    for t in (0.0, 3.7, 9.0, 14.2, 25.0):
        v = completed_l(delta, complex(6.0, t))
        assert abs(v.imag) < 1e-12 * max(1e-300, abs(v))


def test_lambda_direct_quadrature_oracle(delta):
    # Lambda(8) = int_0^infty f(iy) y^7 dy, adaptive quadrature split at y=1.
    tau = delta.coeffs

    def f_iy(y):
        n_cut = min(delta.n_max, int((60 + 12 * abs(math.log(y))) / (2 * math.pi * y)) + 4)
        n = np.arange(1, n_cut + 1)
        return float(np.dot(tau[1:n_cut + 1].real, np.exp(-2 * math.pi * n * y)))

    lo, _ = quad(lambda y: f_iy(y) * y ** 7, 0.02, 1.0, epsabs=1e-12, limit=300)
    hi, _ = quad(lambda y: f_iy(y) * y ** 7, 1.0, 14.0, epsabs=1e-12, limit=300)
    lam = completed_l(delta, 8.0)
    assert abs(lam - (lo + hi)) < 1e-8


def test_l_value_series_overlap(delta):
    ser = complex(np.dot(delta.coeffs[1:],
                         np.arange(1, delta.n_max + 1, dtype=float) ** -8.0))
    assert abs(l_value(delta, 8.0) - ser) < 1e-9


def test_tail_bound_refusal(delta):
    with pytest.raises(TailBoundError):
        completed_l(delta, 6.0 + 20.0j, EvalSettings(series_cutoff=3))


def test_deligne_refusal():
    f = ramanujan_delta(16)
    coeffs = f.coeffs.copy()
    coeffs[2] = 1e6
    coeffs[4] = coeffs[2] ** 2 - 2 ** 11
    coeffs[6] = coeffs[2] * coeffs[3]
    coeffs[8] = coeffs[2] * coeffs[4] - 2 ** 11 * coeffs[2]
    coeffs[10] = coeffs[2] * coeffs[5]
    coeffs[12] = coeffs[4] * coeffs[3]
    coeffs[14] = coeffs[2] * coeffs[7]
    coeffs[16] = coeffs[2] * coeffs[8] - 2 ** 11 * coeffs[4]
    g = Newform(weight=12, level=1, nebentypus=f.nebentypus, root_number=1.0,
                coeffs=coeffs, n_max=16, label="too-big")
    with pytest.raises(ValidationError):
        completed_l(g, 8.0)


def test_cauchy_derivative_self_test():
    derivs, _ = cauchy_derivatives(lambda s: 3.7 + 0j, 1.0 + 1.0j)
    assert abs(derivs[0] - 3.7) < 1e-14
    assert abs(derivs[1]) < 1e-13
    assert abs(derivs[2]) < 1e-12


def test_l_derivative_vs_finite_difference(delta):
    _, L1, L2, _ = l_with_derivatives(delta, 8.0)
    h = 1e-3
    fd1 = (l_value(delta, 8 + h) - l_value(delta, 8 - h)) / (2 * h)
    fd2 = (l_value(delta, 8 + h) - 2 * l_value(delta, 8.0)
           + l_value(delta, 8 - h)) / h ** 2
    assert abs(L1 - fd1) < 1e-6
    assert abs(L2 - fd2) < 1e-4


def test_gamma_pole_guard(delta):
    with pytest.raises(PoleError):
        l_with_derivatives(delta, -2.0 + 0.1j)


def test_detector_trivial_numerator():
    assert detector_from_derivatives(2.0, 0.0, 0.0) == 0.0


def test_detector_series_overlap(delta_big):
    n = delta_big.n_max
    c = detector_coefficients(delta_big, n).values
    idx = np.arange(1, n + 1, dtype=float)
    for s in (8.0 + 0.0j, 8.0 + 5.0j):
        ser = complex(np.dot(c[1:], np.exp(-s * np.log(idx))))
        assert abs(detector_value(delta_big, s) - ser) < 1e-7


def test_detector_pole_guard(delta):
    rho = complex(6.0, scan_zeros(delta, 9.0, 9.5)[0].t)
    with pytest.raises(PoleError):
        detector_value(delta, rho)


def test_detector_laurent_at_first_zero(delta):
    rec = scan_zeros(delta, 9.0, 9.5)[0]
    rho = rec.rho(12)
    _, L1, _, _ = l_with_derivatives(delta, rho)
    for phase in (1.0, 1j, -1.0, -1j):
        s = rho + 1e-6 * phase
        val = (s - rho) * detector_value(delta, s)
        assert abs(val + L1) < 1e-5


def test_omit_prime_series_overlap(delta_big):
    n = delta_big.n_max
    c = detector_coefficients(delta_big, n).values
    idx = np.arange(1, n + 1, dtype=float)
    mask = (np.arange(0, n + 1) % 2 == 1)[1:]   # chi_0 mod 2 kills even n
    ser = complex(np.dot(c[1:][mask], idx[mask] ** -8.0))
    got = detector_value_omit_prime(delta_big, 2, 8.0)
    assert abs(got - ser) < 1e-7


def test_omit_prime_local_correction_algebra(delta):
    # D_omit - E*D = E L (log E)'' pointwise
    s = 8.0 + 1.0j
    lf = local_factor(delta, 2)
    E = euler_factor_value(lf, s, 0)
    E1 = euler_factor_value(lf, s, 1)
    E2 = euler_factor_value(lf, s, 2)
    L, _, _, _ = l_with_derivatives(delta, s)
    lhs = detector_value_omit_prime(delta, 2, s) - E * detector_value(delta, s)
    rhs = E * L * (E2 / E - (E1 / E) ** 2)
    assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))


def test_omit_prime_pole_scaling(delta):
    lf = local_factor(delta, 2)
    s0 = complex(5.5, lf.theta / math.log(2))
    val = detector_value_omit_prime(delta, 2, s0 + 1e-4)
    assert abs(val) >= 1e3
    L, _, _, _ = l_with_derivatives(delta, s0)
    res = -euler_factor_value(lf, s0, 1) * L
    for d in (1e-4, 1e-5):
        got = d * detector_value_omit_prime(delta, 2, s0 + d)
        assert abs(got - res) < 5e-3 * abs(res)


def test_omit_prime_square_flagged():
    f = ramanujan_delta(32)
    coeffs = f.coeffs.copy()
    coeffs[2] = 2 * 2 ** 5.5
    for n in range(4, 33, 2):
        p, m = 2, n // 2
        while m % 2 == 0:
            p *= 2
            m //= 2
        if m > 1:
            coeffs[n] = coeffs[p] * coeffs[m]
        else:
            coeffs[n] = coeffs[2] * coeffs[n // 2] - 2 ** 11 * coeffs[n // 4]
    g = Newform(weight=12, level=1, nebentypus=f.nebentypus, root_number=1.0,
                coeffs=coeffs, n_max=32, label="square-local")
    with pytest.raises(ValidationError, match="square"):
        detector_value_omit_prime(g, 2, 8.0)


def test_d2_funceq_residuals(delta):
    assert d2_funceq_residual(delta, 7.0 + 2.0j) < 1e-7
    assert d2_funceq_residual(delta, 6.0) < 1e-7
    # the identity is its own reflection: s <-> k-s with f <-> dual(f)
    r1 = d2_funceq_residual(delta, 7.3 + 1.1j)
    from lfunlab.evaluate import _dual_cached
    r2 = d2_funceq_residual(_dual_cached(delta), 12 - (7.3 + 1.1j))
    assert abs(r1 - r2) < 1e-9
