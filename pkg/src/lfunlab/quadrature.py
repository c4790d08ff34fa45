"""Small quadrature/differentiation toolkit shared across modules.

Adaptive integration is delegated to QUADPACK (scipy.integrate.quad, a
Gauss-Kronrod scheme) on real and imaginary parts; Cauchy-circle
differentiation uses the spectrally accurate trapezoid rule.
"""

import cmath
import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_laguerre


def quad_complex(fn, a, b, epsabs=1e-12, epsrel=1e-12, limit=200, points=None):
    """Integrate a complex-valued fn over [a, b]; returns (value, err_est)."""
    kw = dict(epsabs=epsabs, epsrel=epsrel, limit=limit)
    if points is not None and not (math.isinf(a) or math.isinf(b)):
        kw["points"] = points
    re, re_err = quad(lambda t: fn(t).real, a, b, **kw)
    im, im_err = quad(lambda t: fn(t).imag, a, b, **kw)
    return complex(re, im), math.hypot(re_err, im_err)


@lru_cache(maxsize=8)
def laguerre_nodes(n: int):
    """Cached Gauss-Laguerre nodes/weights for int_0^inf h(u) e^{-u} du."""
    x, w = roots_laguerre(n)
    return x, w


def cauchy_derivatives(fn, s0: complex, radius: float = 0.25, nodes: int = 64,
                       max_order: int = 2):
    """Derivatives f^(0..max_order)(s0) by the trapezoid rule on a circle.

    f must be analytic on the closed disk; the rule is spectrally accurate,
    so 64 nodes give near machine precision for radius <= 0.5.
    Returns (list_of_derivatives, values_on_circle).
    """
    thetas = 2.0 * math.pi * np.arange(nodes) / nodes
    ring = np.exp(1j * thetas)
    vals = np.array([fn(s0 + radius * z) for z in ring])
    derivs = []
    fact = 1.0
    for m in range(max_order + 1):
        if m > 0:
            fact *= m
        coeff = np.mean(vals * np.exp(-1j * m * thetas))
        derivs.append(fact * coeff / radius ** m)
    return derivs, vals


def phase_unwrap_winding(values: np.ndarray, max_step: float = 2.5):
    """Total winding of a closed discrete path of nonzero complex values.

    Sums principal-branch phase increments; a step larger than max_step
    radians means the sampling is too coarse (caller should refine).
    Returns (winding_float, max_abs_step).
    """
    ratios = values[1:] / values[:-1]
    steps = np.angle(ratios)
    return float(np.sum(steps) / (2.0 * math.pi)), float(np.max(np.abs(steps)))
