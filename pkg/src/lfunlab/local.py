"""Local Euler factor analysis at unramified primes.

The degree-2 factor at q is E_q(s) = 1 - a(q) q^{-s} + xi(q) q^{k-1-2s},
with Satake roots alpha, beta of X^2 - a(q) X + xi(q) q^{k-1}.  Under the
Deligne bound the roots have modulus q^{(k-1)/2}, so E_q's zeros all sit
on Re s = (k-1)/2 and are simple exactly when the factor is not a square.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .characters import is_prime
from .errors import ValidationError
from .newforms import Newform


@dataclass
class LocalFactor:
    q: int
    a_q: complex
    xi_q: complex
    weight: int
    alpha: complex
    beta: complex
    theta: float          # argument of alpha in [0, pi] (self-dual convention)
    is_square: bool
    near_square: bool = False

    @property
    def central_line(self) -> float:
        return (self.weight - 1) / 2.0


def local_factor(f: Newform, q: int) -> LocalFactor:
    """Solve the local quadratic at an unramified prime q <= n_max."""
    if not is_prime(q):
        raise ValidationError(f"{q} is not prime")
    if f.level % q == 0:
        raise ValidationError(f"q={q} is ramified (divides the level); "
                              "the local factor there is degree 1")
    if q > f.n_max:
        raise ValidationError(f"q={q} exceeds stored coefficients")
    a_q = f.a(q)
    xi_q = complex(f.nebentypus.values[q % f.nebentypus.modulus])
    det = xi_q * q ** (f.weight - 1)
    disc = a_q * a_q - 4.0 * det
    sq = cmath.sqrt(disc)
    alpha = (a_q + sq) / 2.0
    beta = (a_q - sq) / 2.0
    if cmath.phase(alpha) < cmath.phase(beta):
        alpha, beta = beta, alpha  # report alpha with argument in [0, pi]
    theta = cmath.phase(alpha)
    # exact square test when the data is exact
    if f.exact_coeffs is not None and xi_q.imag == 0 and \
            float(xi_q.real).is_integer():
        aq_int = f.exact_coeffs[q]
        is_square = aq_int * aq_int == 4 * int(xi_q.real) * q ** (f.weight - 1)
        near = False
    else:
        rel = abs(disc) / max(abs(a_q) ** 2, abs(4 * det), 1.0)
        is_square = rel < 1e-9
        near = 1e-9 <= rel < 1e-6
    return LocalFactor(q=q, a_q=a_q, xi_q=xi_q, weight=f.weight,
                       alpha=alpha, beta=beta, theta=theta,
                       is_square=is_square, near_square=near)


def euler_factor_value(lf: LocalFactor, s: complex,
                       order: int = 0) -> complex:
    """E_q(s) or its s-derivative of the given order (0, 1 or 2)."""
    q, k = lf.q, lf.weight
    lq = math.log(q)
    t1 = lf.a_q * cmath.exp(-s * lq)
    t2 = lf.xi_q * cmath.exp((k - 1 - 2 * s) * lq)
    if order == 0:
        return 1.0 - t1 + t2
    if order == 1:
        return lq * t1 - 2.0 * lq * t2
    if order == 2:
        return -lq * lq * t1 + 4.0 * lq * lq * t2
    raise ValidationError("order must be 0, 1 or 2")


def local_zeros(lf: LocalFactor, t_min: float, t_max: float) -> list[dict]:
    """All zeros of E_q with ordinate in [t_min, t_max].

    From q^s = alpha (resp. beta): s = (k-1)/2 + i (arg +- 2 pi m)/log q,
    each labeled simple or double.  Entries are dicts with keys
    's', 'ordinate', 'simple'.
    """
    q = lf.q
    lq = math.log(q)
    out = []
    for root in ((lf.alpha,) if lf.is_square else (lf.alpha, lf.beta)):
        sigma = math.log(abs(root)) / lq
        base = cmath.phase(root) / lq
        period = 2.0 * math.pi / lq
        m0 = math.floor((t_min - base) / period)
        m = m0
        while base + m * period <= t_max + 1e-12:
            t = base + m * period
            if t >= t_min - 1e-12:
                out.append({
                    "s": complex(sigma, t),
                    "ordinate": t,
                    "simple": not lf.is_square,
                })
            m += 1
    out.sort(key=lambda z: (z["ordinate"], z["s"].real))
    return out


def local_zero_count(lf: LocalFactor, T: float) -> int:
    """Exact count of local zeros with ordinate in [0, T]."""
    return len(local_zeros(lf, 0.0, T))


def rankin_average(f: Newform, X: int) -> float:
    """Mean of |a(q)|^2 / q^{k-1} over unramified primes q <= X."""
    if X > f.n_max:
        raise ValidationError("X exceeds stored coefficients")
    total, count = 0.0, 0
    for q in range(2, X + 1):
        if is_prime(q) and f.level % q != 0:
            total += abs(f.a(q)) ** 2 / q ** (f.weight - 1)
            count += 1
    if count == 0:
        raise ValidationError("no unramified primes <= X")
    return total / count


def abundance_report(f: Newform, X: int) -> float:
    """Fraction of unramified primes q <= X with strict Deligne inequality
    (equivalently: non-square local factor, hence infinitely many simple
    local zeros)."""
    if X > f.n_max:
        raise ValidationError("X exceeds stored coefficients")
    strict, count = 0, 0
    for q in range(2, X + 1):
        if is_prime(q) and f.level % q != 0:
            count += 1
            if not local_factor(f, q).is_square:
                strict += 1
    if count == 0:
        raise ValidationError("no unramified primes <= X (no data)")
    return strict / count
