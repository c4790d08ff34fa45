"""The trigamma log-kernel phi(x) = (x^{k-1}+1) log x / (x-1) and its
integration-by-parts tower phi_{j+1} = x d(phi_j)/dx - (s+j) phi_j.

The tower is kept exactly: truncated series in t = x-1 whose coefficients
are polynomials in s over Q (x d/dx acts as (1+t) d/dt).  Numeric values
away from x = 1 come from the same recursion applied to Taylor jets of
phi at the evaluation point.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .exact import PolyQ

# ----------------------------------------------------------------------
# phi itself
# ----------------------------------------------------------------------


def log_kernel(x, k: int):
    """phi(x) = (x^{k-1} + 1) log x / (x - 1); the removable singularity at
    x = 1 is handled by the series of log(1+t)/t.  Accepts scalars or
    numpy arrays (complex)."""
    x = np.asarray(x, dtype=complex)
    t = x - 1.0
    small = np.abs(t) < 0.1
    out = np.empty_like(x)
    if np.any(~small):
        xs = x[~small]
        out[~small] = (xs ** (k - 1) + 1.0) * np.log(xs) / (xs - 1.0)
    if np.any(small):
        ts = t[small]
        ratio = np.zeros_like(ts)
        for r in range(14, -1, -1):   # log(1+t)/t = sum (-t)^r/(r+1)
            ratio = ratio * (-ts) + 1.0 / (r + 1)
        out[small] = ((1.0 + ts) ** (k - 1) + 1.0) * ratio
    if out.ndim == 0:
        return complex(out)
    return out


# ----------------------------------------------------------------------
# exact tower at x = 1
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class KernelJet:
    """Truncated series of phi_j in t = x-1; coeffs[r] is a PolyQ in s."""

    j: int
    weight: int
    coeffs: tuple

    def value_at_one(self, s):
        return self.coeffs[0](s)

    def order(self) -> int:
        return len(self.coeffs) - 1


def _phi0_series_exact(k: int, length: int) -> list[PolyQ]:
    log_ratio = [Fraction((-1) ** r, r + 1) for r in range(length)]
    poly_part = [Fraction(math.comb(k - 1, r)) if r <= k - 1 else Fraction(0)
                 for r in range(length)]
    poly_part[0] += 1  # (x^{k-1} + 1)
    out = [Fraction(0)] * length
    for i, a in enumerate(poly_part):
        if a == 0:
            continue
        for jj in range(length - i):
            out[i + jj] += a * log_ratio[jj]
    return [PolyQ.const(c) for c in out]


def _tower_step_exact(coeffs: list[PolyQ], j: int) -> list[PolyQ]:
    # phi_{j+1} = (1+t) d phi_j/dt - (s+j) phi_j, truncated one order lower
    length = len(coeffs) - 1
    s = PolyQ.x()
    out = []
    for r in range(length):
        d_part = (r + 1) * coeffs[r + 1] + (r * coeffs[r] if r > 0 else PolyQ.const(0))
        out.append(d_part - (s + j) * coeffs[r])
    return out


@lru_cache(maxsize=32)
def kernel_jets(k: int, j_max: int, J: int) -> tuple:
    """Exact series of phi_0..phi_{j_max} at x = 1, each with J+1 terms."""
    if j_max > 12:
        raise ValidationError("tower depth limited to j_max <= 12")
    if J < j_max + 4:
        raise ValidationError(f"J={J} too small for j_max={j_max} (need >= j_max+4)")
    length = J + j_max + 1
    cur = _phi0_series_exact(k, length)
    jets = [KernelJet(0, k, tuple(cur[:J + 1]))]
    for j in range(j_max):
        cur = _tower_step_exact(cur, j)
        jets.append(KernelJet(j + 1, k, tuple(cur[:J + 1])))
    return tuple(jets)


# ----------------------------------------------------------------------
# numeric evaluation of phi_j(x, s)
# ----------------------------------------------------------------------

_SERIES_RADIUS = 0.45
_SERIES_TERMS = 110


@lru_cache(maxsize=256)
def _center_series_numeric(k: int, j: int, s_key: tuple) -> np.ndarray:
    """Complex t-coefficients of phi_j around x=1 at a fixed numeric s."""
    s = complex(*s_key)
    jets = kernel_jets(k, j, _SERIES_TERMS)
    return np.array([p(s) for p in jets[j].coeffs], dtype=complex)


def _jet_mult(a: np.ndarray, b: np.ndarray, length: int) -> np.ndarray:
    return np.convolve(a, b)[:length]


def _phi0_jet_at(x: complex, k: int, length: int) -> np.ndarray:
    """Taylor jet of phi at a numeric center x (|x-1| > 0, x off (-inf,0])."""
    u = np.zeros(length, dtype=complex)
    # jet of x^{k-1} + 1
    pw = np.zeros(length, dtype=complex)
    for i in range(min(length, k)):
        pw[i] = math.comb(k - 1, i) * x ** (k - 1 - i)
    pw[0] += 1.0
    # jet of log
    lg = np.zeros(length, dtype=complex)
    lg[0] = cmath.log(x)
    for i in range(1, length):
        lg[i] = (-1) ** (i + 1) / (i * x ** i)
    # jet of 1/(x-1)
    inv = np.zeros(length, dtype=complex)
    base = x - 1.0
    for i in range(length):
        inv[i] = (-1) ** i / base ** (i + 1)
    u = _jet_mult(_jet_mult(pw, lg, length), inv, length)
    return u


def kernel_value(k: int, j: int, x, s) -> complex:
    """phi_j(x, s): exact center-1 series for |x-1| <= 0.45, otherwise the
    tower recursion applied to a Taylor jet of phi at x."""
    x = complex(x)
    s = complex(s)
    if abs(x - 1.0) <= _SERIES_RADIUS:
        coeffs = _center_series_numeric(k, j, (s.real, s.imag))
        t = x - 1.0
        acc = 0.0 + 0.0j
        for c in coeffs[::-1]:
            acc = acc * t + c
        return acc
    length = j + 1
    jet = _phi0_jet_at(x, k, length)
    xjet = np.zeros(2, dtype=complex)
    xjet[0], xjet[1] = x, 1.0
    for jj in range(j):
        d = np.arange(1, len(jet), dtype=complex) * jet[1:]
        jet = _jet_mult(xjet, d, len(jet) - 1) - (s + jj) * jet[:len(jet) - 1]
    return complex(jet[0])
