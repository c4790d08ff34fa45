"""Truncated Dirichlet-series algebra and the exact identities behind it.

The detector series D(s) = L(s) * (log L)''(s) is handled coefficient-wise
here: with l(n) the coefficients of log L (supported on prime powers),
the detector coefficients are c = a * (l * log^2), a Dirichlet convolution.
D's poles sit exactly at the simple zeros of L, which is what makes it a
simple-zero detector.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import character_table, gauss_sum, is_prime
from .errors import SearchCapError, ValidationError
from .exact import PolyQ, binom_poly
from .newforms import Newform, _smallest_prime_factor


@dataclass
class CoeffSeries:
    """Dense truncated Dirichlet-series coefficients (index 0 unused)."""

    values: np.ndarray
    description: str = ""

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> complex:
        return complex(self.values[n])


def convolve(A: CoeffSeries, B: CoeffSeries) -> CoeffSeries:
    """Dirichlet convolution (A*B)(n) = sum_{d|n} A(d) B(n/d)."""
    if A.n_max != B.n_max:
        raise ValidationError("convolve needs equal n_max")
    n = A.n_max
    out = np.zeros(n + 1, dtype=complex)
    for d in range(1, n + 1):
        if A.values[d] != 0:
            out[d::d] += A.values[d] * B.values[1:n // d + 1]
    return CoeffSeries(out, f"({A.description})*({B.description})")


def log_l_coefficients(f: Newform, n_max: int) -> CoeffSeries:
    """Coefficients l(n) of log L_f, supported on prime powers.

    At unramified p the values are the Satake power sums over m:
    l(p^m) = (alpha^m + beta^m)/m via the Newton recurrence; at ramified
    p the local factor is degree 1 and l(p^m) = a(p)^m / m.
    """
    if n_max > f.n_max:
        raise ValidationError("n_max exceeds stored coefficients")
    out = np.zeros(n_max + 1, dtype=complex)
    spf = _smallest_prime_factor(n_max)
    for p in range(2, n_max + 1):
        if spf[p] != p:
            continue
        ap = f.a(p)
        if f.level % p == 0:
            pe, m, power = p, 1, ap
            while pe <= n_max:
                out[pe] = power / m
                pe *= p
                m += 1
                power *= ap
        else:
            xi_p = complex(f.nebentypus.values[p % f.nebentypus.modulus])
            det = xi_p * p ** (f.weight - 1)
            s_prev, s_cur = 2.0 + 0.0j, ap
            pe, m = p, 1
            while pe <= n_max:
                out[pe] = s_cur / m
                s_prev, s_cur = s_cur, ap * s_cur - det * s_prev
                pe *= p
                m += 1
    return CoeffSeries(out, f"log L[{f.label}]")


def detector_coefficients(f: Newform, n_max: int) -> CoeffSeries:
    """Coefficients c(n) of the detector series D = L * (log L)''.

    The second s-derivative multiplies l(n) by log^2 n, so
    c = a * (l . log^2) as a Dirichlet convolution.
    """
    key = ("detector_coeffs", n_max)
    if key in f._cache:
        return f._cache[key]
    ell = log_l_coefficients(f, n_max)
    logs = np.zeros(n_max + 1)
    logs[1:] = np.log(np.arange(1, n_max + 1))
    m = CoeffSeries(ell.values * logs * logs, "(log L)''")
    a = CoeffSeries(f.coeffs[:n_max + 1].copy(), f"a[{f.label}]")
    out = convolve(a, m)
    out.description = f"detector c[{f.label}]"
    f._cache[key] = out
    return out


# ----------------------------------------------------------------------
# character decomposition of e(n/q)
# ----------------------------------------------------------------------

def additive_char_decomposition_error(q: int) -> float:
    """Max over n of |e(n/q) - [1 - q/(q-1) chi0(n)
    + 1/(q-1) sum_{chi != chi0} tau(chi~) chi(n)]| for prime q."""
    chars = character_table(q)
    taus = [gauss_sum(chi.conjugate()) for chi in chars]
    worst = 0.0
    for n in range(q):
        lhs = cmath.exp(2j * math.pi * n / q)
        rhs = 1.0 + 0.0j
        rhs -= q / (q - 1) * chars[0].values[n % q]
        for chi, tau in zip(chars[1:], taus[1:]):
            rhs += tau * chi.values[n % q] / (q - 1)
        worst = max(worst, abs(lhs - rhs))
    return worst


def twist_coefficient_decomposition_error(f: Newform, q: int, n_max: int) -> float:
    """Coefficient-wise check that c(n) e(n/q) matches the character
    decomposition; returns the max relative error over n <= n_max."""
    if f.level % q == 0:
        raise ValidationError("q must not divide the level")
    c = detector_coefficients(f, n_max).values
    chars = character_table(q)
    taus = [gauss_sum(chi.conjugate()) for chi in chars]
    worst = 0.0
    for n in range(1, n_max + 1):
        lhs = c[n] * cmath.exp(2j * math.pi * n / q)
        rhs = c[n] * (1.0 - q / (q - 1) * chars[0].values[n % q]
                      + sum(t * chi.values[n % q]
                            for chi, t in zip(chars[1:], taus[1:])) / (q - 1))
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(c[n])))
    return worst


# ----------------------------------------------------------------------
# primes in progressions, Vandermonde, Chu-Vandermonde
# ----------------------------------------------------------------------

def dirichlet_primes(q: int, N: int, M: int, cap: int = 10 ** 7) -> list[int]:
    """First M primes congruent to q mod N (requires gcd(q, N) = 1)."""
    if math.gcd(q, N) != 1:
        raise ValidationError("need gcd(q, N) = 1")
    out = []
    n = 2
    r = q % N
    while len(out) < M:
        if n > cap:
            raise SearchCapError(f"no {M} primes = {q} mod {N} below {cap}")
        if n % N == r and is_prime(n):
            out.append(n)
        n += 1
    return out


def vandermonde_solve(primes: list[int], m0: int) -> list[Fraction]:
    """Exact rationals c_j with sum_j c_j q_j^{-m} = delta(m, m0) for
    m = 0..M-1, by Gaussian elimination over Q; the solution is verified
    by exact back-substitution before returning."""
    M = len(primes)
    if len(set(primes)) != M:
        raise ValidationError("primes must be distinct")
    if not 0 <= m0 < M:
        raise ValidationError("need 0 <= m0 < M")
    A = [[Fraction(1, qj) ** m for qj in primes] for m in range(M)]
    b = [Fraction(int(m == m0)) for m in range(M)]
    # forward elimination with partial pivoting (exact)
    for col in range(M):
        piv = next(r for r in range(col, M) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        b[col] *= inv
        for r in range(M):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [v - factor * w for v, w in zip(A[r], A[col])]
                b[r] -= factor * b[col]
    c = b
    for m in range(M):
        lhs = sum(cj * Fraction(1, qj) ** m for cj, qj in zip(c, primes))
        if lhs != Fraction(int(m == m0)):
            raise ValidationError("exact residual nonzero (should be impossible)")
    return c


def chu_vandermonde_check(m: int, k: int) -> bool:
    """Verify sum_j binom(m+k-1, m-j) binom(-s-m, j) = (-1)^m binom(s+m-k, m)
    as an exact polynomial identity in s over Q."""
    if m > 30 or k > 30:
        raise ValidationError("check limited to m, k <= 30")
    s = PolyQ.x()
    lhs = PolyQ.const(0)
    for j in range(m + 1):
        lhs = lhs + math.comb(m + k - 1, m - j) * binom_poly(-s - m, j)
    rhs = Fraction((-1) ** m) * binom_poly(s + m - k, m)
    return lhs == rhs
