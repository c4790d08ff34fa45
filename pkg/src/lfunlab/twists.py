"""Additive and multiplicative twists of the coefficient series, and the
character assembly that continues the additive twist D(s, 1/q) beyond its
convergence half-plane:

    D(s, 1/q) = D(s) - q/(q-1) D(s, chi_0)
              + 1/(q-1) sum_{chi != chi_0} tau(chi~) D(s, chi).

The chi_0 term carries poles at the zeros of the local Euler factor at q;
the assembled additive twist inherits them, which is the whole point.
"""

import cmath
import math
from fractions import Fraction

import numpy as np

from .characters import DirichletCharacter, character_table, gauss_sum
from .dirichlet import detector_coefficients
from .errors import TailBoundError, ValidationError
from .evaluate import EvalSettings, DEFAULT_SETTINGS, detector_value, detector_value_omit_prime
from .newforms import Newform, twist_newform


def _coeff_array(kind: str, f: Newform, n_cut: int) -> np.ndarray:
    if n_cut > f.n_max:
        raise TailBoundError(
            f"n_cut={n_cut} exceeds the stored coefficient range {f.n_max}")
    if kind == "L":
        return f.coeffs[:n_cut + 1]
    if kind == "D":
        return detector_coefficients(f, n_cut).values
    raise ValidationError("kind must be 'L' or 'D'")


def _tail_estimate(kind: str, f: Newform, sigma: float, n_cut: int) -> float:
    """Divisor-bound tail estimate for sum_{n > n_cut} |coeff| n^{-sigma}."""
    kappa = (f.weight - 1) / 2.0
    x = float(n_cut)
    if sigma - kappa <= 1.2:
        return math.inf
    boost = math.log(x) ** 2 if kind == "D" else 1.0
    env = (math.log(x) + 2.0) * boost
    # integral of (log + 2) * boost * x^{kappa - sigma}
    return env * x ** (kappa - sigma + 1.0) / (sigma - kappa - 1.0)


def exp_alpha_table(alpha: Fraction, length: int) -> np.ndarray:
    """e(alpha n) for n = 0..length-1 via the (periodic) root-of-unity table."""
    alpha = Fraction(alpha)
    b = alpha.denominator
    roots = np.exp(2j * math.pi * (alpha.numerator % b) * np.arange(b) / b)
    return roots[np.arange(length) % b]


def additive_twist(kind: str, f: Newform, s, alpha, n_cut: int,
                   quad_tol: float = 1e-9):
    """sum_{n <= n_cut} coeff(n) e(alpha n) n^{-s} for rational alpha.

    Requires Re s > (k+1)/2 + 1/2 (absolute-convergence margin) and a
    cutoff whose divisor-bound tail estimate stays below quad_tol;
    returns (value, tail_estimate).
    """
    s = complex(s)
    alpha = Fraction(alpha)
    if alpha == 0:
        raise ValidationError("alpha must be a nonzero rational")
    margin = (f.weight + 1) / 2.0 + 0.5
    if s.real < margin - 1e-12:
        raise ValidationError(
            f"additive twist needs Re s >= {margin} for convergence; got {s.real}")
    tail = _tail_estimate(kind, f, s.real, n_cut)
    if tail > quad_tol:
        raise TailBoundError(
            f"tail estimate {tail:.2e} exceeds quad_tol={quad_tol:.2e}; "
            "increase n_cut")
    coeffs = _coeff_array(kind, f, n_cut)
    n = np.arange(n_cut + 1, dtype=float)
    n[0] = 1.0
    phases = exp_alpha_table(alpha, n_cut + 1)
    terms = coeffs * phases * np.exp(-s * np.log(n))
    terms[0] = 0.0
    value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return value, tail


def twisted_form(f: Newform, chi: DirichletCharacter) -> Newform:
    """Cached twist of f by chi (the twist is reused across evaluations)."""
    key = ("twist", chi.modulus, chi.label)
    if key not in f._cache:
        f._cache[key] = twist_newform(f, chi)
    return f._cache[key]


def detector_twist_value(f: Newform, chi: DirichletCharacter, s,
                         settings: EvalSettings | None = None) -> complex:
    """Multiplicative twist D(s, chi) = sum c(n) chi(n) n^{-s}, evaluated
    everywhere as the detector of the twisted form f x chi (complete
    multiplicativity of chi distributes over the defining convolution)."""
    if chi.is_trivial:
        raise ValidationError("use detector_value_omit_prime for chi_0")
    return detector_value(twisted_form(f, chi), s, settings)


def detector_additive_value(f: Newform, q: int, s,
                            settings: EvalSettings | None = None) -> complex:
    """D(s, 1/q) assembled from the character decomposition; this is the
    meromorphic continuation of additive_twist('D', f, s, 1/q, ...)."""
    settings = settings or DEFAULT_SETTINGS
    if f.level % q == 0:
        raise ValidationError("q must not divide the level")
    chars = character_table(q)
    total = detector_value(f, s, settings)
    total -= q / (q - 1) * detector_value_omit_prime(f, q, s, settings)
    for chi in chars[1:]:
        total += gauss_sum(chi.conjugate()) \
            * detector_twist_value(f, chi, s, settings) / (q - 1)
    return total
