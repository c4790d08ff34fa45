"""Numerical evaluation of the completed L-function and the detector series.

Lambda(s) = (2 pi)^{-s} Gamma(s) L(s) is evaluated everywhere in C by the
incomplete-gamma split of its defining Mellin integral at y = 1/sqrt(N),
transformed by the functional equation:

    Lambda_f(s) = sum_n a_f(n) (2 pi n)^{-s} Gamma(s, 2 pi n / sqrt(N))
                + eps N^{k/2-s} sum_n a_fbar(n) (2 pi n)^{s-k}
                                     Gamma(k-s, 2 pi n / sqrt(N)).

Derivatives come from Cauchy circles (one evaluation kernel, spectral
accuracy); the detector D = (L'' L - L'^2)/L follows, along with its
prime-deprived variant and the twice-differentiated functional equation
residual.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError, TailBoundError, ValidationError
from .local import LocalFactor, euler_factor_value, local_factor
from .newforms import Newform, deligne_ok, dual
from .quadrature import cauchy_derivatives
from .special import gamma, log_gamma, trigamma, upper_incomplete_gamma


@dataclass
class EvalSettings:
    series_cutoff: int | None = None   # None: auto from Im s and the level
    cauchy_radius: float = 0.25
    cauchy_nodes: int = 64
    target_abs_tol: float = 1e-12
    pole_rel_tol: float = 1e-8


DEFAULT_SETTINGS = EvalSettings()


def _auto_cutoff(f: Newform, s: complex, settings: EvalSettings) -> int:
    if settings.series_cutoff is not None:
        return settings.series_cutoff
    sqn = math.sqrt(f.level)
    base = sqn * (abs(s.imag) + 40.0) / (2.0 * math.pi)
    return max(16, int(math.ceil(base)) + 8)


def _tail_estimate(f: Newform, sigma: float, k: int, cutoff: int) -> float:
    """Crude bound on the dropped incomplete-gamma tail: terms decay at
    least geometrically with ratio e^{-2 pi / sqrt(N)} once the Gamma
    arguments dominate, so bound by first-omitted-term / (1 - ratio)."""
    n = cutoff + 1
    x = 2.0 * math.pi * n / math.sqrt(f.level)
    env = (math.log(n) + 2.0) * n ** ((k - 1) / 2.0)   # divisor-bound envelope
    try:
        mag = env * (2.0 * math.pi * n) ** (-sigma) * 2.0 * x ** (sigma - 1) * math.exp(-x)
    except OverflowError:
        return math.inf
    ratio = math.exp(-2.0 * math.pi / math.sqrt(f.level)) * 1.5
    return mag / max(1e-9, 1.0 - min(ratio, 0.999))


def completed_l(f: Newform, s, settings: EvalSettings | None = None) -> complex:
    """Lambda_f(s), entire in s; accuracy guaranteed for |Im s| <= 60."""
    settings = settings or DEFAULT_SETTINGS
    s = complex(s)
    if not deligne_ok(f):
        raise ValidationError(
            "coefficients violate the Deligne bound; tail bounds are invalid")
    cutoff = min(_auto_cutoff(f, s, settings), f.n_max)
    k = f.weight
    fbar = _dual_cached(f)
    sqn = math.sqrt(f.level)
    tail = max(_tail_estimate(f, s.real, k, cutoff),
               _tail_estimate(f, k - s.real, k, cutoff))
    if tail > settings.target_abs_tol:
        raise TailBoundError(
            f"cutoff {cutoff} leaves tail ~{tail:.2e} > {settings.target_abs_tol:.2e}"
            " (raise series_cutoff or n_max)")
    two_pi = 2.0 * math.pi
    total1 = 0.0 + 0.0j
    total2 = 0.0 + 0.0j
    for n in range(1, cutoff + 1):
        x = two_pi * n / sqn
        an = f.coeffs[n]
        abn = fbar.coeffs[n]
        if an != 0:
            total1 += an * cmath.exp(-s * math.log(two_pi * n)) \
                * upper_incomplete_gamma(s, x)
        if abn != 0:
            total2 += abn * cmath.exp((s - k) * math.log(two_pi * n)) \
                * upper_incomplete_gamma(k - s, x)
    return total1 + f.root_number * f.level ** (k / 2.0 - s) * total2


def _dual_cached(f: Newform) -> Newform:
    if "dual" not in f._cache:
        d = dual(f)
        d._cache["dual"] = f
        f._cache["dual"] = d
    return f._cache["dual"]


def l_value(f: Newform, s, settings: EvalSettings | None = None) -> complex:
    """Finite L-function L_f(s) = (2 pi)^s Lambda_f(s) / Gamma(s)."""
    s = complex(s)
    return cmath.exp(s * math.log(2.0 * math.pi) - log_gamma(s)) \
        * completed_l(f, s, settings)


def _check_gamma_pole_distance(s: complex, radius: float) -> None:
    nearest = round(s.real)
    if nearest <= 0 and abs(s - nearest) <= radius + 0.05:
        raise PoleError(
            f"Cauchy circle at {s} comes within {radius} of the Gamma pole {nearest}")


def l_with_derivatives(f: Newform, s, settings: EvalSettings | None = None):
    """(L, L', L'') at s by Cauchy's formula on a small circle.

    Also enforces the pole-proximity contract: |L(s)| must exceed
    pole_rel_tol times the circle maximum unless the caller explicitly
    wants values near a zero (use guard_zero=False via detector calls).
    Returns (L, L1, L2, circle_scale).
    """
    settings = settings or DEFAULT_SETTINGS
    s = complex(s)
    _check_gamma_pole_distance(s, settings.cauchy_radius)
    derivs, vals = cauchy_derivatives(
        lambda z: l_value(f, z, settings), s,
        radius=settings.cauchy_radius, nodes=settings.cauchy_nodes, max_order=2)
    scale = float(np.max(np.abs(vals)))
    return derivs[0], derivs[1], derivs[2], scale


def detector_from_derivatives(L: complex, L1: complex, L2: complex) -> complex:
    """D = (L'' L - (L')^2) / L; no pole guard (caller's job)."""
    return (L2 * L - L1 * L1) / L


def detector_value(f: Newform, s, settings: EvalSettings | None = None) -> complex:
    """Detector series D(s) = L(s) (log L)''(s); poles at simple zeros of L."""
    settings = settings or DEFAULT_SETTINGS
    L, L1, L2, scale = l_with_derivatives(f, s, settings)
    if abs(L) < settings.pole_rel_tol * scale:
        raise PoleError(f"L(s) vanishes to working precision at s={s} "
                        "(detector has a pole here)")
    return detector_from_derivatives(L, L1, L2)


def detector_value_omit_prime(f: Newform, q: int, s,
                              settings: EvalSettings | None = None) -> complex:
    """Detector of the q-deprived L-function E_q(s) L(s) (chi_0-twist).

    Because the principal character kills the Euler factor at q, the
    chi_0-masked detector series is the detector of E_q * L; its poles
    include the zeros of the local factor itself, which all lie on
    Re s = (k-1)/2.
    """
    settings = settings or DEFAULT_SETTINGS
    s = complex(s)
    lf = local_factor(f, q)
    if lf.is_square:
        raise ValidationError(
            f"local factor at q={q} is a square: its zeros are double and "
            "the deprived detector has no pole there (flagged, not evaluated)")
    L, L1, L2, scale = l_with_derivatives(f, s, settings)
    E = euler_factor_value(lf, s, 0)
    E1 = euler_factor_value(lf, s, 1)
    E2 = euler_factor_value(lf, s, 2)
    G = E * L
    G1 = E1 * L + E * L1
    G2 = E2 * L + 2.0 * E1 * L1 + E * L2
    if abs(G) < settings.pole_rel_tol * max(abs(E), 1.0) * scale:
        raise PoleError(f"E_q(s) L(s) vanishes to working precision at s={s}")
    return detector_from_derivatives(G, G1, G2)


def completed_detector(f: Newform, s, settings: EvalSettings | None = None) -> complex:
    """(2 pi)^{-s} Gamma(s) D(s)."""
    s = complex(s)
    return cmath.exp(-s * math.log(2.0 * math.pi) + log_gamma(s)) \
        * detector_value(f, s, settings)


def d2_funceq_residual(f: Newform, s, settings: EvalSettings | None = None) -> float:
    """Residual of the twice-differentiated functional equation:

    |CD_f(s) + Lambda_f(s) (psi'(s) - psi'(k-s))
       - eps N^{k/2-s} CD_fbar(k-s)|,

    where CD is the completed detector.  Vanishes identically in exact
    arithmetic; the float value measures end-to-end evaluation error.
    """
    settings = settings or DEFAULT_SETTINGS
    s = complex(s)
    k = f.weight
    lhs = completed_detector(f, s, settings) \
        + completed_l(f, s, settings) * (trigamma(s) - trigamma(k - s))
    rhs = f.root_number * f.level ** (k / 2.0 - s) \
        * completed_detector(_dual_cached(f), k - s, settings)
    return abs(lhs - rhs)
