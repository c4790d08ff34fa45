"""Critical-line zeros of the completed L-function: location, simplicity
certification by winding number, box counts, and residue extraction.

Simplicity is certified *numerically* (winding number 1 around a small
circle); rigorous certification would need interval arithmetic and is out
of scope.  Output labeled accordingly.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ContourError, WindingError
from .evaluate import EvalSettings, DEFAULT_SETTINGS, completed_l, l_with_derivatives
from .newforms import Newform
from .quadrature import phase_unwrap_winding
from .special import log_gamma


@dataclass
class ZeroRecord:
    """A certified-simple zero at rho = k/2 + i t."""

    t: float
    refinement_error: float
    winding: int
    lprime: complex = 0.0 + 0.0j
    detector_residue: complex = 0.0 + 0.0j   # residue of (2pi)^{-s}Gamma(s)D(s) at rho

    def rho(self, weight: int) -> complex:
        return complex(weight / 2.0, self.t)


@dataclass
class BoxCount:
    T: float
    count: int
    grh_violation: bool = False


def is_self_dual(f: Newform, tol: float = 1e-12) -> bool:
    return (float(np.max(np.abs(f.coeffs.imag))) < tol
            and abs(f.root_number.imag) < tol
            and float(np.max(np.abs(f.nebentypus.values.imag))) < tol)


def _lambda_on_line(f, settings):
    k = f.weight
    return lambda t: completed_l(f, complex(k / 2.0, t), settings)


def _bisect_ordinate(g, lo, hi, flo, tol=1e-10):
    """Bisection on the real-valued g with a sign change in [lo, hi]."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = g(mid)
        if fm == 0.0:
            return mid, 0.0
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def scan_zeros(f: Newform, t_min: float, t_max: float, step: float = 0.05,
               settings: EvalSettings | None = None,
               certify: bool = True, refine_tol: float = 1e-10) -> list[ZeroRecord]:
    """Locate critical-line zeros with ordinate in [t_min, t_max].

    Self-dual forms with real root number use the sign-change fast path
    (Lambda(k/2 + it) is real); otherwise local minima of |Lambda| are
    refined and certified by winding number.  Close sign changes trigger
    a step/4 rescan of the affected window.
    """
    settings = settings or DEFAULT_SETTINGS
    if t_min > t_max:
        return []
    key = ("scan", round(t_min, 9), round(t_max, 9), step, certify)
    if key in f._cache:
        return f._cache[key]
    lam = _lambda_on_line(f, settings)
    if is_self_dual(f):
        g = lambda t: lam(t).real
        ordinates = _sign_change_scan(g, t_min, t_max, step)
        records = []
        for lo, hi, flo in ordinates:
            t0, err = _bisect_ordinate(g, lo, hi, flo, tol=refine_tol * 0.1)
            w = certify_simple(f, complex(f.weight / 2.0, t0), 0.4, settings) \
                if certify else 1
            records.append(ZeroRecord(t=t0, refinement_error=max(err, refine_tol * 0.1),
                                      winding=w))
    else:
        records = _minima_scan(f, t_min, t_max, step, settings, certify)
    f._cache[key] = records
    return records


def _sign_change_scan(g, t_min, t_max, step):
    """Brackets (lo, hi, g(lo)) of sign changes; rescans at step/4 where
    adjacent changes are suspiciously close."""
    if t_max <= t_min:
        return []
    ts = np.arange(t_min, t_max + step, step)
    ts[-1] = min(ts[-1], t_max)
    vals = [g(t) for t in ts]
    brackets = []
    for i in range(len(ts) - 1):
        if vals[i] == 0.0:
            brackets.append((ts[i] - 1e-12, ts[i] + 1e-12, g(ts[i] - 1e-12)))
        elif (vals[i] < 0) != (vals[i + 1] < 0):
            brackets.append((ts[i], ts[i + 1], vals[i]))
    for i in range(len(brackets) - 1):
        if brackets[i + 1][0] - brackets[i][1] < 2.0 * step:
            warnings.warn(
                f"sign changes closer than 2*step near t={brackets[i][1]:.3f}; "
                "rescanning at step/4", stacklevel=2)
            lo = max(t_min, brackets[i][0] - step)
            hi = min(t_max, brackets[i + 1][1] + step)
            return (_sign_change_scan(g, t_min, lo, step)
                    + _sign_change_scan(g, lo, hi, step / 4.0)
                    + _sign_change_scan(g, hi, t_max, step))
    return brackets


def _minima_scan(f, t_min, t_max, step, settings, certify):
    """Fallback for non-self-dual forms: |Lambda| minima + winding."""
    lam = _lambda_on_line(f, settings)
    ts = np.arange(t_min, t_max + step, step)
    mags = np.array([abs(lam(t)) for t in ts])
    scale = np.median(mags) + np.max(mags) * 1e-12
    records = []
    for i in range(1, len(ts) - 1):
        if mags[i] < mags[i - 1] and mags[i] <= mags[i + 1] and mags[i] < 0.2 * scale:
            lo, hi = ts[i - 1], ts[i + 1]
            for _ in range(120):  # golden-section on |Lambda|^2
                m1 = lo + 0.381966 * (hi - lo)
                m2 = hi - 0.381966 * (hi - lo)
                if abs(lam(m1)) < abs(lam(m2)):
                    hi = m2
                else:
                    lo = m1
                if hi - lo < 1e-11:
                    break
            t0 = 0.5 * (lo + hi)
            w = certify_simple(f, complex(f.weight / 2.0, t0), 0.4, settings) \
                if certify else 1
            if w >= 1:
                records.append(ZeroRecord(t=t0, refinement_error=hi - lo, winding=w))
    return records


def certify_simple(f: Newform, rho: complex, radius: float = 0.4,
                   settings: EvalSettings | None = None, nodes: int = 256) -> int:
    """Winding number of Lambda_f around the circle |s - rho| = radius.

    Implements the argument-principle integral of d log Lambda by phase
    unwrapping at >= 256 nodes (the trapezoid rule applied to the exact
    log-derivative; its real part cancels on a closed loop).  Nodes double
    on aliasing; non-integer totals raise WindingError.
    """
    settings = settings or DEFAULT_SETTINGS
    while True:
        thetas = 2.0 * math.pi * np.arange(nodes + 1) / nodes
        vals = np.array([completed_l(f, rho + radius * cmath.exp(1j * th), settings)
                         for th in thetas])
        mags = np.abs(vals)
        scale = float(np.max(mags))  # local scale: Lambda decays fast in Im s
        if float(np.min(mags)) < 1e3 * settings.target_abs_tol * scale:
            raise ContourError(
                f"Lambda vanishes on the certification circle around {rho}")
        w, max_step = phase_unwrap_winding(vals)
        if max_step <= 2.5:
            break
        nodes *= 2
        if nodes > 8192:
            raise WindingError("phase steps stay too large; zero on contour?")
    if abs(w - round(w)) > 0.1:
        raise WindingError(f"winding {w} is not settled to an integer")
    return int(round(w))


def count_zeros(f: Newform, T: float, settings: EvalSettings | None = None,
                step: float = 0.02, retries: int = 5) -> BoxCount:
    """Argument-principle count of zeros of Lambda in
    [k/2 - 2, k/2 + 2] x (0, T], perturbing T upward if a zero sits on
    the contour.  Compared against scan_zeros by callers; a mismatch is
    reported as a GRH violation, not an error."""
    settings = settings or DEFAULT_SETTINGS
    if T <= 0:
        return BoxCount(T=T, count=0)
    k = f.weight
    t_used = T
    for attempt in range(retries + 1):
        try:
            count = _rect_winding(f, k / 2.0 - 2.0, k / 2.0 + 2.0, 0.0, t_used,
                                  settings, step)
            on_line = len(scan_zeros(f, 0.0 + 1e-9, t_used, settings=settings,
                                     certify=False))
            return BoxCount(T=t_used, count=count,
                            grh_violation=(count != on_line))
        except (ContourError, WindingError):
            t_used += 0.01
    raise ContourError(f"could not move the contour off a zero near T={T}")


def _rect_winding(f, re_lo, re_hi, t_lo, t_hi, settings, step) -> int:
    corners = [complex(re_hi, t_lo), complex(re_hi, t_hi),
               complex(re_lo, t_hi), complex(re_lo, t_lo)]
    samples = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        n = max(8, int(abs(b - a) / step))
        for i in range(n):
            samples.append(a + (b - a) * i / n)
    samples.append(samples[0])
    vals = np.array([completed_l(f, z, settings) for z in samples])
    if float(np.min(np.abs(vals))) == 0.0:
        raise ContourError("exact zero on the counting contour")
    w, max_step = phase_unwrap_winding(vals)
    if max_step > 2.5:
        raise WindingError("rectangle sampling too coarse (zero near contour?)")
    if abs(w - round(w)) > 0.1:
        raise WindingError(f"non-integer rectangle winding {w}")
    return int(round(w))


def residues_up_to(f: Newform, T: float, settings: EvalSettings | None = None) -> list[ZeroRecord]:
    """Zero records in (0, T] with L'(rho) and the completed-detector
    residue (2 pi)^{-rho} Gamma(rho) (-L'(rho)) filled in.

    Requires every zero in the box to certify simple: the residue formula
    is only valid at simple zeros."""
    settings = settings or DEFAULT_SETTINGS
    key = ("residues", round(T, 9))
    if key in f._cache:
        return f._cache[key]
    records = scan_zeros(f, 0.0 + 1e-9, T, settings=settings, certify=True)
    out = []
    for rec in records:
        if rec.winding != 1:
            raise WindingError(
                f"zero at t={rec.t} has winding {rec.winding}; residue formula"
                " needs a simple zero")
        rho = rec.rho(f.weight)
        L, L1, L2, _ = l_with_derivatives(f, rho, settings)
        res = cmath.exp(-rho * math.log(2.0 * math.pi) + log_gamma(rho)) * (-L1)
        out.append(ZeroRecord(t=rec.t, refinement_error=rec.refinement_error,
                              winding=rec.winding, lprime=L1,
                              detector_residue=res))
    f._cache[key] = out
    return out


def records_to_json(records: list[ZeroRecord]) -> list[dict]:
    """External JSON schema: one object per zero."""
    return [
        {
            "t": rec.t,
            "refinement_error": rec.refinement_error,
            "winding": rec.winding,
            "lprime": [rec.lprime.real, rec.lprime.imag],
            "delta_residue": [rec.detector_residue.real, rec.detector_residue.imag],
        }
        for rec in records
    ]
