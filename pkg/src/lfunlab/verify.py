"""Named verification checks and machine-readable reports.

Each check returns a dict {name, value, threshold, passed, ...extras};
suites bundle them.  Reports are fully deterministic for a fixed config
(fixed grids, fixed summation orders, no timestamps), which is itself one
of the advertised checks.
"""

import cmath
import math
from fractions import Fraction

import numpy as np

from .characters import character_table, gauss_sum
from .dirichlet import (additive_char_decomposition_error, chu_vandermonde_check,
                        detector_coefficients, dirichlet_primes,
                        twist_coefficient_decomposition_error, vandermonde_solve)
from .evaluate import (EvalSettings, DEFAULT_SETTINGS, completed_l, d2_funceq_residual,
                       detector_value, l_with_derivatives)
from .errors import LfunlabError
from .identity import (TruncationSpec, completion_identity_residual,
                       dual_expansion_residual, dual_kernel_taylor_check,
                       ibp_expansion_residual, omitted_residue_scale,
                       remainder_decay_check)
from .kernels import kernel_jets
from .local import abundance_report, local_factor, local_zeros, rankin_average
from .newforms import Newform, twist_newform
from .twists import additive_twist, detector_additive_value
from .zeros import count_zeros, scan_zeros

SCHEMA_VERSION = 1

# one versioned defaults table, printed into every report
DEFAULT_THRESHOLDS = {
    "char_decomposition": 1e-12,
    "chu_vandermonde": "exact",
    "vandermonde": "exact",
    "gauss_modulus": 1e-12,
    "funceq_self": 1e-10,
    "funceq_twist": 1e-8,
    "dseries_overlap": 1e-7,
    "laurent_residue": 1e-5,
    "d2_funceq": 1e-7,
    "zero_refinement": 1e-9,
    "pole_window_factor": 2.0,
    "pole_location": 1e-6,
    "mainid_omitted_factor": 10.0,
    "mainid_gap_constancy": 1e-10,
    "ibp_residual": 1e-8,
    "fbar_slope_deficit": 0.0,
    "rankin_window": (0.85, 1.15),
    "abundance": 1.0,
    "g_large": 1e-8,
}


def _check(name, value, threshold, passed, **extra):
    out = {"name": name, "value": value, "threshold": threshold,
           "passed": bool(passed)}
    out.update(extra)
    return out


def funceq_grid(re_lo=2.0, re_hi=10.0, im_hi=30.0, n_re=5, n_im=10):
    """Deterministic 50-point lattice in the stated rectangle."""
    res = np.linspace(re_lo, re_hi, n_re)
    ims = np.linspace(-im_hi, im_hi, n_im)
    return [complex(r, t) for r in res for t in ims]


def funceq_max_residual(f: Newform, grid=None,
                        settings: EvalSettings | None = None) -> float:
    settings = settings or DEFAULT_SETTINGS
    grid = grid or funceq_grid()
    k = f.weight
    worst = 0.0
    for s in grid:
        lhs = completed_l(f, s, settings)
        rhs = f.root_number * f.level ** (k / 2.0 - s) \
            * completed_l(f, k - s, settings)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return worst


# ----------------------------------------------------------------------
# suites
# ----------------------------------------------------------------------

def suite_algebra(f: Newform, q_max: int = 101) -> list[dict]:
    checks = []
    worst = 0.0
    for q in range(2, q_max + 1):
        if all(q % d for d in range(2, int(q ** 0.5) + 1)):
            worst = max(worst, additive_char_decomposition_error(q))
    checks.append(_check("char_decomposition_exact(q<=%d)" % q_max, worst,
                         DEFAULT_THRESHOLDS["char_decomposition"],
                         worst < DEFAULT_THRESHOLDS["char_decomposition"]))
    ok = all(chu_vandermonde_check(m, k) for m in range(0, 11) for k in range(1, 21))
    checks.append(_check("chu_vandermonde(m<=10,k<=20)", int(ok), "exact", ok))
    ok = True
    for M in range(1, 9):
        primes = dirichlet_primes(2, 1, M)
        for m0 in range(M):
            vandermonde_solve(primes, m0)   # raises if residual nonzero
    checks.append(_check("vandermonde_exact(M<=8)", 1, "exact", ok))
    worst = 0.0
    for q in (3, 5, 7, 11, 13):
        for chi in character_table(q)[1:]:
            worst = max(worst, abs(abs(gauss_sum(chi)) - math.sqrt(q)))
    checks.append(_check("gauss_sum_modulus", worst,
                         DEFAULT_THRESHOLDS["gauss_modulus"],
                         worst < DEFAULT_THRESHOLDS["gauss_modulus"]))
    if f is not None:
        err = twist_coefficient_decomposition_error(f, 5, min(f.n_max, 1000))
        checks.append(_check("twist_coeff_decomposition(q=5)", err, 1e-9, err < 1e-9))
    return checks


def suite_funceq(f: Newform, twist_q: int = 5) -> list[dict]:
    checks = []
    r = funceq_max_residual(f)
    checks.append(_check("funceq_grid(%s)" % f.label, r,
                         DEFAULT_THRESHOLDS["funceq_self"],
                         r < DEFAULT_THRESHOLDS["funceq_self"]))
    if f.level % twist_q != 0:
        chars = character_table(twist_q)
        quad = next(ch for ch in chars[1:]
                    if np.allclose(ch.values.imag, 0.0))
        ft = twist_newform(f, quad)
        r = funceq_max_residual(ft)
        checks.append(_check("funceq_grid(%s)" % ft.label, r,
                             DEFAULT_THRESHOLDS["funceq_twist"],
                             r < DEFAULT_THRESHOLDS["funceq_twist"]))
        # the overlap check genuinely validates the computed root number
        from .evaluate import l_value
        ser = complex(np.dot(ft.coeffs[1:2001],
                             np.arange(1, 2001, dtype=float) ** -9.0))
        ovl = abs(l_value(ft, 9.0) - ser)
        checks.append(_check("twist_series_overlap(s=9)", ovl, 1e-8, ovl < 1e-8))
    return checks


def suite_dseries(f: Newform, n_series: int | None = None) -> list[dict]:
    checks = []
    n = n_series or min(f.n_max, 65536)
    c = detector_coefficients(f, n).values
    for s in (8.0 + 0.0j, 8.0 + 5.0j):
        dv = detector_value(f, s)
        idx = np.arange(1, n + 1, dtype=float)
        ser = complex(np.dot(c[1:], np.exp(-s * np.log(idx))))
        err = abs(dv - ser)
        checks.append(_check(f"dseries_overlap(s={s})", err,
                             DEFAULT_THRESHOLDS["dseries_overlap"],
                             err < DEFAULT_THRESHOLDS["dseries_overlap"]))
    recs = scan_zeros(f, 0.0, 10.0)
    if recs:
        rho = recs[0].rho(f.weight)
        _, L1, _, _ = l_with_derivatives(f, rho)
        worst = 0.0
        for phase in (1.0, 1j, -1.0, -1j):
            s = rho + 1e-6 * phase
            val = (s - rho) * detector_value(f, s)
            worst = max(worst, abs(val + L1))
        checks.append(_check("laurent_residue(first zero)", worst,
                             DEFAULT_THRESHOLDS["laurent_residue"],
                             worst < DEFAULT_THRESHOLDS["laurent_residue"]))
    rng = np.random.RandomState(20260811)
    worst = 0.0
    tried = 0
    zero_ts = [r.t for r in scan_zeros(f, 0.0, 32.0)]
    while tried < 20:
        s = complex(rng.uniform(2.0, 10.0), rng.uniform(-20.0, 20.0))
        if any(abs(s - complex(f.weight / 2.0, tt)) < 0.35
               or abs(s - complex(f.weight / 2.0, -tt)) < 0.35 for tt in zero_ts):
            continue
        tried += 1
        worst = max(worst, d2_funceq_residual(f, s))
    checks.append(_check("d2_funceq(20 points)", worst,
                         DEFAULT_THRESHOLDS["d2_funceq"],
                         worst < DEFAULT_THRESHOLDS["d2_funceq"]))
    return checks


def suite_zeros(f: Newform, t_max: float = 20.0) -> list[dict]:
    checks = []
    recs = scan_zeros(f, 0.0, t_max)
    all_simple = all(r.winding == 1 for r in recs)
    max_err = max((r.refinement_error for r in recs), default=0.0)
    checks.append(_check("zeros_refinement", max_err,
                         DEFAULT_THRESHOLDS["zero_refinement"],
                         max_err < DEFAULT_THRESHOLDS["zero_refinement"],
                         ordinates=[r.t for r in recs]))
    checks.append(_check("zeros_all_winding_1", int(all_simple), 1, all_simple))
    box = count_zeros(f, t_max)
    checks.append(_check("count_matches_scan", box.count, len(recs),
                         box.count == len(recs) and not box.grh_violation))
    return checks


def suite_local(f: Newform, qs=(2, 3, 5), X: int = 10000,
                inherit: bool = False) -> list[dict]:
    checks = []
    rv = rankin_average(f, min(X, f.n_max))
    lo, hi = DEFAULT_THRESHOLDS["rankin_window"]
    checks.append(_check("rankin_average(X=%d)" % min(X, f.n_max), rv,
                         [lo, hi], lo < rv < hi))
    ab = abundance_report(f, min(X, f.n_max))
    checks.append(_check("abundance(X=%d)" % min(X, f.n_max), ab, 1.0, ab == 1.0))
    for q in qs:
        lf = local_factor(f, q)
        zs = local_zeros(lf, 0.0, 10.0)
        worst = max(abs(1.0 - lf.a_q * q ** -z["s"]
                        + lf.xi_q * q ** (f.weight - 1 - 2 * z["s"]))
                    for z in zs)
        checks.append(_check(f"local_zero_residual(q={q})", worst, 1e-12,
                             worst < 1e-12,
                             theta=lf.theta, is_square=lf.is_square,
                             first_ordinate=zs[0]["ordinate"] if zs else None))
    if inherit:
        checks.extend(suite_inherit(f, qs))
    return checks


def suite_inherit(f: Newform, qs=(2, 3, 5)) -> list[dict]:
    """Pole inheritance of the assembled additive twist at the first local
    zero: C/|s - s0| growth within a factor-2 window over 3 decades."""
    checks = []
    for q in qs:
        lf = local_factor(f, q)
        s0 = complex((f.weight - 1) / 2.0, lf.theta / math.log(q))
        # independent location: Newton on the local factor from a nearby start
        from .local import euler_factor_value
        s_newton = s0 + 0.05 + 0.03j
        for _ in range(60):
            v = euler_factor_value(lf, s_newton, 0)
            d = euler_factor_value(lf, s_newton, 1)
            step = v / d
            s_newton -= step
            if abs(step) < 1e-14:
                break
        loc_err = abs(s_newton - s0)
        checks.append(_check(f"pole_location(q={q})", loc_err,
                             DEFAULT_THRESHOLDS["pole_location"],
                             loc_err < DEFAULT_THRESHOLDS["pole_location"]))
        scaled = []
        for dist in (1e-2, 1e-3, 1e-4):
            val = detector_additive_value(f, q, s0 + dist)
            scaled.append(abs(val) * dist)
        window = max(scaled) / min(scaled)
        checks.append(_check(f"pole_window(q={q})", window,
                             DEFAULT_THRESHOLDS["pole_window_factor"],
                             window < DEFAULT_THRESHOLDS["pole_window_factor"],
                             scaled_magnitudes=scaled))
    return checks


def suite_identity(f: Newform, alpha=Fraction(1, 3), z=0.3 + 0.2j,
                   T_pair=(15.0, 25.0)) -> list[dict]:
    checks = []
    t_lo, t_hi = T_pair
    r_lo = completion_identity_residual(f, z, t_lo)
    r_hi = completion_identity_residual(f, z, t_hi)
    checks.append(_check("mainid_decreasing", r_hi, r_lo, r_hi < r_lo,
                         residual_T_low=r_lo, residual_T_high=r_hi))
    for T, r in ((t_lo, r_lo), (t_hi, r_hi)):
        scale = omitted_residue_scale(f, z, T)
        ratio = r / scale
        checks.append(_check(f"mainid_omitted_factor(T={T})", ratio,
                             DEFAULT_THRESHOLDS["mainid_omitted_factor"],
                             0.1 < ratio < 10.0))
    gap = abs(completion_identity_residual(f, z, 18.0)
              - completion_identity_residual(f, z, 19.0))
    checks.append(_check("mainid_gap_constancy", gap,
                         DEFAULT_THRESHOLDS["mainid_gap_constancy"],
                         gap < DEFAULT_THRESHOLDS["mainid_gap_constancy"]))
    return checks


def suite_lemmas(f: Newform, alpha=Fraction(1, 3)) -> list[dict]:
    checks = []
    worst = 0.0
    for m in range(0, 5):
        for n in (1, 2, 5, 10):
            worst = max(worst, ibp_expansion_residual(f, alpha, 9.0, m, n))
    checks.append(_check("ibp_residual(m<=4,n<=10)", worst,
                         DEFAULT_THRESHOLDS["ibp_residual"],
                         worst < DEFAULT_THRESHOLDS["ibp_residual"]))
    ok = dual_kernel_taylor_check(f.weight, 4)
    checks.append(_check("dual_kernel_taylor(m<=4)", int(ok), "exact", ok))
    jets = kernel_jets(f.weight, 1, 8)
    v0 = jets[0].value_at_one(Fraction(0))
    p1 = jets[1].coeffs[0]
    ok = (v0 == 2 and p1.coeffs == (Fraction(f.weight - 2), Fraction(-2)))
    checks.append(_check("kernel_tower_values", int(ok), "exact", ok))
    af = float(alpha)
    for M in (8, 9, 10):
        ys = [af / 8.0, af / 16.0, af / 32.0]
        rs = [dual_expansion_residual(f, alpha, y, M) for y in ys]
        slope = float(np.polyfit(np.log(ys), np.log(rs), 1)[0])
        need = M - math.floor((f.weight + 3) / 2)
        checks.append(_check(f"fbar_slope(M={M})", slope, need, slope >= need,
                             residuals=rs))
    return checks


def suite_gdecay(f: Newform, alpha=Fraction(1, 3), M: int = 8,
                 T: float = 25.0) -> list[dict]:
    """Diagnostics of the assembled remainder g.  For a genuine newform the
    zero-residue tail above T dominates g as y -> 0, so the check asserts
    (a) rapid large-y decay and (b) that |g| tracks the identity-residual
    tail, rather than the finite-zero y^{M-...} law."""
    dec = remainder_decay_check(f, alpha, M, T)
    checks = [
        _check("g_large_y", dec.g_large, DEFAULT_THRESHOLDS["g_large"],
               dec.g_large < DEFAULT_THRESHOLDS["g_large"]),
    ]
    ratios = [g / t for g, t in zip(dec.g_values, dec.tail_prediction)]
    ok = all(0.2 < r < 5.0 for r in ratios)
    checks.append(_check("g_tracks_zero_tail", ratios, [0.2, 5.0], ok,
                         slope=dec.slope, g_values=dec.g_values,
                         tail=dec.tail_prediction))
    return checks


SUITES = {
    "algebra": suite_algebra,
    "funceq": suite_funceq,
    "dseries": suite_dseries,
    "zeros": suite_zeros,
    "local": suite_local,
    "identity": suite_identity,
    "lemmas": suite_lemmas,
    "gdecay": suite_gdecay,
}


def run_suites(f: Newform, names: list[str], **kwargs) -> dict:
    """Run the named suites and assemble the deterministic report dict."""
    checks = []
    for name in names:
        if name not in SUITES:
            raise LfunlabError(
                f"unknown suite '{name}'; available: {', '.join(sorted(SUITES))}")
        checks.extend(SUITES[name](f, **kwargs.get(name, {})))
    report = {
        "schema": SCHEMA_VERSION,
        "form": f.label if f is not None else None,
        "suites": list(names),
        "thresholds": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in sorted(DEFAULT_THRESHOLDS.items())},
        "checks": checks,
        "all_pass": all(c["passed"] for c in checks),
    }
    return report
