import cmath
import math
import warnings

import numpy as np
import pytest

from lfunlab.characters import character_table
from lfunlab.errors import ContourError
from lfunlab.evaluate import completed_detector, completed_l
from lfunlab.newforms import twist_newform
from lfunlab.quadrature import phase_unwrap_winding
from lfunlab.zeros import (ZeroRecord, certify_simple, count_zeros,
                           records_to_json, residues_up_to, scan_zeros)

KNOWN_ORDINATES = [9.22238, 13.90755, 17.44278, 19.65651]


def fine_grid_oracle(f, t_min, t_max, step=1e-3):
    """Independent oracle: raw sign changes of the real function
    Lambda(k/2 + it) on a fine grid (no bisection, no certification)."""
    ts = np.arange(t_min, t_max + step, step)
    vals = [completed_l(f, complex(f.weight / 2.0, t)).real for t in ts]
    out = []
    for i in range(len(ts) - 1):
        if (vals[i] < 0) != (vals[i + 1] < 0):
            out.append(0.5 * (ts[i] + ts[i + 1]))
    return out


def test_scan_matches_fine_grid_oracle(delta):
    recs = scan_zeros(delta, 0.0, 20.0)
    oracle = fine_grid_oracle(delta, 0.0, 20.0)
    assert len(recs) == len(oracle) == 4
    for rec, t_orc in zip(recs, oracle):
        assert abs(rec.t - t_orc) < 2e-3
    for rec, known in zip(recs, KNOWN_ORDINATES):
        assert abs(rec.t - known) < 1e-5
        assert rec.winding == 1
        assert rec.refinement_error < 1e-9


def test_scan_empty_window(delta):
    assert scan_zeros(delta, 0.0, 5.0) == []
    assert fine_grid_oracle(delta, 0.0, 5.0) == []
    assert scan_zeros(delta, 7.0, 3.0) == []


def test_scan_negative_ordinates(delta):
    recs = scan_zeros(delta, -12.0, -5.0)
    assert [round(-r.t, 5) for r in recs] == [9.22238]


def test_coarse_step_warns_and_recovers(delta):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        recs = scan_zeros(delta, 8.0, 15.0, step=3.0)
    assert any("rescanning" in str(w.message) for w in caught)
    assert [round(r.t, 5) for r in recs] == [9.22238, 13.90755]


def test_zero_magnitude_below_local_scale(delta):
    for rec in scan_zeros(delta, 0.0, 20.0):
        rho = rec.rho(12)
        mag = abs(completed_l(delta, rho))
        scale = abs(completed_l(delta, rho + 0.4))
        assert mag < 1e-8 * scale


def certify_oracle(f, rho, radius, nodes=4096):
    thetas = 2.0 * math.pi * np.arange(nodes + 1) / nodes
    vals = np.array([completed_l(f, rho + radius * cmath.exp(1j * th))
                     for th in thetas])
    w, _ = phase_unwrap_winding(vals)
    return int(round(w))


def test_certify_against_4096_node_oracle(delta):
    rho1 = complex(6.0, scan_zeros(delta, 9.0, 9.5)[0].t)
    assert certify_simple(delta, rho1, 0.5) == 1
    assert certify_oracle(delta, rho1, 0.5) == 1
    assert certify_simple(delta, 6.0 + 5.0j, 0.5) == 0
    assert certify_oracle(delta, 6.0 + 5.0j, 0.5) == 0


def test_certify_radius_invariance(delta):
    rho1 = complex(6.0, scan_zeros(delta, 9.0, 9.5)[0].t)
    assert certify_simple(delta, rho1, 0.3) == certify_simple(delta, rho1, 0.5)


def test_certify_zero_on_contour(delta):
    t1 = scan_zeros(delta, 9.0, 9.5)[0].t
    t2 = scan_zeros(delta, 13.5, 14.2)[0].t
    center = complex(6.0, 0.5 * (t1 + t2))
    with pytest.raises(ContourError):
        certify_simple(delta, center, 0.5 * (t2 - t1))


def test_trivial_zero_of_l_at_origin(delta):
    # L has a trivial zero at s=0 (from 1/Gamma); Lambda does not vanish.
    from lfunlab.evaluate import l_value
    thetas = 2.0 * math.pi * np.arange(257) / 256
    vals = np.array([l_value(delta, 0.3 * cmath.exp(1j * th)) for th in thetas])
    w, _ = phase_unwrap_winding(vals)
    assert int(round(w)) == 1
    assert abs(completed_l(delta, 0.0)) > 1e-6


def test_count_zeros(delta):
    assert count_zeros(delta, 0.0).count == 0
    assert count_zeros(delta, 5.0).count == 0
    box = count_zeros(delta, 20.0)
    assert box.count == 4 and not box.grh_violation
    assert count_zeros(delta, 18.0).count == 3


def test_count_monotone(delta):
    counts = [count_zeros(delta, T).count for T in (5.0, 12.0, 18.0, 20.0)]
    assert counts == sorted(counts)


def test_count_matches_scan_up_to_30(delta):
    box = count_zeros(delta, 30.0)
    assert box.count == len(scan_zeros(delta, 1e-9, 30.0))
    assert not box.grh_violation


def test_residues(delta):
    recs = residues_up_to(delta, 20.0)
    assert len(recs) == 4
    assert residues_up_to(delta, 5.0) == []
    for rec in recs:
        rho = rec.rho(12)
        expected = completed_detector  # residue = (2pi)^-rho Gamma(rho) (-L')
        from lfunlab.special import log_gamma
        val = cmath.exp(-rho * math.log(2 * math.pi) + log_gamma(rho)) * (-rec.lprime)
        assert abs(val - rec.detector_residue) < 1e-12 * abs(val)


def test_residue_contour_quadrature_oracle(delta):
    # integrate the completed detector against (-iz)^{-s} around rho_1
    rec = residues_up_to(delta, 10.0)[0]
    rho = rec.rho(12)
    z = 0.3 + 0.2j
    nodes = 128
    radius = 0.5
    thetas = 2.0 * math.pi * np.arange(nodes) / nodes
    total = 0.0 + 0.0j
    for th in thetas:
        s = rho + radius * cmath.exp(1j * th)
        total += completed_detector(delta, s) \
            * cmath.exp(-s * cmath.log(-1j * z)) * radius * cmath.exp(1j * th)
    total /= nodes   # (1/2pi i) contour integral by the trapezoid rule
    expected = rec.detector_residue * cmath.exp(-rho * cmath.log(-1j * z))
    assert abs(total - expected) < 1e-6 * max(1.0, abs(expected))


def test_residue_conjugate_symmetry(delta):
    from lfunlab.identity import _mirrored_residues
    pairs = _mirrored_residues(delta, 15.0, None)
    ups = {round(rho.imag, 6): res for rho, res in pairs if rho.imag > 0}
    downs = {round(-rho.imag, 6): res for rho, res in pairs if rho.imag < 0}
    assert set(ups) == set(downs)
    for t, res in ups.items():
        assert abs(downs[t] - res.conjugate()) < 1e-12 * abs(res)


def test_records_to_json_schema(delta):
    recs = residues_up_to(delta, 10.0)
    out = records_to_json(recs)
    assert set(out[0]) == {"t", "refinement_error", "winding", "lprime",
                           "delta_residue"}
    assert isinstance(out[0]["lprime"], list) and len(out[0]["lprime"]) == 2


def test_nonselfdual_scan_consistency(delta):
    # order-4 character twist: complex coefficients, minima+winding path
    chars = character_table(5)
    chi = next(ch for ch in chars[1:] if not np.allclose(ch.values.imag, 0.0))
    ft = twist_newform(delta, chi)
    recs = scan_zeros(ft, 0.0, 6.0, step=0.05)
    box = count_zeros(ft, 6.0)
    assert box.count == len(recs)
    assert not box.grh_violation
    for rec in recs:
        assert rec.winding == 1
