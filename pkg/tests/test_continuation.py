import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import cached, preset_built, preset_germ, real_germ
from hermite_pade._precision import hp_default_bits
from hermite_pade.continuation import (ClusterArc, PathSpec, continue_via_hp, convergence_radius, crossings,
                                       extract_cluster, oracle_continue, oracle_sheet_values_real, scheme_clusters,
                                       track_sheets)
from hermite_pade.errors import (BoundaryError, InsufficientClusterError, InvalidInputError, InvalidPathError,
                                 SheetUnreachableError)
from hermite_pade.hp_core import pade_pair
from hermite_pade.potential import nuttall_u, solve_equilibrium
from hermite_pade.presets import get_preset
from hermite_pade.series import SZParams, default_order, germ_at_zero
from oracles import real_sheets, zeta_germ_value

EX1, EX2, EX3 = (get_preset(k).params for k in ("example1", "example2", "example3"))
TO6 = PathSpec.segment(0, 6, 0.05)


def circle(center, radius, start_angle, count=48):
    """Closed counter-clockwise polygon around ``center`` starting at ``start_angle``."""
    return [center + radius * cmath.exp(1j * (start_angle + 2 * math.pi * k / count)) for k in range(count + 1)]


# ---------------------------------------------------------------------------
# paths and the oracle


def test_path_validation():
    with pytest.raises(InvalidPathError):
        PathSpec((0, 1, 1))
    with pytest.raises(InvalidPathError):
        PathSpec((0, 1), max_step=0)
    assert PathSpec((0, 3, 3 + 4j)).length == 7
    assert PathSpec.segment(0, 2).reversed().waypoints == (2, 0)


def test_trivial_path_returns_germ_value():
    val = oracle_continue(EX1, PathSpec((0,)))
    ref = complex(zeta_germ_value(EX1.A_list, EX1.alpha_list, EX1.a, EX1.b, 0))
    assert abs(val - ref) < 1e-14


def test_oracle_agrees_with_closed_form_near_origin():
    z = 0.2 + 0.1j
    ref = complex(zeta_germ_value(EX2.A_list, EX2.alpha_list, EX2.a, EX2.b, z))
    assert abs(oracle_continue(EX2, PathSpec.segment(0, z, 0.01)) - ref) < 1e-10


def test_oracle_path_must_start_at_origin():
    with pytest.raises(InvalidPathError):
        oracle_continue(EX1, PathSpec.segment(1, 2))


def test_oracle_clearance():
    bp = EX1.zeta_branch_points()[0]
    with pytest.raises(InvalidPathError):
        oracle_continue(EX1, PathSpec.segment(0, 2 * bp, 0.05))


def test_oracle_needs_variable_change():
    with pytest.raises(InvalidInputError):
        oracle_continue(SZParams.real_case(2, 3), TO6)


def test_path_invariance():
    """Two paths to 6 with no branch point between them."""
    direct = oracle_continue(EX1, TO6)
    bent = oracle_continue(EX1, PathSpec((0, 3 - 1j, 6), 0.05))
    assert abs(direct - bent) < 1e-9


def test_loop_around_both_inner_points_is_trivial():
    """A loop around the images of ``z = +-1`` (and no other branch point) returns the value."""
    loop = [0, 0.2, 0.2 - 0.8j, 0.8 - 0.8j, 0.8 + 0.8j, 0.2 + 0.8j, 0.2]
    assert abs(oracle_continue(EX3, PathSpec(tuple(loop), 0.02)) - oracle_continue(EX3, PathSpec.segment(0, 0.2, 0.02))) < 1e-9


def test_loop_around_one_inner_point_changes_the_value():
    c1 = EX3.zeta_branch_points()[1]
    start = c1 - 0.3
    loop = [0, start] + circle(c1, 0.3, math.pi)[1:]
    plain = oracle_continue(EX3, PathSpec.segment(0, start, 0.02))
    looped = oracle_continue(EX3, PathSpec(tuple(loop), 0.02))
    assert abs(looped - plain) > 1e-3


def _keyhole(with_outer_loop: bool, with_inner_loop: bool = True):
    """Path that optionally circles the image ``c1`` of ``z = -1`` and then the image ``c2`` of ``a_1``."""
    pts = EX1.zeta_branch_points()
    c1, c2 = pts[1], pts[2]
    P = c1 + 0.1 * (-c1) / abs(c1)
    Q = c2 + 0.05 * (P - c2) / abs(P - c2)
    way = [0, P]
    if with_inner_loop:
        way += circle(c1, 0.1, cmath.phase(P - c1))[1:]
    way.append(Q)
    if with_outer_loop:
        way += circle(c2, 0.05, cmath.phase(Q - c2))[1:]
    way.append(P)
    return PathSpec(tuple(way), 0.01)


def test_outer_point_is_regular_on_the_first_sheet():
    a = oracle_continue(EX1, _keyhole(True, with_inner_loop=False))
    b = oracle_continue(EX1, _keyhole(False, with_inner_loop=False))
    assert abs(a - b) < 1e-9


def test_loop_around_outer_point_on_second_sheet_negates():
    a = oracle_continue(EX1, _keyhole(True))
    b = oracle_continue(EX1, _keyhole(False))
    assert abs(a + b) < 1e-9 and abs(a) > 1e-3


# ---------------------------------------------------------------------------
# convergence radius


@pytest.mark.parametrize("name", ["example1", "example3"])
def test_convergence_radius_against_root_test(name):
    p = get_preset(name).params
    g = germ_at_zero(p, 400, 900)
    c = np.array([abs(complex(x)) for x in g.coeffs])
    k = np.arange(len(c))
    # |c_k| ~ k^(-3/2) R^(-k) up to an oscillating factor from the conjugate singularities
    window = slice(300, 401)
    est = 1 / np.max((c[window] * k[window] ** 1.5) ** (1.0 / k[window]))
    assert abs(est - convergence_radius(p)) < 0.01 * convergence_radius(p)


def test_example1_radius_set_by_inner_points():
    """The images of ``a_j`` lie closer to the origin but are regular on the first sheet."""
    pts = EX1.zeta_branch_points()
    assert abs(pts[2]) < abs(pts[0])
    assert abs(convergence_radius(EX1) - abs(pts[0])) < 1e-12


# ---------------------------------------------------------------------------
# real-case sheets


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=8, allow_nan=False, allow_infinity=False))
def test_real_sheets_sum_to_zero_and_match_closed_form(z):
    if abs(z.imag) < 1e-3:
        return
    p = SZParams.real_case(2, 3)
    vals = oracle_sheet_values_real(p, z)
    ref = [complex(v) for v in real_sheets(2, 3, z)]
    assert abs(sum(vals)) < 1e-12
    assert max(abs(v - r) for v, r in zip(vals, ref)) < 1e-12


def test_real_sheet_one_at_infinity():
    assert abs(oracle_sheet_values_real(SZParams.real_case(2, 3), 1e8)[0] - 1 / math.sqrt(6)) < 1e-7


def test_real_sheets_on_cuts():
    p = SZParams.real_case(2, 3)
    for z in (0.3, 1.4):
        with pytest.raises(BoundaryError):
            oracle_sheet_values_real(p, z)
    with pytest.raises(InvalidInputError):
        oracle_sheet_values_real(EX1, 2j)


def test_real_sheet_labels_follow_nuttall_ordering():
    """Sheet values as labelled by the gluing (1-2 across (-1, 1), 2-3 across (a, b)) and ``u`` increasing."""
    p = SZParams.real_case(2, 3)
    sol = solve_equilibrium(1.25, 5 / 3, N=128)
    eps = 1e-7
    for x in (-0.5, 0.5):
        up, down = oracle_sheet_values_real(p, x + eps * 1j), oracle_sheet_values_real(p, x - eps * 1j)
        assert abs(up[0] - down[1]) < 1e-3 and abs(up[2] - down[3]) < 1e-3
    up, down = oracle_sheet_values_real(p, 1.4 + eps * 1j), oracle_sheet_values_real(p, 1.4 - eps * 1j)
    assert abs(up[1] - down[2]) < 1e-3
    for z in (2j, 3 + 1j, -2 - 0.5j):
        u = [float(nuttall_u(sol, k, z)) for k in (1, 2, 3, 4)]
        assert u == sorted(u)


# ---------------------------------------------------------------------------
# clusters and crossings


def test_extract_cluster_drops_far_outliers():
    rng = np.random.default_rng(1)
    arc = np.exp(1j * np.linspace(0.2, 2.8, 40)) + 1e-3 * rng.standard_normal(40)
    points = list(arc) + [3 + 3j, -4 - 2j]
    cl = extract_cluster(points, "E")
    assert len(cl.dropped) == 2 and len(cl.polyline) == 40
    assert all(abs(abs(p) - 1) < 0.01 for p in cl.polyline)
    assert abs(cl.polyline[0].real - min(arc.real)) < 1e-12
    # chained in order along the arc
    phases = np.unwrap(np.angle(cl.polyline))
    assert np.all(np.diff(phases) < 0) or np.all(np.diff(phases) > 0)


def test_extract_cluster_errors():
    with pytest.raises(InsufficientClusterError):
        extract_cluster([0, 1, 2], "E")
    with pytest.raises(InvalidInputError):
        extract_cluster(list(range(20)), "G")


def test_disjoint_paths_do_not_cross():
    cl = extract_cluster(list(np.exp(1j * np.linspace(0.2, 2.8, 30))), "E")
    assert crossings(PathSpec.segment(0, 0.5j), cl) == []
    assert len(crossings(PathSpec.segment(0, 2j), cl)) == 1


def test_pade_poles_model_the_interval():
    Q = pade_pair(real_germ(50, hp=False), 50)[1]
    cl = extract_cluster(Q.roots(), "StahlS")
    poly = np.array(cl.polyline)
    assert np.max(np.abs(poly.imag)) < 0.1 and np.all(np.abs(poly.real) < 1)
    grid = np.linspace(-1, 1, 201)
    assert np.max(np.min(np.abs(grid[:, None] - poly[None, :]), axis=1)) < 0.1


def test_example1_stahl_set_avoids_the_path():
    _, (_, arcs) = preset_built("example1", 50, "Pade")
    assert crossings(TO6, arcs["StahlS"]) == []
    assert max(p.real for p in arcs["StahlS"].polyline) < 0


def test_example2_single_E2_crossing():
    _, (_, arcs) = preset_built("example2", 50, "TwoSheet")
    hits = crossings(TO6, arcs["E2"])
    assert len(hits) == 1 and 0 < hits[0].point.real < 6
    # F2 meets the real line to the left of E2 (here at negative x), so [0, 6] does not cross it
    assert crossings(TO6, arcs["F2"]) == []


def test_example3_F_right_of_E():
    _, (_, arcs) = preset_built("example3", 50, "ThreeSheet")
    (e,), (f,) = crossings(TO6, arcs["E"]), crossings(TO6, arcs["F"])
    assert 0 < e.point.real < f.point.real < 6


def test_example3_S1_cloud_right_of_Q2n_cloud():
    _, (_, three) = preset_built("example3", 50, "ThreeSheet")
    _, (_, two) = preset_built("example3", 50, "TwoSheet")
    (f,), (e2,) = crossings(TO6, three["F"]), crossings(TO6, two["E2"])
    assert e2.point.real < f.point.real


def test_crossing_parity_on_round_trip():
    _, (_, arcs) = preset_built("example3", 50, "ThreeSheet")
    there = track_sheets(TO6, arcs, "ThreeSheet")
    back = track_sheets(PathSpec((0, 6, 0), 0.05), arcs, "ThreeSheet")
    assert there[0] == 3 and back[0] == 1
    fams = [c.family for c in back[1]]
    assert fams == fams[::-1] and fams[:2] == [c.family for c in there[1]]


# ---------------------------------------------------------------------------
# continuation through approximants


def test_example1_pade_continuation():
    germ, built = preset_built("example1", 50, "Pade")
    res = continue_via_hp(germ, EX1, TO6, 50, "Pade", prebuilt=built)
    assert res.sheet == 1 and res.sheet_log == ()
    assert abs(res.value - oracle_continue(EX1, TO6)) < 1e-6


def test_example2_two_sheet_continuation():
    germ, built = preset_built("example2", 50, "TwoSheet")
    res = continue_via_hp(germ, EX2, TO6, 50, "TwoSheet", prebuilt=built)
    assert [c.family for c in res.sheet_log] == ["E2"] and res.sheet == 2
    assert abs(res.value - oracle_continue(EX2, TO6)) < 1e-4


def test_example2_sheet_change_is_detectable():
    """``f1`` stops matching the oracle exactly once along ``[0, 6]``, where the path crosses E2."""
    germ, (system, arcs) = preset_built("example2", 50, "TwoSheet")
    from hermite_pade.approximants import recover_two_sheets
    xs = np.linspace(0.1, 6, 60)
    match = []
    for x in xs:
        f1 = recover_two_sheets(system, x)[0]
        match.append(abs(f1 - oracle_continue(EX2, PathSpec.segment(0, x, 0.05))) < 1e-3)
    changes = sum(m1 != m2 for m1, m2 in zip(match, match[1:]))
    x1 = crossings(TO6, arcs["E2"])[0].point.real
    assert changes == len(crossings(TO6, arcs["E2"])) == 1
    first_bad = xs[match.index(False)]
    assert abs(first_bad - x1) < 0.2


def test_example3_two_sheet_is_blocked():
    germ, built = preset_built("example3", 50, "TwoSheet")
    with pytest.raises(SheetUnreachableError) as info:
        continue_via_hp(germ, EX3, TO6, 50, "TwoSheet", prebuilt=built)
    assert info.value.family == "F2" and info.value.sheet == 3


def test_example3_three_sheet_continuation():
    germ, built = preset_built("example3", 50, "ThreeSheet")
    res = continue_via_hp(germ, EX3, TO6, 50, "ThreeSheet", prebuilt=built)
    assert [c.family for c in res.sheet_log] == ["E", "F"] and res.sheet == 3
    assert abs(res.value - oracle_continue(EX3, TO6)) < 1e-3


def test_schemes_agree_where_pade_converges():
    z = 0.3 + 0.1j
    path = PathSpec.segment(0, z, 0.01)
    ref = oracle_continue(EX3, path)
    for scheme in ("Pade", "TwoSheet"):
        germ, built = preset_built("example3", 50, scheme)
        assert abs(continue_via_hp(germ, EX3, path, 50, scheme, prebuilt=built).value - ref) < 1e-8


def test_F2_invisible_from_the_first_sheet():
    """With ``A2 > 0`` the path meets F2 before E2; that crossing is ignored on sheet 1."""
    p = SZParams.symmetric(2.0, 1.2, 1.0, 1.0)
    germ = cached(("A2pos", 30), lambda: germ_at_zero(p, default_order(30), hp_default_bits(30)))
    res = continue_via_hp(germ, p, TO6, 30, "TwoSheet")
    assert [c.family for c in res.ignored] == ["F2"] and [c.family for c in res.sheet_log] == ["E2"]
    assert res.ignored[0].point.real < res.sheet_log[0].point.real
    assert abs(res.value - oracle_continue(p, TO6)) < 1e-6


def test_continuation_input_checks():
    germ = preset_germ("example1", 10, hp=False)
    with pytest.raises(InvalidInputError):
        continue_via_hp(germ, EX1, TO6, 10, "FourSheet")
    with pytest.raises(InvalidInputError):
        continue_via_hp(real_germ(10), EX1, TO6, 10)
    with pytest.raises(InvalidPathError):
        continue_via_hp(germ, EX1, PathSpec.segment(1, 6), 10)
    with pytest.raises(InvalidInputError):
        scheme_clusters(germ, 10, "FourSheet")


def test_result_json():
    germ, built = preset_built("example1", 50, "Pade")
    res = continue_via_hp(germ, EX1, TO6, 50, "Pade", prebuilt=built)
    doc = json.loads(res.to_json())
    assert doc["method"] == "Pade" and doc["n"] == 50 and doc["sheet_log"] == []
    assert complex(float(doc["value"][0]), float(doc["value"][1])) == res.value
    assert isinstance(ClusterArc, type)
