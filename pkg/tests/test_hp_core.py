import json

import mpmath as mp
import numpy as np
import pytest
from flint import acb
from hypothesis import given, settings, strategies as st

from conftest import cached, real_germ
from hermite_pade._precision import hp_default_bits, workprec
from hermite_pade.errors import DegenerateDeterminantError, InvalidInputError
from hermite_pade.hp_core import (MultiIndex, germ_powers, hp_type1, hp_type2, pade_pair, pade_report,
                                  partial_sum_zeros, polys_to_json, roots_to_json, s_polys, type2_via_determinant)
from hermite_pade.potential import empirical_measure, measure_distance, robin_density
from hermite_pade.series import AT_INFINITY, AT_ZERO, PowerSeries, SZParams, germ_at_infinity, ps_scale
from oracles import cauchy_coefficients, real_sheets


def rational_germ(order=40, bits=256):
    """``1/(z - 2) = sum_k 2^(k-1) z^(-k)`` at infinity."""
    return PowerSeries(tuple([acb(0)] + [acb(2) ** (k - 1) for k in range(1, order + 1)]), AT_INFINITY, bits)


def real_roots(poly, imag_tol=1e-10):
    zs = np.array([complex(r) for r in poly.roots()])
    assert np.max(np.abs(zs.imag)) < imag_tol
    return np.sort(zs.real)


def rel_residual(p, q) -> float:
    """Relative coefficient distance between two polynomials after monic scaling."""
    p, q = p.monic(), q.monic()
    with workprec(max(p.bits, q.bits)):
        diff = max(abs(complex(a - b)) for a, b in zip(p.coeffs, q.coeffs))
    return diff / max(abs(complex(c)) for c in q.coeffs)


# ---------------------------------------------------------------------------
# Pade


def test_pade_reproduces_rational_germ():
    P, Q = pade_pair(rational_germ(), 1)
    assert [complex(c) for c in Q.coeffs] == [-2, 1]
    assert abs(complex(P.coeffs[0]) - 1) < 1e-60 and abs(complex(P.coeffs[1])) < 1e-60
    rep = pade_report(rational_germ(), 1)
    assert rep.residual_order >= rep.vanish_order


def test_pade_poles_real_case_n50():
    g = real_germ(50, hp=False)
    poles = real_roots(pade_pair(g, 50)[1])
    assert len(poles) == 50 and poles[0] > -1 and poles[-1] < 1
    assert measure_distance(empirical_measure(poles), robin_density()) < 0.15


def test_pade_needs_enough_coefficients():
    with pytest.raises(InvalidInputError):
        pade_pair(rational_germ(order=5), 5)


def test_pade_at_zero_vanishing_order():
    g = PowerSeries(tuple(acb(1) / (k + 1) for k in range(30)), AT_ZERO, 256)
    rep = pade_report(g, 6)
    assert rep.vanish_order == 13 and rep.residual_order >= 13


# ---------------------------------------------------------------------------
# type I


def test_type1_two_entries_is_pade():
    g = real_germ(12)
    rep = hp_type1(germ_powers(g, 1), MultiIndex((12, 12)))
    assert rel_residual(rep.polynomials[1], pade_pair(g, 12)[1]) < 2.0 ** (-rep.bits / 4)


def diagonal_type1(n):
    return cached(("diag1", n), lambda: hp_type1(germ_powers(real_germ(n), 3), MultiIndex.diagonal(n, 3)))


def test_type1_diagonal_degrees():
    n = 10
    rep = diagonal_type1(n)
    assert rep.residual_order >= rep.vanish_order == 4 * n + 3
    assert [q.degree for q in rep.polynomials] == [n] * 4


def test_type1_diagonal_roots_in_first_interval():
    """Every ``Q_{n,j}`` has all its roots simple in ``(-1, 1)``."""
    for q in diagonal_type1(10).polynomials:
        r = real_roots(q)
        assert r[0] > -1 and r[-1] < 1 and np.min(np.diff(r)) > 1e-8


def test_type1_top_polynomials_have_zeros_at_second_branch_points():
    """``Q_{n,2}`` and ``Q_{n,3}`` each have one zero converging to ``a`` and one to ``b``, fast in ``n``.

    Their remaining ``n - 2`` zeros are simple and lie in ``(-1, 1)``.
    """
    a, b = 1.25, 5 / 3
    gaps = []
    for n in (3, 4, 6):
        for q in diagonal_type1(n).polynomials[2:]:
            r = real_roots(q)
            gaps.append(max(np.min(np.abs(r - a)), np.min(np.abs(r - b))))
            inner = r[r < 1]
            assert len(inner) == n - 2 and inner[0] > -1
            assert len(inner) < 2 or np.min(np.diff(inner)) > 1e-8
    assert gaps[0] < 1e-4 and gaps[-1] < 1e-12 and gaps[-1] < gaps[0] * 1e-6


def test_type1_n4_against_independent_solve():
    """The normalized type I tuple for ``n = 4`` from an mpmath solve of the coefficient system."""
    n, A, B = 4, 2, 3
    rep = hp_type1(germ_powers(germ_at_infinity(SZParams.real_case(A, B), 4 * n + 6, 400), 3),
                   MultiIndex.diagonal(n, 3))
    with mp.workdps(50):
        cs = [cauchy_coefficients(lambda t: real_sheets(A, B, 1 / t, 50)[0] ** k, 4 * n + 6, 0.5, M=256, dps=50)
              for k in range(4)]
        rows = [[cs[j][m + i] if m + i >= 0 else 0 for j in range(4) for i in range(n + 1)]
                for m in range(-n, 3 * n + 3)]
        last = 4 * (n + 1) - 1
        M = mp.matrix([r[:last] for r in rows])
        q = list(mp.lu_solve(M, mp.matrix([-r[last] for r in rows]))) + [1]
    lead = rep.polynomials[3].leading
    for j, poly in enumerate(rep.polynomials):
        ref = q[j * (n + 1):(j + 1) * (n + 1)]
        with workprec(poly.bits):
            got = [complex(c / lead) for c in poly.coeffs]
        assert max(abs(g - complex(r)) for g, r in zip(got, ref)) < 1e-25


@pytest.mark.parametrize("full", [1, 2, 3])
def test_stepped_indices_are_normal(full):
    n = 10
    rep = hp_type1(germ_powers(real_germ(n), 3), MultiIndex.stepped(n, full))
    assert abs(complex(rep.leading_remainder)) > 2.0 ** (-rep.bits / 2)


def test_type1_rejects_mismatched_index():
    with pytest.raises(InvalidInputError):
        hp_type1(germ_powers(real_germ(5), 3), MultiIndex((5, 5)))


def test_multiindex_counting_bound():
    with pytest.raises(InvalidInputError):
        MultiIndex((2, 2), vanish_order=6)
    assert MultiIndex.stepped(4, 1).degrees == (4, 4, 3, 3)
    assert MultiIndex.unit_step(4, 2).degrees == (4, 3, 4, 3)


# ---------------------------------------------------------------------------
# type II


def test_type2_single_germ_is_pade():
    g = real_germ(10)
    rep = hp_type2([g], 10)
    assert rel_residual(rep.polynomials[0], pade_pair(g, 10)[1]) < 2.0 ** (-rep.bits / 4)


def test_type2_degree_and_real_simple_roots():
    n = 10
    rep = hp_type2(germ_powers(real_germ(n), 3)[1:], n)
    Q = rep.polynomials[0]
    assert Q.degree == 3 * n and rep.residual_order >= rep.vanish_order
    r = real_roots(Q)
    assert r[0] > -1 and r[-1] < 1 and np.min(np.diff(r)) > 1e-8


def test_type2_needs_enough_coefficients():
    with pytest.raises(InvalidInputError):
        hp_type2(germ_powers(real_germ(3), 3)[1:], 10)


def test_type2_n1_against_independent_solve():
    """``Q_3`` for ``n = 1`` from a 3 x 3 solve on Cauchy-integral coefficients of f, f^2, f^3."""
    A, B = 2, 3
    g = germ_at_infinity(SZParams.real_case(A, B), 12, 256)
    Q = hp_type2(germ_powers(g, 3)[1:], 1).polynomials[0]
    with mp.workdps(50):
        rows = []
        for k in (1, 2, 3):
            c = cauchy_coefficients(lambda t: real_sheets(A, B, 1 / t, 50)[0] ** k, 6, 0.5, M=128, dps=50)
            rows.append([c[i + 1] for i in range(4)])
        M = mp.matrix([[r[i] for i in range(3)] for r in rows])
        rhs = mp.matrix([-r[3] for r in rows])
        q = mp.lu_solve(M, rhs)
        ref = [complex(q[i]) for i in range(3)] + [1]
    assert max(abs(complex(a) - b) for a, b in zip(Q.monic().coeffs, ref)) < 1e-25


# ---------------------------------------------------------------------------
# S-polynomials and the determinant identity


def spolys(n):
    g = germ_powers(real_germ(n), 3)
    return hp_type1(g, MultiIndex.stepped(n, 1)), hp_type1(g, MultiIndex.stepped(n, 2))


def outside_second_interval(S):
    r = real_roots(S, 1e-8)
    return r[(r < 1.25 - 1e-8) | (r > 5 / 3 + 1e-8)]


def test_spolys_roots_in_second_interval():
    """All but a bounded number of zeros lie on ``[1.25, 5/3]``; the count does not grow with ``n``."""
    counts = []
    for n in (6, 10, 14):
        S1, S2 = s_polys(*spolys(n))
        assert S1.degree <= 2 * n - 1 and S2.degree <= 2 * n - 1
        counts.append((len(outside_second_interval(S1)), len(outside_second_interval(S2))))
    assert counts[0] == counts[1] == counts[2]
    assert max(max(c) for c in counts) <= 1


def test_spolys_antisymmetric_in_arguments():
    s1, s2 = spolys(6)
    a, b = s_polys(s1, s2), s_polys(s2, s1)
    for p, q in zip(a, b):
        assert (p + q).is_zero()


@pytest.mark.parametrize("n", [1, 3, 6, 10])
def test_determinant_identity(n):
    g = germ_powers(real_germ(n), 3)
    sols = [hp_type1(g, MultiIndex.unit_step(n, k)) for k in (1, 2, 3)]
    Qd, Pd = type2_via_determinant(sols)
    rep = hp_type2(g[1:], n)
    tol = 2.0 ** (-rep.bits / 4)
    assert rel_residual(Qd, rep.polynomials[0]) < tol
    # P_3n,1 carries the same scalar as Q_3n
    scale = Qd.leading / rep.polynomials[0].leading
    assert rel_residual(Pd.scaled(1 / scale), rep.polynomials[1].scaled(1)) < tol or \
        rel_residual(Pd, rep.polynomials[1]) < tol


def test_determinant_degenerate_for_rational_germ():
    g = germ_powers(rational_germ(), 3)
    sols = [hp_type1(g, MultiIndex.unit_step(3, k)) for k in (1, 2, 3)]
    with pytest.raises(DegenerateDeterminantError) as info:
        type2_via_determinant(sols)
    assert info.value.family == "Q3n"


def test_spolys_need_four_polynomials():
    rep = hp_type1(germ_powers(real_germ(4), 2), MultiIndex.diagonal(4, 2))
    with pytest.raises(InvalidInputError):
        s_polys(rep, rep)


# ---------------------------------------------------------------------------
# invariants


@settings(max_examples=6, deadline=None)
@given(st.floats(1.1, 3.0), st.floats(0.1, 2.0), st.integers(2, 8))
def test_real_germs_give_real_polynomials(A, gap, n):
    g = germ_at_infinity(SZParams.real_case(A, A + gap), 4 * n + 8, hp_default_bits(n))
    rep = hp_type1(germ_powers(g, 2), MultiIndex.diagonal(n, 2))
    for q in rep.polynomials:
        assert max(abs(complex(c).imag) for c in q.coeffs) < 2.0 ** (-rep.bits / 2)
    assert rep.residual_order >= rep.vanish_order


@settings(max_examples=6, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.integers(2, 12))
def test_scaling_the_germ_scales_numerator_only(c, n):
    g = real_germ(12)
    P, Q = pade_pair(g, n)
    Pc, Qc = pade_pair(ps_scale(g, acb(c.real, c.imag)), n)
    assert rel_residual(Qc, Q) < 2.0 ** (-g.bits / 4)
    with workprec(g.bits):
        err = max(abs(complex(a - b * acb(c.real, c.imag))) for a, b in zip(Pc.coeffs, P.coeffs))
    assert err < 2.0 ** (-g.bits / 4) * abs(c)


@pytest.mark.parametrize("n", [5, 10, 20])
def test_perfectness_counts(n):
    g = germ_powers(real_germ(n), 3)
    assert hp_type2(g[1:], n).polynomials[0].degree == 3 * n
    assert all(q.degree == n for q in hp_type1(g, MultiIndex.diagonal(n, 3)).polynomials)


# ---------------------------------------------------------------------------
# partial sums and export


def test_partial_sum_of_geometric_series():
    g = PowerSeries(tuple([acb(1)] * 10), AT_ZERO, 128)
    zs = sorted((complex(r) for r in partial_sum_zeros(g, 3)), key=lambda z: (z.real, z.imag))
    for got, ref in zip(zs, sorted([-1, 1j, -1j], key=lambda z: (complex(z).real, complex(z).imag))):
        assert abs(got - ref) < 1e-30


def test_partial_sum_of_polynomial_germ():
    g = PowerSeries(tuple(acb(c) for c in [6, -5, 1, 0, 0, 0]), AT_ZERO, 128)
    zs = sorted(complex(r).real for r in partial_sum_zeros(g, 2))
    assert abs(zs[0] - 2) < 1e-30 and abs(zs[1] - 3) < 1e-30


def test_partial_sum_needs_germ_at_zero():
    with pytest.raises(InvalidInputError):
        partial_sum_zeros(real_germ(4), 3)


def test_json_exports():
    P, Q = pade_pair(real_germ(4), 4)
    doc = json.loads(polys_to_json("pade", 4, [Q, P]))
    assert doc["kind"] == "pade" and doc["n"] == 4 and doc["degrees"] == [4, 4]
    assert all(isinstance(x, str) for poly in doc["coeffs"] for pair in poly for x in pair)
    doc = json.loads(roots_to_json("pade_Q", 4, Q.roots(), Q.bits))
    assert len(doc["points"]) == 4 and doc["degrees"] == [4]
