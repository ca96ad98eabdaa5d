import math

import pytest
from hypothesis import given, settings, strategies as st

from hermite_pade.errors import InvalidInputError, RootFinderError
from hermite_pade.polynomial import Polynomial, fujiwara_bound, poly_from_roots, poly_roots


def test_degree_ignores_negligible_top_coefficients():
    p = Polynomial((1, 2, 1e-50), 256)
    assert p.degree == 1 and p.trimmed().coeffs[-1] == 2


def test_zero_polynomial():
    p = Polynomial((0, 0), 128)
    assert p.is_zero() and p.degree == -1
    with pytest.raises(InvalidInputError):
        p.monic()


def test_monic_and_arithmetic():
    p = Polynomial((2, 4), 128)
    assert [complex(c) for c in p.monic().coeffs] == [0.5, 1]
    q = p * Polynomial((1, 1), 128) - Polynomial((2, 6, 4), 128)
    assert q.is_zero()
    assert complex((p + 1)(1)) == 7


def test_reversed():
    p = Polynomial((1, 2, 3), 128)
    assert [complex(c) for c in p.reversed(3).coeffs] == [0, 3, 2, 1]


def test_derivative():
    assert [complex(c) for c in Polynomial((5, 3, 2), 128).derivative().coeffs] == [3, 4]


def test_quadratic_roots():
    roots = sorted((complex(r) for r in poly_roots(Polynomial((1, 0, 1), 128))), key=lambda z: z.imag)
    assert abs(roots[0] + 1j) < 1e-30 and abs(roots[1] - 1j) < 1e-30


def test_chebyshev_roots_recovered():
    exact = [math.cos((2 * k + 1) * math.pi / 40) for k in range(20)]
    p = poly_from_roots(exact, 256)
    got = sorted(complex(r).real for r in poly_roots(p))
    assert max(abs(complex(r).imag) for r in poly_roots(p)) < 1e-20
    assert max(abs(a - b) for a, b in zip(got, sorted(exact))) < 1e-20


def test_multiple_root():
    p = poly_from_roots([0.5, 0.5, -1], 256)
    got = sorted(complex(r).real for r in poly_roots(p))
    assert abs(got[0] + 1) < 1e-30 and abs(got[1] - 0.5) < 1e-20 and abs(got[2] - 0.5) < 1e-20


def test_constant_is_rejected():
    with pytest.raises(InvalidInputError):
        poly_roots(Polynomial((3,), 128))


def test_iteration_cap_reports_partial_roots():
    p = poly_from_roots([complex(math.cos(k), math.sin(2 * k)) for k in range(12)], 256)
    with pytest.raises(RootFinderError) as info:
        poly_roots(p, max_iter=1)
    assert len(info.value.roots) == 12 and not all(info.value.converged)


def test_fujiwara_bound_dominates_roots():
    roots = [3, -2j, 0.5]
    p = poly_from_roots(roots, 128)
    assert fujiwara_bound([complex(c) for c in p.coeffs]) >= 3


@settings(max_examples=25, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=15))
def test_backward_error_of_roots(zs):
    p = poly_from_roots(zs, 256)
    thr = 2.0 ** -128
    for r in poly_roots(p):
        assert p.backward_error(r) <= thr
