"""Rational evaluation of Pade / Hermite-Pade objects and branch recovery.

The polynomials live in the global variable of their germ (``z`` for germs
at infinity, ``zeta`` for germs at zero); every evaluation point below is in
that same variable.

Branch sums converge only in capacity, so isolated spurious poles may sit
near an evaluation point.  The recovery functions therefore evaluate on a
small five-point cross around the point and take the median of the real and
imaginary parts separately; points that hit a pole are dropped.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass


from ._precision import absf, tiny, to_acb, workprec
from .errors import AmbiguousBranchError, HermitePadeError, InvalidInputError, NearPoleError
from .hp_core import HPSolveReport, MultiIndex, germ_powers, hp_type1, hp_type2, s_polys
from .polynomial import Polynomial
from .series import PowerSeries

__all__ = [
    "BranchValues",
    "TwoSheetSystem",
    "ThreeSheetSystem",
    "eval_ratio",
    "two_sheet_system",
    "three_sheet_system",
    "recover_two_sheets",
    "recover_three_sheets",
    "shafer_eval",
    "shafer_discriminant",
    "cross_median",
    "grid_csv",
]


@dataclass(frozen=True)
class BranchValues:
    """Values of ``f`` on sheets 1-3 at ``point``."""

    f1: complex
    f2: complex
    f3: complex
    n_used: int
    point: complex

    @property
    def f4(self) -> complex:
        """Fourth value when the four branches form two sign pairs."""
        return -(self.f1 + self.f2 + self.f3)

    def as_tuple(self) -> tuple:
        return (self.f1, self.f2, self.f3)


@dataclass(frozen=True)
class TwoSheetSystem:
    """Type II for ``[f, f^2]`` and type I for ``[1, f, f^2]`` at ``(n, n)``."""

    n: int
    hp2: HPSolveReport
    hp1: HPSolveReport


@dataclass(frozen=True)
class ThreeSheetSystem:
    """Everything needed to read off three sheets from the germs ``[1, f, f^2, f^3]``."""

    n: int
    hp2: HPSolveReport
    step1: HPSolveReport
    step2: HPSolveReport
    hp1: HPSolveReport
    S1: Polynomial
    S2: Polynomial


def eval_ratio(num: Polynomial, den: Polynomial, z, which: str = "") -> complex:
    """``num(z) / den(z)`` at working precision.

    Raises :class:`NearPoleError` when ``|den(z)|`` is below ``2^(-bits/2)``
    relative to ``max |d_k| sum |z|^k``.
    """
    bits = max(num.bits, den.bits)
    with workprec(bits):
        zz = to_acb(z)
        d = den(zz)
        scale = den.eval_scale(z)
        dm = absf(d)
        if dm == 0.0 or dm <= tiny(bits) * scale:
            raise NearPoleError(f"denominator {which or ''} nearly vanishes at {complex(z)}".replace("  ", " "),
                                modulus=dm, which=which)
        return complex(num(zz) / d)


def cross_median(fn, z: complex, h: float | None = None):
    """Median of ``fn`` over ``z, z +- h, z +- ih`` (parts taken separately).

    ``fn`` returns a complex number or a tuple of them.  Evaluations raising
    :class:`NearPoleError` are skipped; if all five fail the last error is
    re-raised.
    """
    z = complex(z)
    if h is None:
        h = 1e-5 * max(1.0, abs(z))
    vals, err = [], None
    for dz in (0, h, -h, 1j * h, -1j * h):
        try:
            vals.append(fn(z + dz))
        except NearPoleError as exc:
            err = exc
    if not vals:
        raise err
    if isinstance(vals[0], tuple):
        return tuple(_median_c([v[k] for v in vals]) for k in range(len(vals[0])))
    return _median_c(vals)


def _median_c(vals) -> complex:
    return complex(statistics.median(v.real for v in vals), statistics.median(v.imag for v in vals))


# ---------------------------------------------------------------------------
# system construction


def two_sheet_system(f: PowerSeries, n: int) -> TwoSheetSystem:
    g = germ_powers(f, 2)
    return TwoSheetSystem(n, hp_type2(g[1:], n), hp_type1(g, MultiIndex.diagonal(n, 2)))


def three_sheet_system(f: PowerSeries, n: int) -> ThreeSheetSystem:
    g = germ_powers(f, 3)
    st1 = hp_type1(g, MultiIndex.stepped(n, 1))
    st2 = hp_type1(g, MultiIndex.stepped(n, 2))
    S1, S2 = s_polys(st1, st2)
    return ThreeSheetSystem(n, hp_type2(g[1:], n), st1, st2, hp_type1(g, MultiIndex.diagonal(n, 3)), S1, S2)


# ---------------------------------------------------------------------------
# recovery


def _two_at(sys: TwoSheetSystem, z: complex) -> tuple:
    Q, P1 = sys.hp2.polynomials[0], sys.hp2.polynomials[1]
    q = sys.hp1.polynomials
    f1 = eval_ratio(P1, Q, z, "Q2n")
    f2 = -eval_ratio(q[1], q[2], z, "Qn2") - f1
    return f1, f2


def _three_at(sys: ThreeSheetSystem, z: complex) -> tuple:
    Q, P1 = sys.hp2.polynomials[0], sys.hp2.polynomials[1]
    q = sys.hp1.polynomials
    f1 = eval_ratio(P1, Q, z, "Q3n")
    f2 = -eval_ratio(sys.S1, sys.S2, z, "S2n2") - f1
    f3 = -eval_ratio(q[2], q[3], z, "Qn3") - f1 - f2
    return f1, f2, f3


def recover_two_sheets(sys: TwoSheetSystem, z, cross: bool = True) -> tuple[complex, complex]:
    """``f1 = P_2n,1 / Q_2n`` and ``f2 = -Q_n,1 / Q_n,2 - f1``."""
    if cross:
        return cross_median(lambda w: _two_at(sys, w), z)
    return _two_at(sys, complex(z))


def recover_three_sheets(sys: ThreeSheetSystem, z, cross: bool = True) -> BranchValues:
    """Values on sheets 1, 2, 3, recovered in that order.

    ``f1 = P_3n,1 / Q_3n``, ``f2 = -S_2n,1 / S_2n,2 - f1`` and
    ``f3 = -Q_n,2 / Q_n,3 - f1 - f2``.
    """
    vals = cross_median(lambda w: _three_at(sys, w), z) if cross else _three_at(sys, complex(z))
    return BranchValues(*vals, n_used=sys.n, point=complex(z))


# ---------------------------------------------------------------------------
# Shafer


def _shafer_parts(sol1: HPSolveReport, z):
    if len(sol1.polynomials) != 3:
        raise InvalidInputError("Shafer approximants need a type I solution for [1, f, f^2]")
    q0, q1, q2 = sol1.polynomials
    with workprec(sol1.bits):
        zz = to_acb(z)
        a, b, c = q2(zz), q1(zz), q0(zz)
        if absf(a) <= tiny(sol1.bits) * q2.eval_scale(z):
            raise NearPoleError(f"Q_n,2 nearly vanishes at {complex(z)}", modulus=absf(a), which="Qn2")
        return a, b, c


def shafer_discriminant(sol1: HPSolveReport, z) -> complex:
    """``Q_1^2 - 4 Q_0 Q_2`` at ``z``."""
    q0, q1, q2 = sol1.polynomials
    with workprec(sol1.bits):
        zz = to_acb(z)
        return complex(q1(zz) ** 2 - 4 * q0(zz) * q2(zz))


def shafer_eval(sol1: HPSolveReport, z, branch_hint) -> complex:
    """Root of ``Q_0 + Q_1 w + Q_2 w^2`` at ``z`` nearest to ``branch_hint``."""
    a, b, c = _shafer_parts(sol1, z)
    with workprec(sol1.bits):
        disc = (b * b - 4 * a * c).sqrt()
        r1 = complex((-b + disc) / (2 * a))
        r2 = complex((-b - disc) / (2 * a))
    hint = complex(branch_hint)
    d1, d2 = abs(r1 - hint), abs(r2 - hint)
    if abs(d1 - d2) <= 1e-12 * max(d1, d2, 1e-300):
        raise AmbiguousBranchError(f"both Shafer roots are {d1:.3g} from the hint")
    return r1 if d1 < d2 else r2


# ---------------------------------------------------------------------------
# grids


def grid_csv(evaluate, xs, ys) -> str:
    """CSV of sheet values over the grid ``xs x ys``.

    ``evaluate(z)`` returns ``(f1, f2, f3)``; library errors are recorded in
    the ``flags`` column and the values left empty.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "re_f1", "im_f1", "re_f2", "im_f2", "re_f3", "im_f3", "flags"])
    for y in ys:
        for x in xs:
            try:
                vals = evaluate(complex(x, y))
                flag = "ok"
            except HermitePadeError as exc:
                vals, flag = None, type(exc).__name__
                if isinstance(exc, NearPoleError) and exc.which:
                    flag += f":{exc.which}"
            row = [repr(float(x)), repr(float(y))]
            if vals is None:
                row += [""] * 6
            else:
                vals = tuple(vals) + (float("nan"),) * (3 - len(vals))
                for v in vals[:3]:
                    row += [repr(complex(v).real), repr(complex(v).imag)]
            row.append(flag)
            w.writerow(row)
    return buf.getvalue()
