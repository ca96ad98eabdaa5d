"""Pade and Hermite-Pade polynomials computed from germs.

All solvers work in the local variable ``t`` of the germ (``t = 1/z`` at
infinity, ``t = zeta`` at zero).  A polynomial of degree ``<= d`` in the
global variable is carried into ``t`` by a monomial shift:

* at infinity, ``z^i`` becomes ``t^(D - i)`` after multiplication by ``t^D``,
  where ``D`` is the largest degree bound of the system;
* at zero, ``zeta^i`` is ``t^i``.

A vanishing order ``V`` always counts powers of ``t`` in the shifted
remainder.  At infinity ``R(z) = O(z^-e)`` therefore corresponds to
``V = e + D`` (see :meth:`MultiIndex.at_infinity`).

The homogeneous systems are solved by Gaussian elimination with partial
pivoting on an equilibrated matrix.  Unknowns are ordered so that the
leading coefficient of the principal polynomial is eliminated last; in the
generic (normal) case it is the single free variable and is set to 1, which
makes the principal polynomial monic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from flint import acb, acb_poly, arb

from ._precision import absf, acb_to_pair, tiny, workprec
from .errors import DegenerateDeterminantError, InvalidInputError
from .polynomial import Polynomial, poly_roots
from .series import AT_INFINITY, AT_ZERO, PowerSeries, ps_mul

__all__ = [
    "MultiIndex",
    "HPSolveReport",
    "germ_powers",
    "pade_pair",
    "hp_type1",
    "hp_type2",
    "s_polys",
    "type2_via_determinant",
    "partial_sum_zeros",
    "polys_to_json",
    "roots_to_json",
]


@dataclass(frozen=True)
class MultiIndex:
    """Degree bounds of a type I system and the vanishing order in ``t``.

    ``degrees[j]`` bounds the polynomial multiplying ``germs[j]``, including
    the one multiplying the constant germ 1.  ``vanish_order=None`` selects the
    counting maximum ``sum(d_j + 1) - 1``.
    """

    degrees: tuple
    vanish_order: int | None = None

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        if not degs or min(degs) < 0:
            raise InvalidInputError(f"degree bounds must be nonnegative, got {self.degrees}")
        object.__setattr__(self, "degrees", degs)
        cap = self.unknowns - 1
        v = cap if self.vanish_order is None else int(self.vanish_order)
        if v < 0 or v > cap:
            raise InvalidInputError(f"vanish_order {v} outside [0, {cap}] for degrees {degs}")
        object.__setattr__(self, "vanish_order", v)

    @property
    def unknowns(self) -> int:
        return sum(d + 1 for d in self.degrees)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @classmethod
    def at_infinity(cls, degrees, exponent: int) -> "MultiIndex":
        """Index for ``sum Q_j f_j = O(z^-exponent)`` at infinity."""
        degs = tuple(degrees)
        return cls(degs, int(exponent) + max(degs))

    def exponent_at_infinity(self) -> int:
        return self.vanish_order - self.max_degree

    @classmethod
    def diagonal(cls, n: int, m: int) -> "MultiIndex":
        """``(n, ..., n)`` for ``m + 1`` polynomials."""
        return cls((n,) * (m + 1))

    @classmethod
    def stepped(cls, n: int, full: int, m: int = 3) -> "MultiIndex":
        """``Q_0`` and the first ``full`` of ``Q_1..Q_m`` of degree ``n``, the rest ``n - 1``."""
        return cls((n,) + (n,) * full + (n - 1,) * (m - full))

    @classmethod
    def unit_step(cls, n: int, k: int, m: int = 3) -> "MultiIndex":
        """``Q_k`` of degree ``n``, the other ``Q_j`` (j >= 1) of degree ``n - 1``, ``Q_0`` of degree ``n``."""
        return cls((n,) + tuple(n if j == k else n - 1 for j in range(1, m + 1)))


@dataclass(frozen=True)
class HPSolveReport:
    """Solution of one Pade or Hermite-Pade system.

    Attributes
    ----------
    polynomials : tuple of Polynomial
        Type I: ``(Q_0, ..., Q_m)``.  Type II: ``(Q, P_1, ..., P_m)``.
    residual_order : int
        First power of ``t`` at which the remainder is numerically nonzero.
    leading_remainder : acb
        Remainder coefficient at the requested order, from the normalised
        solution.  For type II this is the one of ``Q f - P_1``.
    nullity : int
        Dimension of the numerical solution space.
    """

    polynomials: tuple
    residual_order: int
    leading_remainder: acb
    nullity: int
    kind: str = ""
    center: str = AT_INFINITY
    degrees: tuple = ()
    vanish_order: int = 0
    bits: int = 256
    remainders: tuple = field(default=(), repr=False)

    @property
    def principal(self) -> Polynomial:
        return self.polynomials[0] if self.kind.startswith("hp2") or self.kind == "pade" else self.polynomials[-1]


def germ_powers(f: PowerSeries, m: int, with_one: bool = True) -> list[PowerSeries]:
    """``[1, f, f^2, ..., f^m]`` (or without the leading 1)."""
    out = [f]
    for _ in range(m - 1):
        out.append(ps_mul(out[-1], f))
    if with_one:
        one = PowerSeries.constant(1, f.order, f.center, f.bits)
        out.insert(0, one)
    return out


def _check_germs(germs) -> tuple[str, int, int]:
    if not germs:
        raise InvalidInputError("empty germ tuple")
    center = germs[0].center
    if any(g.center != center for g in germs):
        raise InvalidInputError("germs must share an expansion center")
    order = min(g.order for g in germs)
    bits = max(g.bits for g in germs)
    return center, order, bits


def _shift(center: str, i: int, D: int) -> int:
    return D - i if center == AT_INFINITY else i


# ---------------------------------------------------------------------------
# homogeneous linear solve


def _equilibrate(rows: list[list[acb]], ncols: int) -> tuple[list[list[acb]], list[int]]:
    """Power-of-two column then row scaling; returns scaled rows and column exponents."""
    col_exp = []
    for c in range(ncols):
        m = max((absf(r[c]) for r in rows), default=0.0)
        col_exp.append(-math.frexp(m)[1] if m > 0 else 0)
    out = []
    for r in rows:
        scaled = [r[c] * arb(2) ** col_exp[c] if col_exp[c] else r[c] for c in range(ncols)]
        m = max(absf(x) for x in scaled)
        e = -math.frexp(m)[1] if m > 0 else 0
        out.append([x * arb(2) ** e for x in scaled] if e else scaled)
    return out, col_exp


def _nullspace_vector(rows: list[list[acb]], ncols: int, bits: int) -> tuple[list[acb], int]:
    """One null vector of the matrix ``rows`` and the numerical nullity.

    Gaussian elimination with partial (row) pivoting processes columns left
    to right; a column whose best pivot is below ``2^(-bits/2)`` (after
    equilibration) is free.  The last free column is set to 1, the others to
    0, and the pivot variables follow by back substitution.
    """
    thr = tiny(bits)
    rows, col_exp = _equilibrate(rows, ncols)
    # rows as acb_poly so that row updates run in C
    work = [acb_poly(r) for r in rows]
    used = [False] * len(work)
    pivots = []  # (col, row index)
    free = []
    for c in range(ncols):
        best, bi = 0.0, -1
        for i, r in enumerate(work):
            if used[i]:
                continue
            v = absf(r[c])
            if v > best:
                best, bi = v, i
        if bi < 0 or best <= thr:
            free.append(c)
            continue
        used[bi] = True
        pr = work[bi]
        pv = pr[c]
        for i, r in enumerate(work):
            if used[i]:
                continue
            x = r[c]
            if x.mid().is_zero():
                continue
            work[i] = acb_poly([y.mid() for y in (r - pr * (x / pv)).coeffs()])
        pivots.append((c, bi))
    nullity = len(free)
    x = [acb(0)] * ncols
    if free:
        x[free[-1]] = acb(1)
    for c, i in reversed(pivots):
        r = work[i]
        s = acb(0)
        for k in range(c + 1, ncols):
            if not x[k].is_zero():
                s += r[k] * x[k]
        x[c] = (-s / r[c]).mid()
    # undo column scaling
    x = [xi * arb(2) ** col_exp[c] if col_exp[c] else xi for c, xi in enumerate(x)]
    return x, nullity


# ---------------------------------------------------------------------------
# remainders


def _shifted_sum(center: str, polys, germs, D: int, order: int):
    """``sum_j shift(Q_j) * g_j`` truncated to ``order`` terms, and its absolute counterpart."""
    total = acb_poly([])
    absolute = acb_poly([])
    for q, g in zip(polys, germs):
        qc = list(q.coeffs)
        sh = [acb(0)] * (D + 1 if center == AT_INFINITY else len(qc))
        for i, c in enumerate(qc):
            sh[_shift(center, i, D)] = c
        sp = acb_poly(sh)
        gp = g.to_poly()
        total += sp * gp
        absolute += acb_poly([abs(c) for c in sh]) * acb_poly([abs(c) for c in g.coeffs])
    return total, absolute


def _attained_order(total: acb_poly, absolute: acb_poly, limit: int, bits: int) -> int:
    thr = tiny(bits)
    for k in range(limit):
        scale = absf(absolute[k])
        if scale > 0 and absf(total[k]) > thr * scale:
            return k
    return limit


def _normalize(polys: list[Polynomial], principal: int) -> list[Polynomial]:
    p = polys[principal]
    if p.is_zero():
        for q in reversed(polys):
            if not q.is_zero():
                p = q
                break
    lead = p.leading
    with workprec(p.bits):
        inv = 1 / lead
        return [q.scaled(inv) for q in polys]


# ---------------------------------------------------------------------------
# solvers


def hp_type1(germs, idx: MultiIndex, principal: int | None = None) -> HPSolveReport:
    """Type I Hermite-Pade polynomials: ``sum_j Q_j g_j`` vanishes to ``idx.vanish_order``.

    Parameters
    ----------
    germs : list of PowerSeries
        Usually ``[1, f, f^2, ...]``; all with the same center.
    idx : MultiIndex
        ``len(idx.degrees)`` must equal ``len(germs)``.
    principal : int, optional
        Polynomial made monic; defaults to the last one.
    """
    center, order, bits = _check_germs(germs)
    if len(idx.degrees) != len(germs):
        raise InvalidInputError(f"{len(germs)} germs but {len(idx.degrees)} degree bounds")
    V = idx.vanish_order
    if order < V:
        raise InvalidInputError(f"germ order {order} below vanish_order {V}")
    D = idx.max_degree
    m1 = len(germs)
    principal = m1 - 1 if principal is None else principal
    # column layout: principal polynomial last, its leading coefficient the very last column
    layout = [(j, i) for j in range(m1) if j != principal for i in range(idx.degrees[j] + 1)]
    layout += [(principal, i) for i in range(idx.degrees[principal] + 1)]
    with workprec(bits):
        gc = [g.coeffs for g in germs]
        rows = []
        for k in range(V):
            row = []
            for j, i in layout:
                s = _shift(center, i, D)
                row.append(gc[j][k - s] if 0 <= k - s else acb(0))
            rows.append(row)
        x, nullity = _nullspace_vector(rows, len(layout), bits)
        coeffs = [[acb(0)] * (d + 1) for d in idx.degrees]
        for (j, i), v in zip(layout, x):
            coeffs[j][i] = v
        polys = _normalize([Polynomial(tuple(c), bits) for c in coeffs], principal)
        total, absolute = _shifted_sum(center, polys, germs, D, order + 1)
        lead = total[V] if V <= order else acb(0)
        attained = _attained_order(total, absolute, min(order + 1, V + 1), bits)
    return HPSolveReport(tuple(polys), attained, lead.mid(), nullity, kind="hp1", center=center,
                         degrees=idx.degrees, vanish_order=V, bits=bits)


def hp_type2(germs, n: int, degree: int | None = None) -> HPSolveReport:
    """Type II Hermite-Pade polynomials for ``germs = [f, f^2, ..., f^m]``.

    ``Q`` has degree ``<= degree`` (default ``m n``) and each ``Q g_k - P_k``
    vanishes to order ``degree + n + 1`` in ``t`` once ``P_k`` absorbs the
    first ``degree + 1`` shifted coefficients.  At infinity this is
    ``Q f^k - P_k = O(z^(-n-1))``; at zero ``O(zeta^(degree + n + 1))``.
    """
    center, order, bits = _check_germs(germs)
    m = len(germs)
    D = m * n if degree is None else int(degree)
    V = D + n + 1
    if n < 0 or D < 0:
        raise InvalidInputError("n and degree must be nonnegative")
    if order < V:
        raise InvalidInputError(f"germ order {order} below required {V}")
    with workprec(bits):
        rows = []
        for g in germs:
            gc = g.coeffs
            for k in range(D + 1, V):
                row = []
                for i in range(D + 1):
                    s = _shift(center, i, D)
                    row.append(gc[k - s] if 0 <= k - s else acb(0))
                rows.append(row)
        if rows:
            x, nullity = _nullspace_vector(rows, D + 1, bits)
        else:
            x, nullity = [acb(0)] * D + [acb(1)], D + 1
        Q = Polynomial(tuple(x), bits)
        Q = _normalize([Q], 0)[0]
        qsh = [acb(0)] * (D + 1)
        for i, c in enumerate(Q.coeffs):
            qsh[_shift(center, i, D)] = c
        qp = acb_poly(qsh)
        aqp = acb_poly([abs(c) for c in qsh])
        Ps, leads, attained_all = [], [], []
        for g in germs:
            r = qp * g.to_poly()
            ra = aqp * acb_poly([abs(c) for c in g.coeffs])
            pc = [r[_shift(center, i, D)] for i in range(D + 1)]
            Ps.append(Polynomial(tuple(pc), bits))
            leads.append(r[V].mid() if V <= order else acb(0))
            a = D + 1
            thr = tiny(bits)
            while a < min(order + 1, V + 1):
                sc = absf(ra[a])
                if sc > 0 and absf(r[a]) > thr * sc:
                    break
                a += 1
            attained_all.append(a)
    return HPSolveReport((Q, *Ps), min(attained_all), leads[0], nullity, kind=f"hp2_{m}", center=center,
                         degrees=(D,) * (m + 1), vanish_order=V, bits=bits, remainders=tuple(leads))


def pade_pair(g: PowerSeries, n: int) -> tuple[Polynomial, Polynomial]:
    """Diagonal Pade ``[n/n]``: ``(P, Q)`` with ``Q`` monic.

    At infinity ``Q g - P = O(z^(-n-1))``; at zero ``O(zeta^(2n+1))``.
    """
    rep = pade_report(g, n)
    return rep.polynomials[1], rep.polynomials[0]


def pade_report(g: PowerSeries, n: int) -> HPSolveReport:
    rep = hp_type2([g], n)
    return HPSolveReport(rep.polynomials, rep.residual_order, rep.leading_remainder, rep.nullity,
                         kind="pade", center=rep.center, degrees=(n, n), vanish_order=rep.vanish_order,
                         bits=rep.bits, remainders=rep.remainders)


def _det2(a, b, c, d):
    return a * d - b * c


def _det3(m):
    return (m[0][0] * _det2(m[1][1], m[1][2], m[2][1], m[2][2])
            - m[0][1] * _det2(m[1][0], m[1][2], m[2][0], m[2][2])
            + m[0][2] * _det2(m[1][0], m[1][1], m[2][0], m[2][1]))


def _balls(reps) -> list[list[acb_poly]]:
    """Solution polynomials as Arb balls of radius ``2^(16 - bits)`` times their row scale.

    The radius models the accuracy to which the midpoints are known, so a
    determinant evaluated on these balls carries its own rounding bound.
    """
    out = []
    for r in reps:
        scale = max(q.scale for q in r.polynomials)
        rad = arb(2) ** (16 - r.bits) * arb(scale)
        row = []
        for q in r.polynomials:
            row.append(acb_poly([acb(arb(c.real.mid(), rad), arb(c.imag.mid(), rad)) for c in q.coeffs]))
        out.append(row)
    return out


def _checked(ball: acb_poly, family: str, bits: int) -> Polynomial:
    """Midpoint polynomial of ``ball``; degenerate if every coefficient ball contains zero."""
    cs = ball.coeffs()
    if not cs or all(c.contains(0) for c in cs):
        raise DegenerateDeterminantError(f"{family} vanishes to working precision", family=family)
    return Polynomial(tuple(c.mid() for c in cs), bits).trimmed()


def s_polys(sol1: HPSolveReport, sol2: HPSolveReport) -> tuple[Polynomial, Polynomial]:
    """``S_1 = Q1_1 Q2_3 - Q1_3 Q2_1`` and ``S_2 = Q1_2 Q2_3 - Q1_3 Q2_2``.

    ``sol1`` and ``sol2`` are type I solutions for ``[1, f, f^2, f^3]`` at the
    neighbouring indices ``(n; n, n-1, n-1)`` and ``(n; n, n, n-1)``.  A
    determinant is declared degenerate when it cannot be told apart from zero
    given the accuracy of its entries.
    """
    if len(sol1.polynomials) != 4 or len(sol2.polynomials) != 4:
        raise InvalidInputError("s_polys needs type I solutions for [1, f, f^2, f^3]")
    bits = min(sol1.bits, sol2.bits)
    with workprec(bits):
        a, b = _balls([sol1, sol2])
        S1 = _checked(_det2(a[1], a[3], b[1], b[3]), "S2n1", bits)
        S2 = _checked(_det2(a[2], a[3], b[2], b[3]), "S2n2", bits)
    return S1, S2


def type2_via_determinant(sols) -> tuple[Polynomial, Polynomial]:
    """``Q_3n`` and ``P_3n,1`` as 3x3 determinants of type I polynomials.

    ``sols`` are type I solutions for ``[1, f, f^2, f^3]`` at the indices with
    ``Q_k`` of degree ``n`` and the other ``Q_j`` (j >= 1) of degree ``n - 1``,
    for ``k = 1, 2, 3`` (see :meth:`MultiIndex.unit_step`).
    """
    if len(sols) != 3 or any(len(s.polynomials) != 4 for s in sols):
        raise InvalidInputError("type2_via_determinant needs three type I solutions for [1, f, f^2, f^3]")
    bits = min(s.bits for s in sols)
    with workprec(bits):
        rows = _balls(sols)
        Q = _checked(_det3([[r[1], r[2], r[3]] for r in rows]), "Q3n", bits)
        P = _checked(-_det3([[r[0], r[2], r[3]] for r in rows]), "P3n1", bits)
    return Q, P


def partial_sum_zeros(g: PowerSeries, n: int) -> list:
    """Zeros of the degree-``n`` partial sum of a germ at zero."""
    if g.center != AT_ZERO:
        raise InvalidInputError("partial sums are taken of germs at zero")
    if g.order < n:
        raise InvalidInputError(f"germ order {g.order} below {n}")
    return poly_roots(Polynomial(tuple(g.coeffs[: n + 1]), g.bits))


# ---------------------------------------------------------------------------
# export


def polys_to_json(kind: str, n: int, polys, degrees=None, bits: int | None = None) -> str:
    polys = list(polys)
    doc = {
        "kind": kind,
        "n": int(n),
        "degrees": list(degrees) if degrees is not None else [p.degree for p in polys],
        "coeffs": [p.to_pairs() if bits is None else [acb_to_pair(c, bits) for c in p.coeffs] for p in polys],
    }
    return json.dumps(doc, indent=1)


def roots_to_json(kind: str, n: int, points, bits: int, degrees=None) -> str:
    doc = {
        "kind": kind,
        "n": int(n),
        "degrees": list(degrees) if degrees is not None else [len(points)],
        "points": [acb_to_pair(acb(p) if not isinstance(p, acb) else p, bits) for p in points],
    }
    return json.dumps(doc, indent=1)
