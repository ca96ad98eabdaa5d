"""Multiprecision polynomials and simultaneous (Ehrlich-Aberth) root finding."""

from __future__ import annotations

import math
from dataclasses import dataclass

from flint import acb, acb_poly, arb

from ._precision import absf, acb_to_pair, to_acb, tiny, workprec
from .errors import InvalidInputError, RootFinderError

__all__ = ["Polynomial", "poly_roots", "poly_from_roots", "fujiwara_bound"]

_NUDGE = 2.0 ** -20


@dataclass(frozen=True)
class Polynomial:
    """Degree-ascending coefficient vector at a given working precision."""

    coeffs: tuple
    bits: int = 256

    def __post_init__(self):
        cs = tuple(to_acb(c).mid() for c in self.coeffs) or (acb(0),)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_acb_poly(cls, p: acb_poly, bits: int) -> "Polynomial":
        return cls(tuple(p.coeffs()) or (acb(0),), bits)

    def to_acb_poly(self) -> acb_poly:
        return acb_poly(list(self.coeffs))

    @property
    def scale(self) -> float:
        return max(absf(c) for c in self.coeffs)

    @property
    def degree(self) -> int:
        """Index of the top coefficient above ``2^(-bits/2)`` relative to the largest one.

        Returns -1 for the zero polynomial.
        """
        s = self.scale
        if s == 0.0:
            return -1
        thr = tiny(self.bits) * s
        for k in range(len(self.coeffs) - 1, -1, -1):
            if absf(self.coeffs[k]) > thr:
                return k
        return -1

    def is_zero(self) -> bool:
        return self.degree < 0

    def trimmed(self) -> "Polynomial":
        d = self.degree
        return Polynomial(self.coeffs[: max(d, 0) + 1], self.bits)

    @property
    def leading(self) -> acb:
        d = self.degree
        return self.coeffs[d] if d >= 0 else acb(0)

    def monic(self) -> "Polynomial":
        """Divide by the top nonzero coefficient."""
        lead = self.leading
        if lead.is_zero():
            raise InvalidInputError("cannot normalize the zero polynomial")
        with workprec(self.bits):
            return Polynomial(tuple(c / lead for c in self.coeffs[: self.degree + 1]), self.bits)

    def scaled(self, c) -> "Polynomial":
        c = to_acb(c)
        with workprec(self.bits):
            return Polynomial(tuple(c * a for a in self.coeffs), self.bits)

    def reversed(self, degree: int) -> "Polynomial":
        """``t^degree p(1/t)``."""
        cs = list(self.coeffs[: degree + 1]) + [acb(0)] * max(0, degree + 1 - len(self.coeffs))
        return Polynomial(tuple(reversed(cs)), self.bits)

    def __call__(self, z):
        with workprec(self.bits):
            return self.to_acb_poly()(to_acb(z))

    def eval_scale(self, z) -> float:
        """``max |c_k| * sum |z|^k``, the natural size of ``p(z)`` for backward-error tests."""
        return float(self._arb_scale(z))

    def backward_error(self, z) -> float:
        """Normwise backward error ``|p(z)| / (max |c_k| sum |z|^k)``.

        Evaluated in ball arithmetic so huge ``z`` cannot overflow.
        """
        with workprec(self.bits):
            scale = self._arb_scale(z)
            if scale == 0:
                return 0.0
            return float((abs(self.to_acb_poly()(to_acb(z))) / scale).mid())

    def _arb_scale(self, z) -> arb:
        with workprec(self.bits):
            r = abs(to_acb(z)).mid()
            top = max((abs(c).mid() for c in self.coeffs), key=float, default=arb(0))
            return top * sum((r**k for k in range(len(self.coeffs))), arb(0))

    def derivative(self) -> "Polynomial":
        with workprec(self.bits):
            return Polynomial.from_acb_poly(self.to_acb_poly().derivative(), self.bits)

    def _binary(self, other, op):
        if not isinstance(other, Polynomial):
            other = Polynomial((to_acb(other),), self.bits)
        bits = max(self.bits, other.bits)
        with workprec(bits):
            return Polynomial.from_acb_poly(op(self.to_acb_poly(), other.to_acb_poly()), bits)

    def __add__(self, other):
        return self._binary(other, lambda p, q: p + q)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda p, q: p - q)

    def __rsub__(self, other):
        return self._binary(other, lambda p, q: q - p)

    def __mul__(self, other):
        return self._binary(other, lambda p, q: p * q)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scaled(-1)

    def to_complex(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]

    def to_pairs(self) -> list[list[str]]:
        return [acb_to_pair(c, self.bits) for c in self.coeffs]

    def roots(self, **kw) -> list:
        return poly_roots(self, **kw)


def poly_from_roots(roots, bits: int = 256) -> Polynomial:
    with workprec(bits):
        return Polynomial.from_acb_poly(acb_poly.from_roots([to_acb(r) for r in roots]), bits)


def fujiwara_bound(coeffs: list[complex]) -> float:
    """Fujiwara's upper bound on the moduli of the roots."""
    d = len(coeffs) - 1
    lead = abs(coeffs[d])
    terms = []
    for k in range(d):
        a = abs(coeffs[d - 1 - k]) / lead
        if a == 0:
            continue
        power = k + 1
        if k == d - 1:
            a /= 2
        terms.append(a ** (1.0 / power))
    return 2 * max(terms) if terms else 1.0


def _log_abs(c: acb) -> float:
    m = c.mid()
    if m.is_zero():
        return -math.inf
    return float(abs(m).log().mid())


def _initial_points(p: Polynomial, d: int) -> list:
    """Points on circles chosen from the Newton polygon of ``log|c_k|``.

    Falls back to a single circle of the Fujiwara radius when the polygon is
    degenerate; either way the angles are offset to avoid real-axis symmetry.
    """
    logs = [_log_abs(c) for c in p.coeffs[: d + 1]]
    # upper convex hull of (k, log|c_k|)
    pts = [(k, v) for k, v in enumerate(logs) if v > -math.inf]
    hull = []
    for q in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (q[1] - y1) - (q[0] - x1) * (y2 - y1) >= 0:
                hull.pop()
            else:
                break
        hull.append(q)
    out = []
    if len(hull) < 2 or hull[0][0] != 0 or hull[-1][0] != d:
        scale = max(abs(complex(c)) for c in p.coeffs[: d + 1]) or 1.0
        cs = [complex(c) / scale for c in p.coeffs[: d + 1]]
        try:
            r = fujiwara_bound(cs) / 2
        except (OverflowError, ZeroDivisionError):
            r = 1.0
        radii = [(d, r)]
    else:
        radii = []
        for (k1, v1), (k2, v2) in zip(hull[:-1], hull[1:]):
            radii.append((k2 - k1, math.exp((v1 - v2) / (k2 - k1))))
    for c, (count, r) in enumerate(radii):
        sigma = 0.7 + 1.3 * c
        for j in range(count):
            ang = 2 * math.pi * j / count + sigma
            out.append(acb(r * math.cos(ang), r * math.sin(ang)))
    return out


def poly_roots(p: Polynomial, max_iter: int | None = None, tol_bits: int | None = None,
               strict: bool = True, initial=None, degree: int | None = None) -> list:
    """All roots of ``p`` (with multiplicity) by Ehrlich-Aberth iteration.

    Iteration runs at the polynomial's working precision with Gauss-Seidel
    updates.  A root is frozen once its correction falls below
    ``2^(-tol_bits)`` relative to ``max(1, |z|)`` or once ``|p(z)|`` is at
    rounding level.  After convergence every
    root is checked against the backward-error criterion
    ``|p(z)| / (max|c_k| sum|z|^k) < 2^(-bits/2)``.

    Above 384 bits the iteration is first run to convergence at a third of
    the precision and then polished at full precision, which needs only a
    few sweeps.

    ``degree`` overrides the numerical degree (leading coefficients below
    ``2^(-bits/2)`` of the largest one are otherwise dropped).

    Raises :class:`RootFinderError` (carrying the last iterate) when the
    iteration cap ``200 * degree`` is hit and ``strict`` is set.
    """
    if degree is None:
        q = p.trimmed()
        d = q.degree
    else:
        d = degree
        q = Polynomial(p.coeffs[: d + 1], p.bits)
        if len(q.coeffs) != d + 1 or q.coeffs[d].is_zero():
            raise InvalidInputError(f"polynomial has no nonzero coefficient of degree {d}")
    if d < 1:
        raise InvalidInputError("poly_roots needs degree >= 1")
    bits = q.bits
    if initial is None and bits > 384:
        low = Polynomial(q.coeffs, max(128, bits // 3))
        try:
            initial = poly_roots(low, strict=False, degree=d)
        except RootFinderError as exc:  # pragma: no cover - fall back to a cold start
            initial = exc.roots
    tol_bits = int(0.9 * bits) if tol_bits is None else tol_bits
    eps = 2.0 ** (-tol_bits)
    max_iter = 200 * d if max_iter is None else max_iter
    with workprec(bits + 16):
        lead = q.coeffs[d]
        mon = acb_poly([c / lead for c in q.coeffs[: d + 1]])
        dmon = mon.derivative()
        amon = acb_poly([abs(c) for c in mon.coeffs()])
        noise = arb(2) ** (-(bits - 8))
        z = [to_acb(r) for r in initial] if initial is not None else _initial_points(q, d)
        if len(z) != d:
            raise InvalidInputError(f"{len(z)} initial points for degree {d}")
        done = [False] * d
        it = 0
        while it < max_iter and not all(done):
            it += 1
            for i in range(d):
                if done[i]:
                    continue
                zi = z[i]
                pv = mon(zi).mid()
                if pv.is_zero() or abs(pv) < noise * amon(acb(abs(zi))).real:
                    done[i] = True
                    continue
                dv = dmon(zi).mid()
                if dv.is_zero():
                    z[i] = (zi * (1 + _NUDGE) + _NUDGE).mid()
                    continue
                ratio = (pv / dv).mid()
                s = acb(0)
                for j in range(d):
                    if j != i:
                        diff = zi - z[j]
                        if not diff.is_zero():
                            s += 1 / diff
                w = (ratio / (1 - ratio * s.mid())).mid()
                if not w.is_finite():
                    w = ratio
                z[i] = (zi - w).mid()
                if absf(w) <= eps * max(1.0, absf(z[i])):
                    done[i] = True
        roots = z
    if not all(done):
        if strict:
            raise RootFinderError(
                f"Aberth iteration did not converge after {it} sweeps "
                f"({done.count(False)} of {d} roots unconverged)",
                roots=roots, converged=done)
    thr = tiny(bits)
    bad = []
    for i, r in enumerate(roots):
        if q.backward_error(r) > thr:
            bad.append(i)
    if bad and strict:
        raise RootFinderError(f"{len(bad)} roots fail the backward-error check",
                              roots=roots, converged=[i not in bad for i in range(d)])
    return roots
