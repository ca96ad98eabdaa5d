"""Truncated power series at configurable precision and germs of the model class.

A :class:`PowerSeries` holds ``coeffs[k]`` multiplying ``t**k`` where
``t = 1/z`` for expansions at infinity and ``t = zeta`` for expansions at a
finite point.  The model-class functions are

.. math::

    f(z) = \\prod_j (A_j - 1/\\varphi(z))^{\\alpha_j},
    \\qquad \\varphi(z) = z + (z^2 - 1)^{1/2},

with the branch of the root chosen so that ``(z^2-1)^{1/2}/z -> 1`` at
infinity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from flint import acb, acb_poly

from ._precision import PrecisionConfig, acb_to_pair, pair_to_acb, to_acb, workprec
from .errors import InvalidInputError, SingularSeriesError

__all__ = [
    "AT_INFINITY",
    "AT_ZERO",
    "PowerSeries",
    "SZParams",
    "ps_mul",
    "ps_add",
    "ps_scale",
    "ps_inv",
    "ps_log",
    "ps_exp",
    "ps_pow",
    "inverse_joukowski_series",
    "germ_at_infinity",
    "germ_at_zero",
    "germ_to_json",
    "germ_from_json",
    "default_order",
]

AT_INFINITY = "infinity"
AT_ZERO = "zero"
_CENTERS = (AT_INFINITY, AT_ZERO)


def default_order(n: int) -> int:
    """Truncation order used for order-``n`` Hermite-Pade computations."""
    return 4 * int(n) + 8


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple
    center: str = AT_ZERO
    bits: int = 256

    def __post_init__(self):
        if self.center not in _CENTERS:
            raise InvalidInputError(f"unknown center {self.center!r}")
        PrecisionConfig(self.bits)
        if len(self.coeffs) == 0:
            raise InvalidInputError("a series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(to_acb(c).mid() for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    @classmethod
    def constant(cls, c, order, center=AT_ZERO, bits=256):
        return cls((to_acb(c),) + (acb(0),) * order, center, bits)

    @classmethod
    def variable(cls, order, center=AT_ZERO, bits=256):
        """The series ``t`` itself."""
        if order < 1:
            raise InvalidInputError("order must be >= 1")
        return cls((acb(0), acb(1)) + (acb(0),) * (order - 1), center, bits)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1], self.center, self.bits)

    def with_bits(self, bits: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, self.center, bits)

    def to_poly(self) -> acb_poly:
        return acb_poly(list(self.coeffs))

    def partial_sum(self, n: int) -> list:
        """Coefficients ``c_0..c_n`` (the degree-``n`` partial sum)."""
        if n > self.order:
            raise InvalidInputError(f"partial sum of degree {n} needs order >= {n}")
        return list(self.coeffs[: n + 1])

    def evaluate(self, t) -> acb:
        with workprec(self.bits):
            return self.to_poly()(to_acb(t))

    def to_complex(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return ps_mul(self, other)
        return ps_scale(self, other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, PowerSeries):
            return ps_add(self, other)
        return ps_add(self, PowerSeries.constant(other, self.order, self.center, self.bits))

    __radd__ = __add__

    def __neg__(self):
        return ps_scale(self, -1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PowerSeries) else -to_acb(other))

    def __rsub__(self, other):
        return (-self) + other


def _check_pair(x: PowerSeries, y: PowerSeries):
    if x.center != y.center:
        raise InvalidInputError(f"center mismatch: {x.center} vs {y.center}")


def _from_poly(p: acb_poly, order: int, center: str, bits: int) -> PowerSeries:
    c = p.coeffs()[: order + 1]
    c = c + [acb(0)] * (order + 1 - len(c))
    return PowerSeries(tuple(c), center, bits)


def _mullow(p: acb_poly, q: acb_poly, n: int) -> acb_poly:
    """Product of two polynomials truncated to ``n`` terms."""
    p = acb_poly(p.coeffs()[:n])
    q = acb_poly(q.coeffs()[:n])
    return acb_poly((p * q).coeffs()[:n])


def ps_mul(x: PowerSeries, y: PowerSeries) -> PowerSeries:
    _check_pair(x, y)
    order = min(x.order, y.order)
    bits = max(x.bits, y.bits)
    with workprec(bits):
        return _from_poly(_mullow(x.to_poly(), y.to_poly(), order + 1), order, x.center, bits)


def ps_add(x: PowerSeries, y: PowerSeries) -> PowerSeries:
    _check_pair(x, y)
    order = min(x.order, y.order)
    bits = max(x.bits, y.bits)
    with workprec(bits):
        return PowerSeries(tuple(x[k] + y[k] for k in range(order + 1)), x.center, bits)


def ps_scale(x: PowerSeries, c) -> PowerSeries:
    c = to_acb(c)
    with workprec(x.bits):
        return PowerSeries(tuple(c * a for a in x.coeffs), x.center, x.bits)


def _inv_poly(p: acb_poly, n: int) -> acb_poly:
    """Newton iteration y <- y (2 - p y) doubling the number of correct terms."""
    c0 = p.coeffs()[0] if p.length() else acb(0)
    y = acb_poly([1 / c0])
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = _mullow(p, y, k)
        e = acb_poly([-c for c in e.coeffs()])
        e = e + acb_poly([2])
        y = _mullow(y, e, k)
    return acb_poly([c.mid() for c in y.coeffs()[:n]])


def _require_unit(x: PowerSeries, what: str):
    c0 = x[0]
    if c0.is_zero() or float(abs(c0).upper()) == 0.0:
        raise SingularSeriesError(f"{what}: constant term vanishes")


def ps_inv(x: PowerSeries) -> PowerSeries:
    _require_unit(x, "ps_inv")
    with workprec(x.bits):
        return _from_poly(_inv_poly(x.to_poly(), x.order + 1), x.order, x.center, x.bits)


def _log_poly(p: acb_poly, n: int) -> acb_poly:
    """Series logarithm, principal branch at the constant term."""
    c0 = p.coeffs()[0]
    if n == 1:
        return acb_poly([c0.log()])
    dp = p.derivative()
    q = _mullow(dp, _inv_poly(p, n), n - 1)
    lq = q.integral()
    cs = lq.coeffs()[:n]
    cs = cs + [acb(0)] * (n - len(cs))
    cs[0] = c0.log()
    return acb_poly(cs)


def _exp_poly(p: acb_poly, n: int) -> acb_poly:
    """Newton iteration y <- y (1 + h - log y), started from exp(h_0)."""
    hs = p.coeffs()[:n]
    hs = hs + [acb(0)] * (n - len(hs))
    c0 = hs[0]
    h = acb_poly([acb(0)] + hs[1:])
    y = acb_poly([1])
    k = 1
    while k < n:
        k = min(2 * k, n)
        corr = acb_poly(h.coeffs()[:k]) - _log_poly(y, k) + acb_poly([1])
        y = _mullow(y, corr, k)
        y = acb_poly([c.mid() for c in y.coeffs()])
    e0 = c0.exp()
    return acb_poly([(e0 * c).mid() for c in y.coeffs()[:n]])


def ps_log(x: PowerSeries) -> PowerSeries:
    _require_unit(x, "ps_log")
    with workprec(x.bits):
        return _from_poly(_log_poly(x.to_poly(), x.order + 1), x.order, x.center, x.bits)


def ps_exp(x: PowerSeries) -> PowerSeries:
    with workprec(x.bits):
        return _from_poly(_exp_poly(x.to_poly(), x.order + 1), x.order, x.center, x.bits)


def ps_pow(x: PowerSeries, alpha) -> PowerSeries:
    """``x**alpha = exp(alpha log x)`` with the principal log of ``x[0]``."""
    _require_unit(x, "ps_pow")
    alpha = to_acb(alpha)
    if alpha.is_zero():
        return PowerSeries.constant(1, x.order, x.center, x.bits)
    n = x.order + 1
    with workprec(x.bits):
        lg = _log_poly(x.to_poly(), n)
        lg = acb_poly([alpha * c for c in lg.coeffs()])
        return _from_poly(_exp_poly(lg, n), x.order, x.center, x.bits)


@dataclass(frozen=True)
class SZParams:
    """Parameters of ``f = prod_j (A_j - 1/phi)^{alpha_j}``.

    ``a`` and ``b`` are the parameters of the change of variable
    ``z = (1/zeta - a) i / b`` used for germs expanded at ``zeta = 0``.
    """

    A_list: tuple
    alpha_list: tuple
    a: float | None = None
    b: float | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        A = tuple(complex(x) for x in self.A_list)
        alphas = tuple(self.alpha_list)
        object.__setattr__(self, "A_list", A)
        object.__setattr__(self, "alpha_list", alphas)
        if len(A) == 0 or len(A) != len(alphas):
            raise InvalidInputError("A_list and alpha_list must be nonempty and of equal length")
        for Aj in A:
            if not abs(Aj) > 1:
                raise InvalidInputError(f"|A_j| must exceed 1, got {Aj}")
        for i in range(len(A)):
            for j in range(i):
                if A[i] == A[j]:
                    raise InvalidInputError("A_j must be pairwise distinct")
        total = sum(complex(al) for al in alphas)
        if abs(total.imag) > 1e-12 or abs(total.real - round(total.real)) > 1e-12:
            raise InvalidInputError(f"sum of exponents must be an integer, got {total}")
        for al in alphas:
            c = complex(al)
            if abs(c.imag) < 1e-15 and abs(c.real - round(c.real)) < 1e-15:
                raise InvalidInputError(f"exponents must not be integers, got {al}")
        for v in (self.a, self.b):
            if v is not None and not float(v) == float(v):
                raise InvalidInputError("a, b must be real numbers")

    @classmethod
    def real_case(cls, A, B):
        """``f = [(A - 1/phi)(B - 1/phi)]^{-1/2}`` with real ``1 < A < B``."""
        A, B = float(A), float(B)
        if not 1 < A < B:
            raise InvalidInputError("the real case needs 1 < A < B")
        return cls((A, B), (-0.5, -0.5))

    @classmethod
    def symmetric(cls, A1, A2, a, b, name=""):
        """Exponent -1/2 pair ``A = A1 + i A2``, ``B = -A1 + i A2`` with a variable change."""
        if A1 == 0 or A2 == 0 or a == 0 or b == 0:
            raise InvalidInputError("A1, A2, a, b must be nonzero")
        return cls((complex(A1, A2), complex(-A1, A2)), (-0.5, -0.5), float(a), float(b), name)

    @property
    def is_real(self) -> bool:
        return all(Aj.imag == 0 for Aj in self.A_list)

    def branch_points(self) -> list[complex]:
        """Projections ``+-1`` and ``a_j = (A_j + 1/A_j)/2`` in the z-plane."""
        return [-1.0 + 0j, 1.0 + 0j] + [(Aj + 1 / Aj) / 2 for Aj in self.A_list]

    def interval2(self) -> tuple[float, float]:
        """The interval ``[a, b]`` spanned by the second-sheet branch points (real case)."""
        pts = sorted(((Aj + 1 / Aj) / 2).real for Aj in self.A_list)
        return pts[0], pts[-1]

    def z_of_zeta(self, zeta: complex) -> complex:
        self._need_ab()
        return (1 / zeta - self.a) * 1j / self.b

    def zeta_of_z(self, z: complex) -> complex:
        self._need_ab()
        return 1 / (self.a - 1j * self.b * z)

    def zeta_branch_points(self) -> list[complex]:
        """Branch points in the zeta-plane: images of ``+-1`` then of the ``a_j``."""
        return [self.zeta_of_z(w) for w in self.branch_points()]

    def _need_ab(self):
        if self.a is None or self.b is None:
            raise InvalidInputError("this operation needs the variable-change parameters a, b")
        if self.a == 0 or self.b == 0:
            raise InvalidInputError("a and b must be nonzero")


def inverse_joukowski_series(order: int, bits: int = 256) -> PowerSeries:
    """``1/phi(z) = (1 - sqrt(1 - t^2))/t`` in powers of ``t = 1/z``."""
    one_minus_t2 = [1, 0, -1] + [0] * max(order - 1, 0)
    root = ps_pow(PowerSeries(tuple(one_minus_t2[: order + 2]), AT_INFINITY, bits), 0.5)
    with workprec(bits):
        cs = [-root[k + 1] for k in range(order + 1)]
    return PowerSeries(tuple(cs), AT_INFINITY, bits)


def _product_of_powers(params: SZParams, s: PowerSeries) -> PowerSeries:
    out = None
    for Aj, al in zip(params.A_list, params.alpha_list):
        factor = ps_pow(to_acb(Aj) - s, to_acb(complex(al)))
        out = factor if out is None else ps_mul(out, factor)
    return out


def germ_at_infinity(params: SZParams, order: int, bits: int = 256) -> PowerSeries:
    """Coefficients ``c_0..c_N`` of ``f`` in powers of ``1/z``."""
    s = inverse_joukowski_series(order, bits)
    return _product_of_powers(params, s)


def germ_at_zero(params: SZParams, order: int, bits: int = 256) -> PowerSeries:
    """Germ at ``zeta = 0`` after ``z = (1/zeta - a) i / b``.

    With ``u = (1 - a zeta)/b`` one has ``1/phi = -i zeta / (u + sqrt(u^2 + zeta^2))``;
    the inner root is the branch equal to ``u(0) = 1/b`` at ``zeta = 0``.
    """
    params._need_ab()
    a, b = params.a, params.b
    N = order
    with workprec(bits):
        u = PowerSeries((acb(1) / b, acb(-a) / b) + (acb(0),) * max(N - 1, 0), AT_ZERO, bits)
        u = u.truncate(N)
        zeta2 = PowerSeries((0, 0, 1) + (0,) * max(N - 2, 0), AT_ZERO, bits).truncate(N)
        ratio = ps_mul(zeta2, ps_inv(ps_mul(u, u)))
        w = ps_mul(u, ps_pow(ratio + 1, acb(0.5)))
        zeta = PowerSeries.variable(max(N, 1), AT_ZERO, bits).truncate(N)
        s = ps_scale(ps_mul(zeta, ps_inv(u + w)), acb(0, -1))
    return _product_of_powers(params, s)


def germ_to_json(g: PowerSeries) -> str:
    doc = {
        "center": g.center,
        "bits": g.bits,
        "order": g.order,
        "coeffs": [acb_to_pair(c, g.bits) for c in g.coeffs],
    }
    return json.dumps(doc, indent=1)


def germ_from_json(text: str) -> PowerSeries:
    doc = json.loads(text)
    try:
        center, bits, order, coeffs = doc["center"], int(doc["bits"]), int(doc["order"]), doc["coeffs"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed germ document: {exc}") from exc
    if len(coeffs) != order + 1:
        raise InvalidInputError("coefficient count does not match order")
    with workprec(bits):
        return PowerSeries(tuple(pair_to_acb(p) for p in coeffs), center, bits)
