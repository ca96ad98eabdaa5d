"""Logarithmic and Green potentials for the two-interval geometry.

``Delta1 = [-1, 1]`` and ``Delta2 = [a, b]`` with ``1 < a < b``.  Potentials
follow the convention ``V^mu(z) = -int log|z - t| dmu(t)``.

Absolutely continuous measures on an interval ``[lo, hi]`` are held as
:class:`ChebyshevMeasure`: with ``x = m + r s`` (``s`` in ``[-1, 1]``),

    dmu = psi(s) ds / (pi sqrt(1 - s^2)),   psi = sum_k c_k T_k(s).

This form makes the logarithmic potential explicit, since
``-int log|s_z - s| T_k(s) ds/(pi sqrt(1-s^2))`` equals
``log 2 - log|phi(s_z)|`` for ``k = 0`` and ``Re phi(s_z)^(-k) / k`` for
``k >= 1``, where ``phi`` is the inverse Joukowski map with ``|phi| >= 1``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import BoundaryError, InvalidInputError, RefineGridError, SupportViolationError

__all__ = [
    "phi",
    "DiscreteMeasure",
    "ChebyshevMeasure",
    "EquilibriumSolution",
    "green_delta1",
    "robin_measure",
    "robin_density",
    "solve_equilibrium",
    "balayage_density",
    "balayage_delta1",
    "green_potential",
    "rate_functions",
    "pade_rate",
    "nuttall_u",
    "nuttall_constants",
    "measure_distance",
    "empirical_measure",
]

DELTA1, DELTA2, PLANE = "Delta1", "Delta2", "Plane"


def phi(z):
    """Inverse Joukowski map ``z + sqrt(z^2 - 1)`` with ``|phi| >= 1``."""
    z = np.asarray(z, dtype=complex)
    return z + np.sqrt(z - 1) * np.sqrt(z + 1)


def _phi_real(x):
    """``phi`` on ``|x| >= 1`` as a real array."""
    x = np.asarray(x, dtype=float)
    return x + np.sign(x) * np.sqrt(x * x - 1)


def green_delta1(z, pole=None):
    """Green function of the complement of ``[-1, 1]``.

    ``pole=None`` means the pole at infinity, ``log|phi(z)|``.  Otherwise
    ``log|(1 - phi(z) conj(phi(pole))) / (phi(z) - phi(pole))|``.  Points on the
    interval give 0; ``z == pole`` gives ``+inf``.
    """
    w = phi(z)
    if pole is None:
        return np.log(np.abs(w))
    w0 = phi(pole)
    with np.errstate(divide="ignore"):
        num = np.abs(1 - w * np.conj(w0))
        den = np.abs(w - w0)
        out = np.log(num) - np.log(den)
    return np.where(den == 0, np.inf, out)


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point set."""

    nodes: np.ndarray
    weights: np.ndarray
    support_tag: str = PLANE

    def __post_init__(self):
        nodes = np.asarray(self.nodes)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise InvalidInputError("nodes and weights must be 1-d arrays of equal length")
        if np.any(weights < 0):
            raise InvalidInputError("weights must be nonnegative")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def mass(self) -> float:
        return float(math.fsum(self.weights))

    def real_nodes(self, imag_tol: float = 1e-6) -> np.ndarray:
        nodes = np.asarray(self.nodes)
        if np.iscomplexobj(nodes):
            if nodes.size and np.max(np.abs(nodes.imag)) > imag_tol:
                raise SupportViolationError(
                    f"points up to |Im| = {np.max(np.abs(nodes.imag)):.3g} are off the real line")
            return nodes.real.astype(float)
        return nodes.astype(float)

    def cdf(self, x) -> np.ndarray:
        xs = self.real_nodes()
        order = np.argsort(xs)
        cum = np.concatenate([[0.0], np.cumsum(self.weights[order])])
        idx = np.searchsorted(xs[order], np.asarray(x, dtype=float), side="right")
        return cum[idx]

    def potential(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return -np.sum(self.weights * np.log(np.abs(z[..., None] - self.nodes)), axis=-1)

    def scaled(self, c: float) -> "DiscreteMeasure":
        return DiscreteMeasure(self.nodes, self.weights * c, self.support_tag)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "weight"])
        for x, wt in zip(self.nodes, self.weights):
            w.writerow([repr(float(np.real(x))) if not np.iscomplexobj(self.nodes) else repr(complex(x)),
                        repr(float(wt))])
        return buf.getvalue()


def empirical_measure(points, support_tag: str = PLANE, mass: float = 1.0) -> DiscreteMeasure:
    """Zero-counting measure of ``points`` scaled to total ``mass``."""
    pts = np.asarray([complex(p) for p in points])
    if pts.size == 0:
        raise InvalidInputError("empty point set")
    return DiscreteMeasure(pts, np.full(pts.size, mass / pts.size), support_tag)


@dataclass(frozen=True)
class ChebyshevMeasure:
    """``psi(s) ds / (pi sqrt(1 - s^2))`` on ``[lo, hi]`` with ``psi`` in Chebyshev form."""

    lo: float
    hi: float
    coeffs: np.ndarray
    support_tag: str = PLANE

    def __post_init__(self):
        if not self.hi > self.lo:
            raise InvalidInputError("empty interval")
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def radius(self) -> float:
        return 0.5 * (self.hi - self.lo)

    @property
    def mass(self) -> float:
        return float(self.coeffs[0])

    def to_s(self, x):
        return (np.asarray(x) - self.center) / self.radius

    def psi(self, x) -> np.ndarray:
        return C.chebval(self.to_s(np.asarray(x, dtype=float)), self.coeffs)

    def density(self, x) -> np.ndarray:
        """Density with respect to ``dx`` (inside the interval)."""
        s = self.to_s(np.asarray(x, dtype=float))
        return C.chebval(s, self.coeffs) / (np.pi * self.radius * np.sqrt(1 - s * s))

    def min_psi(self, samples: int = 2001) -> float:
        return float(np.min(C.chebval(np.cos(np.linspace(0, np.pi, samples)), self.coeffs)))

    def cdf(self, x) -> np.ndarray:
        s = np.clip(self.to_s(np.asarray(x, dtype=float)), -1.0, 1.0)
        th = np.arccos(s)
        k = np.arange(1, len(self.coeffs))
        out = self.coeffs[0] * (np.pi - th) / np.pi
        if k.size:
            out = out - np.sum(self.coeffs[1:] * np.sin(np.multiply.outer(th, k)) / (k * np.pi), axis=-1)
        return out

    def potential(self, z) -> np.ndarray:
        """``V^mu(z)``, valid on and off the interval."""
        z = np.asarray(z, dtype=complex)
        w = phi((z - self.center) / self.radius)
        c = self.coeffs
        out = c[0] * (-math.log(self.radius) + math.log(2) - np.log(np.abs(w)))
        inv = 1 / w
        pw = np.ones_like(w)
        for k in range(1, len(c)):
            pw = pw * inv
            out = out + c[k] * pw.real / k
        return out

    def nodes(self, M: int) -> tuple[np.ndarray, np.ndarray]:
        """Gauss-Chebyshev nodes on the interval and their weights ``psi / M``."""
        s = np.cos((2 * np.arange(M) + 1) * np.pi / (2 * M))
        return self.center + self.radius * s, C.chebval(s, self.coeffs) / M

    def integrate(self, fn, M: int = 512) -> float:
        x, w = self.nodes(M)
        return float(np.sum(w * fn(x)))

    def discretize(self, M: int = 512) -> DiscreteMeasure:
        x, w = self.nodes(M)
        return DiscreteMeasure(x, np.clip(w, 0.0, None), self.support_tag)

    def combine(self, other: "ChebyshevMeasure", a: float, b: float) -> "ChebyshevMeasure":
        """``a * self + b * other`` on a common interval."""
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise InvalidInputError("measures live on different intervals")
        n = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(n)
        c[: len(self.coeffs)] += a * self.coeffs
        c[: len(other.coeffs)] += b * other.coeffs
        return ChebyshevMeasure(self.lo, self.hi, c, self.support_tag)


def robin_density() -> ChebyshevMeasure:
    """Arcsine (Robin) measure of ``[-1, 1]``: ``psi = 1``."""
    return ChebyshevMeasure(-1.0, 1.0, np.array([1.0]), DELTA1)


def robin_measure(N: int) -> DiscreteMeasure:
    """Gauss-Chebyshev discretisation of the arcsine measure."""
    if N < 2:
        raise InvalidInputError("robin_measure needs N >= 2")
    return robin_density().discretize(N)


# ---------------------------------------------------------------------------
# balayage onto Delta1


def _sqrt_t2m1(t):
    """``sqrt(t^2 - 1)`` with the branch ``~ t`` at infinity."""
    t = np.asarray(t, dtype=complex)
    return np.sqrt(t - 1) * np.sqrt(t + 1)


def balayage_density(mu, deg: int = 128) -> ChebyshevMeasure:
    """Balayage of ``mu`` onto ``[-1, 1]``.

    The harmonic measure of the complement of ``[-1, 1]`` at ``t`` has
    ``psi_t(x) = Re[sqrt(t^2 - 1) / (t - x)]`` against the arcsine weight;
    ``psi`` of the balayage is its ``mu``-average, interpolated at ``deg + 1``
    Chebyshev points.

    ``mu`` is a :class:`DiscreteMeasure` or a :class:`ChebyshevMeasure`
    (integrated by Gauss-Chebyshev quadrature).
    """
    if isinstance(mu, ChebyshevMeasure):
        t, w = mu.nodes(max(256, 4 * len(mu.coeffs)))
    else:
        t, w = np.asarray(mu.nodes, dtype=complex), mu.weights
    t = np.asarray(t, dtype=complex)
    if np.any((np.abs(t.imag) < 1e-14) & (np.abs(t.real) <= 1)):
        raise InvalidInputError("balayage onto [-1, 1] of a measure charging [-1, 1]")
    q = _sqrt_t2m1(t)

    def psi(x):
        return np.sum(w * (q / (t - x[:, None])).real, axis=1)

    return ChebyshevMeasure(-1.0, 1.0, C.chebinterpolate(psi, deg), DELTA1)


def balayage_delta1(mu, N: int = 512, deg: int = 128) -> DiscreteMeasure:
    return balayage_density(mu, deg).discretize(N)


# ---------------------------------------------------------------------------
# equilibrium problem


@dataclass(frozen=True)
class EquilibriumSolution:
    """Equilibrium measure ``lam`` on ``[a, b]`` and its derived measures.

    ``lam1`` is the balayage of ``lam`` onto ``[-1, 1]`` and
    ``lam2 = (2 tau + lam1) / 3``.  ``lambda_``, ``lambda1`` and ``lambda2``
    give their Gauss-Chebyshev discretisations.
    """

    a: float
    b: float
    lam: ChebyshevMeasure
    lam1: ChebyshevMeasure
    lam2: ChebyshevMeasure
    gamma: float
    residual: float
    N: int
    nodes_kind: str = "chebyshev"
    green_const: float = field(default=0.0, repr=False)

    @property
    def lambda_(self) -> DiscreteMeasure:
        return self.lam.discretize(max(self.N, 256))

    @property
    def lambda1(self) -> DiscreteMeasure:
        return self.lam1.discretize(max(self.N, 256))

    @property
    def lambda2(self) -> DiscreteMeasure:
        return self.lam2.discretize(max(self.N, 256))

    def V(self, z):
        return self.lam.potential(z)

    def V1(self, z):
        return self.lam1.potential(z)

    def V2(self, z):
        return self.lam2.potential(z)

    def G(self, z):
        """Green potential ``G^lam(z)``; zero on ``[-1, 1]``."""
        return self.V(z) - self.V1(z) + self.green_const

    def equilibrium_defect(self, x) -> np.ndarray:
        """``V + G + g(., inf) - gamma`` at ``x``."""
        x = np.asarray(x)
        return self.V(x) + self.G(x) + green_delta1(x) - self.gamma

    def to_json(self) -> str:
        return json.dumps({"a": repr(self.a), "b": repr(self.b), "gamma": repr(self.gamma),
                           "residual": repr(self.residual), "N": self.N})


def _green_smooth(x, t):
    """``g(x, t) + log|x - t|`` for ``x, t`` in ``(1, inf)``, on a grid ``x[:, None], t[None, :]``."""
    wx, wt = np.sqrt(x * x - 1), np.sqrt(t * t - 1)
    px, pt = x + wx, t + wt
    dd = 1 + (x + t) / (wx + wt)  # (phi(x) - phi(t)) / (x - t), free of cancellation
    return np.log(px * pt - 1) - np.log(dd)


def _collocation_points(N: int, kind: str) -> np.ndarray:
    if kind == "chebyshev":
        return np.cos((2 * np.arange(N) + 1) * np.pi / (2 * N))
    if kind == "legendre":
        return np.polynomial.legendre.leggauss(N)[0]
    raise InvalidInputError(f"unknown node family {kind!r}")


def solve_equilibrium(a: float, b: float, N: int = 64, nodes: str = "chebyshev",
                      quad: int | None = None, cond_limit: float = 1e13) -> EquilibriumSolution:
    """Solve ``V^lam + G^lam + g(., inf) = gamma`` on ``[a, b]`` for a unit measure ``lam``.

    Parameters
    ----------
    a, b : float
        ``1 < a < b``.
    N : int
        Number of Chebyshev coefficients of ``psi`` (including ``c_0 = 1``)
        and of collocation points.
    nodes : {"chebyshev", "legendre"}
        Collocation family.
    quad : int, optional
        Gauss-Chebyshev nodes for the smooth part of the Green kernel.

    Notes
    -----
    The Green kernel splits as ``-log|x - t| + H(x, t)`` with ``H`` smooth, so
    the full kernel is ``-2 log|x - t| + H``.  The log part is integrated
    exactly against each ``T_k``; ``H`` by quadrature.  Unknowns are
    ``c_1 .. c_(N-1)`` and ``gamma``.
    """
    a, b = float(a), float(b)
    if not (1 < a < b):
        raise InvalidInputError(f"need 1 < a < b, got a={a}, b={b}")
    if N < 4:
        raise InvalidInputError("N must be at least 4")
    M = quad or max(2 * N, 128)
    m, r = 0.5 * (a + b), 0.5 * (b - a)
    sx = _collocation_points(N, nodes)
    x = m + r * sx
    sq = np.cos((2 * np.arange(M) + 1) * np.pi / (2 * M))
    tq = m + r * sq
    H = _green_smooth(x[:, None], tq[None, :])  # N x M
    Tq = C.chebvander(sq, N - 1)  # M x N
    Hint = H @ Tq / M  # int H(x, t) T_k(s) darcsine(s)
    k = np.arange(1, N)
    Tx = C.chebvander(sx, N - 1)
    # log part, k >= 1:  2 * T_k(s_x) / k ; k = 0 gives 2 (log 2 - log r)
    A = np.zeros((N, N))
    A[:, : N - 1] = 2 * Tx[:, 1:] / k + Hint[:, 1:]
    A[:, N - 1] = -1.0  # -gamma
    rhs = -(2 * (math.log(2) - math.log(r)) + Hint[:, 0] + np.log(_phi_real(x)))
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > cond_limit:
        raise RefineGridError(f"collocation matrix condition {cond:.3g} exceeds {cond_limit:.3g}; "
                              f"change N={N} or the node family")
    sol = np.linalg.solve(A, rhs)
    coeffs = np.concatenate([[1.0], sol[: N - 1]])
    gamma = float(sol[N - 1])
    lam = ChebyshevMeasure(a, b, coeffs, DELTA2)
    lam1 = balayage_density(lam, deg=max(64, N))
    lam2 = robin_density().combine(lam1, 2 / 3, 1 / 3)
    gconst = lam.integrate(lambda t: np.log(_phi_real(t)), M)
    out = EquilibriumSolution(a, b, lam, lam1, lam2, gamma, 0.0, N, nodes, gconst)
    check = m + r * np.cos(np.linspace(0, np.pi, 4 * N + 3)[1:-1])
    residual = float(np.max(np.abs(out.equilibrium_defect(check))))
    return EquilibriumSolution(a, b, lam, lam1, lam2, gamma, residual, N, nodes, gconst)


def green_potential(sol: EquilibriumSolution, z, M: int = 2048) -> np.ndarray:
    """``G^lam(z)`` by direct quadrature of ``g(z, t)`` (independent of the balayage route)."""
    z = np.asarray(z, dtype=complex)
    t, w = sol.lam.nodes(M)
    return np.sum(w * green_delta1(z[..., None], t), axis=-1)


# ---------------------------------------------------------------------------
# rates and the Nuttall function


def _off_supports(sol: EquilibriumSolution, z, tol: float = 1e-12):
    z = np.asarray(z, dtype=complex)
    on1 = (np.abs(z.imag) <= tol) & (np.abs(z.real) <= 1)
    on2 = (np.abs(z.imag) <= tol) & (z.real >= sol.a) & (z.real <= sol.b)
    if np.any(on1 | on2):
        raise BoundaryError("point lies on [-1, 1] or [a, b]")
    return z


def pade_rate(z) -> np.ndarray:
    """Diagonal Pade rate ``exp(-2 g(z, inf))``."""
    return np.exp(-2 * green_delta1(z))


def rate_functions(sol: EquilibriumSolution, z):
    """``(delta1, delta2, delta3)`` at ``z``.

    ``delta1 = exp(-2(G + 2g))``, ``delta2 = exp(2(V + G + g - gamma))``,
    ``delta3 = exp(-2G)`` with ``G = G^lam``, ``g = g(., inf)``, ``V = V^lam``.

    ``delta1`` is the rate of ``P_3n,1 / Q_3n``.  Its exponent is fixed by
    the behaviour at infinity: ``deg Q_3n = 3n`` and ``Q_3n f - P_3n,1 =
    O(z^(-n-1))`` give an error of order ``|z|^(-4n)``, so ``log delta1``
    must grow like ``-4 log|z|``; ``exp(-(G + 2g))`` would only give
    ``-2 log|z|``.
    """
    z = _off_supports(sol, z)
    G = sol.G(z)
    g = green_delta1(z)
    V = sol.V(z)
    return np.exp(-2 * (G + 2 * g)), np.exp(2 * (V + G + g - sol.gamma)), np.exp(-2 * G)


def nuttall_constants(sol: EquilibriumSolution) -> tuple[float, float, float]:
    """``(c1, c2, c3)`` making ``u`` continuous across the cuts.

    Matching is done at the midpoints of ``[-1, 1]`` (sheets 1-2 and 3-4) and
    ``[a, b]`` (sheets 2-3).
    """
    x1 = np.array([0.0])
    x2 = np.array([0.5 * (sol.a + sol.b)])
    c1 = float((6 * sol.V2(x1) - 2 * sol.V(x1))[0]) / 2
    c2 = float((4 * sol.V(x2) - 3 * sol.V2(x2) - sol.V1(x2))[0])
    c3 = float((2 * sol.V1(x1) - 2 * sol.V(x1))[0]) / 2
    return c1, c2, c3


def nuttall_u(sol: EquilibriumSolution, sheet: int, z, check: bool = True):
    """Sheet value of the harmonic function ``u`` on the four-sheeted surface.

    ``u1 = 3V2``, ``u2 = 2V - 3V2 + 2c1``, ``u3 = V1 - 2V + 2c1 + c2``,
    ``u4 = -V1 + 2c1 + c2 + 2c3``.
    """
    if sheet not in (1, 2, 3, 4):
        raise InvalidInputError("sheet must be 1, 2, 3 or 4")
    if check:
        z = _off_supports(sol, z)
    c1, c2, c3 = nuttall_constants(sol)
    if sheet == 1:
        return 3 * sol.V2(z)
    if sheet == 2:
        return 2 * sol.V(z) - 3 * sol.V2(z) + 2 * c1
    if sheet == 3:
        return sol.V1(z) - 2 * sol.V(z) + 2 * c1 + c2
    return -sol.V1(z) + 2 * c1 + c2 + 2 * c3


# ---------------------------------------------------------------------------
# comparison of measures


def measure_distance(emp: DiscreteMeasure, target, imag_tol: float = 1e-6, support_tol: float = 1e-6) -> float:
    """Kolmogorov (sup-CDF) distance between an empirical measure and a target.

    Both are normalised to unit mass.  ``target`` may be a
    :class:`ChebyshevMeasure` (continuous CDF) or a :class:`DiscreteMeasure`.
    Empirical points must be real to ``imag_tol`` and, for a continuous
    target, lie in its interval up to ``support_tol``.
    """
    xs = emp.real_nodes(imag_tol)
    order = np.argsort(xs)
    xs, w = xs[order], emp.weights[order] / emp.mass
    upper = np.cumsum(w)
    lower = upper - w
    if isinstance(target, ChebyshevMeasure):
        if xs.size and (xs[0] < target.lo - support_tol or xs[-1] > target.hi + support_tol):
            raise SupportViolationError(
                f"empirical points span [{xs[0]:.6g}, {xs[-1]:.6g}] outside [{target.lo}, {target.hi}]")
        F = target.cdf(xs) / target.mass
        return float(np.max(np.maximum(np.abs(F - upper), np.abs(F - lower))))
    ts = target.real_nodes(imag_tol)
    tw = target.weights / target.mass
    grid = np.union1d(xs, ts)
    Fe = np.concatenate([[0.0], upper])[np.searchsorted(xs, grid, side="right")]
    to = np.argsort(ts)
    Ft = np.concatenate([[0.0], np.cumsum(tw[to])])[np.searchsorted(ts[to], grid, side="right")]
    Fe_l = np.concatenate([[0.0], upper])[np.searchsorted(xs, grid, side="left")]
    Ft_l = np.concatenate([[0.0], np.cumsum(tw[to])])[np.searchsorted(ts[to], grid, side="left")]
    return float(max(np.max(np.abs(Fe - Ft)), np.max(np.abs(Fe_l - Ft_l))))
