"""Weierstrass continuation: a closed-form oracle and the Hermite-Pade route.

The oracle follows the germ at ``zeta = 0`` of ``f(z(zeta))`` with
``z = (1/zeta - a) i / b`` along a polyline.  With ``u = (1 - a zeta)/b`` one
has ``1/phi = -i zeta / (u + w)`` where ``w^2 = u^2 + zeta^2``, and
``f = exp(sum_j alpha_j log(A_j - 1/phi))``.  Along the path ``w`` and every
logarithm are carried by continuity: at each step the candidate nearest to
the previous value is taken.

The approximant route reads sheet changes off zero clusters.  Each family of
zeros is chained into a polyline and intersected with the path; a crossing
changes the sheet only when the arc is a boundary of the current sheet.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .approximants import cross_median, eval_ratio, recover_three_sheets, recover_two_sheets, three_sheet_system, two_sheet_system
from .errors import (BoundaryError, InsufficientClusterError, InvalidInputError, InvalidPathError, SheetUnreachableError,
                     StepRefinementError)
from .hp_core import pade_pair
from .potential import phi
from .series import PowerSeries, SZParams

__all__ = [
    "FAMILIES",
    "SCHEMES",
    "PathSpec",
    "ClusterArc",
    "Crossing",
    "ContinuationResult",
    "oracle_continue",
    "oracle_track",
    "oracle_sheet_values_real",
    "convergence_radius",
    "extract_cluster",
    "crossings",
    "scheme_clusters",
    "track_sheets",
    "continue_via_hp",
]

FAMILIES = ("StahlS", "E2", "F2", "E", "F", "Eprime")
SCHEMES = ("Pade", "TwoSheet", "ThreeSheet")

# family -> (sheet on one side, sheet on the other); a crossing is seen only from these two sheets
_GLUING = {
    "StahlS": (1, 2),
    "E2": (1, 2),
    "F2": (2, 3),
    "E": (1, 2),
    "F": (2, 3),
    "Eprime": (3, 4),
}
_REACH = {"Pade": 1, "TwoSheet": 2, "ThreeSheet": 3}
_AGREE = 1e-10
_MIN_STEP_RATIO = 2.0 ** -16


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class PathSpec:
    """Polyline ``waypoints`` traversed with steps no longer than ``max_step``."""

    waypoints: tuple
    max_step: float = 0.05

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        if len(pts) < 1:
            raise InvalidPathError("a path needs at least one waypoint")
        if not self.max_step > 0:
            raise InvalidPathError("max_step must be positive")
        for p, q in zip(pts[:-1], pts[1:]):
            if p == q:
                raise InvalidPathError(f"consecutive waypoints coincide at {p}")

    @classmethod
    def segment(cls, start, end, max_step: float = 0.05) -> "PathSpec":
        if complex(start) == complex(end):
            return cls((start,), max_step)
        return cls((start, end), max_step)

    @property
    def start(self) -> complex:
        return self.waypoints[0]

    @property
    def end(self) -> complex:
        return self.waypoints[-1]

    @property
    def length(self) -> float:
        return sum(abs(q - p) for p, q in zip(self.waypoints[:-1], self.waypoints[1:]))

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(reversed(self.waypoints)), self.max_step)

    def clearance(self, point: complex) -> float:
        """Distance from ``point`` to the polyline."""
        pts = self.waypoints
        if len(pts) == 1:
            return abs(point - pts[0])
        return min(_point_segment_distance(point, p, q) for p, q in zip(pts[:-1], pts[1:]))

    def samples(self, h: float) -> list[complex]:
        """Points along the path with spacing at most ``h`` (waypoints included)."""
        pts = self.waypoints
        out = [pts[0]]
        for p, q in zip(pts[:-1], pts[1:]):
            k = max(1, math.ceil(abs(q - p) / h))
            out.extend(p + (q - p) * (j / k) for j in range(1, k + 1))
        return out


def _point_segment_distance(z: complex, p: complex, q: complex) -> float:
    d = q - p
    t = ((z - p) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (p + t * d))


# ---------------------------------------------------------------------------
# oracle


class _Coarse(Exception):
    """Internal: a step was too long to decide a branch."""


@dataclass
class _State:
    w: complex
    logs: list


def _start_state(params: SZParams) -> _State:
    return _State(1 / params.b + 0j, [cmath.log(Aj) for Aj in params.A_list])


def _advance(params: SZParams, st: _State, zeta: complex) -> None:
    a, b = params.a, params.b
    u = (1 - a * zeta) / b
    w = cmath.sqrt(u * u + zeta * zeta)
    d_plus, d_minus = abs(w - st.w), abs(w + st.w)
    if min(d_plus, d_minus) > 0.25 * max(abs(w), 1e-300):
        raise _Coarse
    st.w = w if d_plus <= d_minus else -w
    den = u + st.w
    if den == 0:
        # only at zeta = 0 off the first sheet, where 1/phi has a pole
        raise InvalidPathError(f"the path meets 1/phi = infinity at {zeta} (zeta = 0 off the first sheet)")
    s = -1j * zeta / den
    for j, Aj in enumerate(params.A_list):
        z = Aj - s
        if z == 0:
            raise _Coarse
        L = cmath.log(z)
        k = round((st.logs[j].imag - L.imag) / (2 * math.pi))
        L = complex(L.real, L.imag + 2 * math.pi * k)
        if abs(L.imag - st.logs[j].imag) > math.pi / 4:
            raise _Coarse
        st.logs[j] = L


def _value(params: SZParams, st: _State) -> complex:
    return cmath.exp(sum(complex(al) * L for al, L in zip(params.alpha_list, st.logs)))


def _check_path(params: SZParams, path: PathSpec) -> None:
    if path.start != 0:
        raise InvalidPathError(f"the path must start at the expansion point 0, not {path.start}")
    for bp in params.zeta_branch_points():
        c = path.clearance(bp)
        if c < path.max_step:
            raise InvalidPathError(f"path passes within {c:.3g} of the branch point {bp:.6g} "
                                   f"(clearance must be at least max_step = {path.max_step:g})")


def _run(params: SZParams, path: PathSpec, h: float) -> tuple[complex, _State]:
    st = _start_state(params)
    for zeta in path.samples(h)[1:]:
        _advance(params, st, zeta)
    return _value(params, st), st


def _refine(params: SZParams, path: PathSpec) -> tuple[complex, _State]:
    if len(path.waypoints) == 1:
        st = _start_state(params)
        return _value(params, st), st
    h, prev = path.max_step, None
    while h >= path.max_step * _MIN_STEP_RATIO:
        try:
            val, st = _run(params, path, h)
        except _Coarse:
            prev, h = None, h / 2
            continue
        if prev is not None and abs(val - prev) <= _AGREE * max(1.0, abs(val)):
            return val, st
        prev, h = val, h / 2
    raise StepRefinementError(f"branch tracking did not settle down to step {h:.3g}")


def oracle_track(params: SZParams, path: PathSpec) -> tuple[complex, complex, list]:
    """Endpoint value together with the tracked inner root ``w`` and logarithms."""
    params._need_ab()
    _check_path(params, path)
    val, st = _refine(params, path)
    return val, st.w, st.logs


def oracle_continue(params: SZParams, path: PathSpec) -> complex:
    """Value at the end of ``path`` of the continuation of the germ at ``zeta = 0``.

    The step is halved from ``path.max_step`` until two successive
    refinements agree to ``1e-10``, but not below ``2^-16 max_step``.  Raises :class:`InvalidPathError` if the
    path does not start at 0 or comes closer than ``max_step`` to a branch
    point, and :class:`StepRefinementError` if the branch choice never
    stabilises.
    """
    return oracle_track(params, path)[0]


def convergence_radius(params: SZParams) -> float:
    """Radius of convergence of the germ at ``zeta = 0``.

    The images of ``z = +-1`` are always singular.  The images of the other
    branch points are singular for the germ only if the radial continuation
    arrives there on the branch where ``A_j - 1/phi`` vanishes.
    """
    params._need_ab()
    pts = params.zeta_branch_points()
    radius = min(abs(pts[0]), abs(pts[1]))
    for j, bp in enumerate(pts[2:]):
        r = abs(bp)
        if r >= radius:
            continue
        end = bp * (1 - 1e-6)
        path = PathSpec.segment(0, end, max_step=min(0.05 * r, 0.5 * abs(pts[0] - end), 0.5 * abs(pts[1] - end)))
        w = _refine(params, path)[1].w
        u = (1 - params.a * end) / params.b
        s = -1j * end / (u + w)
        if abs(params.A_list[j] - s) < 1e-3 * abs(params.A_list[j]):
            radius = r
    return radius


def oracle_sheet_values_real(params: SZParams, z) -> tuple[complex, complex, complex, complex]:
    """The four branch values at ``z`` for ``[(A - 1/phi)(B - 1/phi)]^(-1/2)``.

    Sheet 1 uses ``1/phi``, sheet 2 swaps ``phi`` and ``1/phi``; sheets 3 and 4
    are the negatives of sheets 2 and 1.  The square root on sheet 1 is the
    branch tending to ``1/sqrt(AB)`` at infinity, continued across the
    complement of ``[-1, 1]``; on sheet 2 it is the branch continued from
    sheet 1 across ``(-1, 1)``.  Raises :class:`BoundaryError` within ``1e-12``
    of ``[-1, 1]`` or of the interval spanned by the second-sheet branch points.
    """
    if not params.is_real or len(params.A_list) != 2 or any(complex(al) != -0.5 for al in params.alpha_list):
        raise InvalidInputError("closed-form sheets need real 1 < A < B and exponents -1/2")
    z = complex(z)
    A, B = sorted(x.real for x in params.A_list)
    lo, hi = params.interval2()
    if abs(z.imag) <= 1e-12 and (-1 - 1e-12 <= z.real <= 1 + 1e-12 or lo - 1e-12 <= z.real <= hi + 1e-12):
        raise BoundaryError(f"{z} lies on a cut")
    p = complex(phi(z))
    # principal roots of each factor: on sheet 1 (|s| < 1) both real parts stay positive;
    # on sheet 2 the product is continuous off s in [A, B], i.e. off [a, b]
    f1 = _inv_sqrt(A, B, 1 / p)
    f2 = _inv_sqrt(A, B, p)
    return f1, f2, -f2, -f1


def _inv_sqrt(A, B, s) -> complex:
    return 1 / (cmath.sqrt(A - s) * cmath.sqrt(B - s))


# ---------------------------------------------------------------------------
# clusters


@dataclass(frozen=True)
class ClusterArc:
    """Zeros of one family chained into a polyline.

    ``spacing[k]`` is the local zero spacing at ``polyline[k]``.  A link of
    the polyline belongs to the arc when it is no longer than ``eps`` times
    the larger local spacing at its two ends; longer links join separate
    pieces and are ignored when intersecting with a path.
    """

    points: tuple
    polyline: tuple
    family_tag: str
    spacing: tuple
    eps: float = 3.0
    dropped: tuple = ()

    def link_ok(self, k: int) -> bool:
        """Whether the link from ``polyline[k]`` to ``polyline[k + 1]`` is part of the arc."""
        p, q = self.polyline[k], self.polyline[k + 1]
        return abs(q - p) <= self.eps * max(self.spacing[k], self.spacing[k + 1])

    def segments(self) -> list[tuple[complex, complex, float]]:
        """Arc links as ``(start, end, length)``."""
        pl = self.polyline
        return [(pl[k], pl[k + 1], abs(pl[k + 1] - pl[k])) for k in range(len(pl) - 1) if self.link_ok(k)]

    def to_dict(self) -> dict:
        return {"family": self.family_tag, "eps": self.eps,
                "polyline": [[repr(p.real), repr(p.imag)] for p in self.polyline],
                "dropped": [[repr(p.real), repr(p.imag)] for p in self.dropped]}


_NEIGHBOURS = 6


def _local_spacing(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-neighbour distance of each point and the median of it over the point's neighbourhood."""
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    nn = d.min(axis=1)
    k = min(_NEIGHBOURS, len(z) - 1)
    idx = np.argsort(d, axis=1)[:, :k]
    return nn, np.median(nn[idx], axis=1)


def extract_cluster(points, tag: str, eps_outlier: float = 3.0) -> ClusterArc:
    """Chain a zero set into a polyline after dropping isolated points.

    A point is an outlier when its nearest neighbour is farther than
    ``eps_outlier`` times the local spacing, the median nearest-neighbour
    distance among its six nearest neighbours.  A local rather than global
    scale keeps the sparse middle part of arcs whose zeros crowd towards the
    endpoints.  Survivors are chained greedily from the point of smallest
    real part, extending at whichever end of the chain has the nearer
    unvisited point.
    """
    if tag not in FAMILIES:
        raise InvalidInputError(f"unknown family tag {tag!r}; expected one of {FAMILIES}")
    z = np.array([complex(p) for p in points], dtype=complex)
    if len(z) < 10:
        raise InsufficientClusterError(f"{len(z)} points given, at least 10 needed")
    nn, local = _local_spacing(z)
    keep = nn <= eps_outlier * local
    pts, dropped = z[keep], z[~keep]
    if len(pts) < 10:
        raise InsufficientClusterError(f"only {len(pts)} points survive the outlier filter")
    nn, _ = _local_spacing(pts)
    d = np.abs(pts[:, None] - pts[None, :])
    start = int(np.argmin(pts.real))
    chain = [start]
    used = np.zeros(len(pts), dtype=bool)
    used[start] = True
    for _ in range(len(pts) - 1):
        head, tail = chain[0], chain[-1]
        dh = np.where(used, np.inf, d[head])
        dt = np.where(used, np.inf, d[tail])
        ih, it = int(np.argmin(dh)), int(np.argmin(dt))
        if dh[ih] < dt[it]:
            chain.insert(0, ih)
            used[ih] = True
        else:
            chain.append(it)
            used[it] = True
    return ClusterArc(tuple(complex(p) for p in z), tuple(complex(pts[i]) for i in chain), tag,
                      tuple(float(nn[i]) for i in chain), eps_outlier, tuple(complex(p) for p in dropped))


@dataclass(frozen=True)
class Crossing:
    """Intersection of a path with a cluster polyline; ``s`` is the arc length along the path."""

    point: complex
    family: str
    s: float


def _intersect(p0, p1, q0, q1):
    """Parameters ``(t, u)`` of the proper intersection of two segments, or None."""
    r, s = p1 - p0, q1 - q0
    den = r.real * s.imag - r.imag * s.real
    if den == 0:
        return None
    qp = q0 - p0
    t = (qp.real * s.imag - qp.imag * s.real) / den
    u = (qp.real * r.imag - qp.imag * r.real) / den
    if 0 <= t < 1 and 0 <= u < 1:
        return t, u
    return None


def crossings(path: PathSpec, arc: ClusterArc) -> list[Crossing]:
    """Intersections of the path with the arc's links, ordered along the path.

    Several intersections closer together along the path than the length of
    the links involved come from one passage through a ragged cluster; they
    are merged by parity (an even number cancels, an odd number counts once).
    """
    segs = arc.segments()
    raw = []
    offset = 0.0
    pts = path.waypoints
    for p0, p1 in zip(pts[:-1], pts[1:]):
        for q0, q1, length in segs:
            hit = _intersect(p0, p1, q0, q1)
            if hit is not None:
                t = hit[0]
                raw.append((offset + t * abs(p1 - p0), p0 + t * (p1 - p0), length))
        offset += abs(p1 - p0)
    raw.sort(key=lambda x: x[0])
    out, group = [], []
    for item in raw:
        if group and item[0] - group[-1][0] > max(item[2], group[-1][2]):
            out.extend(_collapse(group, arc.family_tag))
            group = []
        group.append(item)
    if group:
        out.extend(_collapse(group, arc.family_tag))
    return out


def _collapse(group, tag) -> list[Crossing]:
    if len(group) % 2 == 0:
        return []
    s, p, _ = group[len(group) // 2]
    return [Crossing(p, tag, s)]


# ---------------------------------------------------------------------------
# continuation through approximants


@dataclass(frozen=True)
class ContinuationResult:
    """Endpoint value, the sheet changes met on the way and the method used.

    ``sheet_log`` lists the crossings that changed the sheet; ``ignored``
    lists crossings of arcs that are not a boundary of the sheet the path was
    on at that moment.
    """

    value: complex
    sheet_log: tuple
    method: str
    n: int | None = None
    sheet: int = 1
    ignored: tuple = field(default=(), compare=False)

    def to_json(self, bits: int = 53) -> str:
        digits = max(17, int(bits * 0.30103) + 2)

        def pair(z):
            return [repr(complex(z).real), repr(complex(z).imag)] if bits <= 53 else [
                f"{complex(z).real:.{digits}g}", f"{complex(z).imag:.{digits}g}"]

        return json.dumps({
            "value": pair(self.value),
            "sheet_log": [{"x": pair(c.point), "family": c.family} for c in self.sheet_log],
            "method": self.method,
            "n": self.n,
            "sheet": self.sheet,
        }, indent=1)


def scheme_clusters(germ: PowerSeries, n: int, scheme: str, eps_outlier: float = 3.0):
    """Build the approximants of ``scheme`` and chain their zero clusters.

    Returns ``(system, arcs)`` where ``arcs`` maps family tags to
    :class:`ClusterArc`.  Pade uses the poles of ``[n/n]``; TwoSheet the zeros
    of ``Q_2n`` (E2) and of the leading type I polynomial (F2); ThreeSheet the
    zeros of ``Q_3n`` (E), ``S_2n,1`` (F) and the leading diagonal type I
    polynomial (Eprime).
    """
    if scheme not in SCHEMES:
        raise InvalidInputError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if scheme == "Pade":
        P, Q = pade_pair(germ, n)
        return (P, Q), {"StahlS": extract_cluster(Q.roots(), "StahlS", eps_outlier)}
    if scheme == "TwoSheet":
        sys = two_sheet_system(germ, n)
        return sys, {"E2": extract_cluster(sys.hp2.polynomials[0].roots(), "E2", eps_outlier),
                     "F2": extract_cluster(sys.hp1.polynomials[-1].roots(), "F2", eps_outlier)}
    sys = three_sheet_system(germ, n)
    return sys, {"E": extract_cluster(sys.hp2.polynomials[0].roots(), "E", eps_outlier),
                 "F": extract_cluster(sys.S1.roots(), "F", eps_outlier),
                 "Eprime": extract_cluster(sys.hp1.polynomials[-1].roots(), "Eprime", eps_outlier)}


def track_sheets(path: PathSpec, arcs: dict, scheme: str) -> tuple[int, list, list]:
    """Replay the path's crossings and return ``(sheet, effective, ignored)``.

    Raises :class:`SheetUnreachableError` as soon as the path enters a sheet
    the scheme cannot evaluate.
    """
    hits = sorted((c for arc in arcs.values() for c in crossings(path, arc)), key=lambda c: c.s)
    sheet, log, ignored = 1, [], []
    reach = _REACH[scheme]
    for c in hits:
        lo, hi = _GLUING[c.family]
        if sheet not in (lo, hi):
            ignored.append(c)
            continue
        sheet = hi if sheet == lo else lo
        log.append(c)
        if sheet > reach:
            raise SheetUnreachableError(
                f"crossing {c.family} at {c.point:.6g} leads to sheet {sheet}, "
                f"beyond the {reach} sheet(s) reachable by {scheme}",
                family=c.family, crossing=c.point, sheet=sheet)
    return sheet, log, ignored


def continue_via_hp(germ: PowerSeries, params: SZParams, path: PathSpec, n: int, scheme: str = "Pade",
                    eps_outlier: float = 3.0, cross: bool = True, prebuilt=None) -> ContinuationResult:
    """Continue ``germ`` along ``path`` with the approximants of ``scheme``.

    Sheet changes are read off the intersections of the path with the zero
    clusters; the endpoint value is then taken from the rational expression
    for that sheet.  Raises :class:`SheetUnreachableError` when the path ends
    beyond the sheets the scheme can evaluate (any Stahl-set crossing for
    Pade, sheet 3 for TwoSheet, sheet 4 for ThreeSheet).

    ``prebuilt`` is an optional ``(system, arcs)`` pair from
    :func:`scheme_clusters` for the same germ, ``n`` and scheme; it lets
    several paths share one construction.
    """
    if germ.center != "zero":
        raise InvalidInputError("continuation starts from a germ at zeta = 0")
    if path.start != 0:
        raise InvalidPathError("the path must start at the expansion point 0")
    if params.a is not None:
        for bp in params.zeta_branch_points():
            if path.clearance(bp) < path.max_step:
                raise InvalidPathError(f"path passes within max_step of the branch point {bp:.6g}")
    if scheme not in SCHEMES:
        raise InvalidInputError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    system, arcs = prebuilt if prebuilt is not None else scheme_clusters(germ, n, scheme, eps_outlier)
    sheet, log, ignored = track_sheets(path, arcs, scheme)
    end = path.end
    if scheme == "Pade":
        P, Q = system
        fn = (lambda w: eval_ratio(P, Q, w, "Q"))
        value = cross_median(fn, end) if cross else fn(end)
    elif scheme == "TwoSheet":
        value = recover_two_sheets(system, end, cross)[sheet - 1]
    else:
        value = recover_three_sheets(system, end, cross).as_tuple()[sheet - 1]
    return ContinuationResult(complex(value), tuple(log), scheme, n, sheet, tuple(ignored))
