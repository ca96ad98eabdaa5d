"""Named parameter sets and the search that produces the third example.

``example1`` has ``a < 0``, so the Stahl arc of the germ at ``zeta = 0``
crosses the real axis at ``1/a < 0`` and Pade approximants continue the germ
along ``[0, 6]``.  ``example2`` has ``a > 0``: the Stahl arc and the
boundary ``E2`` between the first two sheets cross ``(0, 6)``, while the
boundary ``F2`` between the second and third sheets meets the real line to
the left of ``E2``.  ``example3`` keeps ``A2, a, b`` of ``example2`` and
changes only ``A1``, chosen by :func:`search_example3` so that ``F2`` crosses
``(0, 6)`` to the right of ``E2``.  ``real-AB`` is the germ at infinity with
real ``A = 2``, ``B = 3``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InsufficientClusterError, InvalidInputError, RootFinderError
from .series import SZParams

__all__ = ["Preset", "PRESETS", "get_preset", "preset_names", "search_example3"]

# shared by example2 and example3; example1 flips the sign of a
_A2, _A, _B = -1.2, 1.0, 1.0


@dataclass(frozen=True)
class Preset:
    name: str
    params: SZParams
    endpoint: float | None
    description: str

    @property
    def center(self) -> str:
        return "zero" if self.params.a is not None else "infinity"


PRESETS = {
    "example1": Preset("example1", SZParams.symmetric(2.0, _A2, -_A, _B, "example1"), 6.0,
                       "a < 0: Stahl arc in the left half-plane, Pade continues the germ to x = 6"),
    "example2": Preset("example2", SZParams.symmetric(2.0, _A2, _A, _B, "example2"), 6.0,
                       "a > 0: one crossing of E2 on (0, 6); F2 meets the real line left of E2"),
    "example3": Preset("example3", SZParams.symmetric(0.5, _A2, _A, _B, "example3"), 6.0,
                       "example2 with A1 altered: F2 crosses (0, 6) right of E2, x = 6 lies on sheet 3"),
    "real-AB": Preset("real-AB", SZParams.real_case(2.0, 3.0), None,
                      "real case A = 2, B = 3, germ at infinity"),
}


def preset_names() -> list[str]:
    return list(PRESETS)


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise InvalidInputError(f"unknown preset {name!r}; choose one of {', '.join(PRESETS)}") from None


def search_example3(base: SZParams | None = None, candidates=None, n: int = 30,
                    endpoint: float = 6.0, log=None) -> tuple[float, float, float]:
    """First ``A1`` among ``candidates`` for which ``F2`` crosses right of ``E2``.

    The default candidates halve the ``A1`` of ``base`` (``example2``) down
    to 1/16 of it.  For each candidate the germ at ``zeta = 0`` is built with the other
    parameters of ``base``; the zeros of ``Q_2n`` (E2) and of the leading type I
    polynomial (F2) are chained and intersected with ``[0, endpoint]``.  The
    candidate is accepted when both arcs cross exactly once and the F2
    crossing lies to the right.  Returns ``(A1, x_E2, x_F2)``.
    """
    from .continuation import PathSpec, crossings, scheme_clusters
    from .series import default_order, germ_at_zero
    from ._precision import hp_default_bits

    base = PRESETS["example2"].params if base is None else base
    A1_base, A2 = base.A_list[0].real, base.A_list[0].imag
    if candidates is None:
        candidates = [A1_base / 2**k for k in range(1, 5)]
    path = PathSpec.segment(0, endpoint, 0.01)
    for A1 in candidates:
        if abs(complex(A1, A2)) <= 1:
            continue
        p = SZParams.symmetric(A1, A2, base.a, base.b)
        g = germ_at_zero(p, default_order(n), hp_default_bits(n))
        try:
            _, arcs = scheme_clusters(g, n, "TwoSheet")
        except (InsufficientClusterError, RootFinderError):
            continue
        xe = [c.point.real for c in crossings(path, arcs["E2"])]
        xf = [c.point.real for c in crossings(path, arcs["F2"])]
        if log is not None:
            log(f"A1 = {A1:g}: E2 crossings {xe}, F2 crossings {xf}")
        if len(xe) == 1 and len(xf) == 1 and xf[0] > xe[0]:
            return A1, xe[0], xf[0]
    raise InvalidInputError("no candidate A1 puts F2 to the right of E2")
