"""Working-precision plumbing shared by the multiprecision modules.

All high-precision arithmetic runs on Arb balls (``flint.acb``).  Arb numbers
carry no precision of their own; the precision of every operation is taken
from ``flint.ctx.prec``.  Functions in this package therefore enter
:func:`workprec` for the duration of a call and restore the caller's setting
on exit.  Stored coefficients are always exact midpoints (radius stripped).
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

import flint
from flint import acb, arb

__all__ = [
    "PrecisionConfig",
    "default_bits",
    "hp_default_bits",
    "workprec",
    "to_acb",
    "mid",
    "absf",
    "acb_to_pair",
    "pair_to_acb",
    "tiny",
]

MIN_BITS = 64


@dataclass(frozen=True)
class PrecisionConfig:
    """Binary precision of the coefficient arithmetic."""

    bits: int = 256

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < MIN_BITS:
            raise ValueError(f"bits must be an integer >= {MIN_BITS}, got {self.bits}")

    @classmethod
    def for_order(cls, n: int) -> "PrecisionConfig":
        return cls(default_bits(n))


def default_bits(n: int) -> int:
    """Bit budget for approximants of order ``n``.

    Hermite-Pade systems lose accuracy exponentially in ``n``; a linear-in-n
    budget keeps roughly 128 bits of headroom.
    """
    return 128 + 12 * max(int(n), 0)


def hp_default_bits(n: int) -> int:
    """Bit budget for Hermite-Pade systems of order ``n``.

    Pivots of these systems decay like ``2^(-22 n)``; deciding numerical rank
    at the ``2^(-bits/2)`` threshold therefore needs ``bits > 45 n``.
    """
    return 128 + 48 * max(int(n), 0)


@contextmanager
def workprec(bits: int):
    bits = int(bits)
    if bits < MIN_BITS:
        raise ValueError(f"bits must be >= {MIN_BITS}")
    saved = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        yield bits
    finally:
        flint.ctx.prec = saved


def to_acb(x) -> acb:
    """Convert Python numbers, strings, mpmath values or Arb types to ``acb``."""
    if isinstance(x, acb):
        return x
    if isinstance(x, arb):
        return acb(x)
    if isinstance(x, complex):
        return acb(x.real, x.imag)
    if isinstance(x, (int, float)):
        return acb(x)
    if isinstance(x, str):
        return acb(x)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return acb(arb(x[0]), arb(x[1]))
    # mpmath mpf/mpc and numpy scalars
    if hasattr(x, "imag") and hasattr(x, "real"):
        re, im = x.real, x.imag
        return acb(arb(str(re)) if not isinstance(re, (int, float)) else re,
                   arb(str(im)) if not isinstance(im, (int, float)) else im)
    raise TypeError(f"cannot convert {type(x).__name__} to acb")


def mid(x: acb) -> acb:
    return x.mid()


def absf(x: acb) -> float:
    """Modulus of the midpoint as a float (for comparisons and thresholds)."""
    return float(abs(x.mid()).mid())


def tiny(bits: int) -> float:
    """Numerical-zero threshold 2^(-bits/2)."""
    return 2.0 ** (-bits / 2)


def _digits(bits: int) -> int:
    return int(math.ceil(bits * math.log10(2))) + 5


def acb_to_pair(x: acb, bits: int) -> list[str]:
    """Decimal strings ``[re, im]`` carrying the full working precision."""
    d = _digits(bits)
    m = x.mid()
    return [m.real.str(d, radius=False, more=True), m.imag.str(d, radius=False, more=True)]


def pair_to_acb(pair) -> acb:
    return acb(arb(str(pair[0])), arb(str(pair[1]))).mid()
