"""Shared fixtures.

Hermite-Pade systems at n = 50 take seconds to minutes to build, so each is
built once per session and shared by the tests that need it.
"""

from __future__ import annotations

import mpmath as mp
import pytest
from flint import acb

from hermite_pade._precision import default_bits, hp_default_bits
from hermite_pade.continuation import scheme_clusters
from hermite_pade.presets import get_preset
from hermite_pade.series import SZParams, default_order, germ_at_infinity, germ_at_zero

_cache: dict = {}


def cached(key, build):
    if key not in _cache:
        _cache[key] = build()
    return _cache[key]


@pytest.fixture(scope="session")
def real_params():
    return SZParams.real_case(2, 3)


def real_germ(n: int, hp: bool = True):
    """Germ at infinity for ``A = 2, B = 3`` sized for order ``n``."""
    bits = hp_default_bits(n) if hp else default_bits(n)
    return cached(("real", n, hp), lambda: germ_at_infinity(SZParams.real_case(2, 3), default_order(n), bits))


def preset_germ(name: str, n: int, hp: bool = True):
    bits = hp_default_bits(n) if hp else default_bits(n)
    return cached(("zeta", name, n, hp),
                  lambda: germ_at_zero(get_preset(name).params, default_order(n), bits))


def preset_built(name: str, n: int, scheme: str):
    """``(germ, (system, arcs))`` for a preset, shared across tests."""
    germ = preset_germ(name, n, hp=scheme != "Pade")
    return germ, cached(("built", name, n, scheme), lambda: scheme_clusters(germ, n, scheme))


def to_mp(c, digits: int = 90):
    """An ``acb`` midpoint, a number or a decimal string as an mpmath complex."""
    if isinstance(c, acb):
        m = c.mid()
        return mp.mpc(mp.mpf(m.real.str(digits, radius=False)), mp.mpf(m.imag.str(digits, radius=False)))
    return mp.mpc(c)
