"""
Continuing a germ at zeta = 0 beyond its first sheet
====================================================

The germ at ``zeta = 0`` of the transformed function is continued along the
segment ``[0, 6]``.  Each scheme reads sheet changes off the places where
the path crosses a chained zero cluster, then evaluates the matching sheet
of its rational expressions.  A step-by-step continuation of the closed
form serves as reference.

* example1: the Stahl arc stays in the left half-plane; Pade continues the
  germ to 6 on the first sheet.
* example2: the path crosses E2 once; the TwoSheet scheme lands on sheet 2.
* example3: the path crosses E2 and then F2; TwoSheet cannot reach sheet 3,
  ThreeSheet can.

Runs take about two minutes; the ThreeSheet build dominates.
"""

import time

from hermite_pade.continuation import PathSpec, continue_via_hp, convergence_radius, oracle_continue
from hermite_pade.errors import SheetUnreachableError
from hermite_pade.presets import get_preset
from hermite_pade.series import default_order, germ_at_zero
from hermite_pade._precision import default_bits, hp_default_bits

N = 50
path = PathSpec.segment(0, 6, 0.05)

for name, schemes in (("example1", ["Pade"]), ("example2", ["Pade", "TwoSheet"]),
                      ("example3", ["TwoSheet", "ThreeSheet"])):
    params = get_preset(name).params
    ref = oracle_continue(params, path)
    print(f"\n{name}: radius of convergence {convergence_radius(params):.4f}, reference value at 6: {ref:.10f}")
    for scheme in schemes:
        bits = default_bits(N) if scheme == "Pade" else hp_default_bits(N)
        start = time.perf_counter()
        germ = germ_at_zero(params, default_order(N), bits)
        try:
            res = continue_via_hp(germ, params, path, N, scheme)
        except SheetUnreachableError as exc:
            print(f"  {scheme:10s} blocked by {exc.family}: {exc}")
            continue
        log = ", ".join(f"{c.family} at x = {c.point.real:.4f}" for c in res.sheet_log) or "no crossing"
        ignored = ", ".join(c.family for c in res.ignored)
        print(f"  {scheme:10s} sheet {res.sheet} ({log}{'; ignored ' + ignored if ignored else ''}), "
              f"error {abs(res.value - ref):.1e}, {time.perf_counter() - start:.1f} s")
