"""
Recovering three sheets and measuring convergence rates
=======================================================

Type II, type I and S-polynomials of the germ ``[1, f, f^2, f^3]`` give
rational approximations of ``f1``, of ``f1 + f2 + f3`` and of ``f1 + f2``.
Composing them recovers the values of ``f`` on the first three sheets.
The errors decay geometrically in ``n`` with ratios given by the
equilibrium problem.
"""

import math

import numpy as np
from flint import acb

from hermite_pade.series import SZParams, default_order, germ_at_infinity
from hermite_pade._precision import hp_default_bits, workprec
from hermite_pade.approximants import recover_three_sheets, three_sheet_system
from hermite_pade.continuation import oracle_sheet_values_real
from hermite_pade.hp_core import MultiIndex, germ_powers, hp_type1, hp_type2, pade_pair, s_polys
from hermite_pade.potential import pade_rate, rate_functions, solve_equilibrium

params = SZParams.real_case(2.0, 3.0)
a, b = params.interval2()

# Sheet values at a few points, n = 40, against the closed form.
system = three_sheet_system(germ_at_infinity(params, default_order(40), hp_default_bits(40)), 40)
for z in (2, 3 + 1j, -2 + 2j):
    got = recover_three_sheets(system, z).as_tuple()
    ref = oracle_sheet_values_real(params, z)
    print(f"z = {z}: " + "  ".join(f"f{k + 1} err {abs(g - r):.1e}" for k, (g, r) in enumerate(zip(got, ref))))

# Convergence rates at z = 2i.  Errors fall far below double precision, so
# they are measured in ball arithmetic against the closed form evaluated at
# the same precision.
z = 2j
d1, d2, d3 = rate_functions(solve_equilibrium(a, b, N=200), z)
targets = {"Pade (f1)": pade_rate(z), "type II (f1)": d1, "type I (f1+f2+f3)": d3, "S (f1+f2)": d2}


def closed_form(w, bits):
    """Sheets 1 and 2 at ``w`` in ball arithmetic (sheets 3, 4 are their negatives)."""
    with workprec(bits):
        w = acb(w)
        s = (w * w - 1).sqrt()
        phi = w + s if abs(complex(w + s)) > 1 else w - s
        f1 = 1 / ((2 - 1 / phi) * (3 - 1 / phi)).sqrt()
        f2 = 1 / ((2 - phi) * (3 - phi)).sqrt()
        # principal branches agree with the oracle's labels at this point
        r1, r2 = oracle_sheet_values_real(params, complex(w))[:2]
        f1 = f1 if abs(complex(f1) - r1) < 1e-8 else -f1
        f2 = f2 if abs(complex(f2) - r2) < 1e-8 else -f2
        return f1, f2


ns = list(range(15, 41, 5))
logs = {k: [] for k in targets}
for n in ns:
    g = germ_at_infinity(params, default_order(n), hp_default_bits(n))
    gp = germ_powers(g, 3)
    P, Q = pade_pair(g, n)
    t2 = hp_type2(gp[1:], n).polynomials
    t1 = hp_type1(gp, MultiIndex.diagonal(n, 3)).polynomials
    S1, S2 = s_polys(hp_type1(gp, MultiIndex.stepped(n, 1)), hp_type1(gp, MultiIndex.stepped(n, 2)))
    f1, f2 = closed_form(z, g.bits)
    with workprec(g.bits):
        errors = [P(z) / Q(z) - f1, t2[1](z) / t2[0](z) - f1, t1[2](z) / t1[3](z) + f1, S1(z) / S2(z) + f1 + f2]
        for key, e in zip(targets, errors):
            logs[key].append(float(abs(e).mid().log()))

print("\nslope of log|error| against n, compared with log delta:")
for key, delta in targets.items():
    slope = np.polyfit(ns, logs[key], 1)[0]
    print(f"  {key:20s} slope {slope:8.4f}   log delta {math.log(delta):8.4f}")
