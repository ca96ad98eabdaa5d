"""
Zeros of Pade and Hermite-Pade polynomials in the real case
===========================================================

The germ at infinity of ``f(z) = [(A - 1/phi(z)) (B - 1/phi(z))]^(-1/2)``,
with ``phi(z) = z + sqrt(z^2 - 1)`` and real ``1 < A < B``, lives on a
four-sheeted surface with cuts ``[-1, 1]`` and ``[a, b]``,
``a = (A + 1/A)/2``, ``b = (B + 1/B)/2``.

This script builds each family of polynomials for ``A = 2``, ``B = 3`` and
compares the distribution of its zeros with the predicted limit measure
(Kolmogorov distance of the counting measures).
"""

import numpy as np

from hermite_pade.series import SZParams, default_order, germ_at_infinity
from hermite_pade._precision import hp_default_bits
from hermite_pade.hp_core import MultiIndex, germ_powers, hp_type1, hp_type2, pade_pair, s_polys
from hermite_pade.potential import empirical_measure, measure_distance, robin_density, solve_equilibrium

params = SZParams.real_case(2.0, 3.0)
a, b = params.interval2()
print(f"second cut [a, b] = [{a:.4f}, {b:.4f}]")

# The scalar equilibrium problem on [a, b] gives the three limit measures.
sol = solve_equilibrium(a, b, N=200)
print(f"equilibrium constant gamma = {sol.gamma:.8f}, collocation residual {sol.residual:.1e}")


def zeros(poly):
    return np.array([complex(r) for r in poly.roots()])


def on(z, lo, hi):
    return (np.abs(z.imag) < 1e-8) & (z.real > lo) & (z.real < hi)


for n in (10, 20, 40):
    g = germ_at_infinity(params, default_order(n), hp_default_bits(n))
    powers = germ_powers(g, 3)
    print(f"\nn = {n}")

    # Pade poles fill [-1, 1] with the arcsine law.
    poles = zeros(pade_pair(g, n)[1])
    print(f"  Pade poles: {on(poles, -1, 1).sum()}/{n} in (-1, 1), "
          f"distance to arcsine {measure_distance(empirical_measure(poles.real), robin_density()):.4f}")

    # Type II: Q_3n has 3n simple zeros in (-1, 1), distributed like lambda2.
    q3n = zeros(hp_type2(powers[1:], n).polynomials[0])
    print(f"  Q_3n zeros: {on(q3n, -1, 1).sum()}/{3 * n} in (-1, 1), "
          f"distance to lambda2 {measure_distance(empirical_measure(q3n.real), sol.lam2):.4f}")

    # Type I: all but two zeros of each Q_n,j lie in (-1, 1).  For j = 2, 3 the
    # two exceptional zeros sit at a and b; for j = 0, 1 they are very large.
    for j, q in enumerate(hp_type1(powers, MultiIndex.diagonal(n, 3)).polynomials):
        z = zeros(q)
        inner = on(z, -1, 1)
        extra = ", ".join(f"{x.real:.6g}" for x in z[~inner])
        print(f"  Q_n{j}: {inner.sum()}/{n} in (-1, 1), others at {extra}; "
              f"inner distance to lambda1 {measure_distance(empirical_measure(z[inner].real), sol.lam1):.4f}")

    # S-polynomials: the zeros gather on [a, b], except one zero of S_2n,1 at
    # (A + B)/2 where f1 + f2 vanishes.
    for k, S in enumerate(s_polys(hp_type1(powers, MultiIndex.stepped(n, 1)),
                                  hp_type1(powers, MultiIndex.stepped(n, 2))), start=1):
        z = zeros(S)
        inside = on(z, a - 1e-8, b + 1e-8)
        extra = ", ".join(f"{x.real:.6g}" for x in z[~inside]) or "none"
        print(f"  S_2n,{k}: {inside.sum()}/{len(z)} on [a, b], others: {extra}; "
              f"distance to lambda {measure_distance(empirical_measure(z[inside].real), sol.lam):.4f}")
