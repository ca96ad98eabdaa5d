"""
Zeros of partial sums and the circle of convergence
===================================================

By the Jentzsch-Szego theorem the zeros of the partial sums of a power
series accumulate on its circle of convergence.  For the example1 germ the
circle passes through the images of ``z = +-1``, where ``f`` has square-root
singularities, so the coefficients decay like ``k^(-3/2) R^(-k)`` and the
zeros approach the circle slowly.
"""

import numpy as np

from hermite_pade.continuation import convergence_radius
from hermite_pade.hp_core import partial_sum_zeros
from hermite_pade.presets import get_preset
from hermite_pade.series import germ_at_zero

params = get_preset("example1").params
R = convergence_radius(params)
print(f"branch points in zeta: {np.round(params.zeta_branch_points(), 4)}")
print(f"radius of convergence R = {R:.6f}\n")

germ = germ_at_zero(params, 200, 1024)
for degree in (25, 50, 100, 200):
    z = np.array([complex(r) for r in partial_sum_zeros(germ, degree)])
    m = np.abs(z)
    print(f"degree {degree:3d}: median |zero| / R = {np.median(m) / R:.4f}, "
          f"quartiles {np.quantile(m, 0.25) / R:.3f} .. {np.quantile(m, 0.75) / R:.3f}")
