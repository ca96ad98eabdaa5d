"""Independent reference values for the test suite, computed with mpmath.

Nothing here imports the package under test: closed forms are evaluated
directly and Taylor coefficients come from the Cauchy integral on a circle.
"""

from __future__ import annotations

import mpmath as mp


def mp_phi(z):
    """``z + sqrt(z - 1) sqrt(z + 1)``, the branch with ``|phi| >= 1``."""
    z = mp.mpc(z)
    return z + mp.sqrt(z - 1) * mp.sqrt(z + 1)


def real_sheets(A, B, z, dps=40):
    """The four branch values of ``[(A - 1/phi)(B - 1/phi)]^(-1/2)`` at ``z``.

    Sheet 1 uses ``1/phi`` with principal roots of each factor, sheet 2 the
    same with ``phi``; sheets 3 and 4 are the negatives of 2 and 1.
    """
    with mp.workdps(dps):
        ph = mp_phi(z)
        f1 = 1 / (mp.sqrt(A - 1 / ph) * mp.sqrt(B - 1 / ph))
        f2 = 1 / (mp.sqrt(A - ph) * mp.sqrt(B - ph))
        return f1, f2, -f2, -f1


def zeta_germ_value(A_list, alphas, a, b, zeta):
    """Closed form of the germ at ``zeta = 0`` near the origin (principal branches)."""
    zeta = mp.mpc(zeta)
    u = (1 - a * zeta) / b
    w = u * mp.sqrt(1 + (zeta / u) ** 2)
    s = -1j * zeta / (u + w)
    out = mp.mpc(1)
    for Aj, al in zip(A_list, alphas):
        out *= mp.exp(al * mp.log(mp.mpc(Aj) - s))
    return out


def cauchy_coefficients(fn, count, radius, M=512, dps=60):
    """First ``count`` Taylor coefficients of ``fn`` at 0 from ``M`` samples on ``|t| = radius``."""
    with mp.workdps(dps):
        r = mp.mpf(radius)
        vals = [fn(r * mp.expjpi(2 * mp.mpf(j) / M)) for j in range(M)]
        out = []
        for k in range(count):
            acc = mp.fsum(v * mp.expjpi(-2 * mp.mpf(j * k) / M) for j, v in enumerate(vals))
            out.append(acc / M / r**k)
        return out
