"""Independent derivative oracles for cross-checking jet output.

Central finite-difference stencils with one Richardson step, evaluated in
mpmath working precision so that the order-3/4 stencils are not swamped by
cancellation.  Deliberately shares no code with the jet rules.
"""

import mpmath


def _stencil(f, z, order, h):
    if order == 0:
        return f(z)
    if order == 1:
        return (f(z + h) - f(z - h)) / (2 * h)
    if order == 2:
        return (f(z + h) - 2 * f(z) + f(z - h)) / h ** 2
    if order == 3:
        return (f(z + 2 * h) - 2 * f(z + h) + 2 * f(z - h) - f(z - 2 * h)) / (2 * h ** 3)
    if order == 4:
        return (f(z + 2 * h) - 4 * f(z + h) + 6 * f(z) - 4 * f(z - h) + f(z - 2 * h)) / h ** 4
    raise ValueError(order)


def fd_derivatives(f, z, h=1e-3, dps=40):
    """[f, f', f'', f''', f''''] at z by Richardson-extrapolated central
    differences; ``f`` must accept and return mpmath complex numbers."""
    with mpmath.workdps(dps):
        zz = mpmath.mpc(z)
        hh = mpmath.mpf(h)
        out = [complex(f(zz))]
        for order in range(1, 5):
            coarse = _stencil(f, zz, order, hh)
            fine = _stencil(f, zz, order, hh / 2)
            out.append(complex((4 * fine - coarse) / 3))
    return out


def rel_err(got, want, floor=1.0):
    """|got-want| scaled by max(|want|, floor)."""
    return abs(got - want) / max(abs(want), floor)
