"""Pre-Schwarzian/Schwarzian derivatives and their boundary strip norms.

For a locally univalent analytic f the functionals computed here are

    Pf = f''/f'                      (pre-Schwarzian)
    Sf = (Pf)' - (Pf)^2/2            (Schwarzian; zero exactly on Moebius maps)
    (Sf)'                            (its derivative, needed by order-4 users)

all read off an order-4 jet as rational expressions in f'..f''''.

On the right half-plane the hyperbolic density is 1/(2 Re z), so the
natural boundary norms over the strip 0 < Re z <= t are

    beta(t)  = sup (2 Re z)   |Pf(z)|
    sigma(t) = sup (2 Re z)^2 |Sf(z)|

approximated here by sups over a deterministic grid: Re z log-spaced
(the sups concentrate at the boundary), Im z uniform over [-Y, Y].  A
finite Y truncates the sup over all heights; that approximation is
inherent and documented rather than hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSampleError, DomainError
from .jets import Jet, _any_zero
from .maps import ConformalMap


def derivative_ratios(jet: Jet):
    """(Pf, Sf, (Sf)') at the jet's center; needs f' != 0."""
    _, c1, c2, c3, c4 = jet.coeffs
    if _any_zero(c1):
        raise DegenerateSampleError("vanishing first derivative (map not locally univalent here)")
    p = c2 / c1
    u = c3 / c1
    s = u - 1.5 * p * p
    sp = c4 / c1 - 4 * u * p + 3 * p ** 3
    return p, s, sp


def pre_schwarzian(m: ConformalMap, z):
    """Pf(z) = f''(z)/f'(z)."""
    return derivative_ratios(m.jet(z))[0]


def schwarzian(m: ConformalMap, z):
    """Sf(z) = f'''/f' - (3/2)(f''/f')^2."""
    return derivative_ratios(m.jet(z))[1]


def schwarzian_deriv(m: ConformalMap, z):
    """(Sf)'(z) = f''''/f' - 4 (f'''/f')(f''/f') + 3 (f''/f')^3."""
    return derivative_ratios(m.jet(z))[2]


@dataclass(frozen=True)
class StripGrid:
    """Deterministic sampling of the strip 0 < Re z <= x_max.

    Re levels are log-spaced with ``points_per_decade`` points per decade
    starting at ``x_min``; Im values are uniform over [-y_max, y_max].
    """

    x_min: float = 1e-4
    points_per_decade: int = 64
    y_max: float = 20.0
    y_count: int = 257

    def x_levels(self, x_max: float) -> np.ndarray:
        if x_max < self.x_min:
            raise ValueError(f"x_max {x_max} below grid x_min {self.x_min}")
        if x_max == self.x_min:
            return np.array([self.x_min])
        decades = math.log10(x_max / self.x_min)
        n = max(2, int(math.ceil(decades * self.points_per_decade)) + 1)
        return np.logspace(math.log10(self.x_min), math.log10(x_max), n)

    def y_values(self) -> np.ndarray:
        return np.linspace(-self.y_max, self.y_max, self.y_count)

    def mesh(self, x_max: float) -> np.ndarray:
        xs = self.x_levels(x_max)
        return xs[:, None] + 1j * self.y_values()[None, :]


@dataclass(frozen=True)
class NormProfile:
    """beta/sigma strip sups per t, with the maximizing grid points."""

    map_name: str
    t_values: tuple
    beta: tuple
    sigma: tuple
    argmax_beta: tuple
    argmax_sigma: tuple
    grid: StripGrid

    def __post_init__(self):
        for seq, label in ((self.beta, "beta"), (self.sigma, "sigma")):
            if any(v < 0 for v in seq):
                raise ValueError(f"{label} must be nonnegative")
            # nested strips: values may only shrink as t decreases
            for a, b in zip(seq, seq[1:]):
                if b > a + 1e-9:
                    raise ValueError(f"{label} not monotone along decreasing t")

    def rows(self):
        for t, b, s, zb, zs in zip(
            self.t_values, self.beta, self.sigma, self.argmax_beta, self.argmax_sigma
        ):
            yield (t, b, s, zb.real, zb.imag, zs.real, zs.imag)

    CSV_HEADER = (
        "t",
        "beta",
        "sigma",
        "argmax_beta_re",
        "argmax_beta_im",
        "argmax_sigma_re",
        "argmax_sigma_im",
    )


def strip_weights(m: ConformalMap, grid: StripGrid, x_max: float):
    """Grid mesh plus the weighted fields (2x)|Pf| and (2x)^2|Sf| on it."""
    mesh = grid.mesh(x_max)
    p, s, _ = derivative_ratios(m.jet(mesh))
    two_x = 2.0 * mesh.real
    return mesh, two_x * np.abs(p), two_x ** 2 * np.abs(s)


def norm_profile(m: ConformalMap, t_values, grid: StripGrid | None = None) -> NormProfile:
    """Grid sups of beta(t), sigma(t) for each t (decreasing positives)."""
    grid = grid or StripGrid()
    ts = [float(t) for t in t_values]
    if not ts or any(t <= 0 for t in ts):
        raise ValueError("t values must be positive")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t values must be strictly decreasing")
    if ts[-1] < grid.x_min:
        raise ValueError(f"smallest t {ts[-1]} below grid x_min {grid.x_min}")

    mesh, w_beta, w_sigma = strip_weights(m, grid, ts[0])
    xs = mesh[:, 0].real

    betas, sigmas, arg_b, arg_s = [], [], [], []
    for t in ts:
        k = int(np.searchsorted(xs, t * (1 + 1e-12), side="right"))
        if k == 0:
            raise ValueError(f"no grid levels at or below t = {t}")
        for w, vals, args in ((w_beta, betas, arg_b), (w_sigma, sigmas, arg_s)):
            sub = w[:k]
            ij = np.unravel_index(int(np.argmax(sub)), sub.shape)
            vals.append(float(sub[ij]))
            args.append(complex(mesh[ij]))
    return NormProfile(
        m.name, tuple(ts), tuple(betas), tuple(sigmas), tuple(arg_b), tuple(arg_s), grid
    )


def horodisk_ratio(z, a: float):
    """Ratio d(z, dD)/Re z on D(1,1) and membership in the horodisk D_a.

    D_a = {|z - a/(a+1)| < a/(a+1)} is internally tangent to D(1,1) at 0;
    outside it the ratio is at most 1/a.
    """
    z = complex(z)
    if abs(z - 1) >= 1:
        raise DomainError(f"{z} outside D(1,1)")
    if a <= 1:
        raise ValueError("horodisk parameter a must exceed 1")
    d = 1.0 - abs(z - 1)
    ratio = d / z.real
    center = a / (a + 1.0)
    return ratio, bool(abs(z - center) < center)
