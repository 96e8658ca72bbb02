"""Closed-form extensions over the imaginary axis and their dilatations.

For Re z < 0 write z* = -conj(z) for the mirror point in H.  The two
extensions and their complex dilatations mu = (d/dzbar) / (d/dz) are

  schwarzian:      E(z) = h(z*) + (2 Re z) h'(z*) / (1 - (Re z) Ph(z*))
                   mu(z) = -(1/2) (2 Re z)^2 Sh(z*)
  pre-schwarzian:  E(z) = f(z*) + (2 Re z) f'(z*)
                   mu(z) = -(2 Re z) Pf(z*)

and for Re z >= 0 both extensions equal the map itself; at Re z = 0 the
reflected formula collapses to the boundary value, so E is continuous
across the axis.

Substituting t = -Re z into the Loewner chain member at the boundary
point i Im z reproduces the reflected formula identically, which is the
trace construction checked by :func:`trace_extend`.

Dilatations are verified two ways: the closed form above, and central
finite differences of the Wirtinger derivatives of E.  The grid report
flags samples whose d/dz nearly vanishes instead of failing on them;
that is how maps violating the extension hypotheses are explored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSampleError, EvaluationError, HorizonError
from .jets import _is_np
from .loewner import VARIANT_PRE, VARIANT_SCHWARZIAN, _check_variant, _guard, family_ht, tau0_scan
from .maps import ConformalMap
from .schwarz import StripGrid, derivative_ratios

DEFAULT_FD_STEP = 1e-5
DEFAULT_FD_TOL = 1e-6


def _re(z):
    return np.real(z) if _is_np(z) else z.real


def _im(z):
    return np.imag(z) if _is_np(z) else z.imag


def _all_neg(x) -> bool:
    return bool(np.all(x < 0)) if _is_np(x) else x < 0


def _all_nonneg(x) -> bool:
    return bool(np.all(x >= 0)) if _is_np(x) else x >= 0


def reflected(z):
    """Mirror point z* = -conj(z) across the imaginary axis."""
    return -z.conjugate() if not _is_np(z) else -np.conj(z)


def extend(h: ConformalMap, variant: str, z, tau: float | None = None):
    """Extension value at z; the map itself for Re z >= 0, the reflected
    closed form on the strip -tau < Re z < 0.

    Array input must lie entirely on one side of the axis.
    """
    _check_variant(variant)
    x = _re(z)
    if _all_nonneg(x):
        return h.value(z)
    if not _all_neg(x):
        raise ValueError("array input must not mix Re z < 0 with Re z >= 0")
    if tau is not None:
        beyond = np.any(x <= -tau) if _is_np(x) else x <= -tau
        if beyond:
            raise HorizonError(f"Re z = {x!r} at or beyond the horizon -tau = {-tau}")
    zs = reflected(z)
    jet = h.jet(zs)
    c0, c1 = jet.coeffs[0], jet.coeffs[1]
    if variant == VARIANT_PRE:
        return c0 + 2 * x * c1
    pf = derivative_ratios(jet)[0]
    den = 1 - x * pf
    _guard(den, "|1 - (Re z) Ph(z*)|", z, -x)
    return c0 + 2 * x * c1 / den


def mu_formula(h: ConformalMap, variant: str, z):
    """Closed-form complex dilatation of the extension at Re z < 0."""
    _check_variant(variant)
    x = _re(z)
    if not _all_neg(x):
        raise ValueError("dilatation formula is defined for Re z < 0 only")
    zs = reflected(z)
    pf, sf, _ = derivative_ratios(h.jet(zs))
    if variant == VARIANT_SCHWARZIAN:
        return -0.5 * (2 * x) ** 2 * sf
    return -(2 * x) * pf


def trace_extend(h: ConformalMap, variant: str, z):
    """Extension through the chain trace: the member at time -Re z evaluated
    at i Im z.  Algebraically identical to :func:`extend` on the strip."""
    x = _re(z)
    if not _all_neg(x):
        raise ValueError("trace extension applies to Re z < 0 only")
    return family_ht(h, variant, -x, 1j * _im(z))


def _wirtinger_pair(F, z, step: float):
    fx = (F(z + step) - F(z - step)) / (2 * step)
    fy = (F(z + 1j * step) - F(z - 1j * step)) / (2 * step)
    d_z = 0.5 * (fx - 1j * fy)
    d_zbar = 0.5 * (fx + 1j * fy)
    return d_z, d_zbar


def wirtinger_mu(F, z, step: float):
    """Central-difference Wirtinger derivatives and dilatation of F at z.

    Returns (d_z, d_zbar, mu); raises DegenerateSampleError when |d_z|
    falls under 100*eps/step, where the ratio is numerically meaningless.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    d_z, d_zbar = _wirtinger_pair(F, z, step)
    floor = 100 * np.finfo(float).eps / step
    if abs(complex(d_z)) < floor:
        raise DegenerateSampleError(f"|d_z| = {abs(complex(d_z)):.3e} below {floor:.3e} at z={z!r}")
    return d_z, d_zbar, d_zbar / d_z


@dataclass(frozen=True)
class DilatationSample:
    """One verified point in the reflected strip."""

    z: complex
    value: complex
    d_z: complex
    d_zbar: complex
    mu_fd: complex
    mu_formula: complex
    fd_step: float
    degenerate: bool

    @property
    def identity_error(self) -> float:
        return abs(self.mu_fd - self.mu_formula)


def mirror_strip_points(
    tau: float,
    fd_step: float = DEFAULT_FD_STEP,
    grid: StripGrid | None = None,
    nx: int | None = None,
    ny: int | None = None,
) -> np.ndarray:
    """Sample points of the strip -tau < Re z < 0, mirrored from the norm
    grid, pulled in by two FD steps so stencils stay inside the strip."""
    grid = grid or StripGrid()
    x_hi = tau - 2 * fd_step
    if x_hi <= grid.x_min:
        raise ValueError(f"horizon {tau} leaves no room above grid x_min {grid.x_min}")
    if nx is None:
        xs = grid.x_levels(x_hi)
    else:
        xs = np.logspace(np.log10(grid.x_min), np.log10(x_hi), nx)
    ys = np.linspace(-grid.y_max, grid.y_max, ny or grid.y_count)
    return -xs[:, None] + 1j * ys[None, :]


@dataclass(frozen=True)
class QCReport:
    """Dilatation verification over a mirrored strip grid."""

    map_name: str
    variant: str
    k: float
    tau: float
    fd_step: float
    fd_tolerance: float
    points: np.ndarray
    values: np.ndarray
    d_z: np.ndarray
    d_zbar: np.ndarray
    mu_fd: np.ndarray
    mu_form: np.ndarray
    degenerate: np.ndarray
    failures: tuple

    @property
    def accepted(self) -> np.ndarray:
        return ~self.degenerate

    @property
    def mu_bound(self) -> float:
        return self.k / 2 if self.variant == VARIANT_SCHWARZIAN else self.k

    @property
    def max_mu_fd(self) -> float:
        vals = np.abs(self.mu_fd[self.accepted])
        return float(vals.max()) if vals.size else 0.0

    @property
    def max_mu_formula(self) -> float:
        return float(np.abs(self.mu_form).max()) if self.mu_form.size else 0.0

    @property
    def max_identity_error(self) -> float:
        errs = np.abs(self.mu_fd - self.mu_form)[self.accepted]
        return float(errs.max()) if errs.size else 0.0

    @property
    def degenerate_count(self) -> int:
        return int(self.degenerate.sum())

    @property
    def passed(self) -> bool:
        return (
            not self.failures
            and self.max_mu_formula <= self.mu_bound + 1e-9
            and self.max_identity_error <= self.fd_tolerance
        )

    def samples(self):
        flat = zip(
            self.points.ravel(),
            self.values.ravel(),
            self.d_z.ravel(),
            self.d_zbar.ravel(),
            self.mu_fd.ravel(),
            self.mu_form.ravel(),
            self.degenerate.ravel(),
        )
        return [
            DilatationSample(complex(z), complex(v), complex(dz), complex(dzb), complex(mf),
                             complex(mform), self.fd_step, bool(deg))
            for z, v, dz, dzb, mf, mform, deg in flat
        ]

    def to_json_dict(self, include_samples: bool = True) -> dict:
        doc = {
            "map": self.map_name,
            "variant": self.variant,
            "k": self.k,
            "tau": self.tau,
            "fd_step": self.fd_step,
            "summary": {
                "max_mu": self.max_mu_fd,
                "max_mu_formula": self.max_mu_formula,
                "max_identity_err": self.max_identity_error,
                "degenerate_count": self.degenerate_count,
                "failures": list(self.failures),
                "pass": self.passed,
            },
        }
        if include_samples:
            doc["samples"] = [
                {
                    "z": [s.z.real, s.z.imag],
                    "mu_fd": [s.mu_fd.real, s.mu_fd.imag],
                    "mu_formula": [s.mu_formula.real, s.mu_formula.imag],
                    "err": s.identity_error,
                    "degenerate": s.degenerate,
                }
                for s in self.samples()
            ]
        return doc


def qc_report(
    h: ConformalMap,
    variant: str,
    k: float = 0.5,
    fd_step: float = DEFAULT_FD_STEP,
    fd_tolerance: float = DEFAULT_FD_TOL,
    grid: StripGrid | None = None,
    nx: int | None = None,
    ny: int | None = None,
    tau: float | None = None,
) -> QCReport:
    """Verify the dilatation identity and bound over the reflected strip.

    PASS requires max |mu_formula| <= k/2 (schwarzian) or <= k
    (pre-schwarzian) plus the FD/formula identity at every accepted
    sample.  Degenerate samples (|d_z| ~ 0) are excluded from PASS/FAIL
    and counted separately.
    """
    _check_variant(variant)
    if tau is None:
        tau = tau0_scan(h, variant, k, grid=grid).t_star
    pts = mirror_strip_points(tau, fd_step=fd_step, grid=grid, nx=nx, ny=ny)
    failures = []

    def F(w):
        return extend(h, variant, w, tau=tau)

    try:
        values = F(pts)
        d_z, d_zbar = _wirtinger_pair(F, pts, fd_step)
        mu_form = mu_formula(h, variant, pts)
    except (EvaluationError, HorizonError) as exc:  # pragma: no cover - guard rail
        failures.append(str(exc))
        empty = np.zeros((0, 0), dtype=complex)
        return QCReport(h.name, variant, k, tau, fd_step, fd_tolerance, empty, empty,
                        empty, empty, empty, empty, np.zeros((0, 0), dtype=bool),
                        tuple(failures))

    floor = 100 * np.finfo(float).eps / fd_step
    degenerate = np.abs(d_z) < floor
    with np.errstate(divide="ignore", invalid="ignore"):
        mu_fd = np.where(degenerate, 0.0, d_zbar / np.where(degenerate, 1.0, d_z))
    return QCReport(
        h.name, variant, k, tau, fd_step, fd_tolerance,
        pts, np.asarray(values), d_z, d_zbar, mu_fd, np.asarray(mu_form),
        degenerate, tuple(failures),
    )
