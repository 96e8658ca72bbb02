"""Order-4 truncated Taylor (jet) arithmetic over the complex numbers.

A :class:`Jet` carries the value and the first four derivatives of an
analytic function at a point.  Sums, products, quotients, the elementary
functions exp/log/sqrt/recip/pow, and composition propagate derivatives
exactly (Leibniz rule, quotient recursion, Faa di Bruno through order 4),
so code built on top of this module never needs finite differencing or a
symbolic engine to obtain f', f'', f''', f''''.

Order 4 is fixed: the second-order distortion f'''/f' - (3/2)(f''/f')^2
needs three derivatives, and its own derivative needs four.

Coefficients are polymorphic in the scalar type.  Plain ``complex`` is
the default; numpy arrays give elementwise jets over whole grids, and
mpmath complex numbers give high-precision evaluation for oracle-grade
finite differencing.  All operations dispatch on the type of the values
they see, so a formula written once works on every carrier.

Principal branches are used everywhere.  Jets of log/sqrt/pow reject a
value on the cut (-inf, 0] because the derivative coefficients are
singular or side-dependent there; the scalar helpers are more permissive
so that boundary values of maps can still be computed.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import BranchCutError, EvaluationError

ORDER = 4

_BINOM = ((1,), (1, 1), (1, 2, 1), (1, 3, 3, 1), (1, 4, 6, 4, 1))


def _is_np(v):
    return isinstance(v, (np.ndarray, np.generic))


def _is_mp(v):
    return type(v).__module__.split(".")[0] == "mpmath"


def _exp(v):
    if _is_np(v):
        return np.exp(v)
    if _is_mp(v):
        import mpmath

        return mpmath.exp(v)
    return cmath.exp(v)


def _log(v):
    if _is_np(v):
        return np.log(v)
    if _is_mp(v):
        import mpmath

        return mpmath.log(v)
    return cmath.log(v)


def _sqrt(v):
    if _is_np(v):
        return np.sqrt(v)
    if _is_mp(v):
        import mpmath

        return mpmath.sqrt(v)
    return cmath.sqrt(v)


def _all_finite(v):
    if _is_np(v):
        return bool(np.all(np.isfinite(v)))
    if _is_mp(v):
        import mpmath

        return mpmath.isfinite(v)
    if isinstance(v, complex):
        return math.isfinite(v.real) and math.isfinite(v.imag)
    return math.isfinite(v)


def _any_zero(v):
    if _is_np(v):
        return bool(np.any(v == 0))
    return v == 0


def _on_cut(v):
    """True if any value lies on the principal branch cut (-inf, 0]."""
    if _is_np(v):
        return bool(np.any((np.imag(v) == 0) & (np.real(v) <= 0)))
    if _is_mp(v):
        return v.imag == 0 and v.real <= 0
    v = complex(v)
    return v.imag == 0.0 and v.real <= 0.0


def _same_value(a, b):
    if _is_np(a) or _is_np(b):
        return np.array_equal(a, b)
    return a == b


class Jet:
    """Value and derivatives ``(f, f', f'', f''', f'''')`` at ``center``.

    Immutable after construction; every operation returns a fresh Jet.
    The constructor rejects non-finite coefficients.
    """

    __slots__ = ("center", "coeffs")

    def __init__(self, center, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != ORDER + 1:
            raise ValueError(f"a jet needs {ORDER + 1} coefficients, got {len(coeffs)}")
        if not _all_finite(center):
            raise EvaluationError("jet center must be finite")
        for c in coeffs:
            if not _all_finite(c):
                raise EvaluationError("jet coefficients must be finite (no NaN/Inf)")
        self.center = center
        self.coeffs = coeffs

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, k: int):
        """k-th derivative of the represented function at the center."""
        return self.coeffs[k]

    def __repr__(self):
        return f"Jet(center={self.center!r}, coeffs={self.coeffs!r})"

    # -- ring operations ---------------------------------------------------

    def _check_center(self, other: "Jet"):
        if not _same_value(self.center, other.center):
            raise EvaluationError(
                f"jet center mismatch: {self.center!r} vs {other.center!r}"
            )

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check_center(other)
            return Jet(self.center, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))
        c = self.coeffs
        return Jet(self.center, (c[0] + other,) + c[1:])

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.center, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self.center, tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return Jet(self.center, tuple(c / other for c in self.coeffs))

    def __rtruediv__(self, other):
        # scalar / jet, via the quotient recursion with a constant numerator
        return jet_div(jet_constant(other, self.center), self)


def lift_variable(z0) -> Jet:
    """Jet of the identity map at ``z0``: coefficients (z0, 1, 0, 0, 0)."""
    if isinstance(z0, (int, float)):
        z0 = complex(z0)
    if not _all_finite(z0):
        raise EvaluationError("cannot lift a non-finite point")
    return Jet(z0, (z0, 1.0, 0.0, 0.0, 0.0))


def jet_constant(value, z0) -> Jet:
    """Jet of the constant map ``value`` at ``z0``."""
    return Jet(z0, (value, 0.0, 0.0, 0.0, 0.0))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Product jet by the Leibniz rule, exact through order 4."""
    a._check_center(b)
    u, v = a.coeffs, b.coeffs
    out = tuple(
        sum(_BINOM[n][k] * u[k] * v[n - k] for k in range(n + 1)) for n in range(ORDER + 1)
    )
    return Jet(a.center, out)


def jet_div(a: Jet, b: Jet) -> Jet:
    """Quotient jet a/b, solving the Leibniz identity a = q*b order by order."""
    a._check_center(b)
    u, v = a.coeffs, b.coeffs
    if _any_zero(v[0]):
        raise EvaluationError("division by jet with zero value")
    q0 = u[0] / v[0]
    q1 = (u[1] - q0 * v[1]) / v[0]
    q2 = (u[2] - q0 * v[2] - 2 * q1 * v[1]) / v[0]
    q3 = (u[3] - q0 * v[3] - 3 * q1 * v[2] - 3 * q2 * v[1]) / v[0]
    q4 = (u[4] - q0 * v[4] - 4 * q1 * v[3] - 6 * q2 * v[2] - 4 * q3 * v[1]) / v[0]
    return Jet(a.center, (q0, q1, q2, q3, q4))


def _compose_derivs(g, u):
    """Faa di Bruno through order 4.

    ``g`` holds the derivatives of the outer function at the inner value,
    ``u`` the derivatives of the inner function at the center.
    """
    u1, u2, u3, u4 = u[1], u[2], u[3], u[4]
    r0 = g[0]
    r1 = g[1] * u1
    r2 = g[2] * u1 * u1 + g[1] * u2
    r3 = g[3] * u1 ** 3 + 3 * g[2] * u1 * u2 + g[1] * u3
    r4 = (
        g[4] * u1 ** 4
        + 6 * g[3] * u1 * u1 * u2
        + 3 * g[2] * u2 * u2
        + 4 * g[2] * u1 * u3
        + g[1] * u4
    )
    return (r0, r1, r2, r3, r4)


def jet_compose(outer: Jet, inner: Jet) -> Jet:
    """Jet of the composition, where ``outer`` is expanded at ``inner.value``."""
    if not _same_value(outer.center, inner.value):
        raise EvaluationError("outer jet must be centered at the inner jet's value")
    return Jet(inner.center, _compose_derivs(outer.coeffs, inner.coeffs))


# -- elementary functions ----------------------------------------------------
#
# Each helper accepts either a Jet (returning the jet of fn(a) through the
# derivative table of fn at a.value) or a plain scalar (returning fn(value)
# on the principal branch).  The scalar path only rejects outright poles so
# that continuous boundary values remain computable.


def jexp(a):
    if not isinstance(a, Jet):
        return _exp(a)
    e = _exp(a.value)
    return Jet(a.center, _compose_derivs((e, e, e, e, e), a.coeffs))


def jlog(a):
    if not isinstance(a, Jet):
        if _any_zero(a):
            raise EvaluationError("log of zero")
        return _log(a)
    v = a.value
    if _on_cut(v):
        raise BranchCutError(f"log jet on branch cut (-inf, 0]: value {v!r}")
    g = (_log(v), 1 / v, -1 / v ** 2, 2 / v ** 3, -6 / v ** 4)
    return Jet(a.center, _compose_derivs(g, a.coeffs))


def jsqrt(a):
    if not isinstance(a, Jet):
        return _sqrt(a)
    v = a.value
    if _on_cut(v):
        raise BranchCutError(f"sqrt jet on branch cut (-inf, 0]: value {v!r}")
    s = _sqrt(v)
    g = (s, s / (2 * v), -s / (4 * v * v), 3 * s / (8 * v ** 3), -15 * s / (16 * v ** 4))
    return Jet(a.center, _compose_derivs(g, a.coeffs))


def jrecip(a):
    if not isinstance(a, Jet):
        if _any_zero(a):
            raise EvaluationError("reciprocal of zero")
        return 1 / a
    v = a.value
    if _any_zero(v):
        raise EvaluationError("reciprocal jet at zero value")
    r = 1 / v
    g = (r, -(r ** 2), 2 * r ** 3, -6 * r ** 4, 24 * r ** 5)
    return Jet(a.center, _compose_derivs(g, a.coeffs))


def jpow(a, alpha: float):
    """Principal-branch power a**alpha for real alpha."""
    if not isinstance(a, Jet):
        if _any_zero(a):
            raise EvaluationError("pow of zero base")
        return _exp(alpha * _log(a))
    v = a.value
    if _on_cut(v):
        raise BranchCutError(f"pow jet on branch cut (-inf, 0]: value {v!r}")
    p = _exp(alpha * _log(v))
    g = (
        p,
        alpha * p / v,
        alpha * (alpha - 1) * p / v ** 2,
        alpha * (alpha - 1) * (alpha - 2) * p / v ** 3,
        alpha * (alpha - 1) * (alpha - 2) * (alpha - 3) * p / v ** 4,
    )
    return Jet(a.center, _compose_derivs(g, a.coeffs))


_ELEMENTARY = {"exp": jexp, "log": jlog, "sqrt": jsqrt, "recip": jrecip}


def jet_elementary(fn: str, a, alpha: float | None = None):
    """Apply a named elementary function (exp, log, sqrt, recip, pow)."""
    if fn == "pow":
        if alpha is None:
            raise ValueError("pow needs the real exponent alpha")
        return jpow(a, alpha)
    try:
        return _ELEMENTARY[fn](a)
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
