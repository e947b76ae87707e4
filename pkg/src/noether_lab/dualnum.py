"""Forward-mode differentiation of phase-space observables.

A :class:`Dual` carries a value and a vector of directional derivatives.  All
``2d + 1`` directions (every ``q``, every ``p`` and ``t``) are seeded in one
pass, so an observable is evaluated once per state.

Duals nest.  Each call to :func:`partials` draws a fresh tag; a dual with a
larger tag sits on the outside and treats any dual with a smaller tag as a
plain scalar.  This is what lets a field such as ``dF/dp`` (itself computed
with duals) be differentiated again, e.g. when a transformation produced by
the converse construction is checked against the consistency conditions.

Observables are plain functions ``fn(q, p, t)`` written with ordinary
arithmetic and numpy ufuncs (``np.sin``, ``np.exp``, ...).  ``q`` and ``p``
arrive as object arrays of duals during differentiation, so ``np.dot`` and
friends keep working.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import DimensionMismatch, NonFinite

_tags = itertools.count(1)

DEFAULT_FD_STEP = 1e-5


def _scalar(x):
    # numpy ops on 0-d object arrays hand back 0-d arrays; unwrap them
    if isinstance(x, np.ndarray) and x.shape == ():
        return x.item()
    return x


def _fn(name: str) -> Callable:
    np_fn = getattr(np, name)

    def apply(x):
        if isinstance(x, Dual):
            return getattr(x, name)()
        return np_fn(x)

    apply.__name__ = name
    return apply


class Dual:
    """``value + sum_k derivs[k] * eps_k`` with nilpotent ``eps_k``."""

    __slots__ = ("value", "derivs", "tag")

    def __init__(self, value, derivs, tag: int):
        self.value = value
        self.derivs = np.asarray(derivs) if not isinstance(derivs, np.ndarray) else derivs
        self.tag = tag

    def __repr__(self):
        return f"Dual({self.value!r}, {self.derivs!r}, tag={self.tag})"

    def _lift(self, value, slope):
        return Dual(value, self.derivs * slope, self.tag)

    # -- arithmetic ------------------------------------------------------
    # An operand that is an ndarray is left to numpy (elementwise); a dual
    # with a larger tag is the outer structure, so we defer to its reflected op.

    def __add__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual):
            if other.tag > self.tag:
                return other.__radd__(self)
            if other.tag == self.tag:
                return Dual(self.value + other.value, self.derivs + other.derivs, self.tag)
        return Dual(self.value + other, self.derivs, self.tag)

    def __radd__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return Dual(other + self.value, self.derivs, self.tag)

    def __sub__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual):
            if other.tag > self.tag:
                return other.__rsub__(self)
            if other.tag == self.tag:
                return Dual(self.value - other.value, self.derivs - other.derivs, self.tag)
        return Dual(self.value - other, self.derivs, self.tag)

    def __rsub__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return Dual(other - self.value, -self.derivs, self.tag)

    def __mul__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual):
            if other.tag > self.tag:
                return other.__rmul__(self)
            if other.tag == self.tag:
                return Dual(
                    self.value * other.value,
                    self.derivs * other.value + other.derivs * self.value,
                    self.tag,
                )
        return Dual(self.value * other, self.derivs * other, self.tag)

    def __rmul__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        return Dual(other * self.value, self.derivs * other, self.tag)

    def __truediv__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual):
            if other.tag > self.tag:
                return other.__rtruediv__(self)
            if other.tag == self.tag:
                inv = 1.0 / other.value
                value = self.value * inv
                return Dual(value, (self.derivs - other.derivs * value) * inv, self.tag)
        inv = 1.0 / other
        return Dual(self.value * inv, self.derivs * inv, self.tag)

    def __rtruediv__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        inv = 1.0 / self.value
        value = other * inv
        return Dual(value, self.derivs * (-value * inv), self.tag)

    def __neg__(self):
        return Dual(-self.value, -self.derivs, self.tag)

    def __pos__(self):
        return self

    def __pow__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if isinstance(other, Dual):
            if other.tag > self.tag:
                return other.__rpow__(self)
            if other.tag == self.tag:
                return (other * self.log()).exp()
        if isinstance(other, (int, np.integer)) and other == 0:
            return Dual(self.value ** 0, self.derivs * 0.0, self.tag)
        return self._lift(self.value ** other, other * self.value ** (other - 1))

    def __rpow__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        value = other ** self.value
        return self._lift(value, value * _log(other))

    # -- elementary functions (also reached through numpy object ufuncs) --

    def sin(self):
        return self._lift(_sin(self.value), _cos(self.value))

    def cos(self):
        return self._lift(_cos(self.value), -_sin(self.value))

    def tan(self):
        value = _tan(self.value)
        return self._lift(value, 1.0 + value * value)

    def exp(self):
        value = _exp(self.value)
        return self._lift(value, value)

    def log(self):
        return self._lift(_log(self.value), 1.0 / self.value)

    def sqrt(self):
        value = _sqrt(self.value)
        return self._lift(value, 0.5 / value)

    def tanh(self):
        value = _tanh(self.value)
        return self._lift(value, 1.0 - value * value)

    def sinh(self):
        return self._lift(_sinh(self.value), _cosh(self.value))

    def cosh(self):
        return self._lift(_cosh(self.value), _sinh(self.value))

    def arctan(self):
        return self._lift(_arctan(self.value), 1.0 / (1.0 + self.value * self.value))

    def conjugate(self):
        # duals here are real-valued
        return self

    def __float__(self):
        raise TypeError("cannot convert a Dual to float; use .value")

    def __bool__(self):
        raise TypeError("truth value of a Dual is ambiguous")


sin = _fn("sin")
cos = _fn("cos")
tan = _fn("tan")
exp = _fn("exp")
log = _fn("log")
sqrt = _fn("sqrt")
tanh = _fn("tanh")
sinh = _fn("sinh")
cosh = _fn("cosh")
arctan = _fn("arctan")

_sin, _cos, _tan, _exp, _log, _sqrt = sin, cos, tan, exp, log, sqrt
_tanh, _sinh, _cosh, _arctan = tanh, sinh, cosh, arctan


def primal(x):
    """Strip every dual layer and return the underlying number."""
    while isinstance(x, Dual):
        x = x.value
    return x


@dataclass(frozen=True)
class GradResult:
    """Value of an observable and all its first partials at one state."""

    value: Any
    d_q: np.ndarray
    d_p: np.ndarray
    d_t: Any

    @property
    def dim(self) -> int:
        return len(self.d_q)

    def as_vector(self) -> np.ndarray:
        """Partials laid out as ``(d_q, d_p, d_t)``."""
        return np.concatenate([self.d_q, self.d_p, [self.d_t]])

    def __add__(self, other: "GradResult") -> "GradResult":
        return GradResult(
            self.value + other.value, self.d_q + other.d_q, self.d_p + other.d_p, self.d_t + other.d_t
        )

    def scale(self, c) -> "GradResult":
        return GradResult(c * self.value, c * self.d_q, c * self.d_p, c * self.d_t)


def partials(fn: Callable, q, p, t) -> GradResult:
    """Differentiate ``fn(q, p, t)`` in all ``2d + 1`` directions at once.

    ``q``, ``p`` and ``t`` may themselves hold duals from an enclosing
    differentiation; the returned partials then carry those outer layers.
    """
    d = len(q)
    if len(p) != d:
        raise DimensionMismatch(f"len(q)={d} but len(p)={len(p)}")
    tag = next(_tags)
    width = 2 * d + 1
    seeds = np.eye(width)
    qd = np.empty(d, dtype=object)
    pd = np.empty(d, dtype=object)
    for i in range(d):
        qd[i] = Dual(q[i], seeds[i], tag)
        pd[i] = Dual(p[i], seeds[d + i], tag)
    td = Dual(t, seeds[2 * d], tag)

    out = _scalar(fn(qd, pd, td))
    if isinstance(out, np.ndarray):
        raise DimensionMismatch(f"observable returned an array of shape {out.shape}, expected a scalar")
    if isinstance(out, Dual) and out.tag == tag:
        value, derivs = out.value, out.derivs
    else:
        # nothing seeded here reached the output: all partials vanish
        value, derivs = out, np.zeros(width)
    derivs = _demote(derivs)
    return GradResult(value, derivs[:d], derivs[d : 2 * d], derivs[2 * d])


@dataclass(frozen=True)
class FieldJacobian:
    """Values and partials of a vector field ``f^b(q, p, t)``.

    ``d_q[b, a]`` is ``d f^b / d q^a``; likewise ``d_p``.  ``d_t[b]`` is the
    explicit time derivative.
    """

    values: np.ndarray
    d_q: np.ndarray
    d_p: np.ndarray
    d_t: np.ndarray


def field_partials(fn: Callable, q, p, t) -> FieldJacobian:
    """Jacobian of a vector-valued ``fn(q, p, t)`` from one dual evaluation."""
    d = len(q)
    tag = next(_tags)
    width = 2 * d + 1
    seeds = np.eye(width)
    qd = np.empty(d, dtype=object)
    pd = np.empty(d, dtype=object)
    for i in range(d):
        qd[i] = Dual(q[i], seeds[i], tag)
        pd[i] = Dual(p[i], seeds[d + i], tag)
    out = fn(qd, pd, Dual(t, seeds[2 * d], tag))
    out = list(np.asarray(out, dtype=object).ravel())
    m = len(out)
    values = np.empty(m, dtype=object)
    jac = np.zeros((m, width), dtype=object)
    for b, comp in enumerate(out):
        comp = _scalar(comp)
        if isinstance(comp, Dual) and comp.tag == tag:
            values[b] = comp.value
            jac[b, :] = comp.derivs
        else:
            values[b] = comp
    values = _demote(values)
    jac = _demote(jac.ravel()).reshape(m, width)
    return FieldJacobian(values, jac[:, :d], jac[:, d : 2 * d], jac[:, 2 * d])


def _demote(arr: np.ndarray) -> np.ndarray:
    """Return a float array when no entry carries an outer dual layer."""
    if arr.dtype == object and not any(isinstance(x, Dual) for x in arr):
        return arr.astype(complex if any(isinstance(x, complex) for x in arr) else float)
    return arr


def _check_finite(res: GradResult) -> GradResult:
    vals = [res.value, res.d_t, *res.d_q, *res.d_p]
    if any(isinstance(v, Dual) for v in vals):
        return res
    if not np.all(np.isfinite(np.asarray(vals, dtype=complex))):
        raise NonFinite("observable or its gradient is not finite at this state")
    return res


def _check_dim(f, s):
    dim = getattr(f, "dim", None)
    if dim is not None and dim != len(s.q):
        raise DimensionMismatch(f"observable {getattr(f, 'label', f)!r} has dim {dim}, state has dim {len(s.q)}")


def grad(f, s) -> GradResult:
    """All first partials of observable ``f`` at phase state ``s``.

    Complex observables (anything exposing ``re`` and ``im`` parts) are
    differentiated componentwise and recombined.
    """
    _check_dim(f, s)
    if getattr(f, "is_complex", False):
        re = grad(f.re, s)
        im = grad(f.im, s)
        return re + im.scale(1j)
    return _check_finite(partials(f.fn, s.q, s.p, s.t))


def fd_grad(f, s, h: float = DEFAULT_FD_STEP) -> GradResult:
    """Central-difference partials, truncation error O(h**2)."""
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    _check_dim(f, s)
    if getattr(f, "is_complex", False):
        return fd_grad(f.re, s, h) + fd_grad(f.im, s, h).scale(1j)
    fn = f.fn
    q = np.asarray(s.q, dtype=float)
    p = np.asarray(s.p, dtype=float)
    t = float(s.t)
    d = len(q)

    def central(dq, dp, dt):
        hi = fn(q + dq, p + dp, t + dt)
        lo = fn(q - dq, p - dp, t - dt)
        return (hi - lo) / (2.0 * h)

    zero = np.zeros(d)
    d_q = np.empty(d)
    d_p = np.empty(d)
    for i in range(d):
        e = zero.copy()
        e[i] = h
        d_q[i] = central(e, zero, 0.0)
        d_p[i] = central(zero, e, 0.0)
    d_t = central(zero, zero, h)
    value = _scalar(fn(q, p, t))
    return _check_finite(GradResult(value, d_q, d_p, d_t))


def derivative(fn: Callable[[Any], Any], x: float) -> Any:
    """Ordinary derivative of a scalar function of one variable."""
    tag = next(_tags)
    out = _scalar(fn(Dual(x, np.ones(1), tag)))
    if isinstance(out, Dual) and out.tag == tag:
        return out.derivs[0]
    return 0.0
