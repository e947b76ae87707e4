"""Core data model: phase states, observables, systems and transformations."""
from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, Sequence

import numpy as np

from .dualnum import _scalar, partials
from .errors import DimensionMismatch, NonFinite

ObservableFn = Callable[[Any, Any, Any], Any]
FieldFn = Callable[[Any, Any, Any], Sequence]


def _frozen(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PhaseState:
    """A point ``(q, p, t)`` of extended phase space."""

    q: np.ndarray
    p: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "q", _frozen(self.q))
        object.__setattr__(self, "p", _frozen(self.p))
        object.__setattr__(self, "t", float(self.t))

    @property
    def dim(self) -> int:
        return len(self.q)

    def __eq__(self, other):
        if not isinstance(other, PhaseState):
            return NotImplemented
        return np.array_equal(self.q, other.q) and np.array_equal(self.p, other.p) and self.t == other.t

    def __hash__(self):
        return hash((self.q.tobytes(), self.p.tobytes(), self.t))

    def __repr__(self):
        return f"PhaseState(q={self.q.tolist()}, p={self.p.tolist()}, t={self.t!r})"

    def replace(self, q=None, p=None, t=None) -> "PhaseState":
        return PhaseState(
            self.q if q is None else q, self.p if p is None else p, self.t if t is None else t
        )


def make_state(q, p, t=0.0) -> PhaseState:
    q = np.atleast_1d(np.asarray(q, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if q.ndim != 1 or p.ndim != 1 or len(q) != len(p):
        raise DimensionMismatch(f"q has shape {q.shape}, p has shape {p.shape}")
    if len(q) == 0:
        raise DimensionMismatch("phase space needs at least one degree of freedom")
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p)) and np.isfinite(t)):
        raise NonFinite("state entries must be finite")
    return PhaseState(q, p, t)


def sample_states(dim: int, n: int, seed: int, box: float = 1.0) -> list[PhaseState]:
    """``n`` states with q, p uniform in ``[-box, box]^dim`` and t uniform in ``[0, box]``."""
    if n <= 0 or box <= 0 or dim <= 0:
        raise ValueError("sample_states needs dim > 0, n > 0 and box > 0")
    rng = np.random.default_rng(seed)
    q = rng.uniform(-box, box, size=(n, dim))
    p = rng.uniform(-box, box, size=(n, dim))
    t = rng.uniform(0.0, box, size=n)
    return [PhaseState(q[k], p[k], t[k]) for k in range(n)]


# -- observables -----------------------------------------------------------


def _lift_operand(x, dim):
    if isinstance(x, (Observable, ComplexObservable)):
        if x.dim != dim:
            raise DimensionMismatch(f"cannot combine observables of dim {dim} and {x.dim}")
        return x
    if isinstance(x, numbers.Number):
        return x
    return NotImplemented


@dataclass(frozen=True)
class Observable:
    """A real phase-space function ``fn(q, p, t)``.

    ``fn`` must be written with plain arithmetic and numpy ufuncs so that it
    also accepts dual-number arguments.
    """

    fn: ObservableFn
    dim: int
    label: str = ""

    is_complex = False

    def __call__(self, s: PhaseState):
        return _scalar(self.fn(s.q, s.p, s.t))

    def at(self, q, p, t):
        return _scalar(self.fn(q, p, t))

    def relabel(self, label: str) -> "Observable":
        return Observable(self.fn, self.dim, label)

    def _binary(self, other, op, symbol, reflected=False):
        other = _lift_operand(other, self.dim)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, ComplexObservable) or isinstance(other, complex):
            me = ComplexObservable.from_real(self)
            return op(other, me) if reflected else op(me, other)
        f = self.fn
        if isinstance(other, Observable):
            g = other.fn
            other_label = other.label
            if reflected:
                fn = lambda q, p, t: op(g(q, p, t), f(q, p, t))  # noqa: E731
            else:
                fn = lambda q, p, t: op(f(q, p, t), g(q, p, t))  # noqa: E731
        else:
            c = other
            other_label = repr(c)
            if reflected:
                fn = lambda q, p, t: op(c, f(q, p, t))  # noqa: E731
            else:
                fn = lambda q, p, t: op(f(q, p, t), c)  # noqa: E731
        label = f"({other_label}{symbol}{self.label})" if reflected else f"({self.label}{symbol}{other_label})"
        return Observable(fn, self.dim, label)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b, "+")

    def __radd__(self, other):
        return self._binary(other, lambda a, b: a + b, "+", reflected=True)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: a - b, "-", reflected=True)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b, "*")

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: a * b, "*", reflected=True)

    def __neg__(self):
        f = self.fn
        return Observable(lambda q, p, t: -f(q, p, t), self.dim, f"-{self.label}")


@dataclass(frozen=True)
class ComplexObservable:
    """A complex observable held as a pair of real observables."""

    re: Observable
    im: Observable
    label: str = ""

    is_complex = True

    def __post_init__(self):
        if self.re.dim != self.im.dim:
            raise DimensionMismatch("real and imaginary parts have different dimensions")

    @property
    def dim(self) -> int:
        return self.re.dim

    @classmethod
    def from_real(cls, f: Observable) -> "ComplexObservable":
        zero = Observable(lambda q, p, t: 0.0, f.dim, "0")
        return cls(f, zero, f.label)

    def __call__(self, s: PhaseState) -> complex:
        return complex(self.re(s)) + 1j * complex(self.im(s))

    def conj(self) -> "ComplexObservable":
        return ComplexObservable(self.re, -self.im, f"{self.label}^*")

    def abs2(self) -> Observable:
        return (self.re * self.re + self.im * self.im).relabel(f"|{self.label}|^2")

    def _coerce(self, other):
        other = _lift_operand(other, self.dim)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, Observable):
            return ComplexObservable.from_real(other)
        if isinstance(other, numbers.Number):
            c = complex(other)
            return c
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, complex):
            return ComplexObservable(self.re + other.real, self.im + other.imag, self.label)
        return ComplexObservable(self.re + other.re, self.im + other.im, f"({self.label}+{other.label})")

    __radd__ = __add__

    def __neg__(self):
        return ComplexObservable(-self.re, -self.im, f"-{self.label}")

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, complex):
            a, b = other.real, other.imag
            return ComplexObservable(
                self.re * a - self.im * b, self.re * b + self.im * a, f"({other!r}*{self.label})"
            )
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return ComplexObservable(re, im, f"({self.label}*{other.label})")

    __rmul__ = __mul__


def coordinate(kind: str, index: int, dim: int) -> Observable:
    """The coordinate function ``q^index`` (kind ``"q"``) or ``p_index`` (``"p"``)."""
    if not 0 <= index < dim:
        raise DimensionMismatch(f"coordinate index {index} out of range for dim {dim}")
    if kind == "q":
        return Observable(lambda q, p, t: q[index], dim, f"q{index}")
    if kind == "p":
        return Observable(lambda q, p, t: p[index], dim, f"p{index}")
    raise ValueError(f"coordinate kind must be 'q' or 'p', got {kind!r}")


def time_observable(dim: int) -> Observable:
    return Observable(lambda q, p, t: t, dim, "t")


# -- systems ---------------------------------------------------------------


@dataclass(frozen=True)
class SystemSpec:
    """A time-independent Hamiltonian system.

    ``grad_q`` / ``grad_p`` are optional closed forms ``(q, p) -> array`` of
    the Hamiltonian gradient; integrators prefer them for speed.  When absent,
    dual-number gradients of ``hamiltonian`` are used.  ``separable`` is a
    declaration (kinetic(p) + potential(q)), never inferred.
    """

    dim: int
    hamiltonian: Observable
    name: str
    params: Mapping[str, Any] = field(default_factory=dict)
    separable: bool = False
    grad_q: Optional[Callable] = None
    grad_p: Optional[Callable] = None

    @property
    def hbar(self) -> float:
        return float(self.params.get("hbar", 1.0))

    def dH_dq(self, q, p):
        if self.grad_q is not None:
            return self.grad_q(q, p)
        return partials(self.hamiltonian.fn, q, p, 0.0).d_q

    def dH_dp(self, q, p):
        if self.grad_p is not None:
            return self.grad_p(q, p)
        return partials(self.hamiltonian.fn, q, p, 0.0).d_p

    def vector_field(self, q, p):
        """``(dq/dt, dp/dt) = (dH/dp, -dH/dq)``."""
        return self.dH_dp(q, p), -np.asarray(self.dH_dq(q, p))


@dataclass(frozen=True)
class Transformation:
    """Linearised symmetry candidate ``dq = eps*phi``, ``dp = eps*chi`` with surface term ``Lambda``.

    ``phi`` and ``chi`` are functions ``(q, p, t) -> sequence of length d``.
    """

    phi: FieldFn
    chi: FieldFn
    surface: Observable
    lambda_param: float
    label: str = ""

    @property
    def dim(self) -> int:
        return self.surface.dim

    def phi_at(self, s: PhaseState) -> np.ndarray:
        return np.asarray(self.phi(s.q, s.p, s.t), dtype=float)

    def chi_at(self, s: PhaseState) -> np.ndarray:
        return np.asarray(self.chi(s.q, s.p, s.t), dtype=float)

    def component(self, which: str, index: int) -> Observable:
        """One component of ``phi`` or ``chi`` as an observable."""
        f = self.phi if which == "phi" else self.chi
        return Observable(lambda q, p, t: f(q, p, t)[index], self.dim, f"{which}{index}")
