"""Poisson brackets, total time derivatives and bracket-algebra tooling."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._parallel import pmap
from .dualnum import GradResult, _scalar, fd_grad, grad, partials
from .errors import DimensionMismatch, NonFinite, PrecheckFailed
from .phasespace import ComplexObservable, Observable, PhaseState, SystemSpec

JACOBI_FD_STEP = 1e-4


def _same_dim(*objs):
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch among {[getattr(o, 'label', o) for o in objs]}: {dims}")
    return dims.pop()


def _from_grads(gf: GradResult, gg: GradResult):
    return _scalar(np.dot(gf.d_q, gg.d_p) - np.dot(gf.d_p, gg.d_q))


def _finite(x):
    if not np.isfinite(complex(x)):
        raise NonFinite("bracket evaluated to a non-finite value")
    return x


def bracket(f, g, s: PhaseState):
    """``{f, g} = sum_a (df/dq^a dg/dp_a - df/dp_a dg/dq^a)`` at ``s``."""
    _same_dim(f, g, s)
    return _finite(_from_grads(grad(f, s), grad(g, s)))


def _raw_bracket(ffn, gfn, q, p, t):
    return _from_grads(partials(ffn, q, p, t), partials(gfn, q, p, t))


def bracket_observable(f, g):
    """``{f, g}`` as a new observable (differentiable again through nested duals)."""
    _same_dim(f, g)
    if f.is_complex or g.is_complex:
        fc = f if f.is_complex else ComplexObservable.from_real(f)
        gc = g if g.is_complex else ComplexObservable.from_real(g)
        re = bracket_observable(fc.re, gc.re) - bracket_observable(fc.im, gc.im)
        im = bracket_observable(fc.re, gc.im) + bracket_observable(fc.im, gc.re)
        return ComplexObservable(re, im, f"{{{f.label},{g.label}}}")
    ffn, gfn = f.fn, g.fn
    return Observable(lambda q, p, t: _raw_bracket(ffn, gfn, q, p, t), f.dim, f"{{{f.label},{g.label}}}")


def total_derivative(f, sys: SystemSpec, s: PhaseState):
    """``df/dt = df/dt|explicit + {f, H}`` at ``s``."""
    explicit, flow = time_derivative_split(f, sys, s)
    return explicit + flow


def time_derivative_split(f, sys: SystemSpec, s: PhaseState):
    """The pair ``(explicit partial d/dt, {f, H})``."""
    _same_dim(f, sys.hamiltonian, s)
    gf = grad(f, s)
    gh = grad(sys.hamiltonian, s)
    return _finite(gf.d_t), _finite(_from_grads(gf, gh))


def jacobi_residual(f, g, h, s: PhaseState, step: float = JACOBI_FD_STEP) -> float:
    """``|{f,{g,h}} + {g,{h,f}} + {h,{f,g}}|`` with the inner brackets differentiated by central differences."""
    _same_dim(f, g, h, s)
    total = 0.0
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        inner = bracket_observable(b, c)
        total = total + _from_grads(grad(a, s), fd_grad(inner, s, step))
    return float(abs(total))


@dataclass(frozen=True)
class BracketTable:
    labels: list[str]
    values: np.ndarray
    state: PhaseState

    def antisymmetry_defect(self) -> float:
        return float(np.max(np.abs(self.values + self.values.T))) if len(self.labels) else 0.0

    def to_dict(self) -> dict:
        vals = self.values
        if np.iscomplexobj(vals):
            cells = [[[float(v.real), float(v.imag)] for v in row] for row in vals]
        else:
            cells = [[float(v) for v in row] for row in vals]
        return {
            "labels": list(self.labels),
            "values": cells,
            "state": {"q": self.state.q.tolist(), "p": self.state.p.tolist(), "t": self.state.t},
        }


def bracket_table(obs: Sequence, s: PhaseState) -> BracketTable:
    if not obs:
        raise ValueError("bracket_table needs at least one observable")
    _same_dim(*obs, s)
    grads = [grad(o, s) for o in obs]
    n = len(obs)
    complex_entries = any(o.is_complex for o in obs)
    values = np.zeros((n, n), dtype=complex if complex_entries else float)
    for i in range(n):
        for j in range(n):
            if i != j:
                values[i, j] = _finite(_from_grads(grads[i], grads[j]))
    return BracketTable([o.label for o in obs], values, s)


@dataclass(frozen=True)
class StructureConstants:
    """Bracket tables at several states plus how much each entry varies.

    Entries whose spread is below ``tol`` are reported constant; the rest are
    observable-valued (e.g. ``{gamma, H} = -T``).
    """

    labels: list[str]
    tables: np.ndarray
    spread: np.ndarray
    tol: float

    @property
    def constant_mask(self) -> np.ndarray:
        return self.spread < self.tol


def structure_constants(obs: Sequence, states: Sequence[PhaseState], tol: float = 1e-9) -> StructureConstants:
    tables = np.array([bracket_table(obs, s).values for s in states])
    spread = np.max(np.abs(tables - tables[0]), axis=0)
    return StructureConstants([o.label for o in obs], tables, spread, tol)


@dataclass(frozen=True)
class ClosureReport:
    labels: list[str]
    precheck: dict[str, float]
    pair_residuals: dict[tuple[int, int], float] = field(default_factory=dict)
    tol: float = 1e-9

    @property
    def max_residual(self) -> float:
        return max(self.pair_residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol


def _max_total_derivative(f, sys, states) -> float:
    return max(pmap(lambda s: abs(total_derivative(f, sys, s)), states), default=0.0)


def closure_check(obs: Sequence, sys: SystemSpec, states: Sequence[PhaseState], tol: float = 1e-9) -> ClosureReport:
    """Check that brackets of conserved observables are conserved again."""
    _same_dim(*obs, sys.hamiltonian)
    precheck = {}
    for o in obs:
        r = _max_total_derivative(o, sys, states)
        precheck[o.label] = r
        if not r < tol:
            raise PrecheckFailed(f"{o.label!r} is not conserved (max |dF/dt| = {r:.3e})")
    pairs = {}
    for i, j in itertools.combinations(range(len(obs)), 2):
        pairs[(i, j)] = _max_total_derivative(bracket_observable(obs[i], obs[j]), sys, states)
    return ClosureReport([o.label for o in obs], precheck, pairs, tol)
