"""Fixed-step integrators for time-independent Hamiltonians and drift diagnostics."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._parallel import pmap
from .dualnum import field_partials
from .errors import NoConvergence, NonFinite, NotSeparable
from .phasespace import PhaseState, SystemSpec

METHODS = ("verlet", "midpoint", "rk4")
MIDPOINT_TOL = 1e-13
MIDPOINT_MAXITER = 50


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A discrete solution sampled at ``t0 + k*h``, ``k = 0..n``.

    ``q`` and ``p`` have shape ``(n + 1, d)``.  Times are never accumulated,
    so ``times[k+1] - times[k]`` is ``h`` up to a single rounding.
    """

    q: np.ndarray
    p: np.ndarray
    t0: float
    h: float
    sys_name: str
    integrator: str

    def __len__(self) -> int:
        return len(self.q)

    @property
    def dim(self) -> int:
        return self.q.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self.q)) * self.h

    @property
    def states(self) -> list[PhaseState]:
        ts = self.times
        return [PhaseState(self.q[k], self.p[k], ts[k]) for k in range(len(ts))]

    def state(self, k: int) -> PhaseState:
        return PhaseState(self.q[k], self.p[k], self.t0 + k * self.h)

    def to_csv(self, path) -> None:
        """Write ``t,q0..,p0..`` rows with 17 significant digits."""
        d = self.dim
        header = ["t"] + [f"q{i}" for i in range(d)] + [f"p{i}" for i in range(d)]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for t, q, p in zip(self.times, self.q, self.p):
                w.writerow(["%.17g" % x for x in (t, *q, *p)])


def read_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :meth:`Trajectory.to_csv`: returns ``(t, q, p)`` arrays."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    d = (data.shape[1] - 1) // 2
    return data[:, 0], data[:, 1 : 1 + d], data[:, 1 + d :]


# -- single steps ------------------------------------------------------------
# Steppers return the increments (dq, dp) rather than the new state: the
# driver accumulates them with compensated summation, which keeps round-off
# from growing linearly with the step count.  They are written with plain
# arithmetic so dual-number states pass through them for the tangent map.


def _verlet_increment(sys: SystemSpec, h: float):
    def inc(q, p):
        kick1 = -0.5 * h * np.asarray(sys.dH_dq(q, p))
        dq = h * np.asarray(sys.dH_dp(q, p + kick1))
        kick2 = -0.5 * h * np.asarray(sys.dH_dq(q + dq, p + kick1))
        return dq, kick1 + kick2

    return inc


def _rk4_increment(sys: SystemSpec, h: float):
    def f(q, p):
        vq, vp = sys.vector_field(q, p)
        return np.asarray(vq), np.asarray(vp)

    def inc(q, p):
        k1q, k1p = f(q, p)
        k2q, k2p = f(q + 0.5 * h * k1q, p + 0.5 * h * k1p)
        k3q, k3p = f(q + 0.5 * h * k2q, p + 0.5 * h * k2p)
        k4q, k4p = f(q + h * k3q, p + h * k3p)
        return (h / 6.0) * (k1q + 2 * k2q + 2 * k3q + k4q), (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)

    return inc


def _midpoint_increment(sys: SystemSpec, h: float):
    def inc(q, p):
        dq, dp = np.zeros_like(q), np.zeros_like(p)
        scale = 1.0 + max(np.max(np.abs(q)), np.max(np.abs(p)))
        for _ in range(MIDPOINT_MAXITER):
            vq, vp = sys.vector_field(q + 0.5 * dq, p + 0.5 * dp)
            dq_next = h * np.asarray(vq, dtype=float)
            dp_next = h * np.asarray(vp, dtype=float)
            change = max(np.max(np.abs(dq_next - dq)), np.max(np.abs(dp_next - dp)))
            dq, dp = dq_next, dp_next
            if change <= MIDPOINT_TOL * scale:
                return dq, dp
        raise NoConvergence(f"implicit midpoint fixed point did not converge in {MIDPOINT_MAXITER} iterations (h={h})")

    return inc


def _increment(method: str, sys: SystemSpec, h: float):
    if method == "verlet":
        if not sys.separable:
            raise NotSeparable(f"system {sys.name!r} is not declared separable; use midpoint or rk4")
        return _verlet_increment(sys, h)
    if method == "midpoint":
        return _midpoint_increment(sys, h)
    if method == "rk4":
        return _rk4_increment(sys, h)
    raise ValueError(f"unknown integrator {method!r}; expected one of {METHODS}")


def _stepper(method: str, sys: SystemSpec, h: float):
    inc = _increment(method, sys, h)

    def step(q, p):
        dq, dp = inc(q, p)
        return q + dq, p + dp

    return step


def _run(method: str, sys: SystemSpec, s0: PhaseState, h: float, n: int, allow_zero_step=False) -> Trajectory:
    if s0.dim != sys.dim:
        raise ValueError(f"state has dim {s0.dim}, system has dim {sys.dim}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if not (h > 0 or (allow_zero_step and h == 0)):
        raise ValueError(f"step size must be positive, got {h}")
    inc = _increment(method, sys, h)
    d = sys.dim
    qs = np.empty((n + 1, d))
    ps = np.empty((n + 1, d))
    qs[0], ps[0] = s0.q, s0.p
    q, p = s0.q.copy(), s0.p.copy()
    cq, cp = np.zeros(d), np.zeros(d)
    for k in range(1, n + 1):
        dq, dp = inc(q, p)
        # Kahan summation: c carries the low-order bits lost in the last add
        yq = np.asarray(dq, dtype=float) - cq
        yp = np.asarray(dp, dtype=float) - cp
        q_new, p_new = q + yq, p + yp
        cq, cp = (q_new - q) - yq, (p_new - p) - yp
        q, p = q_new, p_new
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise NonFinite(f"{method} produced a non-finite state at step {k}")
        qs[k], ps[k] = q, p
    return Trajectory(qs, ps, s0.t, float(h), sys.name, method)


def verlet(sys: SystemSpec, s0: PhaseState, h: float, n: int) -> Trajectory:
    """Stormer-Verlet (kick-drift-kick); needs a declared separable system."""
    return _run("verlet", sys, s0, h, n)


def midpoint(sys: SystemSpec, s0: PhaseState, h: float, n: int) -> Trajectory:
    """Implicit midpoint rule solved by fixed-point iteration. ``h = 0`` is allowed."""
    return _run("midpoint", sys, s0, h, n, allow_zero_step=True)


def rk4(sys: SystemSpec, s0: PhaseState, h: float, n: int) -> Trajectory:
    return _run("rk4", sys, s0, h, n)


INTEGRATORS: dict[str, Callable[..., Trajectory]] = {"verlet": verlet, "midpoint": midpoint, "rk4": rk4}


def integrate(method: str, sys: SystemSpec, s0: PhaseState, h: float, n: int) -> Trajectory:
    try:
        fn = INTEGRATORS[method]
    except KeyError:
        raise ValueError(f"unknown integrator {method!r}; expected one of {METHODS}") from None
    return fn(sys, s0, h, n)


def integrate_batch(method: str, sys: SystemSpec, starts: Sequence[PhaseState], h: float, n: int) -> list[Trajectory]:
    """One trajectory per initial condition, returned in input order."""
    return pmap(lambda s: integrate(method, sys, s, h, n), starts, min_items=2)


# -- diagnostics -------------------------------------------------------------


def drift(traj: Trajectory, f) -> np.ndarray:
    """``f(state_k) - f(state_0)`` for each k; modulus of the difference for complex ``f``."""
    if f.dim != traj.dim:
        raise ValueError(f"observable has dim {f.dim}, trajectory has dim {traj.dim}")
    states = traj.states
    vals = [f(s) for s in states]
    if f.is_complex:
        return np.array([abs(v - vals[0]) for v in vals])
    return np.array([float(v - vals[0]) for v in vals])


def _step_jacobian(method: str, sys: SystemSpec, h: float, q, p) -> np.ndarray:
    d = len(q)
    if method == "midpoint":
        # implicit function theorem at the converged step:
        # (I - h/2 Df) dz1 = (I + h/2 Df) dz0, Df evaluated at the midpoint
        q1, p1 = _stepper("midpoint", sys, h)(q, p)
        J = field_partials(lambda a, b, t: np.concatenate(sys.vector_field(a, b)), 0.5 * (q + q1), 0.5 * (p + p1), 0.0)
        Df = np.hstack([J.d_q, J.d_p])
        eye = np.eye(2 * d)
        return np.linalg.solve(eye - 0.5 * h * Df, eye + 0.5 * h * Df)
    step = _stepper(method, sys, h)
    J = field_partials(lambda a, b, t: np.concatenate(step(a, b)), q, p, 0.0)
    return np.hstack([J.d_q, J.d_p])


def tangent_map_determinant(traj: Trajectory, sys: SystemSpec) -> np.ndarray:
    """det of the accumulated tangent map ``dz_k/dz_0`` along ``traj``.

    Each step's Jacobian is exact (dual numbers, or the implicit-function
    identity for midpoint); ``det`` of the product is the product of the
    per-step determinants, accumulated as a sum of logs.
    """
    dets = np.empty(len(traj))
    dets[0] = 1.0
    logdet = 0.0
    sign = 1.0
    for k in range(1, len(traj)):
        s, ld = np.linalg.slogdet(_step_jacobian(traj.integrator, sys, traj.h, traj.q[k - 1], traj.p[k - 1]))
        sign *= s
        logdet += ld
        dets[k] = sign * np.exp(logdet)
    return dets
