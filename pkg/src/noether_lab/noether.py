"""Noether charges from symmetries, and symmetries from conserved observables.

Forward direction: a transformation ``(phi, chi, Lambda; lambda)`` is checked
against the three consistency conditions, then assembled into the charge

    Q = lambda * phi.p - (1 - lambda) * q.chi - Lambda.

Converse direction: a conserved ``F`` generates ``phi = dF/dp``,
``chi = -dF/dq`` with ``Lambda = lambda * phi.p - (1 - lambda) * q.chi - F``.

Charges and surface terms are only defined up to an additive constant, so
comparisons between charges go through gradients or through values relative
to the reference state ``(q=0, p=0, t=0)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._parallel import pmap
from .dualnum import field_partials, grad, partials
from .errors import GeneratorMismatch, NonFinite, PrecheckFailed
from .integrate import Trajectory
from .phasespace import Observable, PhaseState, SystemSpec, Transformation, coordinate, sample_states
from .poisson import bracket, time_derivative_split, total_derivative

# tolerance ladder: exact dual-number identities vs anything touching finite differences
TOL_EXACT = 1e-10
TOL_FD = 1e-6


@dataclass(frozen=True)
class ConsistencyReport:
    residual_q: float
    residual_p: float
    residual_t: float
    tol: float
    lambda_param: float
    n_states: int

    @property
    def passed(self) -> bool:
        return max(self.residual_q, self.residual_p, self.residual_t) < self.tol

    @property
    def max_residual(self) -> float:
        return max(self.residual_q, self.residual_p, self.residual_t)


def consistency_residuals(tr: Transformation, sys: SystemSpec, s: PhaseState) -> tuple[np.ndarray, np.ndarray, float]:
    """Signed residuals of the three surface-term conditions at one state.

    Returns ``(r_q, r_p, r_t)`` where e.g. ``r_q[a]`` is ``dLambda/dq^a`` minus
    the right-hand side prescribed by ``phi``, ``chi`` and ``lambda``.
    """
    lam = tr.lambda_param
    q, p, t = s.q, s.p, s.t
    gL = grad(tr.surface, s)
    phi = field_partials(tr.phi, q, p, t)
    chi = field_partials(tr.chi, q, p, t)
    gH = grad(sys.hamiltonian, s)
    # phi.d_q[b, a] = d phi^b / d q^a, so contracting over b uses the transpose
    rhs_q = lam * (phi.d_q.T @ p) + lam * chi.values - (1 - lam) * (chi.d_q.T @ q)
    rhs_p = lam * (phi.d_p.T @ p) - (1 - lam) * phi.values - (1 - lam) * (chi.d_p.T @ q)
    rhs_t = (
        lam * np.dot(phi.d_t, p)
        - (1 - lam) * np.dot(q, chi.d_t)
        - np.dot(phi.values, gH.d_q)
        - np.dot(chi.values, gH.d_p)
    )
    r_q = np.asarray(gL.d_q - rhs_q, dtype=float)
    r_p = np.asarray(gL.d_p - rhs_p, dtype=float)
    r_t = float(gL.d_t - rhs_t)
    if not (np.all(np.isfinite(r_q)) and np.all(np.isfinite(r_p)) and np.isfinite(r_t)):
        raise NonFinite(f"consistency residual not finite at {s!r}")
    return r_q, r_p, r_t


def verify_consistency(tr: Transformation, sys: SystemSpec, states: Sequence[PhaseState], tol: float = TOL_EXACT) -> ConsistencyReport:
    if not tol > 0:
        raise ValueError("tol must be positive")
    per_state = pmap(lambda s: consistency_residuals(tr, sys, s), states)
    rq = max((float(np.max(np.abs(r[0]))) for r in per_state), default=0.0)
    rp = max((float(np.max(np.abs(r[1]))) for r in per_state), default=0.0)
    rt = max((abs(r[2]) for r in per_state), default=0.0)
    return ConsistencyReport(rq, rp, rt, tol, tr.lambda_param, len(per_state))


# -- charges ---------------------------------------------------------------


@dataclass(frozen=True)
class ChargeBundle:
    charge: Observable
    transformation: Transformation
    lambda_param: float


def charge_observable(tr: Transformation) -> Observable:
    lam = tr.lambda_param
    phi, chi, surf = tr.phi, tr.chi, tr.surface.fn

    def Q(q, p, t):
        return lam * np.dot(phi(q, p, t), p) - (1 - lam) * np.dot(q, chi(q, p, t)) - surf(q, p, t)

    return Observable(Q, tr.dim, f"Q[{tr.label}]" if tr.label else "Q")


def generator_residual(charge: Observable, tr: Transformation, states: Sequence[PhaseState]) -> float:
    """Largest relative mismatch of ``{q^a, Q} = phi^a`` and ``{p_a, Q} = chi_a``."""
    d = charge.dim
    qs = [coordinate("q", a, d) for a in range(d)]
    ps = [coordinate("p", a, d) for a in range(d)]
    worst = 0.0
    for s in states:
        phi = tr.phi_at(s)
        chi = tr.chi_at(s)
        for a in range(d):
            worst = max(
                worst,
                abs(bracket(qs[a], charge, s) - phi[a]) / (1.0 + abs(phi[a])),
                abs(bracket(ps[a], charge, s) - chi[a]) / (1.0 + abs(chi[a])),
            )
    return worst


def build_charge(tr: Transformation, validate: bool = True, states=None, tol: float = 1e-9) -> ChargeBundle:
    """Assemble the Noether charge of ``tr`` and confirm it generates ``tr``.

    Raises :class:`GeneratorMismatch` when the generator property fails on
    the validation sample, which means ``tr`` violates the first two
    consistency conditions.
    """
    Q = charge_observable(tr)
    if validate:
        if states is None:
            states = sample_states(tr.dim, 16, seed=0, box=1.0)
        r = generator_residual(Q, tr, states)
        if not r < tol:
            raise GeneratorMismatch(f"charge of {tr.label!r} does not generate it (residual {r:.3e})")
    return ChargeBundle(Q, tr, tr.lambda_param)


def charge_time_identity(bundle: ChargeBundle, sys: SystemSpec, states: Sequence[PhaseState]) -> tuple[float, float]:
    """Residuals of ``dQ/dt|explicit = phi.dH/dq + chi.dH/dp`` and ``{Q,H} = -(same)``."""
    tr = bundle.transformation
    r_explicit = r_flow = 0.0
    for s in states:
        gH = grad(sys.hamiltonian, s)
        source = float(np.dot(tr.phi_at(s), gH.d_q) + np.dot(tr.chi_at(s), gH.d_p))
        explicit, flow = time_derivative_split(bundle.charge, sys, s)
        r_explicit = max(r_explicit, abs(explicit - source))
        r_flow = max(r_flow, abs(flow + source))
    return r_explicit, r_flow


def relative_to_reference(f: Observable, s: PhaseState) -> float:
    """``f(s) - f(0, 0, 0)``, the value with the additive constant removed."""
    zero = np.zeros(f.dim)
    return f(s) - f.at(zero, zero, 0.0)


# -- conservation ----------------------------------------------------------


@dataclass(frozen=True)
class ConservationReport:
    label: str
    max_total: float
    max_explicit: float
    max_flow: float
    splits: list[tuple[complex, complex]]
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_total < self.tol

    @property
    def is_dynamical(self) -> bool:
        """Explicitly time dependent (and then necessarily not commuting with H)."""
        return bool(self.max_explicit > self.tol)


def conservation_check(f, sys: SystemSpec, states: Sequence[PhaseState], tol: float = TOL_EXACT) -> ConservationReport:
    splits = pmap(lambda s: time_derivative_split(f, sys, s), states)
    totals = [abs(a + b) for a, b in splits]
    return ConservationReport(
        f.label,
        max(totals, default=0.0),
        max((abs(a) for a, _ in splits), default=0.0),
        max((abs(b) for _, b in splits), default=0.0),
        splits,
        tol,
    )


# -- converse --------------------------------------------------------------


def converse_transform(f: Observable, lambda_param: float) -> Transformation:
    """The symmetry generated by observable ``f``: ``phi = df/dp``, ``chi = -df/dq``."""
    if f.is_complex:
        raise TypeError("converse_transform takes a real observable; use its real or imaginary part")
    fn = f.fn
    lam = lambda_param

    def phi(q, p, t):
        return partials(fn, q, p, t).d_p

    def chi(q, p, t):
        return -partials(fn, q, p, t).d_q

    def surface(q, p, t):
        g = partials(fn, q, p, t)
        return lam * np.dot(g.d_p, p) + (1 - lam) * np.dot(q, g.d_q) - g.value

    return Transformation(phi, chi, Observable(surface, f.dim, f"Lambda[{f.label}]"), lam, f"gen[{f.label}]")


def _transformed_path(f: Observable, traj: Trajectory, eps: float):
    qs, ps = traj.q.copy(), traj.p.copy()
    if eps != 0.0:
        for k, s in enumerate(traj.states):
            g = grad(f, s)
            qs[k] = s.q + eps * g.d_p
            ps[k] = s.p - eps * g.d_q
    return qs, ps


def covariance_series(f: Observable, sys: SystemSpec, traj: Trajectory, eps: float) -> np.ndarray:
    """Signed equation-of-motion residuals of the transformed path.

    Row ``k`` (interior points only) holds ``dq~/dt - dH/dp`` followed by
    ``dp~/dt + dH/dq`` at ``(q~_k, p~_k)``, with time derivatives from central
    differences along the discrete path.
    """
    if len(traj) < 3:
        raise ValueError("covariance residual needs at least three trajectory points")
    qs, ps = _transformed_path(f, traj, eps)
    h = traj.h
    dq = (qs[2:] - qs[:-2]) / (2.0 * h)
    dp = (ps[2:] - ps[:-2]) / (2.0 * h)
    rows = []
    for k in range(1, len(traj) - 1):
        vq, vp = sys.vector_field(qs[k], ps[k])
        rows.append(np.concatenate([dq[k - 1] - vq, dp[k - 1] - vp]))
    return np.array(rows)


def covariance_residual(f: Observable, sys: SystemSpec, traj: Trajectory, eps: float, precheck_tol: float = TOL_FD) -> float:
    """Max equation-of-motion residual after moving ``traj`` along the flow generated by ``f``.

    Contract: O(eps**2) + O(h**2).
    """
    sample = traj.states[:: max(1, len(traj) // 32)]
    worst = max(abs(total_derivative(f, sys, s)) for s in sample)
    if not worst < precheck_tol:
        raise PrecheckFailed(f"{f.label!r} is not conserved along the trajectory (max |dF/dt| = {worst:.3e})")
    return float(np.max(np.abs(covariance_series(f, sys, traj, eps))))


def _discrete_action(qs, ps, ts, h, lam, H) -> float:
    qdot = np.gradient(qs, h, axis=0, edge_order=2)
    pdot = np.gradient(ps, h, axis=0, edge_order=2)
    energy = np.array([H(qs[k], ps[k], ts[k]) for k in range(len(ts))], dtype=float)
    lagr = lam * np.sum(qdot * ps, axis=1) - (1 - lam) * np.sum(qs * pdot, axis=1) - energy
    return float(np.trapezoid(lagr, dx=h))


def action_variation_check(tr: Transformation, sys: SystemSpec, traj: Trajectory, eps: float) -> float:
    """``|S[q + eps*phi, p + eps*chi] - S[q, p] - eps*(Lambda_end - Lambda_start)|``.

    The action uses the same ``lambda`` as ``tr``, trapezoid quadrature and
    second-order finite-difference velocities.  Contract: O(eps**2) + O(h**2).
    """
    states = traj.states
    qs, ps, ts = traj.q, traj.p, traj.times
    H = sys.hamiltonian.fn
    lam = tr.lambda_param
    phis = np.array([tr.phi_at(s) for s in states])
    chis = np.array([tr.chi_at(s) for s in states])
    base = _discrete_action(qs, ps, ts, traj.h, lam, H)
    moved = _discrete_action(qs + eps * phis, ps + eps * chis, ts, traj.h, lam, H)
    boundary = eps * (tr.surface(states[-1]) - tr.surface(states[0]))
    return abs(moved - base - boundary)
