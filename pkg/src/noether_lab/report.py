"""Verification suites and the run report.

Every check becomes a record ``{check_id, paper_anchor, inputs_digest,
residual, tolerance, passed}`` with ``passed == residual < tolerance``.
Anchors are short names; :data:`ANCHORS` maps each to the operation that
implements it.  Records carry no timestamps, so two runs with the same
configuration produce byte-identical NDJSON.
"""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from . import integrate as integ
from . import models, noether, poisson, qfock, qwave
from .config import RunConfig
from .dualnum import grad
from .errors import GeneratorMismatch
from .phasespace import Observable, PhaseState, Transformation, sample_states

ANCHORS: dict[str, str] = {
    "consistency-conditions": "noether.verify_consistency",
    "charge-formula": "noether.build_charge",
    "generator-property": "noether.generator_residual",
    "charge-time-derivative": "noether.charge_time_identity",
    "additive-constant": "noether.build_charge (lambda independence)",
    "conservation-law": "noether.conservation_check",
    "converse-construction": "noether.converse_transform",
    "solution-covariance": "noether.covariance_residual",
    "action-identity": "noether.action_variation_check",
    "bracket-table": "poisson.bracket_table",
    "lie-closure": "poisson.closure_check",
    "jacobi-identity": "poisson.jacobi_residual",
    "trajectory-drift": "integrate.drift",
    "symplectic-map": "integrate.tangent_map_determinant",
    "charge-reconstruction": "models.ConstantForceModel.reconstruct",
    "finite-symmetry-energy": "models.finite_symmetry_energy_shift",
    "fock-heisenberg": "qfock.heisenberg",
    "fock-spectrum-action": "qfock.spectrum_action_report",
    "fock-correspondence": "qfock.correspondence_residual",
    "fock-unitarity": "qfock.unitarity_residual",
    "fock-constancy": "qfock.heisenberg_constancy_residual",
    "wave-energy-state": "qwave.energy_state",
    "wave-t-state": "qwave.t_eigenstate",
    "wave-gamma-state": "qwave.gamma_eigenstate",
    "wave-overlap": "qwave.overlap",
    "wave-translation": "qwave.translate_state",
    "wave-boost": "qwave.boost_state",
    "wave-commutator": "qwave.commutator_residual",
}

LAMBDAS = (0.0, 0.5, 1.0)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, PhaseState):
        return {"q": x.q.tolist(), "p": x.p.tolist(), "t": x.t}
    raise TypeError(f"not serialisable: {type(x)}")


def digest(inputs: Any) -> str:
    text = json.dumps(inputs, sort_keys=True, default=_jsonable, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Record:
    check_id: str
    paper_anchor: str
    inputs_digest: str
    residual: float | None
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "paper_anchor": self.paper_anchor,
            "inputs_digest": self.inputs_digest,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def make_record(check_id: str, anchor: str, inputs: Any, residual, tolerance: float) -> Record:
    if anchor not in ANCHORS:
        raise KeyError(f"unregistered anchor {anchor!r}")
    r = float(residual)
    if not math.isfinite(r):
        return Record(check_id, anchor, digest(inputs), None, float(tolerance), False)
    return Record(check_id, anchor, digest(inputs), r, float(tolerance), r < tolerance)


@dataclass
class Report:
    config: dict
    records: list[Record] = field(default_factory=list)
    findings: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def n_failed(self) -> int:
        return sum(not r.passed for r in self.records)

    @property
    def exit_status(self) -> int:
        return 0 if self.n_failed == 0 else 1

    def summary(self) -> dict:
        return {"total": len(self.records), "passed": len(self.records) - self.n_failed, "failed": self.n_failed}

    def ndjson(self) -> str:
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self.records)

    def envelope(self, timestamp: str | None = None) -> dict:
        return {
            "tool": "noether-lab",
            "version": self.version,
            "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "config": self.config,
            "summary": self.summary(),
            "findings": self.findings,
            "anchors": ANCHORS,
            "records": [r.to_dict() for r in self.records],
        }

    def write(self, out_dir) -> tuple[str, str]:
        os.makedirs(out_dir, exist_ok=True)
        rep = os.path.join(out_dir, "report.json")
        nd = os.path.join(out_dir, "records.ndjson")
        with open(rep, "w") as fh:
            json.dump(self.envelope(), fh, indent=2, sort_keys=True, default=_jsonable)
            fh.write("\n")
        with open(nd, "w") as fh:
            fh.write(self.ndjson())
        return rep, nd


# -- model setup ---------------------------------------------------------------


@dataclass
class ModelBundle:
    name: str
    model: Any
    system: Any
    charges: dict  # real observables only
    conserved: list  # names usable as converse inputs
    box: float = 1.0

    def transformation(self, name: str, lam: float, axis: int = 0) -> Transformation:
        d = self.system.dim
        if name == "scaling":
            zero = np.zeros(d)
            return Transformation(
                lambda q, p, t: q, lambda q, p, t: zero, Observable(lambda q, p, t: 0.0, d, "0"), lam, "scaling"
            )
        if name == "translation":
            return self.model.translation(axis, lam)
        if name == "boost":
            return self.model.boost(axis, lam)
        if name == "converse_re":
            return noether.converse_transform(self.charges[f"ReA{axis}"], lam)
        if name == "converse_im":
            return noether.converse_transform(self.charges[f"ImA{axis}"], lam)
        raise KeyError(name)

    def expected_charge(self, name: str, axis: int = 0):
        """Closed-form charge a transformation must reproduce (up to a constant)."""
        return {
            "translation": lambda: self.charges[f"T{axis}"],
            "boost": lambda: self.charges[f"gamma{axis}"],
            "converse_re": lambda: self.charges[f"ReA{axis}"],
            "converse_im": lambda: self.charges[f"ImA{axis}"],
        }.get(name, lambda: None)()


def build_model(cfg: RunConfig) -> ModelBundle:
    P = cfg.params
    if cfg.model in ("constant_force", "free"):
        m = models.constant_force_system(P["m"], P["F"]) if cfg.model == "constant_force" else models.free_particle_system(P["m"], P["dim"])
        ch = m.charges
        real = {k: v for k, v in ch.items()}
        d = m.dim
        conserved = [f"T{i}" for i in range(d)] + [f"gamma{i}" for i in range(d)] + ["H"]
        return ModelBundle(cfg.model, m, m.system, real, conserved)
    if cfg.model == "harmonic":
        m = models.harmonic_system(P["omegas"], P["t0"])
    else:
        lat = models.lattice_scalar_system(P["n_sites"], P["mu"], P["spacing"], P["t0"])
        m = lat.modes
    real = {k: v for k, v in m.charges.items() if not getattr(v, "is_complex", False)}
    if cfg.model == "lattice_scalar":
        real["P"] = lat.momentum_charge()
    conserved = ["ReA0", "ImA0", "H"]
    return ModelBundle(cfg.model, lat if cfg.model == "lattice_scalar" else m, m.system, real, conserved)


# -- suites --------------------------------------------------------------------


class Ctx:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.tol = cfg.tolerances
        self.records: list[Record] = []
        self.findings: dict = {}
        self._bundle = None
        self._states = None

    @property
    def bundle(self) -> ModelBundle:
        if self._bundle is None:
            self._bundle = build_model(self.cfg)
        return self._bundle

    @property
    def states(self) -> list[PhaseState]:
        if self._states is None:
            self._states = sample_states(self.bundle.system.dim, self.cfg.n_states, self.cfg.seed, self.bundle.box)
        return self._states

    def add(self, check_id, anchor, inputs, residual, tol_key):
        self.records.append(make_record(check_id, anchor, inputs, residual, self.tol[tol_key]))

    def base_inputs(self, **extra) -> dict:
        return {"model": self.cfg.model, "params": self.cfg.params, "seed": self.cfg.seed, "n_states": self.cfg.n_states, **extra}


def _charge_mismatch(Q: Observable, C: Observable, states) -> float:
    return max(abs(noether.relative_to_reference(Q, s) - noether.relative_to_reference(C, s)) for s in states)


def _grad_mismatch(f: Observable, g: Observable, states) -> float:
    worst = 0.0
    for s in states:
        a, b = grad(f, s), grad(g, s)
        worst = max(worst, float(np.max(np.abs(a.as_vector() - b.as_vector()))))
    return worst


def suite_consistency(c: Ctx):
    B, states = c.bundle, c.states
    for name in c.cfg.transformations:
        charges_by_lambda = {}
        for lam in LAMBDAS:
            tr = B.transformation(name, lam)
            inp = c.base_inputs(transformation=name, lambda_param=lam)
            rep = noether.verify_consistency(tr, B.system, states, c.tol["consistency"])
            c.add(f"consistency/{name}/lambda={lam}", "consistency-conditions", inp, rep.max_residual, "consistency")
            try:
                bundle = noether.build_charge(tr, validate=True, tol=c.tol["generator"])
            except GeneratorMismatch:
                gen = noether.generator_residual(noether.charge_observable(tr), tr, states[:16])
                c.add(f"generator/{name}/lambda={lam}", "generator-property", inp, gen, "generator")
                continue
            gen = noether.generator_residual(bundle.charge, tr, states)
            c.add(f"generator/{name}/lambda={lam}", "generator-property", inp, gen, "generator")
            r_exp, r_flow = noether.charge_time_identity(bundle, B.system, states)
            c.add(f"charge_time/{name}/lambda={lam}", "charge-time-derivative", inp, max(r_exp, r_flow), "charge_time")
            expected = B.expected_charge(name)
            if expected is not None:
                c.add(f"charge/{name}/lambda={lam}", "charge-formula", inp, _charge_mismatch(bundle.charge, expected, states), "charge")
            charges_by_lambda[lam] = bundle.charge
        if len(charges_by_lambda) > 1:
            ref = charges_by_lambda[LAMBDAS[0]]
            worst = max(_grad_mismatch(Q, ref, states) for Q in charges_by_lambda.values())
            c.add(f"lambda_independence/{name}", "additive-constant", c.base_inputs(transformation=name), worst, "lambda_independence")


def suite_conservation(c: Ctx):
    B, states = c.bundle, c.states
    splits = {}
    for name in sorted(B.charges):
        rep = noether.conservation_check(B.charges[name], B.system, states, c.tol["conservation"])
        c.add(f"conservation/{name}", "conservation-law", c.base_inputs(charge=name), rep.max_total, "conservation")
        splits[name] = {"dynamical": rep.is_dynamical, "max_explicit": rep.max_explicit, "max_bracket": rep.max_flow}
    c.findings["conservation_split"] = splits
    if B.name in ("constant_force", "free"):
        rng = np.random.default_rng(c.cfg.seed)
        d = B.system.dim
        worst = 0.0
        for s in states:
            a, v = rng.uniform(-1, 1, d), rng.uniform(-1, 1, d)
            worst = max(worst, models.finite_symmetry_energy_shift(B.model, a, v, s))
        c.add("finite_energy_shift", "finite-symmetry-energy", c.base_inputs(), worst, "energy_shift")


def _short_trajectory(c: Ctx, s0: PhaseState, n_max: int):
    I = c.cfg.integrator
    return integ.integrate(I["method"], c.bundle.system, s0, I["h"], min(I["n"], n_max))


def suite_converse(c: Ctx):
    B, states = c.bundle, c.states
    d = B.system.dim
    s0 = states[0]
    traj = _short_trajectory(c, s0, 400)
    scaling = {}
    for name in B.conserved:
        F = B.charges[name]
        for lam in LAMBDAS:
            tr = noether.converse_transform(F, lam)
            inp = c.base_inputs(generator=name, lambda_param=lam)
            rep = noether.verify_consistency(tr, B.system, states, c.tol["converse"])
            c.add(f"converse/{name}/lambda={lam}", "converse-construction", inp, rep.max_residual, "converse")
            Q = noether.build_charge(tr, validate=False).charge
            back = noether.converse_transform(Q, lam)
            rt = max(
                max(float(np.max(np.abs(back.phi_at(s) - tr.phi_at(s)))), float(np.max(np.abs(back.chi_at(s) - tr.chi_at(s)))))
                for s in states
            )
            c.add(f"round_trip/{name}/lambda={lam}", "converse-construction", inp, rt, "round_trip")
        base = noether.covariance_residual(F, B.system, traj, 0.0)
        eps_list = (1e-2, 5e-3, 2.5e-3)
        res = [noether.covariance_residual(F, B.system, traj, e) for e in eps_list]
        c.add(
            f"covariance/{name}",
            "solution-covariance",
            c.base_inputs(generator=name, eps=eps_list[0], integrator=c.cfg.integrator),
            abs(res[0] - base),
            "covariance",
        )
        excess = [r - base for r in res]
        ratios = [excess[i] / excess[i + 1] if excess[i + 1] != 0 else None for i in range(len(excess) - 1)]
        scaling[name] = {"baseline": base, "excess": excess, "ratios": ratios}
    c.findings["covariance_scaling"] = scaling
    for name in c.cfg.transformations:
        if name == "scaling":
            continue
        tr = B.transformation(name, 0.5)
        r = noether.action_variation_check(tr, B.system, traj, 1e-6)
        c.add(f"action/{name}", "action-identity", c.base_inputs(transformation=name, eps=1e-6), r, "action")


def _expected_bracket_constant_force(B: ModelBundle):
    m, F = B.model.mass, B.model.force
    d = B.system.dim
    labels = [f"T{i}" for i in range(d)] + [f"gamma{i}" for i in range(d)] + ["H"]

    def expected(s: PhaseState) -> np.ndarray:
        T = s.p - s.t * F
        E = np.zeros((2 * d + 1, 2 * d + 1))
        E[:d, d : 2 * d] = m * np.eye(d)
        E[d : 2 * d, :d] = -m * np.eye(d)
        E[:d, -1] = F
        E[-1, :d] = -F
        E[d : 2 * d, -1] = -T
        E[-1, d : 2 * d] = T
        return E

    return labels, expected


def _expected_bracket_oscillator(B: ModelBundle):
    d = B.system.dim
    labels = [f"ReA{a}" for a in range(d)] + [f"ImA{a}" for a in range(d)]

    def expected(s):
        E = np.zeros((2 * d, 2 * d))
        # {A, A*} = -2i {Re A, Im A} = -i
        E[:d, d:] = 0.5 * np.eye(d)
        E[d:, :d] = -0.5 * np.eye(d)
        return E

    return labels, expected


def suite_algebra(c: Ctx):
    B, states = c.bundle, c.states
    if B.name in ("constant_force", "free"):
        labels, expected = _expected_bracket_constant_force(B)
        closure = ["T0", "gamma0", "H"]
    else:
        labels, expected = _expected_bracket_oscillator(B)
        closure = ["ReA0", "ImA0", "H"]
    obs = [B.charges[k] for k in labels]
    worst = max(float(np.max(np.abs(poisson.bracket_table(obs, s).values - expected(s)))) for s in states)
    c.add("bracket_table", "bracket-table", c.base_inputs(labels=labels), worst, "algebra")
    rep = poisson.closure_check([B.charges[k] for k in closure], B.system, states, c.tol["closure"])
    c.add("closure/" + ",".join(closure), "lie-closure", c.base_inputs(labels=closure), rep.max_residual, "closure")
    jac = max(poisson.jacobi_residual(*[B.charges[k] for k in closure], s) for s in states[:10])
    c.add("jacobi/" + ",".join(closure), "jacobi-identity", c.base_inputs(labels=closure), jac, "jacobi")
    if "P" in B.charges:
        pb = max(abs(poisson.bracket(B.charges["P"], B.system.hamiltonian, s)) for s in states)
        c.add("bracket/P,H", "bracket-table", c.base_inputs(labels=["P", "H"]), pb, "algebra")


def suite_trajectory(c: Ctx):
    B = c.bundle
    I = c.cfg.integrator
    starts = sample_states(B.system.dim, 3, c.cfg.seed + 1, B.box)
    trajs = integ.integrate_batch(I["method"], B.system, starts, I["h"], I["n"])
    oscillator = B.name in ("harmonic", "lattice_scalar")
    tol_key = "drift_oscillator" if oscillator else "drift"
    names = sorted(B.charges)
    for k, (s0, tr) in enumerate(zip(starts, trajs)):
        for name in names:
            dr = float(np.max(np.abs(integ.drift(tr, B.charges[name]))))
            c.add(f"drift/{I['method']}/start{k}/{name}", "trajectory-drift", c.base_inputs(start=s0, integrator=I, charge=name), dr, tol_key)
        if not oscillator:
            q_ex, p_ex = B.model.reconstruct(s0, tr.times[-1])
            err = max(float(np.max(np.abs(tr.q[-1] - q_ex))), float(np.max(np.abs(tr.p[-1] - p_ex))))
            c.add(f"reconstruction/start{k}", "charge-reconstruction", c.base_inputs(start=s0, integrator=I), err, "reconstruction")
    if I["method"] in ("verlet", "midpoint"):
        short = integ.integrate(I["method"], B.system, starts[0], I["h"], min(I["n"], 2000))
        det = integ.tangent_map_determinant(short, B.system)
        c.add(f"symplectic/{I['method']}", "symplectic-map", c.base_inputs(start=starts[0], integrator=I), float(np.max(np.abs(det - 1))), "symplectic")


def suite_qfock(c: Ctx):
    Q = c.cfg.qfock
    ctx = qfock.FockSpaceCtx(int(Q["cutoff"]), Q["omega"], Q["hbar"], Q["t0"])
    inp = {"qfock": Q}
    for t in (0.3, 1.7, 9.1):
        c.add(f"qfock/heisenberg/t={t}", "fock-heisenberg", {**inp, "t": t}, qfock.heisenberg_block_residual(ctx, t), "qfock")
        c.add(f"qfock/correspondence/t={t}", "fock-correspondence", {**inp, "t": t}, qfock.correspondence_residual(ctx, t), "qfock")
        c.add(f"qfock/unitarity/t={t}", "fock-unitarity", {**inp, "t": t}, qfock.unitarity_residual(ctx, t), "qfock")
        c.add(f"qfock/constancy/t={t}", "fock-constancy", {**inp, "t": t}, qfock.heisenberg_constancy_residual(ctx, t), "qfock_constancy")
    jk = min(3, (ctx.cutoff - 2) // 2)
    rep = qfock.spectrum_action_report(ctx, 1.1, jk, jk)
    c.add(f"qfock/spectrum_action/jk<={jk}", "fock-spectrum-action", {**inp, "t": 1.1, "jk_max": jk}, rep.max_residual, "qfock_spectrum")


def suite_qwave(c: Ctx):
    W = c.cfg.qwave
    g = qwave.MomentumGrid(int(W["n"]), W["p_min"], W["p_max"], W["hbar"], W["m"], W["F"])
    inp = {"qwave": W}
    rng = np.random.default_rng(c.cfg.seed)
    packets = [
        qwave.gaussian_packet(g, rng.uniform(-2, 2), rng.uniform(0.5, 1.5), rng.uniform(-1, 1), t=float(t))
        for t in rng.uniform(0, 2, 20)
    ]
    if g.F != 0:
        for E in (-2.0, 0.0, 2.0):
            s = qwave.energy_state(g, E)
            c.add(f"qwave/energy_stationary/E={E}", "wave-energy-state", {**inp, "E": E}, qwave.stationarity_residual(s, E), "qwave")
            a = 0.4
            dev = qwave.global_phase_deviation(qwave.translate_state(s, a), qwave.energy_state(g, E - a * g.F))
            c.add(f"qwave/translate_energy_state/E={E}", "wave-translation", {**inp, "E": E, "a": a}, dev, "qwave_phase")
    for t in (0.5, 1.0, 2.0):
        gam, T = -1.3, 0.7
        st = qwave.gamma_eigenstate(g, gam, t)
        c.add(f"qwave/gamma_eigen/t={t}", "wave-gamma-state", {**inp, "gamma": gam, "t": t}, qwave.gamma_eigen_residual(st, gam), "qwave")
        sch = qwave.schrodinger_residual_field(lambda tt: qwave.gamma_eigenstate(g, gam, tt), t)
        c.add(f"qwave/gamma_schrodinger/t={t}", "wave-gamma-state", {**inp, "gamma": gam, "t": t}, sch, "qwave")
        c.add(f"qwave/t_schrodinger/t={t}", "wave-t-state", {**inp, "T": T, "t": t}, qwave.t_state_schrodinger_residual(g, T, t), "qwave_spike")
    # expectation-level identities on packets
    v = 10 * g.dp / g.m
    a = 0.3
    worst_b = worst_t = worst_c = worst_n = 0.0
    for pk in packets:
        E0 = qwave.energy_expectation(pk)
        Tm = qwave.expectation(pk, lambda amps, gg, t=pk.t: qwave.t_action(amps, gg, t)).real
        boosted = qwave.boost_state(pk, v)
        worst_b = max(worst_b, abs(qwave.energy_expectation(boosted) - E0 - (v * Tm + 0.5 * g.m * v * v)))
        moved = qwave.translate_state(pk, a)
        worst_t = max(worst_t, abs(qwave.energy_expectation(moved) - E0 + a * g.F))
        worst_c = max(worst_c, qwave.commutator_residual(pk, pk.t))
        worst_n = max(worst_n, abs(boosted.norm2 - pk.norm2), abs(moved.norm2 - pk.norm2))
    c.add("qwave/boost_energy_shift", "wave-boost", {**inp, "v": v, "seed": c.cfg.seed}, worst_b, "qwave")
    c.add("qwave/translate_energy_shift", "wave-translation", {**inp, "a": a, "seed": c.cfg.seed}, worst_t, "qwave")
    c.add("qwave/commutator", "wave-commutator", {**inp, "seed": c.cfg.seed}, worst_c, "qwave")
    c.add("qwave/norm_preservation", "wave-boost", {**inp, "v": v, "a": a, "seed": c.cfg.seed}, worst_n, "qwave_norm")
    # overlap: modulus and phase against the quadrature
    tuples = overlap_tuples(g)
    rows = []
    worst_mod = worst_phase = 0.0
    for T, gam, t in tuples:
        arb = qwave.arbitrate_overlap(g, T, gam, t)
        worst_mod = max(worst_mod, abs(arb.measured_modulus - (2 * np.pi * g.hbar * g.m) ** -0.5))
        worst_phase = max(worst_phase, arb.deviations["unitarity"])
        rows.append({"T": T, "gamma": gam, "t": t, "measured_phase": arb.measured_phase, "deviations": arb.deviations, "matches": arb.matches(c.tol["overlap"])})
    c.add("qwave/overlap_modulus", "wave-overlap", {**inp, "tuples": tuples}, worst_mod, "overlap")
    c.add("qwave/overlap_phase", "wave-overlap", {**inp, "tuples": tuples}, worst_phase, "overlap")
    c.findings["overlap_phase"] = summarise_arbitration(rows, c.tol["overlap"])


def overlap_tuples(g) -> list[tuple[float, float, float]]:
    """Fixed ``(T, gamma, t)`` tuples spanning both signs and several times."""
    return [(0.7, -1.3, 0.9), (-0.4, 0.8, 0.5), (1.1, 0.3, 1.7), (0.25, -0.6, 2.2), (-1.2, 1.5, 0.35)]


def summarise_arbitration(rows: list[dict], tol: float) -> dict:
    names = list(qwave.PHASE_CANDIDATES)
    counts = {n: sum(n in r["matches"] for r in rows) for n in names}
    closed_form = [n for n in ("single_hbar", "double_hbar") if counts[n] == len(rows)]
    winner = closed_form[0] if len(closed_form) == 1 else None
    return {
        "tolerance": tol,
        "tuples": rows,
        "match_counts": counts,
        "closed_form_winner": winner,
        "consistent_candidates": [n for n in names if counts[n] == len(rows)],
    }


SUITE_FUNCS: dict[str, Callable[[Ctx], None]] = {
    "consistency": suite_consistency,
    "conservation": suite_conservation,
    "converse": suite_converse,
    "algebra": suite_algebra,
    "trajectory": suite_trajectory,
    "qfock": suite_qfock,
    "qwave": suite_qwave,
}


def run(cfg: RunConfig) -> Report:
    """Run the configured suites in a fixed order; deterministic for a given config."""
    c = Ctx(cfg)
    for name in cfg.suites:
        SUITE_FUNCS[name](c)
    return Report(cfg.to_dict(), c.records, c.findings)
