"""Acceptance criteria 1-10 at their stated tolerances.

Each test prints one ``CRITERION n: PASS`` or ``CRITERION n: FAIL`` line
(with the measured numbers) and then asserts the criterion as stated.
"""
import json

import numpy as np
import pytest

from noether_lab import integrate as integ
from noether_lab import models, noether, poisson, qfock, qwave
from noether_lab.config import load_config
from noether_lab.integrate import verlet
from noether_lab.phasespace import make_state, sample_states
from noether_lab.report import overlap_tuples, run

from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
LAMBDAS = (0.0, 0.5, 1.0)


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, f"criterion {n}: {detail}"

    return emit


@pytest.fixture(scope="module")
def cf3():
    return models.constant_force_system(1.7, [0.0, 0.0, 2.3])


@pytest.fixture(scope="module")
def states3():
    return sample_states(3, 100, seed=2024)


def test_criterion_1_consistency(verdict, cf3, states3):
    worst = 0.0
    for lam in LAMBDAS:
        for axis in range(3):
            for tr in (cf3.translation(axis, lam), cf3.boost(axis, lam)):
                worst = max(worst, noether.verify_consistency(tr, cf3.system, states3).max_residual)
    verdict(1, worst < 1e-10, f"max consistency residual {worst:.2e} < 1e-10 over 100 states, lambda in {{0, 1/2, 1}}")


def test_criterion_2_charge_reconstruction(verdict, cf3, states3):
    worst = spread = 0.0
    for axis in range(3):
        by_lambda = {"T": [], "gamma": []}
        for lam in LAMBDAS:
            QT = noether.build_charge(cf3.translation(axis, lam), states=states3[:10]).charge
            Qg = noether.build_charge(cf3.boost(axis, lam), states=states3[:10]).charge
            by_lambda["T"].append(QT)
            by_lambda["gamma"].append(Qg)
            for s in states3:
                worst = max(worst, abs(QT(s) - cf3.T(axis)(s)), abs(Qg(s) - cf3.gamma(axis)(s)))
        for Qs in by_lambda.values():
            for s in states3:
                vals = [noether.relative_to_reference(Q, s) for Q in Qs]
                spread = max(spread, max(vals) - min(vals))
    ok = worst < 1e-12 and spread < 1e-12
    verdict(2, ok, f"pointwise mismatch {worst:.2e}, lambda spread after removing constant {spread:.2e}, both < 1e-12")


def test_criterion_3_bracket_table(verdict, cf3, states3):
    m, F = cf3.mass, cf3.force
    obs = [cf3.T(i) for i in range(3)] + [cf3.gamma(i) for i in range(3)] + [cf3.system.hamiltonian]
    worst = 0.0
    for s in states3:
        T = s.p - s.t * F
        E = np.zeros((7, 7))
        E[0:3, 3:6] = m * np.eye(3)
        E[3:6, 0:3] = -m * np.eye(3)
        E[0:3, 6], E[6, 0:3] = F, -F
        E[3:6, 6], E[6, 3:6] = -T, T
        worst = max(worst, float(np.max(np.abs(poisson.bracket_table(obs, s).values - E))))
    verdict(3, worst < 1e-10, f"max |table - expected| {worst:.2e} < 1e-10, d=3, m=1.7, F=(0,0,2.3)")


def test_criterion_4_trajectory_conservation(verdict):
    cf = models.constant_force_system(1.0, [1.0])
    tr = verlet(cf.system, make_state([0.2], [-0.3], 0.0), 1e-3, 100_000)
    cf_drift = max(float(np.max(np.abs(integ.drift(tr, f)))) for f in (cf.T(0), cf.gamma(0)))

    osc = models.harmonic_system([1.0])
    worst_drift, ratios = 0.0, []
    for s0 in sample_states(1, 3, seed=7):
        d = []
        for h, n in ((0.01, 10_000), (0.005, 20_000)):
            trj = verlet(osc.system, s0, h, n)
            d.append(max(float(np.max(np.abs(integ.drift(trj, osc.charges[k])))) for k in ("ReA0", "ImA0")))
        worst_drift = max(worst_drift, d[0])
        ratios.append(d[0] / d[1])
    ratio_ok = all(abs(r / 4 - 1) <= 0.15 for r in ratios)
    ok = cf_drift < 1e-11 and worst_drift < 5e-4 and ratio_ok
    verdict(
        4,
        ok,
        f"constant force T/gamma drift {cf_drift:.2e} < 1e-11 (h=1e-3, 1e5 steps); "
        f"oscillator ReA/ImA drift {worst_drift:.2e} < 5e-4 (h=0.01, 1e4 steps); "
        f"Richardson ratios {', '.join(f'{r:.3f}' for r in ratios)} in 4 +- 15%",
    )


def _excess(f, sys, traj, eps):
    return noether.covariance_residual(f, sys, traj, eps) - noether.covariance_residual(f, sys, traj, 0.0)


def test_criterion_5_covariance_scaling(verdict):
    cf = models.constant_force_system(1.0, [1.0])
    osc = models.harmonic_system([1.0])
    cases = {
        "H": (cf.system.hamiltonian, cf.system),
        "T0": (cf.T(0), cf.system),
        "gamma0": (cf.gamma(0), cf.system),
        "ReA0": (osc.charges["ReA0"], osc.system),
    }
    s0 = make_state([0.3], [0.4], 0.0)
    lines, ok = [], True
    for name, (f, sys) in cases.items():
        traj = verlet(sys, s0, 1e-2, 500)
        ex = [_excess(f, sys, traj, eps) for eps in (1e-2, 5e-3, 2.5e-3)]
        rs = [a / b if b != 0 else float("inf") for a, b in zip(ex, ex[1:])]
        good = all(3.4 <= r <= 4.6 for r in rs)
        ok &= good
        lines.append(f"{name}: excess {', '.join(f'{e:.1e}' for e in ex)} ratios {', '.join(f'{r:.2f}' for r in rs)}")
    verdict(5, ok, "; ".join(lines))


def test_criterion_6_lie_closure(verdict, cf3, states3):
    obs = [cf3.T(i) for i in range(3)] + [cf3.gamma(i) for i in range(3)] + [cf3.system.hamiltonian]
    r1 = poisson.closure_check(obs, cf3.system, states3, tol=1e-9)
    osc = models.harmonic_system([1.0, 3.0])
    st = sample_states(2, 100, seed=2025)
    obs2 = [osc.charges[k] for k in ("ReA0", "ImA0", "ReA1", "ImA1", "H")]
    r2 = poisson.closure_check(obs2, osc.system, st, tol=1e-9)
    verdict(6, r1.passed and r2.passed, f"constant force max {r1.max_residual:.2e}, harmonic max {r2.max_residual:.2e}, < 1e-9")


def test_criterion_7_truncated_fock(verdict):
    ctx = qfock.FockSpaceCtx(16)
    h = max(qfock.heisenberg_block_residual(ctx, t) for t in (0.3, 1.7, 9.1))
    sa = max(qfock.spectrum_action_report(ctx, t, 3, 3).max_residual for t in (0.3, 1.7, 9.1))
    verdict(7, h < 1e-12 and sa < 1e-10, f"Heisenberg block {h:.2e} < 1e-12, spectrum action j,k<=3 {sa:.2e} < 1e-10")


def test_criterion_8_quantum_wave(verdict):
    g = qwave.MomentumGrid()
    stat = max(qwave.stationarity_residual(qwave.energy_state(g, E), E) for E in (-2.0, 0.0, 2.0))
    sch_t = max(qwave.t_state_schrodinger_residual(g, 0.7, t) for t in (0.5, 1.0, 2.0))
    sch_g = max(
        qwave.schrodinger_residual_field(lambda tt: qwave.gamma_eigenstate(g, -1.3, tt), t) for t in (0.5, 1.0, 2.0)
    )
    a = 0.4
    trans = max(
        qwave.global_phase_deviation(qwave.translate_state(qwave.energy_state(g, E), a), qwave.energy_state(g, E - a * g.F))
        for E in (-2.0, 0.0, 2.0)
    )
    rng = np.random.default_rng(8)
    v = 10 * g.dp / g.m
    boost = 0.0
    for _ in range(20):
        pk = qwave.gaussian_packet(g, rng.uniform(-2, 2), rng.uniform(0.5, 1.5), rng.uniform(-1, 1), t=rng.uniform(0, 2))
        T_mean = qwave.expectation(pk, lambda amps, gg, t=pk.t: qwave.t_action(amps, gg, t)).real
        shift = qwave.energy_expectation(qwave.boost_state(pk, v)) - qwave.energy_expectation(pk)
        boost = max(boost, abs(shift - (v * T_mean + 0.5 * g.m * v * v)))
    ok = stat < 1e-6 and sch_t < 1e-6 and sch_g < 1e-6 and trans < 1e-9 and boost < 1e-6
    verdict(
        8,
        ok,
        f"stationarity {stat:.1e}, T-state Schroedinger {sch_t:.1e}, gamma-state Schroedinger {sch_g:.1e} (< 1e-6); "
        f"translation phase deviation {trans:.1e} < 1e-9; boost energy shift {boost:.1e} < 1e-6",
    )


def test_criterion_9_overlap_arbitration(verdict):
    g = qwave.MomentumGrid(4096, -40.0, 40.0, hbar=1.0, m=2.0, F=1.5)
    tuples = overlap_tuples(g)
    rows, ok = [], True
    for T, gam, t in tuples:
        arb = qwave.arbitrate_overlap(g, T, gam, t)
        readings = [n for n in ("single_hbar", "double_hbar") if arb.deviations[n] < 1e-5]
        ok &= len(readings) == 1
        rows.append(
            f"(T={T}, gamma={gam}, t={t}): single {arb.deviations['single_hbar']:.2e}, "
            f"double {arb.deviations['double_hbar']:.2e}, unitarity {arb.deviations['unitarity']:.1e}"
        )
    verdict(9, ok, "deviations from each reading mod 2pi: " + "; ".join(rows))


def test_criterion_10_determinism(verdict, tmp_path):
    cfg = load_config(ROOT / "configs" / "constant_force.json")
    cfg = cfg.with_overrides(suites=["consistency", "conservation", "converse", "algebra", "trajectory", "qfock", "qwave"])
    blobs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        run(cfg).write(out)
        blobs.append((out / "records.ndjson").read_bytes())
        env = json.loads((out / "report.json").read_text())
    n = len(blobs[0].splitlines())
    verdict(10, blobs[0] == blobs[1] and n > 0, f"{n} records, byte-identical NDJSON: {blobs[0] == blobs[1]}; {env['summary']}")
