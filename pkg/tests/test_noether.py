import numpy as np
import pytest

from noether_lab import dualnum as dn
from noether_lab import models, noether, poisson
from noether_lab.errors import GeneratorMismatch, PrecheckFailed
from noether_lab.integrate import verlet
from noether_lab.phasespace import Observable, SystemSpec, Transformation, coordinate, make_state, sample_states

LAMBDAS = (0.0, 0.5, 1.0)


@pytest.fixture(scope="module")
def cf():
    return models.constant_force_system(1.3, [0.4, -2.0])


@pytest.fixture(scope="module")
def states2():
    return sample_states(2, 100, seed=21)


@pytest.mark.parametrize("lam", LAMBDAS)
@pytest.mark.parametrize("kind", ["translation", "boost"])
def test_consistency_conditions(cf, states2, lam, kind):
    for axis in range(2):
        tr = getattr(cf, kind)(axis, lam)
        rep = noether.verify_consistency(tr, cf.system, states2)
        assert rep.passed, rep
        assert rep.n_states == 100


def test_bogus_scaling_fails_consistency(cf, states2):
    d = cf.dim
    bogus = Transformation(
        lambda q, p, t: q, lambda q, p, t: np.zeros(d), Observable(lambda q, p, t: 0.0, d), 0.5, "scaling"
    )
    assert not noether.verify_consistency(bogus, cf.system, states2).passed


def test_wrong_surface_term_fails(cf, states2):
    # the boost surface term with an extra factor m on the t^2 F / 2 piece
    good = cf.boost(1, 0.5)
    m, F = cf.mass, cf.force[1]
    wrong = Observable(lambda q, p, t: good.surface.fn(q, p, t) + 0.5 * (m - 1) * t * t * F, 2)
    bad = Transformation(good.phi, good.chi, wrong, 0.5, "boost-wrong")
    assert not noether.verify_consistency(bad, cf.system, states2).passed


@pytest.mark.parametrize("lam", LAMBDAS)
def test_build_charge_reproduces_T_and_gamma(cf, states2, lam):
    for axis in range(2):
        QT = noether.build_charge(cf.translation(axis, lam)).charge
        Qg = noether.build_charge(cf.boost(axis, lam)).charge
        for s in states2:
            assert abs(QT(s) - cf.T(axis)(s)) < 1e-12
            assert abs(Qg(s) - cf.gamma(axis)(s)) < 1e-12


def test_charge_is_lambda_independent_up_to_constant(cf, states2):
    Qs = [noether.build_charge(cf.boost(0, lam)).charge for lam in LAMBDAS]
    for s in states2:
        vals = [noether.relative_to_reference(Q, s) for Q in Qs]
        assert max(vals) - min(vals) < 1e-10


def test_generator_mismatch_raised(cf):
    good = cf.translation(0, 0.5)
    broken = Transformation(lambda q, p, t: np.array([2.0, 0.0]), good.chi, good.surface, 0.5, "x2")
    with pytest.raises(GeneratorMismatch):
        noether.build_charge(broken)


def test_charge_time_identity(cf, states2):
    for lam in LAMBDAS:
        bundle = noether.build_charge(cf.boost(1, lam))
        r_explicit, r_flow = noether.charge_time_identity(bundle, cf.system, states2)
        assert r_explicit < 1e-10 and r_flow < 1e-10


def test_conservation_and_dynamical_flag(cf, states2):
    rep_T = noether.conservation_check(cf.T(0), cf.system, states2)
    rep_g = noether.conservation_check(cf.gamma(0), cf.system, states2)
    assert rep_T.passed and rep_g.passed
    assert rep_T.is_dynamical  # F_0 != 0 makes T explicitly time dependent
    assert rep_g.is_dynamical
    free = models.free_particle_system(1.0, 2)
    rep = noether.conservation_check(free.T(0), free.system, states2)
    assert rep.passed and not rep.is_dynamical
    rep = noether.conservation_check(coordinate("q", 0, 2), cf.system, states2)
    assert not rep.passed


def test_oscillator_charges_conserved():
    osc = models.harmonic_system([1.0, 2.5], t0=0.3)
    st = sample_states(2, 100, seed=4)
    for name in ("ReA0", "ImA0", "ReA1", "ImA1", "A1", "H", "H_charge"):
        assert noether.conservation_check(osc.charges[name], osc.system, st).passed, name


@pytest.mark.parametrize("lam", LAMBDAS)
def test_converse_round_trip(cf, states2, lam):
    for F in (cf.T(0), cf.gamma(1), cf.system.hamiltonian, cf.H_charge()):
        tr = noether.converse_transform(F, lam)
        assert noether.verify_consistency(tr, cf.system, states2[:30], tol=1e-9).passed
        Q = noether.build_charge(tr, states=states2[:10]).charge
        for s in states2[:30]:
            a, b = dn.grad(Q, s).as_vector(), dn.grad(F, s).as_vector()
            assert np.max(np.abs(a - b)) < 1e-10


def test_converse_rejects_complex():
    osc = models.harmonic_system([1.0])
    with pytest.raises(TypeError):
        noether.converse_transform(osc.A(0), 0.5)


def test_converse_of_non_conserved_fails_consistency(cf, states2):
    tr = noether.converse_transform(coordinate("q", 0, 2), 0.5)
    assert not noether.verify_consistency(tr, cf.system, states2).passed


def _anharmonic():
    H = Observable(lambda q, p, t: 0.5 * p[0] ** 2 + 0.25 * q[0] ** 4, 1, "H")
    return SystemSpec(1, H, "quartic", separable=True, grad_q=lambda q, p: q**3, grad_p=lambda q, p: p)


def test_covariance_second_order_in_eps_for_nonlinear_flow():
    sys = _anharmonic()
    traj = verlet(sys, make_state([1.0], [0.2], 0.0), 1e-3, 400)
    base = noether.covariance_series(sys.hamiltonian, sys, traj, 0.0)
    excess = [
        np.max(np.abs(noether.covariance_series(sys.hamiltonian, sys, traj, eps) - base))
        for eps in (1e-2, 5e-3, 2.5e-3)
    ]
    for a, b in zip(excess, excess[1:]):
        assert 3.4 < a / b < 4.6


def test_covariance_linear_generator_is_exact(cf):
    traj = verlet(cf.system, make_state([0.1, 0.2], [0.3, -0.4], 0.0), 1e-2, 200)
    base = noether.covariance_series(cf.T(0), cf.system, traj, 0.0)
    moved = noether.covariance_series(cf.T(0), cf.system, traj, 1e-2)
    assert np.max(np.abs(moved - base)) < 1e-10


def test_covariance_precheck(cf):
    traj = verlet(cf.system, make_state([0.1, 0.2], [0.3, -0.4], 0.0), 1e-2, 50)
    with pytest.raises(PrecheckFailed):
        noether.covariance_residual(coordinate("q", 0, 2), cf.system, traj, 1e-3)
    assert noether.covariance_residual(cf.gamma(0), cf.system, traj, 1e-3) < 1e-6


@pytest.mark.parametrize("lam", LAMBDAS)
def test_action_variation(cf, lam):
    traj = verlet(cf.system, make_state([0.1, 0.2], [0.3, -0.4], 0.0), 1e-2, 300)
    # translations leave the action invariant exactly; the boost picks up the
    # second-order term (lam - 1/2) m eps^2 (t1 - t0), which vanishes for lam = 1/2
    assert noether.action_variation_check(cf.translation(0, lam), cf.system, traj, 1e-3) < 1e-10
    boost = cf.boost(1, lam)
    r1 = noether.action_variation_check(boost, cf.system, traj, 1e-3)
    r2 = noether.action_variation_check(boost, cf.system, traj, 5e-4)
    expected = abs(lam - 0.5) * cf.mass * 1e-6 * traj.times[-1]
    assert abs(r1 - expected) < 1e-10
    if lam != 0.5:
        assert 3.9 < r1 / r2 < 4.1


def test_finite_surface_term_off_shell(cf):
    # along an arbitrary straight path (dq/dt = u, dp/dt = w) the Lagrangian
    # changes under the finite map by exactly dLambda/dt
    a, v = np.array([0.3, -0.7]), np.array([1.1, 0.4])
    u, w = np.array([0.2, -0.5]), np.array([0.9, 0.1])
    H = cf.system.hamiltonian.fn
    for lam in LAMBDAS:
        Lam = cf.finite_surface(a, v, lam)

        def lagr(q, p, t, qdot):
            return lam * np.dot(qdot, p) - (1 - lam) * np.dot(q, w) - H(q, p, t)

        for s in sample_states(2, 20, seed=3):
            moved = cf.finite_map(a, v, s)
            lhs = lagr(moved.q, moved.p, s.t, u + v) - lagr(s.q, s.p, s.t, u)
            gL = dn.grad(Lam, s)
            rhs = np.dot(gL.d_q, u) + np.dot(gL.d_p, w) + gL.d_t
            assert abs(lhs - rhs) < 1e-10


def test_time_shift_charge_is_hamiltonian(cf, states2):
    # phi = dH/dp, chi = -dH/dq: the converse of H is time translation
    tr = noether.converse_transform(cf.system.hamiltonian, 1.0)
    for s in states2[:10]:
        vq, vp = cf.system.vector_field(s.q, s.p)
        assert np.allclose(tr.phi_at(s), vq) and np.allclose(tr.chi_at(s), vp)


def test_bracket_of_charges_is_conserved(cf, states2):
    prod = cf.T(0) * cf.gamma(1) + cf.H_charge()
    assert noether.conservation_check(prod, cf.system, states2).passed
    for s in states2[:10]:
        assert abs(poisson.bracket(cf.T(0), cf.gamma(0), s) - cf.mass) < 1e-12
