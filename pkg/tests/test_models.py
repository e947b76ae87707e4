import numpy as np
import pytest

from noether_lab import dualnum as dn
from noether_lab import models, noether, poisson
from noether_lab.errors import BadDimension, BadFrequency, ZeroModeUnsupported
from noether_lab.phasespace import make_state, sample_states


def test_harmonic_A_at_reference_time():
    osc = models.harmonic_system([1.0])
    assert osc.A(0)(make_state([1], [0], 0)) == pytest.approx(np.sqrt(0.5), abs=1e-15)


def test_harmonic_energy_from_A():
    osc = models.harmonic_system([2.0])
    for s in sample_states(1, 100, seed=1):
        assert abs(2.0 * abs(osc.A(0)(s)) ** 2 - osc.system.hamiltonian(s)) < 1e-12
        assert abs(osc.charges["H_charge"](s) - osc.system.hamiltonian(s)) < 1e-12


def test_harmonic_re_im_bracket():
    # {A, A*} = -i expands to -2i {ReA, ImA}, so {ReA, ImA} = +1/2
    osc = models.harmonic_system([1.0, 3.0])
    for s in sample_states(2, 50, seed=2):
        for a in range(2):
            b = poisson.bracket(osc.charges[f"ReA{a}"], osc.charges[f"ImA{a}"], s)
            assert abs(b - 0.5) < 1e-12
            assert abs(poisson.bracket(osc.A(a), osc.A(a).conj(), s) - (-1j)) < 1e-12
        assert abs(poisson.bracket(osc.A(0), osc.A(1).conj(), s)) < 1e-12


@pytest.mark.parametrize("bad", [[0.0], [-1.0], [1.0, float("inf")]])
def test_bad_frequency(bad):
    with pytest.raises(BadFrequency):
        models.harmonic_system(bad)


def test_harmonic_reference_time_is_configurable():
    a = models.harmonic_system([1.5], t0=0.0)
    b = models.harmonic_system([1.5], t0=0.7)
    s = make_state([0.4], [0.1], 0.7)
    # at t = t0 the charge equals the plain Fock variable
    assert abs(b.A(0)(s) - np.sqrt(0.75) * (0.4 + 1j * 0.1 / 1.5)) < 1e-14
    assert abs(abs(a.A(0)(s)) - abs(b.A(0)(s))) < 1e-14


def test_harmonic_charges_conserved_and_monomials():
    osc = models.harmonic_system([1.3])
    st = sample_states(1, 100, seed=3)
    for name in ("ReA0", "ImA0"):
        assert noether.conservation_check(osc.charges[name], osc.system, st).passed
    for j in range(3):
        for k in range(3):
            assert noether.conservation_check(osc.monomial(j, k), osc.system, st).passed, (j, k)


def test_harmonic_exact_solution_matches_flow():
    osc = models.harmonic_system([1.0, 2.0])
    s0 = make_state([1.0, 0.5], [0.0, -1.0], 0.2)
    q, p = osc.exact_solution(s0, 0.2 + 1e-6)
    vq, vp = osc.system.vector_field(s0.q, s0.p)
    assert np.allclose((q - s0.q) / 1e-6, vq, atol=1e-5)
    assert np.allclose((p - s0.p) / 1e-6, vp, atol=1e-5)


def test_lattice_single_site_is_single_oscillator():
    lat = models.lattice_scalar_system(1, 0.8)
    assert lat.omegas.tolist() == [0.8]
    osc = models.harmonic_system([0.8])
    s = make_state([0.3], [0.2], 0.4)
    assert lat.system.hamiltonian(s) == osc.system.hamiltonian(s)
    assert lat.modes.A(0)(s) == osc.A(0)(s)


def test_lattice_dispersion():
    lat = models.lattice_scalar_system(4, 1.0, 1.0)
    assert np.allclose(lat.omegas, [1, np.sqrt(3), np.sqrt(5), np.sqrt(3)], atol=1e-15)


@pytest.mark.parametrize("n", [2, 5, 6])
def test_mode_matrix_orthogonal_and_diagonalises(n):
    lat = models.lattice_scalar_system(n, 0.7, 0.5)
    U = lat.U
    assert np.allclose(U @ U.T, np.eye(n), atol=1e-13)
    assert np.allclose(U @ lat.K @ U.T, np.diag(lat.omegas**2), atol=1e-12)


def test_lattice_energy_in_modes():
    lat = models.lattice_scalar_system(6, 0.7, 0.5)
    for s in sample_states(6, 100, seed=4):
        m = lat.to_modes(s)
        E_site = lat.site_system.hamiltonian(s)
        E_modes = sum(w * abs(lat.modes.A(k)(m)) ** 2 for k, w in enumerate(lat.omegas))
        assert abs(E_site - E_modes) < 1e-10
        back = lat.to_sites(m)
        assert np.allclose(back.q, s.q) and np.allclose(back.p, s.p)


def test_lattice_momentum_commutes_with_H():
    lat = models.lattice_scalar_system(5, 1.2)
    P = lat.momentum_charge()
    for s in sample_states(5, 100, seed=5):
        assert abs(poisson.bracket(P, lat.system.hamiltonian, s)) < 1e-10
    w = lat.momentum_weights()
    assert w[0] == 0 and w[1] == -w[4] and w[2] == -w[3]


def test_lattice_zero_mass_rejected():
    with pytest.raises(ZeroModeUnsupported):
        models.lattice_scalar_system(4, 0.0)


def test_constant_force_charges_at_state():
    cf = models.constant_force_system(2.0, [3.0])
    s = make_state([1], [4], 2)
    assert cf.T(0)(s) == -2.0
    assert cf.gamma(0)(s) == 0.0


def test_hamiltonian_from_charges():
    cf = models.constant_force_system(1.7, [0.3, -1.0, 2.0])
    for s in sample_states(3, 100, seed=6):
        assert abs(cf.H_charge()(s) - cf.system.hamiltonian(s)) < 1e-12


def test_rotation_charges_transverse_to_force():
    cf = models.constant_force_system(1.4, [0.0, 0.0, 1.0])
    for s in sample_states(3, 50, seed=7):
        x, p = s.q, s.p
        assert abs(cf.L(0, 1)(s) - (x[0] * p[1] - x[1] * p[0])) < 1e-12
        # components along F are projected out
        assert abs(cf.L(0, 2)(s)) < 1e-12
    st = sample_states(3, 100, seed=8)
    assert noether.conservation_check(cf.L(0, 1), cf.system, st).passed


def test_rotation_dimension_rules():
    with pytest.raises(BadDimension):
        models.constant_force_system(1.0, [1.0, 2.0]).L(0, 1)
    with pytest.raises(BadDimension):
        models.free_particle_system(1.0, 1).L(0, 0)
    free = models.free_particle_system(1.0, 2)
    assert "L01" in free.charges
    s = make_state([1.0, 2.0], [3.0, 5.0], 0.6)
    assert abs(free.L(0, 1)(s) - (1.0 * 5.0 - 2.0 * 3.0)) < 1e-12
    assert "L01" not in models.constant_force_system(1.0, [1.0, 2.0]).charges


def test_finite_energy_shift():
    cf = models.constant_force_system(1.0, [2.0])
    s = make_state([0.3], [0.1], 0.4)
    assert models.finite_symmetry_energy_shift(cf, [0.0], [0.0], s) == 0.0
    H = cf.system.hamiltonian
    for s in sample_states(1, 20, seed=9):
        assert abs(H(cf.finite_map([1.0], [0.0], s)) - H(s) - (-2.0)) < 1e-12
    cf3 = models.constant_force_system(1.7, [0.0, 0.5, 2.3])
    rng = np.random.default_rng(0)
    for s in sample_states(3, 100, seed=10):
        a, v = rng.normal(size=3), rng.normal(size=3)
        assert models.finite_symmetry_energy_shift(cf3, a, v, s) < 1e-12
    with pytest.raises(ValueError):
        models.finite_symmetry_energy_shift(cf3, [1.0], [1.0], s)


def test_finite_map_maps_solutions_to_solutions():
    cf = models.constant_force_system(1.3, [0.7, -0.2])
    s0 = make_state([0.1, 0.2], [0.5, -0.4], 0.0)
    a, v = np.array([0.3, 1.0]), np.array([-0.5, 0.25])
    s1 = cf.finite_map(a, v, s0)
    for t in (0.5, 1.0, 3.0):
        q, p = cf.reconstruct(s0, t)
        moved = cf.finite_map(a, v, make_state(q, p, t))
        q1, p1 = cf.reconstruct(s1, t)
        assert np.allclose(moved.q, q1, atol=1e-12) and np.allclose(moved.p, p1, atol=1e-12)


def test_linearised_maps_match_charges_gradients():
    cf = models.constant_force_system(1.3, [0.7, -0.2])
    for s in sample_states(2, 20, seed=12):
        g = dn.grad(cf.gamma(1), s)
        tr = cf.boost(1, 0.5)
        assert np.allclose(tr.phi_at(s), g.d_p) and np.allclose(tr.chi_at(s), -g.d_q)


def test_invalid_mass():
    with pytest.raises(ValueError):
        models.constant_force_system(0.0, [1.0])
