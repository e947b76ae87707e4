"""Built-in systems with closed-form charges and symmetry transformations.

* harmonic oscillators with complex charges ``A(t) = exp(i w (t - t0)) a``
* a periodic 1-d lattice scalar field, reduced to real normal modes
* a particle in a constant force (free particle for ``F = 0``)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import dualnum as dn
from .errors import BadDimension, BadFrequency, ZeroModeUnsupported
from .phasespace import ComplexObservable, Observable, PhaseState, SystemSpec, Transformation


def _as_vec(x, name) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


# -- harmonic oscillators ----------------------------------------------------


@dataclass(frozen=True)
class HarmonicModel:
    omegas: np.ndarray
    t0: float
    system: SystemSpec
    charges: Mapping[str, object] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.omegas)

    def A(self, alpha: int) -> ComplexObservable:
        return self.charges[f"A{alpha}"]

    def monomial(self, j: int, k: int, alpha: int = 0) -> ComplexObservable:
        """``(A^dagger)^j A^k`` for mode ``alpha``."""
        if j < 0 or k < 0:
            raise ValueError("monomial powers must be non-negative")
        A = self.A(alpha)
        one = Observable(lambda q, p, t: 1.0, self.dim, "1")
        out = ComplexObservable.from_real(one)
        for _ in range(j):
            out = out * A.conj()
        for _ in range(k):
            out = out * A
        return ComplexObservable(out.re, out.im, f"Adag{alpha}^{j} A{alpha}^{k}")

    def exact_solution(self, s0: PhaseState, t: float) -> tuple[np.ndarray, np.ndarray]:
        w = self.omegas
        tau = t - s0.t
        c, s = np.cos(w * tau), np.sin(w * tau)
        return s0.q * c + s0.p / w * s, -s0.q * w * s + s0.p * c


def _fock_parts(w: float, alpha: int, t0: float, dim: int):
    scale = np.sqrt(w / 2.0)

    def re(q, p, t):
        tau = w * (t - t0)
        return scale * (q[alpha] * dn.cos(tau) - p[alpha] / w * dn.sin(tau))

    def im(q, p, t):
        tau = w * (t - t0)
        return scale * (q[alpha] * dn.sin(tau) + p[alpha] / w * dn.cos(tau))

    return Observable(re, dim, f"ReA{alpha}"), Observable(im, dim, f"ImA{alpha}")


def harmonic_system(omegas, t0: float = 0.0, name: str = "harmonic", extra_params=None) -> HarmonicModel:
    """``H = sum_a (p_a^2 + w_a^2 q_a^2) / 2``, all ``w_a > 0``."""
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    if w.ndim != 1 or len(w) == 0:
        raise ValueError("omegas must be a non-empty vector")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise BadFrequency(f"all frequencies must be positive and finite, got {w.tolist()}")
    d = len(w)
    w2 = w**2

    def H(q, p, t):
        return 0.5 * np.sum(p * p) + 0.5 * np.sum(w2 * q * q)

    ham = Observable(H, d, "H")
    sys = SystemSpec(
        d,
        ham,
        name,
        params={"omegas": w.tolist(), "t0": float(t0), **(extra_params or {})},
        separable=True,
        grad_q=lambda q, p: w2 * q,
        grad_p=lambda q, p: p,
    )
    charges: dict[str, object] = {"H": ham}
    h_charge = None
    for a in range(d):
        re, im = _fock_parts(w[a], a, t0, d)
        charges[f"ReA{a}"] = re
        charges[f"ImA{a}"] = im
        charges[f"A{a}"] = ComplexObservable(re, im, f"A{a}")
        term = w[a] * (re * re + im * im)
        h_charge = term if h_charge is None else h_charge + term
    charges["H_charge"] = h_charge.relabel("sum w |A|^2")
    return HarmonicModel(w, float(t0), sys, charges)


# -- lattice scalar field ----------------------------------------------------


def lattice_frequencies(n_sites: int, mu: float, spacing: float) -> np.ndarray:
    k = np.arange(n_sites)
    return np.sqrt(mu**2 + (2.0 / spacing) ** 2 * np.sin(np.pi * k / n_sites) ** 2)


def mode_matrix(n_sites: int) -> tuple[np.ndarray, list[tuple[str, int]]]:
    """Orthogonal matrix whose row ``k`` is the real lattice profile of mode ``k``.

    Row 0 is constant, rows ``1 <= k < N/2`` are cosines with wavenumber ``k``,
    row ``N/2`` (even N) alternates in sign, rows ``k > N/2`` are sines with
    wavenumber ``N - k``.  Mode ``k`` and ``N - k`` share a frequency.
    """
    N = n_sites
    n = np.arange(N)
    U = np.empty((N, N))
    kinds: list[tuple[str, int]] = []
    for k in range(N):
        if k == 0:
            U[k] = 1.0 / np.sqrt(N)
            kinds.append(("const", 0))
        elif 2 * k == N:
            U[k] = (-1.0) ** n / np.sqrt(N)
            kinds.append(("alt", k))
        elif 2 * k < N:
            U[k] = np.sqrt(2.0 / N) * np.cos(2 * np.pi * k * n / N)
            kinds.append(("cos", k))
        else:
            U[k] = np.sqrt(2.0 / N) * np.sin(2 * np.pi * (N - k) * n / N)
            kinds.append(("sin", N - k))
    return U, kinds


@dataclass(frozen=True)
class LatticeScalarModel:
    """Klein-Gordon field on ``N`` periodic sites, in canonical site and mode form.

    Site variables are ``q_n = sqrt(a) phi_n``, ``p_n = sqrt(a) pi_n`` so that
    ``H = sum p^2/2 + q.K.q/2``.  ``modes`` is the same system in the normal
    coordinates ``Q = U q``, ``P = U p``.
    """

    n_sites: int
    mu: float
    spacing: float
    omegas: np.ndarray
    U: np.ndarray
    mode_kinds: list
    K: np.ndarray
    site_system: SystemSpec
    modes: HarmonicModel

    @property
    def system(self) -> SystemSpec:
        return self.modes.system

    def to_modes(self, s: PhaseState) -> PhaseState:
        return PhaseState(self.U @ s.q, self.U @ s.p, s.t)

    def to_sites(self, s: PhaseState) -> PhaseState:
        return PhaseState(self.U.T @ s.q, self.U.T @ s.p, s.t)

    def momentum_weights(self) -> np.ndarray:
        """Lattice wavenumber ``2 pi kappa / (N a)`` of each mode, signed negative for sines."""
        kap = np.array([(-kap if kind == "sin" else kap) for kind, kap in self.mode_kinds], dtype=float)
        return 2 * np.pi * kap / (self.n_sites * self.spacing)

    def momentum_charge(self) -> Observable:
        """``P = sum_k w_k |A_k|^2``; diagonal in modes, hence commutes with H."""
        wk = self.momentum_weights()
        out = None
        for k in range(self.n_sites):
            term = wk[k] * self.modes.A(k).abs2()
            out = term if out is None else out + term
        return out.relabel("P")


def lattice_scalar_system(n_sites: int, mu: float, spacing: float = 1.0, t0: float = 0.0) -> LatticeScalarModel:
    if int(n_sites) != n_sites or n_sites < 1:
        raise ValueError("n_sites must be a positive integer")
    n_sites = int(n_sites)
    if spacing <= 0 or not np.isfinite(spacing):
        raise ValueError("spacing must be positive")
    if mu == 0:
        raise ZeroModeUnsupported("mu = 0 gives a zero-frequency mode whose Fock normalisation degenerates")
    if mu < 0 or not np.isfinite(mu):
        raise ValueError("mu must be positive")
    N = n_sites
    shift = np.roll(np.eye(N), 1, axis=1)
    K = mu**2 * np.eye(N) + (2 * np.eye(N) - shift - shift.T) / spacing**2
    U, kinds = mode_matrix(N)
    omegas = lattice_frequencies(N, mu, spacing)

    def H_site(q, p, t):
        return 0.5 * np.sum(p * p) + 0.5 * np.dot(q, K @ q)

    site = SystemSpec(
        N,
        Observable(H_site, N, "H"),
        "lattice_sites",
        params={"n_sites": N, "mu": float(mu), "spacing": float(spacing)},
        separable=True,
        grad_q=lambda q, p: K @ q,
        grad_p=lambda q, p: p,
    )
    modes = harmonic_system(
        omegas, t0=t0, name="lattice_scalar", extra_params={"n_sites": N, "mu": float(mu), "spacing": float(spacing)}
    )
    return LatticeScalarModel(N, float(mu), float(spacing), omegas, U, kinds, K, site, modes)


# -- constant force ----------------------------------------------------------


@dataclass(frozen=True)
class ConstantForceModel:
    mass: float
    force: np.ndarray
    system: SystemSpec

    @property
    def dim(self) -> int:
        return len(self.force)

    # charges

    def T(self, i: int) -> Observable:
        F = self.force[i]
        return Observable(lambda q, p, t: p[i] - t * F, self.dim, f"T{i}")

    def gamma(self, i: int) -> Observable:
        m, F = self.mass, self.force[i]
        return Observable(lambda q, p, t: -m * q[i] + t * p[i] - 0.5 * t * t * F, self.dim, f"gamma{i}")

    def _perp_basis(self) -> np.ndarray:
        F = self.force
        nF = np.linalg.norm(F)
        d = self.dim
        if nF == 0:
            if d < 2:
                raise BadDimension("rotation charges need d >= 2 for a free particle")
            return np.eye(d)
        if d < 3:
            raise BadDimension("rotation charges transverse to a nonzero force need d >= 3")
        u = F / nF
        return np.eye(d) - np.outer(u, u)

    def L(self, i: int, j: int) -> Observable:
        """``-(gamma_perp_i T_perp_j - gamma_perp_j T_perp_i) / m`` with ``perp`` transverse to F."""
        Pm = self._perp_basis()
        d = self.dim
        if not (0 <= i < d and 0 <= j < d):
            raise BadDimension(f"rotation indices ({i}, {j}) out of range for d = {d}")
        m, F = self.mass, self.force
        Pi, Pj = Pm[i], Pm[j]

        def fn(q, p, t):
            T = p - t * F
            g = -m * q + t * p - 0.5 * t * t * F
            return -(np.dot(Pi, g) * np.dot(Pj, T) - np.dot(Pj, g) * np.dot(Pi, T)) / m

        return Observable(fn, d, f"L{i}{j}")

    def H_charge(self) -> Observable:
        m, F = self.mass, self.force

        def fn(q, p, t):
            T = p - t * F
            g = -m * q + t * p - 0.5 * t * t * F
            return np.dot(T, T) / (2 * m) + np.dot(F, g) / m

        return Observable(fn, self.dim, "T^2/2m + F.gamma/m")

    @property
    def charges(self) -> dict[str, Observable]:
        out: dict[str, Observable] = {"H": self.system.hamiltonian, "H_charge": self.H_charge()}
        for i in range(self.dim):
            out[f"T{i}"] = self.T(i)
            out[f"gamma{i}"] = self.gamma(i)
        try:
            self._perp_basis()
        except BadDimension:
            return out
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                out[f"L{i}{j}"] = self.L(i, j)
        return out

    # linearised transformations

    def translation(self, axis: int, lambda_param: float) -> Transformation:
        """``dx = eps e_a``, ``dp = 0``, ``Lambda = -(1 - lam) p_a + t F_a``."""
        d, lam, F = self.dim, lambda_param, self.force[axis]
        e = np.eye(d)[axis]
        zero = np.zeros(d)

        def surface(q, p, t):
            return -(1 - lam) * p[axis] + t * F

        return Transformation(
            lambda q, p, t: e, lambda q, p, t: zero, Observable(surface, d, f"Lambda_T{axis}"), lam, f"translation{axis}"
        )

    def boost(self, axis: int, lambda_param: float) -> Transformation:
        """``dx = eps t e_v``, ``dp = eps m e_v``, ``Lambda = lam m x_v - (1 - lam) t p_v + t^2 F_v / 2``."""
        d, lam, m, F = self.dim, lambda_param, self.mass, self.force[axis]
        e = np.eye(d)[axis]

        def surface(q, p, t):
            return lam * m * q[axis] - (1 - lam) * t * p[axis] + 0.5 * t * t * F

        return Transformation(
            lambda q, p, t: t * e, lambda q, p, t: m * e, Observable(surface, d, f"Lambda_B{axis}"), lam, f"boost{axis}"
        )

    # finite maps

    def finite_map(self, a, v, s: PhaseState) -> PhaseState:
        """``x' = x + a + t v``, ``p' = p + m v``."""
        a, v = np.asarray(a, float), np.asarray(v, float)
        return PhaseState(s.q + a + s.t * v, s.p + self.mass * v, s.t)

    def finite_surface(self, a, v, lambda_param: float) -> Observable:
        """Surface term of the finite map, ``L(x', p') - L(x, p) = dLambda/dt`` off-shell."""
        a, v = np.asarray(a, float), np.asarray(v, float)
        m, F, lam = self.mass, self.force, lambda_param
        v2 = float(np.dot(v, v))
        vF, aF = float(np.dot(v, F)), float(np.dot(a, F))

        def fn(q, p, t):
            return (
                lam * m * np.dot(v, q)
                + lam * t * m * v2
                - (1 - lam) * t * np.dot(v, p)
                - 0.5 * t * m * v2
                + 0.5 * t * t * vF
                - (1 - lam) * np.dot(a, p)
                + t * aF
            )

        return Observable(fn, self.dim, "Lambda_finite")

    def reconstruct(self, s0: PhaseState, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Solution from the charges: ``T`` and ``gamma`` are constant, so
        ``x(t) = (t T - gamma + t^2 F/2) / m`` and ``p(t) = T + t F``."""
        m, F = self.mass, self.force
        T0 = np.array([self.T(i)(s0) for i in range(self.dim)])
        g0 = np.array([self.gamma(i)(s0) for i in range(self.dim)])
        return (t * T0 - g0 + 0.5 * t * t * F) / m, T0 + t * F


def constant_force_system(m: float, F, name: str | None = None) -> ConstantForceModel:
    """``H = p^2/2m - x.F``; ``F = 0`` is the free particle."""
    if not (m > 0 and np.isfinite(m)):
        raise ValueError(f"mass must be positive and finite, got {m}")
    F = _as_vec(F, "force")
    d = len(F)
    m = float(m)

    def H(q, p, t):
        return np.sum(p * p) / (2 * m) - np.sum(q * F)

    if name is None:
        name = "free" if not np.any(F) else "constant_force"
    sys = SystemSpec(
        d,
        Observable(H, d, "H"),
        name,
        params={"m": m, "F": F.tolist()},
        separable=True,
        grad_q=lambda q, p: -F + 0 * q,
        grad_p=lambda q, p: p / m,
    )
    return ConstantForceModel(m, F, sys)


def free_particle_system(m: float, dim: int = 1) -> ConstantForceModel:
    return constant_force_system(m, np.zeros(dim), name="free")


def finite_symmetry_energy_shift(model: ConstantForceModel, a, v, s: PhaseState) -> float:
    """``|H(x + a + t v, p + m v) - H(x, p) - (-a.F + v.T + m v^2 / 2)|``."""
    a, v = np.asarray(a, float), np.asarray(v, float)
    if a.shape != (model.dim,) or v.shape != (model.dim,):
        raise ValueError("a and v must match the model dimension")
    H = model.system.hamiltonian
    lhs = H(model.finite_map(a, v, s)) - H(s)
    T = s.p - s.t * model.force
    rhs = -np.dot(a, model.force) + np.dot(v, T) + 0.5 * model.mass * np.dot(v, v)
    return float(abs(lhs - rhs))


MODEL_NAMES = ("harmonic", "lattice_scalar", "constant_force", "free")
