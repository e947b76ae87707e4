"""Momentum-space wavefunctions for a particle in a constant force (one dimension).

In momentum space ``x = i hbar d/dp``, so

    H phi = p^2/2m phi - i hbar F dphi/dp,
    T(t) = p - t F,
    gamma(t) = -i hbar m d/dp + t p - t^2 F / 2.

Delta-normalised families are held as phase fields (``kind="phase_field"``)
or single-bin spikes of height ``1/dp`` (``kind="spike"``).  Only
``kind="packet"`` states are normalisable.

Phase fields are chirps: they are neither periodic on the grid nor
band-limited, so spectral derivatives are taken of ``w * phi`` with a smooth
Gaussian window ``w`` and the exact correction ``b w' phi`` is removed
(for a first-order operator ``L = a(p) + b d/dp``,
``L(w phi) - w L phi = b w' phi``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import GridMismatch, IncommensurateShift, NotNormalizable, OffGrid, ZeroForce

KINDS = ("packet", "phase_field", "spike")
TIME_STEP = 1e-4


@dataclass(frozen=True)
class MomentumGrid:
    n: int = 4096
    p_min: float = -40.0
    p_max: float = 40.0
    hbar: float = 1.0
    m: float = 1.0
    F: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2 or (self.n & (self.n - 1)):
            raise ValueError(f"grid size must be a power of two, got {self.n}")
        if not self.p_max > self.p_min:
            raise ValueError("p_max must exceed p_min")
        if not (self.hbar > 0 and self.m > 0):
            raise ValueError("hbar and m must be positive")
        if not all(np.isfinite([self.p_min, self.p_max, self.F])):
            raise ValueError("grid parameters must be finite")

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.n

    @property
    def p(self) -> np.ndarray:
        return self.p_min + np.arange(self.n) * self.dp

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers conjugate to ``p`` in FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.n, self.dp)

    def index_of(self, p: float) -> int:
        """Nearest node to ``p``; :class:`OffGrid` outside ``[p_min, p_max)``."""
        if not (self.p_min - 0.5 * self.dp <= p < self.p_max - 0.5 * self.dp):
            raise OffGrid(f"p = {p} lies outside the grid [{self.p_min}, {self.p_max})")
        return int(round((p - self.p_min) / self.dp))

    def aligned(self, p: float) -> "MomentumGrid":
        """Same spacing and size, shifted so that ``p`` is exactly a node."""
        dp = self.dp
        shift = p - (self.p_min + round((p - self.p_min) / dp) * dp)
        return replace(self, p_min=self.p_min + shift, p_max=self.p_max + shift)


@dataclass(frozen=True, eq=False)
class WaveState:
    amps: np.ndarray
    t: float
    grid: MomentumGrid
    kind: str = "packet"
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (self.grid.n,):
            raise ValueError(f"amplitude vector has shape {a.shape}, grid has {self.grid.n} points")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2) * self.grid.dp)

    def with_amps(self, amps, **kw) -> "WaveState":
        return WaveState(amps, kw.get("t", self.t), self.grid, kw.get("kind", self.kind), kw.get("label", self.label), kw.get("meta", self.meta))

    def to_csv(self, path) -> None:
        """Rows ``p,re,im`` with 17 significant digits."""
        with open(path, "w") as fh:
            fh.write("p,re,im\n")
            for p, a in zip(self.grid.p, self.amps):
                fh.write("%.17g,%.17g,%.17g\n" % (p, a.real, a.imag))


# -- spectral calculus -------------------------------------------------------


def d_dp(amps: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    """Spectral derivative on the periodic grid."""
    return np.fft.ifft(1j * grid.k * np.fft.fft(amps))


def hamiltonian_action(amps: np.ndarray, grid: MomentumGrid) -> np.ndarray:
    p = grid.p
    return p * p / (2 * grid.m) * amps - 1j * grid.hbar * grid.F * d_dp(amps, grid)


def t_action(amps, grid, t):
    return (grid.p - t * grid.F) * amps


def gamma_action(amps, grid, t):
    p = grid.p
    return -1j * grid.hbar * grid.m * d_dp(amps, grid) + (t * p - 0.5 * t * t * grid.F) * amps


def gaussian_window(grid: MomentumGrid, center: float = 0.0, width: Optional[float] = None):
    """``(w, dw/dp)``; default width is 1/40 of the grid span."""
    if width is None:
        width = (grid.p_max - grid.p_min) / 40.0
    x = (grid.p - center) / width
    w = np.exp(-0.5 * x * x)
    return w, -x / width * w


def _rel(residual, reference) -> float:
    return float(np.linalg.norm(residual) / np.linalg.norm(reference))


# -- states ------------------------------------------------------------------


def energy_state(grid: MomentumGrid, E: float, t: float = 0.0) -> WaveState:
    """``(2 pi hbar F)^(-1/2) exp{(i/hbar F)(E p - p^3/6m)}``, times ``exp(-i E t/hbar)``."""
    F, hb, m = grid.F, grid.hbar, grid.m
    if F == 0:
        raise ZeroForce("energy eigenstates in this form need a nonzero force")
    p = grid.p
    amps = (2 * np.pi * hb * abs(F)) ** -0.5 * np.exp(1j / (hb * F) * (E * p - p**3 / (6 * m)) - 1j * E * t / hb)
    return WaveState(amps, t, grid, "phase_field", f"E={E}", {"E": E})


def t_state_phase(T: float, t: float, grid: MomentumGrid) -> float:
    """Exponent of ``|T, t> = exp(i theta) |p = T + tF>``."""
    F, m, hb = grid.F, grid.m, grid.hbar
    return -(t / (2 * m * hb)) * (T * T + t * T * F + t * t * F * F / 3.0)


def t_eigenstate(grid: MomentumGrid, T: float, t: float) -> WaveState:
    """Single-bin spike at the node nearest ``T + tF`` (height ``1/dp``)."""
    idx = grid.index_of(T + t * grid.F)
    amps = np.zeros(grid.n, dtype=complex)
    amps[idx] = np.exp(1j * t_state_phase(T, t, grid)) / grid.dp
    return WaveState(amps, t, grid, "spike", f"T={T}", {"T": T, "index": idx})


def gamma_eigenstate(grid: MomentumGrid, gamma: float, t: float) -> WaveState:
    F, m, hb = grid.F, grid.m, grid.hbar
    p = grid.p
    phase = -(t / (hb * m)) * (F * gamma + t * t * F * F / 6.0) + (gamma * p + 0.5 * t * t * F * p - 0.5 * t * p * p) / (hb * m)
    amps = (2 * np.pi * hb * m) ** -0.5 * np.exp(1j * phase)
    return WaveState(amps, t, grid, "phase_field", f"gamma={gamma}", {"gamma": gamma})


def gaussian_packet(grid: MomentumGrid, p0: float, sigma_p: float, x0: float = 0.0, t: float = 0.0) -> WaveState:
    """Normalised packet with ``<p> = p0``, momentum spread ``sigma_p``, centred at ``x0``."""
    if sigma_p <= 0:
        raise ValueError("sigma_p must be positive")
    p = grid.p
    amps = np.exp(-((p - p0) ** 2) / (4 * sigma_p**2) - 1j * p * x0 / grid.hbar)
    amps = amps / math.sqrt(np.sum(np.abs(amps) ** 2) * grid.dp)
    return WaveState(amps, t, grid, "packet", f"packet(p0={p0})")


def superpose(a: WaveState, b: WaveState, ca: complex = 1.0, cb: complex = 1.0, normalise: bool = True) -> WaveState:
    _same_frame(a, b)
    amps = ca * a.amps + cb * b.amps
    if normalise:
        amps = amps / math.sqrt(np.sum(np.abs(amps) ** 2) * a.grid.dp)
    return WaveState(amps, a.t, a.grid, "packet", f"({a.label}+{b.label})")


def _same_frame(s1: WaveState, s2: WaveState):
    if s1.grid != s2.grid:
        raise GridMismatch("states live on different grids")
    if s1.t != s2.t:
        raise GridMismatch(f"states are at different times ({s1.t} vs {s2.t})")


def overlap(s1: WaveState, s2: WaveState) -> complex:
    """``<s1|s2> = sum conj(s1) s2 dp``."""
    _same_frame(s1, s2)
    return complex(np.sum(np.conj(s1.amps) * s2.amps) * s1.grid.dp)


# -- symmetry actions --------------------------------------------------------


def translate_state(s: WaveState, a: float) -> WaveState:
    """Multiply by ``exp(-(i/hbar) a (p - tF))``."""
    g = s.grid
    return s.with_amps(s.amps * np.exp(-1j * a * (g.p - s.t * g.F) / g.hbar))


def boost_state(s: WaveState, v: float) -> WaveState:
    """``psi'(p) = exp{(i/hbar)(t^2 v F/2 - t v p' - t m v^2/2)} psi(p')`` with ``p' = p - m v``.

    The shift ``m v`` must be a whole number of bins; amplitudes are rolled
    (periodically), so the map is an exact permutation times a phase.
    """
    g, t = s.grid, s.t
    shift = g.m * v / g.dp
    bins = int(round(shift))
    if abs(shift - bins) > 1e-9 * max(1.0, abs(shift)):
        raise IncommensurateShift(f"m v = {g.m * v} is not a multiple of dp = {g.dp}")
    p = g.p
    phase = np.exp(1j / g.hbar * (0.5 * t * t * v * g.F - t * v * p - 0.5 * t * g.m * v * v))
    amps = np.roll(s.amps * phase, bins)
    meta = dict(s.meta)
    if "index" in meta:
        meta["index"] = (meta["index"] + bins) % g.n
    return s.with_amps(amps, meta=meta)


def energy_expectation(s: WaveState) -> float:
    if s.kind != "packet":
        raise NotNormalizable(f"{s.kind} states are delta-normalised; use a wave packet")
    n2 = s.norm2
    if not (n2 > 0 and np.isfinite(n2)):
        raise NotNormalizable("state has zero or non-finite norm")
    Hs = hamiltonian_action(s.amps, s.grid)
    return float(np.real(np.sum(np.conj(s.amps) * Hs) * s.grid.dp) / n2)


def expectation(s: WaveState, action) -> complex:
    """``<s| action |s> / <s|s>`` for an operator given as ``action(amps, grid)``."""
    return complex(np.sum(np.conj(s.amps) * action(s.amps, s.grid)) * s.grid.dp / s.norm2)


# -- residuals ---------------------------------------------------------------


def stationarity_residual(s: WaveState, E: float, window=None) -> float:
    """``|H(w phi) - b w' phi - E w phi| / |w phi|`` with ``b = -i hbar F``."""
    g = s.grid
    w, dw = window if window is not None else gaussian_window(g)
    wphi = w * s.amps
    lhs = hamiltonian_action(wphi, g) - (-1j * g.hbar * g.F) * dw * s.amps
    return _rel(lhs - E * wphi, wphi)


def gamma_eigen_residual(s: WaveState, gamma: float, window=None) -> float:
    g = s.grid
    w, dw = window if window is not None else gaussian_window(g)
    wphi = w * s.amps
    lhs = gamma_action(wphi, g, s.t) - (-1j * g.hbar * g.m) * dw * s.amps
    return _rel(lhs - gamma * wphi, wphi)


def phase_rate(make, t: float, step: float = TIME_STEP) -> np.ndarray:
    """``d arg(phi)/dt`` per node from ``make(t)`` amplitudes, via the phase of ``phi(t+dt)/phi(t-dt)``."""
    return np.angle(make(t + step) / make(t - step)) / (2 * step)


def schrodinger_residual_field(make, t: float, window=None, step: float = TIME_STEP) -> float:
    """Relative ``|i hbar d(phi)/dt - H phi|`` for a constant-modulus phase field ``make(t) -> WaveState``."""
    s = make(t)
    g = s.grid
    w, dw = window if window is not None else gaussian_window(g)
    rate = phase_rate(lambda tt: make(tt).amps, t, step)
    wphi = w * s.amps
    lhs = 1j * g.hbar * (1j * rate) * wphi
    rhs = hamiltonian_action(wphi, g) - (-1j * g.hbar * g.F) * dw * s.amps
    return _rel(lhs - rhs, wphi)


def t_state_schrodinger_residual(grid: MomentumGrid, T: float, t: float, step: float = TIME_STEP) -> float:
    """``|-hbar d(theta)/dt - p^2/2m|`` at ``p = T + tF``.

    The spike rides along ``p = T + tF`` (the ``-xF`` term transports it);
    the remaining phase must supply the kinetic energy.
    """
    rate = (t_state_phase(T, t + step, grid) - t_state_phase(T, t - step, grid)) / (2 * step)
    p = T + t * grid.F
    return abs(-grid.hbar * rate - p * p / (2 * grid.m))


def commutator_residual(s: WaveState, t: float) -> float:
    """Relative ``|[T(t), gamma(t)] psi / (i hbar) - m psi|`` on a packet."""
    g = s.grid
    tg = t_action(gamma_action(s.amps, g, t), g, t)
    gt = gamma_action(t_action(s.amps, g, t), g, t)
    return _rel((tg - gt) / (1j * g.hbar) - g.m * s.amps, s.amps)


def global_phase_deviation(s1: WaveState, s2: WaveState, mask=None) -> float:
    """``max |s1/s2 - c|`` with ``c`` the best unimodular constant; ``mask`` restricts nodes."""
    _same_frame(s1, s2)
    ratio = s1.amps / s2.amps
    if mask is not None:
        ratio = ratio[mask]
    c = np.mean(ratio)
    c = c / abs(c)
    return float(np.max(np.abs(ratio - c)))


# -- overlap phase arbitration -----------------------------------------------

# two readings of the closed-form overlap phase, plus the t-independent
# value implied by unitary evolution of both states
PHASE_CANDIDATES = {
    "single_hbar": lambda T, g, t, G: (T * g / G.m + t * (T + t * G.F) ** 2 / G.m) / G.hbar,
    "double_hbar": lambda T, g, t, G: T * g / (G.hbar * G.m) + t * (T + t * G.F) ** 2 / (G.hbar**2 * G.m),
    "unitarity": lambda T, g, t, G: T * g / (G.hbar * G.m),
}


def wrap_angle(x) -> float:
    return float((x + np.pi) % (2 * np.pi) - np.pi)


@dataclass(frozen=True)
class OverlapArbitration:
    T: float
    gamma: float
    t: float
    measured_phase: float
    measured_modulus: float
    deviations: dict

    def matches(self, tol: float = 1e-5) -> list[str]:
        return [name for name, d in self.deviations.items() if d < tol]


def arbitrate_overlap(grid: MomentumGrid, T: float, gamma: float, t: float) -> OverlapArbitration:
    """Measure ``arg <T,t|gamma,t>`` by quadrature and compare with every candidate phase.

    The grid is shifted so that ``T + tF`` is a node; the spike then sits
    exactly on the eigenvalue and the quadrature is exact.
    """
    G = grid.aligned(T + t * grid.F)
    ov = overlap(t_eigenstate(G, T, t), gamma_eigenstate(G, gamma, t))
    measured = float(np.angle(ov))
    devs = {name: abs(wrap_angle(measured - fn(T, gamma, t, G))) for name, fn in PHASE_CANDIDATES.items()}
    return OverlapArbitration(T, gamma, t, measured, abs(ov), devs)


# -- Airy cross-check ----------------------------------------------------------


def position_profile(s: WaveState, window_sigma: float):
    """``(x, psi(x))`` of ``w * phi`` by FFT, ``w = exp(-p^2 / 2 sigma^2)``.

    ``psi(x) = (2 pi hbar)^(-1/2) sum_p w phi e^{i p x / hbar} dp``.
    """
    g = s.grid
    w = np.exp(-0.5 * (g.p / window_sigma) ** 2)
    x = g.hbar * g.k
    coeffs = np.fft.ifft(w * s.amps) * g.n
    psi = (2 * np.pi * g.hbar) ** -0.5 * g.dp * np.exp(1j * g.p_min * x / g.hbar) * coeffs
    order = np.argsort(x)
    return x[order], psi[order]


def damped_airy(z: float, delta: float) -> float:
    """``(1/pi) int_0^inf exp(-delta s^2) cos(s^3/3 + z s) ds`` by adaptive quadrature."""
    from scipy.integrate import quad

    if delta <= 0:
        raise ValueError("damping must be positive")
    upper = math.sqrt(40.0 / delta)
    val, _ = quad(lambda s: math.exp(-delta * s * s) * math.cos(s**3 / 3.0 + z * s), 0.0, upper, limit=2000)
    return val / math.pi


def airy_oracle(grid: MomentumGrid, E: float, x: float, window_sigma: float) -> float:
    """Windowed energy eigenstate in position space, ``alpha/(hbar sqrt F) Ai_delta(-alpha (x + E/F)/hbar)``."""
    F, m, hb = grid.F, grid.m, grid.hbar
    if F <= 0:
        raise ValueError("the Airy oracle is written for F > 0")
    alpha = (2 * m * hb * F) ** (1.0 / 3.0)
    delta = alpha**2 / (2 * window_sigma**2)
    return alpha / (hb * math.sqrt(F)) * damped_airy(-alpha * (x + E / F) / hb, delta)
