"""Single-mode oscillator in a truncated number basis.

All identities are checked on the sub-cutoff block: the last row and column
are dropped, since truncation makes ``[a, a^dagger]`` wrong exactly there.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .errors import CutoffTooSmall

DEFAULT_CUTOFF = 16


@dataclass(frozen=True)
class FockSpaceCtx:
    cutoff: int = DEFAULT_CUTOFF
    omega: float = 1.0
    hbar: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 2:
            raise CutoffTooSmall(f"cutoff must be an integer >= 2, got {self.cutoff}")
        if not (self.omega > 0 and np.isfinite(self.omega)):
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not (self.hbar > 0 and np.isfinite(self.hbar)):
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def energies(self) -> np.ndarray:
        return self.hbar * self.omega * np.arange(self.cutoff)


@dataclass(frozen=True, eq=False)
class FockOp:
    matrix: np.ndarray
    cutoff: int
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.cutoff, self.cutoff):
            raise ValueError(f"matrix shape {m.shape} does not match cutoff {self.cutoff}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "matrix", m)

    def _check(self, other: "FockOp"):
        if other.cutoff != self.cutoff:
            raise ValueError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")

    def __matmul__(self, other: "FockOp") -> "FockOp":
        self._check(other)
        return FockOp(self.matrix @ other.matrix, self.cutoff, f"{self.label}{other.label}")

    def __add__(self, other: "FockOp") -> "FockOp":
        self._check(other)
        return FockOp(self.matrix + other.matrix, self.cutoff, f"({self.label}+{other.label})")

    def __sub__(self, other: "FockOp") -> "FockOp":
        self._check(other)
        return FockOp(self.matrix - other.matrix, self.cutoff, f"({self.label}-{other.label})")

    def __mul__(self, c) -> "FockOp":
        return FockOp(c * self.matrix, self.cutoff, f"{c}*{self.label}")

    __rmul__ = __mul__

    def dag(self) -> "FockOp":
        return FockOp(self.matrix.conj().T, self.cutoff, f"{self.label}^+")

    def power(self, k: int) -> "FockOp":
        return FockOp(np.linalg.matrix_power(self.matrix, k), self.cutoff, f"{self.label}^{k}")

    def block(self) -> np.ndarray:
        """The matrix without its last row and column."""
        return self.matrix[:-1, :-1]


def commutator(x: FockOp, y: FockOp) -> FockOp:
    return FockOp(x.matrix @ y.matrix - y.matrix @ x.matrix, x.cutoff, f"[{x.label},{y.label}]")


def identity(ctx: FockSpaceCtx) -> FockOp:
    return FockOp(np.eye(ctx.cutoff), ctx.cutoff, "1")


def ladder_ops(ctx: FockSpaceCtx) -> tuple[FockOp, FockOp, FockOp]:
    """``(a, a^dagger, H)`` with ``a|n> = sqrt(n)|n-1>`` and ``H = hbar w a^dagger a`` (no zero-point term)."""
    N = ctx.cutoff
    a = FockOp(np.diag(np.sqrt(np.arange(1, N)), k=1), N, "a")
    H = FockOp(np.diag(ctx.energies), N, "H")
    return a, FockOp(a.matrix.T, N, "a^+"), H


def _phase(ctx: FockSpaceCtx, t: float) -> complex:
    return np.exp(1j * ctx.omega * (t - ctx.t0))


def schrodinger_charge(ctx: FockSpaceCtx, t: float) -> tuple[FockOp, FockOp]:
    """``A(t) = exp(i w (t - t0)) a`` and its adjoint."""
    a, adag, _ = ladder_ops(ctx)
    ph = _phase(ctx, t)
    return FockOp(ph * a.matrix, ctx.cutoff, "A"), FockOp(np.conj(ph) * adag.matrix, ctx.cutoff, "A^+")


def evolution(ctx: FockSpaceCtx, t: float) -> np.ndarray:
    """``U(t) = exp(-i H (t - t0) / hbar)``, exact because H is diagonal."""
    return np.diag(np.exp(-1j * ctx.energies * (t - ctx.t0) / ctx.hbar))


def heisenberg(op: FockOp, ctx: FockSpaceCtx, t: float) -> FockOp:
    """``U(t)^dagger op U(t)``."""
    if op.cutoff != ctx.cutoff:
        raise ValueError(f"operator cutoff {op.cutoff} does not match context cutoff {ctx.cutoff}")
    U = evolution(ctx, t)
    return FockOp(U.conj().T @ op.matrix @ U, ctx.cutoff, f"{op.label}_H")


def monomial(ctx: FockSpaceCtx, t: float, j: int, k: int) -> FockOp:
    """``A^dagger(t)^j A(t)^k``."""
    A, Adag = schrodinger_charge(ctx, t)
    return FockOp(
        np.linalg.matrix_power(Adag.matrix, j) @ np.linalg.matrix_power(A.matrix, k), ctx.cutoff, f"A+^{j}A^{k}"
    )


@dataclass(frozen=True)
class SpectrumActionReport:
    """Residuals of ``[H, A+^j A^k] = hbar w (j - k) A+^j A^k`` on the block.

    ``level_shift[(j, k)]`` is ``j - k``: the monomial maps level ``n`` to ``n + j - k``.
    """

    t: float
    residuals: dict = field(default_factory=dict)
    level_shift: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def spectrum_action_report(ctx: FockSpaceCtx, t: float, j_max: int, k_max: int) -> SpectrumActionReport:
    if j_max < 0 or k_max < 0:
        raise ValueError("j_max and k_max must be non-negative")
    if not j_max + k_max < ctx.cutoff - 1:
        raise CutoffTooSmall(f"need j_max + k_max < cutoff - 1, got {j_max} + {k_max} with cutoff {ctx.cutoff}")
    _, _, H = ladder_ops(ctx)
    pairs = [(j, k) for j in range(j_max + 1) for k in range(k_max + 1)]

    def one(jk):
        j, k = jk
        M = monomial(ctx, t, j, k)
        lhs = commutator(H, M).block()
        rhs = ctx.hbar * ctx.omega * (j - k) * M.block()
        return float(np.max(np.abs(lhs - rhs)))

    res = pmap(one, pairs)
    return SpectrumActionReport(float(t), dict(zip(pairs, res)), {jk: jk[0] - jk[1] for jk in pairs})


# -- property helpers ----------------------------------------------------------


def heisenberg_block_residual(ctx: FockSpaceCtx, t: float) -> float:
    """``max |heisenberg(A(t)) - a|`` on the block."""
    a, _, _ = ladder_ops(ctx)
    A, _ = schrodinger_charge(ctx, t)
    return float(np.max(np.abs(heisenberg(A, ctx, t).block() - a.block())))


def correspondence_residual(ctx: FockSpaceCtx, t: float) -> float:
    """Compare ``[A_q, A_q^dagger] / (i hbar)`` with the classical ``{A, A*} = -i``.

    ``A_q = sqrt(hbar) A`` carries the classical normalisation
    ``sqrt(w/2)(q + i p/w)``; the comparison is on the block.
    """
    A, Adag = schrodinger_charge(ctx, t)
    s = np.sqrt(ctx.hbar)
    q_bracket = commutator(s * A, s * Adag).block() / (1j * ctx.hbar)
    return float(np.max(np.abs(q_bracket - (-1j) * np.eye(ctx.cutoff - 1))))


def unitarity_residual(ctx: FockSpaceCtx, t: float) -> float:
    U = evolution(ctx, t)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(ctx.cutoff))))


def heisenberg_constancy_residual(ctx: FockSpaceCtx, t: float, step: float = 1e-4) -> float:
    """Central difference in ``t`` of ``heisenberg(A(t), t)`` on the block."""

    def at(tt):
        A, _ = schrodinger_charge(ctx, tt)
        return heisenberg(A, ctx, tt).block()

    return float(np.max(np.abs((at(t + step) - at(t - step)) / (2 * step))))
