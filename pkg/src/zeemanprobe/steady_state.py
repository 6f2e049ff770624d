"""Pump-dressed steady state of the open degenerate two-level system.

The stationary density matrix solves the linear system
``generator @ vec(sigma) = -gamma vec(rho0)`` and is then rescaled by
the total atom number ``N = n_g + n_e [1 + (1 - b)/gamma]`` so that the
populations stranded in external levels (open transitions, b < 1) are
accounted for: after rescaling ``tr(sigma) + n_ext = 1``.  Dividing by N
rather than renormalizing to unit trace keeps the overall absorption
reduction of open transitions physical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liouville import lindblad_superop, solve_linear, transit_feed, unvectorize
from .system import OperatorSet, TransitionSpec


@dataclass(frozen=True)
class DensityState:
    """Normalized steady state plus bookkeeping.

    ``n_ext`` is the stationary population accumulated in levels outside
    the two-level system; it vanishes for closed transitions.
    """

    matrix: np.ndarray
    populations_g: np.ndarray
    populations_e: np.ndarray
    n_ext: float
    residual: float

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def solve_steady_state(ops: OperatorSet, spec: TransitionSpec) -> DensityState:
    gen = lindblad_superop(ops, spec)
    rhs = -transit_feed(spec)
    x, residual = solve_linear(
        gen,
        rhs,
        context=f"(steady state, {_describe(ops, spec)})",
        return_residual=True,
    )
    raw = unvectorize(x)
    ng = spec.ng
    n_g = float(np.trace(raw[:ng, :ng]).real)
    n_e = float(np.trace(raw[ng:, ng:]).real)
    total = n_g + n_e * (1.0 + (1.0 - spec.branching) / spec.gamma)
    matrix = raw / total
    n_ext = n_e * (1.0 - spec.branching) / spec.gamma / total
    matrix.setflags(write=False)
    return DensityState(
        matrix=matrix,
        populations_g=np.diag(matrix[:ng, :ng]).real.copy(),
        populations_e=np.diag(matrix[ng:, ng:]).real.copy(),
        n_ext=n_ext,
        residual=residual,
    )


def steady_state_diagnostics(state: DensityState, ops: OperatorSet) -> dict:
    """Sublevel populations, ground orientation, largest ground coherence."""
    ng = ops.transition.ng
    gg = state.matrix[:ng, :ng]
    fz_g = ops.f_ground[2]
    coherences = gg - np.diag(np.diag(gg))
    return {
        "populations_g": state.populations_g.copy(),
        "populations_e": state.populations_e.copy(),
        "n_ext": state.n_ext,
        "orientation_g": float(np.trace(gg @ fz_g).real),
        "max_ground_coherence": float(np.max(np.abs(coherences)))
        if ng > 1
        else 0.0,
    }


def _describe(ops: OperatorSet, spec: TransitionSpec) -> str:
    return (
        f"fg={spec.fg} fe={spec.fe} b={spec.branching} gamma={spec.gamma} "
        f"rabi={ops.pump.rabi} B={ops.bfield}"
    )
