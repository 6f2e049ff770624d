"""First-order probe response of the pump-dressed atom.

The sideband operator solved here is the coefficient of
``e^{+i delta t}`` in the pump rotating frame.  It obeys the same
generator as the pump problem shifted by ``-i delta``, driven by the
commutator of the (lowering-only) probe coupling with the steady state:

    (generator - i delta) sigma = i [W2/2, sigma0]

Expanding the commutator block by block reproduces the four coupled
source terms of the component equations (the ge block is driven by the
population difference, the gg/ee blocks by the steady-state optical
coherence, the eg block is sourceless); the expansion is verified
term-by-term in the test suite rather than restated here.

Only the ``+delta`` sideband family is solved; its ``-delta`` partner is
the Hermitian conjugate in the full density matrix and is not needed by
any implemented observable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liouville import lindblad_superop, solve_linear, unvectorize, vectorize
from .steady_state import DensityState
from .system import OperatorSet, TransitionSpec


@dataclass(frozen=True)
class ProbeResponse:
    """The four blocks of the (non-Hermitian) sideband operator at one delta."""

    sigma_gg: np.ndarray
    sigma_ge: np.ndarray
    sigma_eg: np.ndarray
    sigma_ee: np.ndarray
    delta: float
    residual: float

    @property
    def matrix(self) -> np.ndarray:
        top = np.hstack([self.sigma_gg, self.sigma_ge])
        bottom = np.hstack([self.sigma_eg, self.sigma_ee])
        return np.vstack([top, bottom])


class ProbeSolver:
    """Reusable per-configuration solver: one generator assembly, many deltas.

    ``include_pump=False`` drops the coherent pump coupling from the
    response operator while keeping the pump-dressed steady state as the
    source, which isolates the incoherent (optical pumping and
    saturation) contribution to the probe spectrum.
    """

    def __init__(
        self,
        ops: OperatorSet,
        spec: TransitionSpec,
        steady: DensityState,
        include_pump: bool = True,
    ):
        self._ops = ops
        self._spec = spec
        self._base = lindblad_superop(ops, spec, include_pump=include_pump)
        w_half = 0.5 * ops.w2
        source = 1j * (w_half @ steady.matrix - steady.matrix @ w_half)
        self._rhs = vectorize(source)
        self._n = self._base.shape[0]

    def solve(self, delta: float) -> ProbeResponse:
        shifted = self._base.copy()
        shifted.flat[:: self._n + 1] -= 1j * delta
        spec = self._spec
        x, residual = solve_linear(
            shifted,
            self._rhs,
            context=(
                f"(probe solve at delta={delta}, fg={spec.fg} fe={spec.fe} "
                f"b={spec.branching} gamma={spec.gamma} rabi={self._ops.pump.rabi} "
                f"B={self._ops.bfield})"
            ),
            return_residual=True,
        )
        sigma = unvectorize(x)
        ng = spec.ng
        return ProbeResponse(
            sigma_gg=sigma[:ng, :ng].copy(),
            sigma_ge=sigma[:ng, ng:].copy(),
            sigma_eg=sigma[ng:, :ng].copy(),
            sigma_ee=sigma[ng:, ng:].copy(),
            delta=float(delta),
            residual=residual,
        )


def solve_probe(
    ops: OperatorSet, spec: TransitionSpec, steady: DensityState, delta: float
) -> ProbeResponse:
    """One-shot sideband solve at a single pump-probe offset."""
    return ProbeSolver(ops, spec, steady).solve(delta)


def incoherent_probe(
    ops: OperatorSet, spec: TransitionSpec, steady: DensityState, delta: float
) -> ProbeResponse:
    """Probe response with the coherent pump coupling removed (see class docs)."""
    return ProbeSolver(ops, spec, steady, include_pump=False).solve(delta)
