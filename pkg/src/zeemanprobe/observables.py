"""Reduction of solved operators to the physical observables.

All observables are reported in reduced units: constant positive
prefactors involving the atom density, probe wave number, probe field
amplitude, the squared density (four-wave mixing), and the photon energy
times Gamma (fluorescence) are dropped, as is the reduced dipole matrix
element absorbed into the Rabi-frequency definition.  Ratios such as
absorption normalized to its pump-off value are therefore exact.

Polarization projections of the optical coherence default to the
conjugate of the probe polarization vector: for any elliptical
polarization this is the projection onto the probe's own mode and gives
a strictly positive pump-off absorption, while for linear polarizations
it coincides with the unconjugated form (available via
``conjugate=False``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import SphericalVector, polarization
from .probe_response import ProbeResponse, ProbeSolver
from .steady_state import DensityState, solve_steady_state
from .system import (
    FieldSpec,
    OperatorSet,
    TransitionSpec,
    build_operator_set,
    contract_polarization,
    isotropic_ground_state,
)

OBSERVABLE_KINDS = (
    "absorption",
    "dispersion",
    "fwm_power",
    "fluorescence_mod",
    "mag_dipole_modulus",
    "linear_absorption",
)


@dataclass(frozen=True)
class ObservableSample:
    """One evaluated observable with its scan coordinates."""

    kind: str
    value: float
    delta: float
    bfield: float


def _optical_projection(
    pr: ProbeResponse, ops: OperatorSet, vec: SphericalVector, conjugate: bool
) -> complex:
    """Projection of ``tr(sigma_ge D_eg)`` onto ``e*`` (default) or ``e``.

    Projecting onto ``e*`` equals tracing against the adjoint of the
    drive operator built from ``e`` itself; the unconjugated (literal)
    form follows by handing the conjugated vector to the same machinery.
    """
    use = vec if conjugate else vec.conjugated()
    contraction = contract_polarization(use, ops.q_components)
    block = ops.ge_block(contraction)
    return complex(np.trace(pr.sigma_ge @ block.conj().T))


def absorption(
    pr: ProbeResponse, ops: OperatorSet, probe: FieldSpec, conjugate: bool = True
) -> float:
    """Probe absorption: imaginary part of the projected optical coherence."""
    return float(_optical_projection(pr, ops, probe.pol, conjugate).imag)


def dispersion(
    pr: ProbeResponse,
    ops: OperatorSet,
    probe: FieldSpec,
    unit_vector=None,
    conjugate: bool = True,
) -> float:
    """Probe dispersion: refractive-index variation from the same projection.

    ``unit_vector`` defaults to the probe polarization; any preset name,
    cartesian triple or :class:`SphericalVector` is accepted.  The sign
    is fixed so the observable pairs with positive absorption in the
    standard way: a bare (pump-off) line shows anomalous dispersion
    through its center, and a transparency window shows the steep
    normal slope associated with slow light.
    """
    vec = probe.pol if unit_vector is None else polarization(unit_vector)
    return float(-_optical_projection(pr, ops, vec, conjugate).real)


def fwm_power(pr: ProbeResponse, ops: OperatorSet) -> float:
    """Four-wave-mixing emission power from the conjugate optical sideband."""
    total = 0.0
    for q in ops.q_components:
        block = ops.ge_block(q)
        total += abs(np.trace(pr.sigma_eg @ block)) ** 2
    return float(total)


def fluorescence_modulation(pr: ProbeResponse, spec: TransitionSpec) -> float:
    """Amplitude of the fluorescence component beating at the probe offset."""
    return float(2.0 * spec.branching * abs(np.trace(pr.sigma_ee)))


def magnetic_dipole(pr: ProbeResponse, ops: OperatorSet, spec: TransitionSpec) -> float:
    """Modulus of the oscillating ground-state magnetic dipole vector."""
    total = 0.0
    for f_i in ops.f_ground:
        total += abs(spec.beta_g * np.trace(pr.sigma_gg @ f_i)) ** 2
    return float(np.sqrt(total))


def linear_absorption(
    ops: OperatorSet,
    spec: TransitionSpec,
    probe: FieldSpec,
    delta: float,
    conjugate: bool = True,
) -> float:
    """Absorption with the pump off and the atom in the isotropic state.

    Serves as the normalization for all relative spectra; independent of
    the pump settings carried by ``ops`` (only the magnetic field and
    transition are reused).
    """
    solver = linear_probe_solver(ops, spec, probe)
    return absorption(solver.solve(delta), ops, probe, conjugate)


def linear_probe_solver(
    ops: OperatorSet, spec: TransitionSpec, probe: FieldSpec
) -> ProbeSolver:
    """Reusable pump-off probe solver for scanning the linear spectrum."""
    dark_pump = FieldSpec(rabi=0.0, pol=ops.pump.pol, detuning=ops.pump.detuning)
    ops_lin = build_operator_set(spec, dark_pump, probe, bfield=ops.bfield)
    steady = solve_steady_state(ops_lin, spec)
    return ProbeSolver(ops_lin, spec, steady)
