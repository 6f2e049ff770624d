"""Pump-probe spectroscopy of Zeeman-degenerate two-level atoms.

The package computes the response of an atom with degenerate ground and
excited manifolds (arbitrary angular momenta, open or closed decay) to a
strong pump and a weak probe in a static magnetic field: the dressed
steady state, the first-order probe sideband, and the spectra derived
from it (absorption, dispersion, four-wave mixing, fluorescence
modulation, oscillating ground-state magnetization).  All rates are in
units of the excited-state width; observables are in reduced units.
"""

__version__ = "0.1.0"

from .angular import (
    SphericalVector,
    cartesian_to_spherical,
    clebsch_gordan,
    polarization,
    spherical_to_cartesian,
)
from .errors import InputError, SolverError, ZeemanProbeError
from .liouville import (
    lindblad_superop,
    solve_linear,
    unvectorize,
    vectorize,
)
from .observables import (
    ObservableSample,
    absorption,
    dispersion,
    fluorescence_modulation,
    fwm_power,
    linear_absorption,
    magnetic_dipole,
)
from .oracles import (
    TimeDomainResult,
    integrate_master_equation,
    mollow_probe_absorption,
    two_level_excited_population,
)
from .probe_response import ProbeResponse, ProbeSolver, incoherent_probe, solve_probe
from .scan import (
    PeakReport,
    ScanConfig,
    SpectrumTable,
    find_peak_and_width,
    run_scan,
)
from .steady_state import DensityState, solve_steady_state, steady_state_diagnostics
from .system import (
    FieldSpec,
    OperatorSet,
    TransitionSpec,
    build_hamiltonian,
    build_operator_set,
    build_probe_coupling,
    build_q_operators,
)

__all__ = [
    "DensityState",
    "FieldSpec",
    "InputError",
    "ObservableSample",
    "OperatorSet",
    "PeakReport",
    "ProbeResponse",
    "ProbeSolver",
    "ScanConfig",
    "SolverError",
    "SpectrumTable",
    "SphericalVector",
    "TimeDomainResult",
    "TransitionSpec",
    "ZeemanProbeError",
    "absorption",
    "build_hamiltonian",
    "build_operator_set",
    "build_probe_coupling",
    "build_q_operators",
    "cartesian_to_spherical",
    "clebsch_gordan",
    "dispersion",
    "find_peak_and_width",
    "fluorescence_modulation",
    "fwm_power",
    "incoherent_probe",
    "integrate_master_equation",
    "lindblad_superop",
    "linear_absorption",
    "magnetic_dipole",
    "mollow_probe_absorption",
    "polarization",
    "run_scan",
    "solve_linear",
    "solve_probe",
    "solve_steady_state",
    "spherical_to_cartesian",
    "steady_state_diagnostics",
    "two_level_excited_population",
    "unvectorize",
    "vectorize",
]
