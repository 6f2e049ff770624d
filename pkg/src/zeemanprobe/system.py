"""Operator construction for a degenerate two-level atom driven by two fields.

The Hilbert space is the direct sum of a ground manifold (angular
momentum ``fg``, 2fg+1 sublevels) and an excited manifold (``fe``),
ordered ground-first with magnetic quantum numbers ascending.  All rates
are expressed in units of the excited-state radiative width (Gamma = 1).

Normalization of the dimensionless dipole components ``Q_q`` is fixed by
the completeness relation ``sum_q Q_q^dag Q_q = P_e`` (excited-manifold
projector).  Rabi frequencies are defined through the reduced dipole
element, ``rabi = 2 E <g||D||e> / hbar`` in units of Gamma, so the
coupling operator is ``(rabi/2) (e . Q) / sqrt(2 fe + 1)``: the matrix
element driving a sublevel pair is the Clebsch-Gordan amplitude of that
pair times ``rabi / (2 sqrt(2 fe + 1))``.  The saturation parameter used
by intensity scans is ``S = 2 (rabi/Gamma)^2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .angular import SphericalVector, clebsch_gordan, polarization, twice
from .errors import InputError

GAMMA_TRANSIT_MIN = 1e-8  # below this the steady-state problem is singular


@dataclass(frozen=True)
class TransitionSpec:
    """Atomic transition parameters.

    Parameters
    ----------
    fg, fe:
        Total angular momenta of the ground and excited levels
        (integer or half-integer, dipole-allowed: ``|fg - fe| <= 1``,
        not both zero).
    branching:
        Fraction of excited-state decay returning to the ground level;
        1 for a closed (cycling) transition.
    gamma:
        Transit (ground-state) relaxation rate in units of Gamma.
    beta_g, beta_e:
        Gyromagnetic factors; ``beta * B`` is an angular frequency in
        units of Gamma.  ``beta_e`` defaults to ``beta_g``.
    """

    fg: float
    fe: float
    branching: float = 1.0
    gamma: float = 1e-3
    beta_g: float = 1.0
    beta_e: float | None = None

    def __post_init__(self):
        fg2, fe2 = twice(self.fg, "fg"), twice(self.fe, "fe")
        if fg2 < 0 or fe2 < 0:
            raise InputError("angular momenta must be non-negative")
        if abs(fg2 - fe2) > 2 or (fg2 == 0 and fe2 == 0):
            raise InputError(
                f"transition fg={self.fg} -> fe={self.fe} is not dipole-allowed"
            )
        if not 0.0 <= self.branching <= 1.0:
            raise InputError("branching ratio must lie in [0, 1]")
        if self.gamma < GAMMA_TRANSIT_MIN:
            raise InputError(
                f"transit rate gamma must be >= {GAMMA_TRANSIT_MIN} "
                "(the field-free evolution is singular at gamma = 0)"
            )
        if self.gamma > 0.1:
            warnings.warn(
                f"gamma = {self.gamma} is not small compared to Gamma = 1; "
                "transit relaxation no longer acts as a slow ground-state rate",
                stacklevel=2,
            )

    @property
    def ng(self) -> int:
        return twice(self.fg) + 1

    @property
    def ne(self) -> int:
        return twice(self.fe) + 1

    @property
    def dim(self) -> int:
        return self.ng + self.ne

    @property
    def beta_e_value(self) -> float:
        return self.beta_g if self.beta_e is None else self.beta_e


@dataclass(frozen=True)
class FieldSpec:
    """One optical field: Rabi frequency, polarization, detuning.

    ``rabi`` is Omega/Gamma as defined in the module docstring.
    ``detuning`` is meaningful for the pump only (probe offsets are
    handled as the scan variable delta).
    """

    rabi: float
    pol: SphericalVector | str | tuple = "lin_x"
    detuning: float = 0.0

    def __post_init__(self):
        if self.rabi < 0:
            raise InputError("rabi must be non-negative")
        object.__setattr__(self, "pol", polarization(self.pol))


@dataclass(frozen=True)
class OperatorSet:
    """All matrices on the ground+excited space for one configuration.

    Immutable after construction; safe to share between scan workers.
    """

    transition: TransitionSpec
    pump: FieldSpec
    probe: FieldSpec
    bfield: float
    dim: int
    pg: np.ndarray
    pe: np.ndarray
    fz: np.ndarray
    q_minus: np.ndarray
    q_zero: np.ndarray
    q_plus: np.ndarray
    h_rot: np.ndarray
    v1: np.ndarray
    w2: np.ndarray
    f_ground: tuple = field(repr=False, default=())  # (Fx, Fy, Fz) on ground block

    def __post_init__(self):
        for arr in (
            self.pg, self.pe, self.fz, self.q_minus, self.q_zero,
            self.q_plus, self.h_rot, self.v1, self.w2,
        ):
            arr.setflags(write=False)
        for arr in self.f_ground:
            arr.setflags(write=False)

    @property
    def q_components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(q=-1, 0, +1) lowering dipole components."""
        return (self.q_minus, self.q_zero, self.q_plus)

    def ground_block(self, m: np.ndarray) -> np.ndarray:
        return m[: self.transition.ng, : self.transition.ng]

    def excited_block(self, m: np.ndarray) -> np.ndarray:
        return m[self.transition.ng :, self.transition.ng :]

    def ge_block(self, m: np.ndarray) -> np.ndarray:
        return m[: self.transition.ng, self.transition.ng :]

    def eg_block(self, m: np.ndarray) -> np.ndarray:
        return m[self.transition.ng :, : self.transition.ng]


def _m_values(f: float) -> np.ndarray:
    return np.array([-f + k for k in range(twice(f) + 1)])


def build_q_operators(spec: TransitionSpec):
    """Lowering dipole components ``Q_q`` (q = -1, 0, +1), full dimension.

    ``<g m_g| Q_q |e m_e>`` is non-zero only for ``m_g = m_e + q``; the
    scale ``sqrt((2fe+1)/(2fg+1))`` pins the completeness relation
    ``sum_q Q_q^dag Q_q = P_e`` exactly (tested to 1e-12 for every
    allowed pair up to F = 4).
    """
    ng, dim = spec.ng, spec.dim
    scale = np.sqrt((twice(spec.fe) + 1.0) / (twice(spec.fg) + 1.0))
    mg, me = _m_values(spec.fg), _m_values(spec.fe)
    out = []
    for q in (-1, 0, 1):
        mat = np.zeros((dim, dim), dtype=complex)
        for ig, m_g in enumerate(mg):
            for ie, m_e in enumerate(me):
                if abs(m_g - m_e - q) < 1e-9:
                    mat[ig, ng + ie] = scale * clebsch_gordan(
                        spec.fe, m_e, 1, q, spec.fg, m_g
                    )
        out.append(mat)
    return tuple(out)


def contract_polarization(pol: SphericalVector, q_ops) -> np.ndarray:
    """``e(hat) . Q`` for a lowering operator triplet: ``sum_q (-1)^q e_q Q_{-q}``."""
    q_minus, q_zero, q_plus = q_ops
    return (
        -pol.q_plus * q_minus + pol.q_zero * q_zero - pol.q_minus * q_plus
    )


def _projectors(spec: TransitionSpec):
    dim, ng = spec.dim, spec.ng
    pg = np.zeros((dim, dim), dtype=complex)
    pe = np.zeros((dim, dim), dtype=complex)
    pg[np.arange(ng), np.arange(ng)] = 1.0
    pe[np.arange(ng, dim), np.arange(ng, dim)] = 1.0
    return pg, pe


def _fz(spec: TransitionSpec) -> np.ndarray:
    diag = np.concatenate([_m_values(spec.fg), _m_values(spec.fe)])
    return np.diag(diag.astype(complex))


def _spin_matrices(f: float):
    """(Fx, Fy, Fz) for a single manifold of angular momentum f."""
    n = twice(f) + 1
    ms = _m_values(f)
    fp = np.zeros((n, n), dtype=complex)
    for i, m in enumerate(ms[:-1]):
        fp[i + 1, i] = np.sqrt(f * (f + 1) - m * (m + 1))
    fm = fp.conj().T
    fx = 0.5 * (fp + fm)
    fy = -0.5j * (fp - fm)
    fz = np.diag(ms.astype(complex))
    return fx, fy, fz


def coupling_scale(spec: TransitionSpec) -> float:
    """Reduced-dipole factor turning ``rabi`` into sublevel couplings."""
    return 1.0 / np.sqrt(twice(spec.fe) + 1.0)


def build_hamiltonian(spec: TransitionSpec, pump: FieldSpec, bfield: float):
    """Rotating-frame Hamiltonian pieces ``(h_rot, v1)``.

    ``h_rot = -detuning * P_e + B (beta_g P_g + beta_e P_e) F_z`` with
    the ground-state energy origin at zero; ``v1`` is the Hermitian pump
    coupling ``(rabi/2) (e1 . Q)/sqrt(2 fe + 1) + h.c.``.
    """
    pg, pe = _projectors(spec)
    fz = _fz(spec)
    h_rot = -pump.detuning * pe + bfield * (
        spec.beta_g * pg + spec.beta_e_value * pe
    ) @ fz
    qs = build_q_operators(spec)
    lower = coupling_scale(spec) * contract_polarization(pump.pol, qs)
    v1 = 0.5 * pump.rabi * (lower + lower.conj().T)
    return h_rot, v1


def build_probe_coupling(spec: TransitionSpec, probe: FieldSpec) -> np.ndarray:
    """Probe coupling ``W2 = rabi * (e2 . Q)/sqrt(2 fe + 1)``, lowering sector only."""
    qs = build_q_operators(spec)
    return probe.rabi * coupling_scale(spec) * contract_polarization(probe.pol, qs)


def build_operator_set(
    transition: TransitionSpec,
    pump: FieldSpec,
    probe: FieldSpec,
    bfield: float = 0.0,
) -> OperatorSet:
    """Assemble every operator needed by the solvers for one configuration."""
    pg, pe = _projectors(transition)
    q_minus, q_zero, q_plus = build_q_operators(transition)
    h_rot, v1 = build_hamiltonian(transition, pump, bfield)
    w2 = (
        probe.rabi
        * coupling_scale(transition)
        * contract_polarization(probe.pol, (q_minus, q_zero, q_plus))
    )
    f_ground = _spin_matrices(transition.fg)
    return OperatorSet(
        transition=transition,
        pump=pump,
        probe=probe,
        bfield=bfield,
        dim=transition.dim,
        pg=pg,
        pe=pe,
        fz=_fz(transition),
        q_minus=q_minus,
        q_zero=q_zero,
        q_plus=q_plus,
        h_rot=h_rot,
        v1=v1,
        w2=w2,
        f_ground=f_ground,
    )


def isotropic_ground_state(spec: TransitionSpec) -> np.ndarray:
    """Reset state: population spread uniformly over the ground sublevels."""
    rho = np.zeros((spec.dim, spec.dim), dtype=complex)
    rho[np.arange(spec.ng), np.arange(spec.ng)] = 1.0 / spec.ng
    return rho
