"""Liouville-space machinery: vectorization, superoperators, linear solves.

Vectorization is column-stacked: ``vectorize(m)[j*dim + i] = m[i, j]``,
so ``vectorize(A X B) = kron(B.T, A) @ vectorize(X)``.  Every sandwich
identity below is written against that ordering.

Linear systems are solved by dense LU factorization with one or more
steps of iterative refinement; the relative residual is verified against
``RESIDUAL_TOL`` and a reciprocal-condition estimate guards against
near-singular parameter sets.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.linalg.lapack import zgecon

from .errors import InputError, SolverError
from .system import OperatorSet, TransitionSpec, isotropic_ground_state

RESIDUAL_TOL = 1e-10
RCOND_MIN = 1e-12


def vectorize(m: np.ndarray) -> np.ndarray:
    """Column-stack a square matrix into a length dim**2 vector."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    return m.flatten(order="F").astype(complex)


def unvectorize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise InputError(f"vector length {v.size} is not a perfect square")
    return v.reshape((n, n), order="F")


def left_multiply(a: np.ndarray) -> np.ndarray:
    """Superoperator for ``X -> A X``."""
    return np.kron(np.eye(a.shape[0]), a)


def right_multiply(b: np.ndarray) -> np.ndarray:
    """Superoperator for ``X -> X B``."""
    return np.kron(b.T, np.eye(b.shape[0]))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator for ``X -> A X B``."""
    return np.kron(b.T, a)


def commutator_superop(a: np.ndarray) -> np.ndarray:
    return left_multiply(a) - right_multiply(a)


def anticommutator_superop(a: np.ndarray) -> np.ndarray:
    return left_multiply(a) + right_multiply(a)


def lindblad_superop(
    ops: OperatorSet, spec: TransitionSpec, include_pump: bool = True
) -> np.ndarray:
    """Generator of the pump-dressed evolution (without the constant feed).

    Applied to a vectorized density matrix this equals
    ``-i [h_rot + v1, rho] - (1/2){P_e, rho} + b sum_q Q_q rho Q_q^dag
    - gamma rho`` (Gamma = 1).  ``include_pump=False`` drops ``v1``,
    which isolates the incoherent (optical-pumping / saturation) part of
    the probe response while keeping the dressed steady state as source.
    """
    h = ops.h_rot + (ops.v1 if include_pump else 0.0)
    gen = -1j * commutator_superop(h)
    gen -= 0.5 * anticommutator_superop(ops.pe)
    for q in ops.q_components:
        gen += spec.branching * sandwich(q, q.conj().T)
    gen -= spec.gamma * np.eye(gen.shape[0])
    return gen


def transit_feed(spec: TransitionSpec) -> np.ndarray:
    """Constant feed term ``gamma * vec(rho_0)`` of the master equation."""
    return spec.gamma * vectorize(isotropic_ground_state(spec))


def apply_generator_direct(
    ops: OperatorSet, spec: TransitionSpec, rho: np.ndarray, include_pump: bool = True
) -> np.ndarray:
    """Matrix-form evaluation of the generator, for cross-checking.

    Same map as :func:`lindblad_superop` but evaluated term by term with
    dense matrix products instead of Kronecker algebra.
    """
    h = ops.h_rot + (ops.v1 if include_pump else 0.0)
    out = -1j * (h @ rho - rho @ h)
    out -= 0.5 * (ops.pe @ rho + rho @ ops.pe)
    for q in ops.q_components:
        out += spec.branching * (q @ rho @ q.conj().T)
    out -= spec.gamma * rho
    return out


def solve_linear(
    superop: np.ndarray,
    rhs: np.ndarray,
    context: str = "",
    return_residual: bool = False,
):
    """Solve ``superop @ x = rhs`` by LU with iterative refinement.

    Raises :class:`SolverError` when the condition estimate exceeds
    1/RCOND_MIN or the relative residual cannot be brought below
    ``RESIDUAL_TOL``; the error message carries ``context`` so scans can
    name the offending parameter point.
    """
    rhs = np.asarray(rhs, dtype=complex)
    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0.0:
        x = np.zeros_like(rhs)
        return (x, 0.0) if return_residual else x
    anorm = np.linalg.norm(superop, 1)
    try:
        with warnings.catch_warnings():
            # exact singularity is reported through the rcond check below
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(superop)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - scipy raises rarely
        raise SolverError(f"LU factorization failed ({context})") from exc
    rcond, info = zgecon(lu, anorm)
    if info != 0 or not np.isfinite(rcond) or rcond < RCOND_MIN:
        raise SolverError(
            f"system is numerically singular (rcond={rcond:.2e}) {context}"
        )
    x = lu_solve((lu, piv), rhs)
    residual = np.linalg.norm(superop @ x - rhs) / rhs_norm
    # a fixed refinement policy keeps repeated runs bit-identical; several
    # steps are needed near the smallest allowed transit rates where the
    # condition number approaches the rcond guard
    for _ in range(8):
        if residual <= 1e-13:
            break
        x = x + lu_solve((lu, piv), rhs - superop @ x)
        residual = np.linalg.norm(superop @ x - rhs) / rhs_norm
    if residual > RESIDUAL_TOL:
        raise SolverError(
            f"linear solve residual {residual:.2e} exceeds {RESIDUAL_TOL} {context}"
        )
    return (x, residual) if return_residual else x
