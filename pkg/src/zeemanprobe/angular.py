"""Angular-momentum coupling coefficients and spherical-vector algebra.

Conventions used throughout the package
---------------------------------------
* Quantum numbers are stored internally as doubled integers (``2F``,
  ``2m``) so half-integer momenta are exact and triangle/projection
  rules never suffer floating-point comparisons.
* Clebsch-Gordan coefficients follow the Condon-Shortley phase
  convention and are evaluated from Racah's closed-form sum with exact
  rational arithmetic; the only rounding is the final square root.
* Spherical components of a vector ``A`` are
  ``A_{+1} = -(A_x + i A_y)/sqrt(2)``, ``A_0 = A_z``,
  ``A_{-1} = (A_x - i A_y)/sqrt(2)``, and the (unconjugated) scalar
  product is ``A . B = sum_q (-1)^q A_q B_{-q}``.
* Optical fields are written as ``E e(hat) exp(+i w t) + c.c.``  With
  this time convention the unit polarization vector that drives
  ``m_g -> m_e = m_g + 1`` transitions (sigma+) is
  ``(x - i y)/sqrt(2)``; the presets below are defined by that
  selection rule, not by a helicity label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError

_SQRT2 = math.sqrt(2.0)


def twice(value, name: str = "quantum number") -> int:
    """Return the exact doubled integer for a (half-)integer quantum number."""
    doubled = 2.0 * float(value)
    rounded = round(doubled)
    if abs(doubled - rounded) > 1e-9:
        raise InputError(f"{name} must be integer or half-integer, got {value}")
    return int(rounded)


def _check_pair(j2: int, m2: int, name: str) -> None:
    if j2 < 0:
        raise InputError(f"{name} must be non-negative")
    if (j2 - m2) % 2 != 0:
        raise InputError(
            f"projection of {name} must differ from it by an integer "
            f"(got {name}={j2 / 2}, m={m2 / 2})"
        )


def _triangle(j1: int, j2: int, j3: int) -> bool:
    # doubled arguments; coupling requires an integer perimeter as well
    if (j1 + j2 + j3) % 2 != 0:
        return False
    return abs(j1 - j2) <= j3 <= j1 + j2


def _fact(doubled: int) -> int:
    # factorial of doubled/2, which must be an even non-negative doubled int
    return math.factorial(doubled // 2)


def clebsch_gordan(j1, m1, j2, m2, j3, m3) -> float:
    """Clebsch-Gordan coefficient ``<j1 m1; j2 m2 | j3 m3>``.

    Returns 0 when the projection selection rule ``m3 = m1 + m2`` or the
    triangle rule fails.  Raises :class:`InputError` for arguments that
    are not valid (half-)integers or have mismatched parity.
    """
    j1t, m1t = twice(j1, "j1"), twice(m1, "m1")
    j2t, m2t = twice(j2, "j2"), twice(m2, "m2")
    j3t, m3t = twice(j3, "j3"), twice(m3, "m3")
    for jt, mt, name in ((j1t, m1t, "j1"), (j2t, m2t, "j2"), (j3t, m3t, "j3")):
        _check_pair(jt, mt, name)
    if abs(m1t) > j1t or abs(m2t) > j2t or abs(m3t) > j3t:
        return 0.0
    if m1t + m2t != m3t or not _triangle(j1t, j2t, j3t):
        return 0.0

    # Racah's closed form: CG = sqrt(prefactor) * sum_k (-1)^k / (product of factorials)
    pref = Fraction(
        (j3t + 1)
        * _fact(j1t + j2t - j3t)
        * _fact(j1t - j2t + j3t)
        * _fact(-j1t + j2t + j3t),
        _fact(j1t + j2t + j3t + 2),
    )
    pref *= (
        _fact(j1t - m1t)
        * _fact(j1t + m1t)
        * _fact(j2t - m2t)
        * _fact(j2t + m2t)
        * _fact(j3t - m3t)
        * _fact(j3t + m3t)
    )

    k_min = max(0, -(j3t - j2t + m1t) // 2, -(j3t - j1t - m2t) // 2)
    k_max = min((j1t + j2t - j3t) // 2, (j1t - m1t) // 2, (j2t + m2t) // 2)
    total = Fraction(0)
    for k in range(k_min, k_max + 1):
        denom = (
            math.factorial(k)
            * _fact(j1t + j2t - j3t - 2 * k)
            * _fact(j1t - m1t - 2 * k)
            * _fact(j2t + m2t - 2 * k)
            * _fact(j3t - j2t + m1t + 2 * k)
            * _fact(j3t - j1t - m2t + 2 * k)
        )
        total += Fraction(-1 if k % 2 else 1, denom)
    if total == 0:
        return 0.0
    sign = 1.0 if total > 0 else -1.0
    return sign * math.sqrt(float(pref * total * total))


@dataclass(frozen=True)
class SphericalVector:
    """A (possibly complex) vector in spherical components.

    ``q_minus``, ``q_zero``, ``q_plus`` are the q = -1, 0, +1 components
    relative to the quantization axis z (along the magnetic field).
    """

    q_minus: complex
    q_zero: complex
    q_plus: complex

    @classmethod
    def from_cartesian(cls, x, y, z) -> "SphericalVector":
        return cls(
            q_minus=(x - 1j * y) / _SQRT2,
            q_zero=complex(z),
            q_plus=-(x + 1j * y) / _SQRT2,
        )

    def to_cartesian(self) -> tuple[complex, complex, complex]:
        x = (self.q_minus - self.q_plus) / _SQRT2
        y = 1j * (self.q_minus + self.q_plus) / _SQRT2
        z = self.q_zero
        return (x, y, z)

    def components(self) -> tuple[complex, complex, complex]:
        """(q=-1, q=0, q=+1) triplet."""
        return (self.q_minus, self.q_zero, self.q_plus)

    @property
    def norm_sq(self) -> float:
        return float(
            abs(self.q_minus) ** 2 + abs(self.q_zero) ** 2 + abs(self.q_plus) ** 2
        )

    def normalized(self) -> "SphericalVector":
        n = math.sqrt(self.norm_sq)
        if n == 0.0:
            raise InputError("cannot normalize a zero polarization vector")
        return SphericalVector(self.q_minus / n, self.q_zero / n, self.q_plus / n)

    def conjugated(self) -> "SphericalVector":
        """Spherical components of the complex-conjugate vector.

        ``(A*)_q = (-1)^q conj(A_{-q})``.
        """
        return SphericalVector(
            q_minus=-np.conj(self.q_plus),
            q_zero=np.conj(self.q_zero),
            q_plus=-np.conj(self.q_minus),
        )

    def scalar_product(self, other: "SphericalVector") -> complex:
        """Unconjugated dot product ``sum_q (-1)^q A_q B_{-q}``."""
        return (
            self.q_zero * other.q_zero
            - self.q_plus * other.q_minus
            - self.q_minus * other.q_plus
        )

    def hermitian_product(self, other: "SphericalVector") -> complex:
        """``A* . B``, equal to ``sum_q conj(A_q) B_q``."""
        return (
            np.conj(self.q_minus) * other.q_minus
            + np.conj(self.q_zero) * other.q_zero
            + np.conj(self.q_plus) * other.q_plus
        )


def cartesian_to_spherical(x, y, z) -> SphericalVector:
    """Spherical components of a cartesian vector (see module docstring)."""
    return SphericalVector.from_cartesian(x, y, z)


def spherical_to_cartesian(vec: SphericalVector) -> tuple[complex, complex, complex]:
    return vec.to_cartesian()


# Polarization presets, defined by the Zeeman selection rule they drive
# (see module docstring for the underlying field-phase convention):
#   sigma+ : m_g -> m_e = m_g + 1
#   sigma- : m_g -> m_e = m_g - 1
#   pi     : m_g -> m_e = m_g
POLARIZATION_PRESETS = {
    "lin_x": (1.0, 0.0, 0.0),
    "lin_y": (0.0, 1.0, 0.0),
    "lin_z": (0.0, 0.0, 1.0),
    "pi": (0.0, 0.0, 1.0),
    "sigma+": (1.0 / _SQRT2, -1j / _SQRT2, 0.0),
    "sigma-": (1.0 / _SQRT2, +1j / _SQRT2, 0.0),
}


def polarization(spec) -> SphericalVector:
    """Build a normalized polarization vector.

    Accepts a preset name from :data:`POLARIZATION_PRESETS`, a
    :class:`SphericalVector`, or a 3-sequence of complex cartesian
    components.
    """
    if isinstance(spec, SphericalVector):
        return spec.normalized()
    if isinstance(spec, str):
        key = spec.strip().lower().replace("sigma_plus", "sigma+").replace(
            "sigma_minus", "sigma-"
        )
        try:
            cart = POLARIZATION_PRESETS[key]
        except KeyError:
            raise InputError(
                f"unknown polarization preset {spec!r}; "
                f"choose one of {sorted(POLARIZATION_PRESETS)} or give "
                "three cartesian components"
            ) from None
        return SphericalVector.from_cartesian(*cart).normalized()
    try:
        x, y, z = (complex(c) for c in spec)
    except (TypeError, ValueError) as exc:
        raise InputError(f"cannot interpret {spec!r} as a polarization") from exc
    return SphericalVector.from_cartesian(x, y, z).normalized()
