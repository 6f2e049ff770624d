"""Propagation kernels: compiled extension with pure-numpy fallback.

The compiled kernel (``_rk4_cy``, built from Cython at install time) is
used when importable; otherwise the numpy implementation takes over with
identical semantics.  Set ``ZEEMANPROBE_PURE=1`` in the environment to
force the pure path (used by the benchmark and for debugging).
"""

from __future__ import annotations

import os

from . import _rk4_np

_BACKENDS = {"numpy": _rk4_np.rk4_harmonic}

try:
    from . import _rk4_cy

    _BACKENDS["cython"] = _rk4_cy.rk4_harmonic
    HAVE_EXTENSION = True
except ImportError:
    HAVE_EXTENSION = False

if os.environ.get("ZEEMANPROBE_PURE") == "1" or not HAVE_EXTENSION:
    ACTIVE_BACKEND = "numpy"
else:
    ACTIVE_BACKEND = "cython"


def rk4_harmonic(*args, **kwargs):
    """Dispatch to the active backend; see ``_rk4_np.rk4_harmonic``."""
    return _BACKENDS[ACTIVE_BACKEND](*args, **kwargs)


def available_backends() -> dict:
    """Name -> callable for every importable kernel implementation."""
    return dict(_BACKENDS)
