"""Build script: compiles the optional Cython propagation kernel.

The package is fully functional without the extension (a pure-numpy
fallback is selected at import time); any build failure here downgrades
to the pure build instead of aborting the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing compiler or Cython."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any failure means pure mode
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"zeemanprobe: compiled kernel unavailable ({exc}); "
            "falling back to the pure-numpy propagator",
            file=sys.stderr,
        )


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        OptionalBuildExt._warn(exc)
        return []
    return cythonize(
        [
            Extension(
                "zeemanprobe._kernels._rk4_cy",
                ["src/zeemanprobe/_kernels/_rk4_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
