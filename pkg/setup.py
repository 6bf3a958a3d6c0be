"""Build script for the optional compiled scan kernel.

The package is pure Python except for one hot loop (the orbit sign scan).
If Cython or a C compiler is unavailable the build falls back to the
numpy implementation in rotn._scan_py; everything still works, only the
scan is slower.  rotn.scan selects the backend at import time.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if we can, warn and continue if we cannot."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "warning: compiled scan kernel not built (%s); "
            "falling back to the numpy backend" % (exc,),
            file=sys.stderr,
        )


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print("warning: %s; skipping compiled scan kernel" % (exc,), file=sys.stderr)
        return []
    ext = Extension(
        "rotn._scan_cy",
        sources=["src/rotn/_scan_cy.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
