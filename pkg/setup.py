"""Build script for the optional compiled summation kernels.

The extension needs Cython plus the GMP and MPFR headers.  When any of these
is missing the build is skipped and the package runs on the pure-Python
kernels instead.
"""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or headers missing
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    def _skip(self, exc):
        sys.stderr.write(f"warning: compiled kernels not built ({exc}); "
                         "falling back to pure Python\n")


def extensions():
    if os.environ.get("QTHETA_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "qtheta._ckernels",
        sources=["src/qtheta/_ckernels.pyx", "src/qtheta/_core/qkern.c"],
        include_dirs=["src/qtheta/_core"],
        libraries=["mpfr", "gmp"],
        extra_compile_args=["-O2"],
    )
    return cythonize([ext], language_level=3, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
