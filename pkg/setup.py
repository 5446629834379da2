"""Build script.

The package works as pure Python.  If Cython and a C compiler are present,
the hot kernels in sharpflat/_kernels/_core.pyx are compiled; otherwise the
install proceeds and the pure fallback is selected at import time.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    if not os.path.exists("src/sharpflat/_kernels/_core.pyx"):
        return []
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
        import numpy
    except ImportError:
        return []
    ext = Extension(
        "sharpflat._kernels._core",
        sources=["src/sharpflat/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    """Never fail the install over the accelerator."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # compiler missing, etc.
            print("sharpflat: skipping compiled kernels (%s)" % exc, file=sys.stderr)

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            print("sharpflat: skipping %s (%s)" % (ext.name, exc), file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
