"""Build script for the optional compiled kernels.

The package is fully functional without the extension (a NumPy fallback is
selected at import); building it just makes the hot panel-scan kernels
faster.  Compile in place with::

    python setup.py build_ext --inplace

Requires Cython and a C compiler; both are skipped gracefully if missing.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Treat extension build failures as a soft miss, not an install error."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: compiled kernels skipped ({exc}); using NumPy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); using NumPy fallback")


def extensions():
    if os.environ.get("TAILFOLIO_PURE"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "tailfolio._kernels._core",
                ["src/tailfolio/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
