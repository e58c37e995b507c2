"""Build script with an optional Cython speedup.

The compiled Jacobi kernel (steermap._jacobi_cy) is a pure accelerator:
if Cython or a C compiler is missing the build falls through and the
package runs on the pure-Python kernel instead.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("setup.py: Cython not found, skipping compiled kernel", file=sys.stderr)
        return []
    from setuptools import Extension

    ext = Extension(
        "steermap._jacobi_cy",
        sources=["src/steermap/_jacobi_cy.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


class optional_build_ext(build_ext):
    """Never fail the install over the optional kernel."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"setup.py: compiled kernel skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"setup.py: building {ext.name} failed ({exc})", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
