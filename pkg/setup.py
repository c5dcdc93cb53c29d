"""Build script: compiles the optional GF(3) elimination core.

The package is fully functional without the extension (a numpy fallback is
selected at import time); a failed compile must therefore never abort the
install.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the Cython core if possible, otherwise install pure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            print(f"warning: skipping compiled GF(3) core ({exc!r})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name}: {exc!r}; "
                  "the pure-numpy fallback will be used")


def extensions():
    if os.environ.get("COTOR_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "cotor._gf3core",
        ["src/cotor/_gf3core.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
