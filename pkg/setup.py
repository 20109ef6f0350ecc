"""Build the optional compiled radio kernels.

The package is fully functional without the extension: airan.sim.kernels
falls back to the pure-Python implementation at import time. Set
AIRAN_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("AIRAN_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "airan.sim._kernels",
        ["src/airan/sim/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
