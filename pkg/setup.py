"""Build the compiled kernel extension.

Project metadata lives in pyproject.toml; only the extension module is
declared here.  -ffp-contract=off keeps the compiled kernels bit-identical
to the pure-Python fallback (no FMA contraction of a*b+c).
"""
import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "depref._kernels",
        ["src/depref/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
)
