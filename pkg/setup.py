"""Build script for the optional compiled Burg kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a missing Cython or C compiler must not break installation.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mesa._kernels._burg_cy",
                ["src/mesa/_kernels/_burg_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
