"""Build script for the optional compiled kernels.

The package works without the extension: ``cantor_dioph.kernels`` falls back
to the pure-Python implementation when ``_ckernels`` cannot be imported.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython available: ship the pure-Python path only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cantor_dioph._ckernels",
                ["src/cantor_dioph/_ckernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
