"""Build script: compiles the optional Cython Darboux core.

The package works without the extension (a pure-numpy backend is selected at
import time), so a missing compiler or Cython only costs speed, not function.
"""
import numpy
from setuptools import setup, Extension

try:
    from Cython.Build import cythonize
    extensions = cythonize(
        [Extension(
            "polesol._darbouxcore",
            ["src/polesol/_darbouxcore.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
