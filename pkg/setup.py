"""Builds the optional compiled segmentation kernel.

The package works without it (a pure-Python fallback is selected at
import time), so a failed extension build should not block installation.
"""

import numpy
from Cython.Build import cythonize
from setuptools import setup

setup(
    ext_modules=cythonize(
        ["src/simkit/mesh/_segment_core.pyx"],
        language_level=3,
    ),
    include_dirs=[numpy.get_include()],
)
