"""Build script for the optional compiled simplex kernels.

The package is pure Python plus one Cython extension holding the dense
tableau inner loops (pricing, ratio test, pivot).  The extension is marked
optional: if no compiler is available the install still succeeds and the
solver falls back to the numpy implementation of the same kernels.

``-ffp-contract=off`` keeps the compiler from fusing multiply-adds so the
compiled kernels produce bit-identical pivot arithmetic to the numpy
fallback.
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "mesbench.milp._kernels",
        ["src/mesbench/milp/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
]

setup(ext_modules=cythonize(extensions, language_level="3"))
