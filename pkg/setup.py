"""Build script: compiles the optional enumeration kernels.

The package is fully functional without the extension; ncdet_lab.kernels
falls back to the numpy implementation when the compiled module is absent
or NCDET_PURE=1 is set.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "ncdet_lab._kernels",
                ["src/ncdet_lab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
