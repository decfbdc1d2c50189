import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DEEPTE_SKIP_EXT"):
    try:
        from Cython.Build import cythonize
        import numpy as np

        ext_modules = cythonize(
            [
                Extension(
                    "deepte.qp._stepkernel",
                    ["src/deepte/qp/_stepkernel.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython available: the package falls back to the numpy kernel.
        ext_modules = []

setup(ext_modules=ext_modules)
