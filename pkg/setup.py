"""Build script: compiles the Cython theta kernel when possible.

The package works without the extension (a numpy fallback is selected at
import time), so any build failure here is non-fatal by design: install
with VEECHTORI_PURE_PYTHON=1 to skip the extension entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("VEECHTORI_PURE_PYTHON"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext = Extension(
            "veechtori._kernels",
            ["src/veechtori/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext_modules = cythonize([ext], language_level="3")
    except Exception as exc:  # pragma: no cover
        print(f"veechtori: skipping Cython kernel build ({exc}); "
              "the pure-Python backend will be used")

setup(ext_modules=ext_modules)
