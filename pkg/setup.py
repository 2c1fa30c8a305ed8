"""Build script: compiles the coordinate-descent kernel unless disabled.

Set NBGLARMA_NO_EXT=1 to skip the extension; the package then runs on the
pure-Python kernel selected at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("NBGLARMA_NO_EXT") != "1":
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "nbglarma._cdkernel",
                ["src/nbglarma/_cdkernel.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
