import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

compile_args = ["-O3"]
if not any(v in os.environ for v in ("CI", "GITHUB_ACTIONS")):
    compile_args.append("-march=native")

ext_modules = []
if cythonize is not None and os.environ.get("WIGNER_PSIDO_NO_EXT") != "1":
    ext_modules = cythonize(
        [
            Extension(
                "wigner_psido._kernels",
                ["src/wigner_psido/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=compile_args,
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
