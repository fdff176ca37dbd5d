import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off: the float64 accumulation order in the kernels is part
# of the backend parity contract; fused multiply-adds would break bitwise
# agreement with the pure-Python fallback.
extensions = [
    Extension(
        "mamcodec._ckernels",
        ["src/mamcodec/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
