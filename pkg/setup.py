import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled kernel is a pure speed-up; qincompat falls back to the numpy
# implementation when the extension is missing, so the build is optional.
extensions = [
    Extension(
        "qincompat._kernels_c",
        ["src/qincompat/_kernels_c.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
