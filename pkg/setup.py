from Cython.Build import cythonize
from setuptools import Extension, setup
import numpy as np

extensions = [
    Extension(
        "sem1d._kernels",
        ["src/sem1d/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
