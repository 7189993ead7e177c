import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "gpdz2.search._search",
        ["src/gpdz2/search/_search.pyx"],
        include_dirs=[np.get_include()],
        language="c++",
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
