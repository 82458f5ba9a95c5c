import numpy
from setuptools import Extension, setup

# The split-scan kernel is optional: if Cython or a C compiler is missing the
# package falls back to the numpy implementation selected in frugalas.forest.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "frugalas._split",
                ["src/frugalas/_split.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
