import os

from setuptools import Extension, setup

# The compiled kernels are an optional speedup: installation must succeed on
# hosts without Cython or a C compiler, falling back to the NumPy backend.
ext_modules = []
if os.environ.get("EGOWORDS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "egowords._kernels._speedups",
            sources=["src/egowords/_kernels/_speedups.pyx"],
            extra_compile_args=["-O3"],
        )
        ext.optional = True
        ext_modules = cythonize(
            [ext],
            language_level="3",
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
        for mod in ext_modules:
            mod.optional = True

setup(ext_modules=ext_modules)
