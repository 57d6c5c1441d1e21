from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "dispkit._kernels._cykernels",
                ["src/dispkit/_kernels/_cykernels.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython: install pure-Python only; the kernel dispatch falls back.
    ext_modules = []

setup(ext_modules=ext_modules)
