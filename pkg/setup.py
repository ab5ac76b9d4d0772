"""Build the optional compiled co-occurrence kernels.

    python setup.py build_ext --inplace

A plain `pip install -e . --no-build-isolation` also compiles them when
Cython and a C compiler are available; otherwise the install proceeds and
the package falls back to the pure-Python kernels at import time.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "semcloud._kernels._ext",
                ["src/semcloud/_kernels/_ext.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # no Cython / no compiler: install pure-Python only
    print(f"semcloud: skipping compiled kernels ({exc})")
    extensions = []

setup(ext_modules=extensions)
