"""Build script for the optional compiled GF(2) kernel.

The package works without the extension (a pure-Python fallback is selected
at import time), so the extension is marked optional: a failed compile
degrades to the fallback instead of breaking the install.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "stabperc._f2core",
                ["src/stabperc/_f2core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
