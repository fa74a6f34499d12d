"""Build script: compiles the optional GF(q) kernel extension when Cython
and a C compiler are available.  The package works without it (a pure
numpy fallback is selected at import time), so the extension is marked
optional and a failed compile does not fail the install."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "rangecompat._gfcore",
                ["src/rangecompat/_gfcore.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
