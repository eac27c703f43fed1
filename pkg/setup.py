"""Build script. The compiled census kernel is optional: if Cython or a C
compiler is unavailable the package installs anyway and falls back to the
pure-Python kernel at import time."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/xorlab/_census_c.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    print(f"xorlab: skipping compiled kernel ({exc!r}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
