import os

from setuptools import Extension, setup

# The event kernel has a compiled twin. If Cython is unavailable the
# package still installs and falls back to the pure-Python kernel.
ext_modules = []
if os.environ.get("QDICLA_NO_EXT") != "1" and os.path.exists("src/qdicla/_ckernel.pyx"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("qdicla._ckernel", ["src/qdicla/_ckernel.pyx"])],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
