# Builds the optional compiled kernel.  If Cython or a C toolchain is missing
# the install still succeeds and the package falls back to the pure-Python
# kernel at import time.
#
# Editable dev install:  pip install -e . --no-build-isolation
# In-place rebuild:      python setup.py build_ext --inplace

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing
            warnings.warn(f"compiled kernel skipped ({exc}); using the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel skipped ({exc}); using the pure-Python kernel")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("spinecycles._fastkernel", ["src/spinecycles/_fastkernel.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    warnings.warn("Cython not available; installing with the pure-Python kernel only")
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
