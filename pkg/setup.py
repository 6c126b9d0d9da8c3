"""Build script for the optional compiled Gibbs kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so a failed build here only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "shopminer.lda._gibbs",
                ["src/shopminer/lda/_gibbs.pyx"],
                # fp-contract off: the kernel must match the pure-Python
                # fallback bit for bit, so no FMA fusing.
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
