"""Builds the optional compiled oracle kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("CCGTUC_NO_EXTENSION", "") in ("", "0"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "ccgtuc.oracle._enumerate",
                    ["src/ccgtuc/oracle/_enumerate.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
