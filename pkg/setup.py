"""Builds the optional compiled distance kernels.

The package works without them (a numpy fallback is selected at import),
so the extension is marked optional: a failed build degrades to the
fallback instead of aborting the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "coresample._kernels._ckernels",
                ["src/coresample/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
