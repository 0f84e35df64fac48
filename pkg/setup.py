"""Builds the optional compiled kernel; install falls back to pure Python."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    # Keep the compiled kernels bit-identical to the pure-Python twins:
    # no FMA contraction of a*b - c*d, and no cos+sin -> sincos fusion
    # (glibc sincos differs from separate cos/sin in the last ulp).
    ext_modules = cythonize(
        [
            Extension(
                "tipsim._ckern",
                ["src/tipsim/_ckern.pyx"],
                extra_compile_args=[
                    "-ffp-contract=off",
                    "-fno-builtin-sincos",
                    "-fno-builtin-sin",
                    "-fno-builtin-cos",
                ],
            )
        ],
        compiler_directives={"language_level": 3, "embedsignature": True},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
