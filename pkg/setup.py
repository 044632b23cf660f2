import os
import platform
import sys

from setuptools import Extension, setup


def _cpu_has_fma():
    if platform.machine() not in ("x86_64", "AMD64"):
        return False
    try:
        with open("/proc/cpuinfo") as fh:
            return " fma " in fh.read()
    except OSError:
        return False


def _extensions():
    if os.environ.get("FASTCONNECT_PURE"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        print("Cython/numpy unavailable, building pure-Python fallback only", file=sys.stderr)
        return []

    # compensated arithmetic relies on strict IEEE evaluation order
    compile_args = ["-O3", "-ffp-contract=off", "-fno-fast-math"]
    link_args = []
    if sys.platform.startswith("linux"):
        compile_args.append("-fopenmp")
        link_args.append("-fopenmp")
    if _cpu_has_fma() and not os.environ.get("FASTCONNECT_PORTABLE"):
        compile_args.append("-mfma")

    ext = Extension(
        "fastconnect._core",
        ["src/fastconnect/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=compile_args,
        extra_link_args=link_args,
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
