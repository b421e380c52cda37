"""Build script: compiles the optional fast-kernel extension when Cython and a
C compiler are available.  The package works without it (pure-numpy fallback
selected at import)."""

from setuptools import setup


def _extensions():
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "madpde.kernels._core",
        ["src/madpde/kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    try:
        return cythonize([ext], compiler_directives={"language_level": "3"})
    except Exception:
        return []


setup(ext_modules=_extensions())
