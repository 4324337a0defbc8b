# Builds the optional compiled term kernels; polartab falls back to the
# pure-Python kernels when the extension is absent.
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("polartab._speedups", ["src/polartab/_speedups.pyx"],
                   extra_compile_args=["-O2"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
