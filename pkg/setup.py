"""Build the optional compiled RK4 kernel; the package falls back to pure Python without it."""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("epwaves._rk4", ["src/epwaves/_rk4.pyx"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
