from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the package falls back to its pure-Python kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("f5lab._core", ["src/f5lab/_core.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
