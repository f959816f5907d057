from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("phasekit._kernel_c", ["src/phasekit/_kernel_c.pyx"])],
        language_level="3",
    )
)
