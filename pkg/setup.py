import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TMOD_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # the pure-Python kernels are used instead
        pass
    else:
        ext_modules = cythonize(
            [Extension("tmod._ckernels", ["src/tmod/_ckernels.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
