"""Build script: compiles the optional C extension holding the hot walk kernels.

If Cython (or a C compiler) is unavailable the build still succeeds and the
package falls back to the pure-numpy kernels at import time.
"""

from setuptools import Extension, setup

extensions = []
try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "ewalk._kernels_cy",
                ["src/ewalk/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=extensions)
