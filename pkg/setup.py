from setuptools import Extension, setup
from Cython.Build import cythonize

# No -ffast-math: the pure-Python fallback must match the extension bit for bit.
extensions = [
    Extension(
        "oufields._corecy",
        ["src/oufields/_corecy.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
