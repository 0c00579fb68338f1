"""Build hook for the optional compiled core.

The package is pure Python plus one optional Cython extension holding the
hot loops (suffix-automaton construction, product-automaton counting,
Markov sampling, word-sum trie walk).  If Cython or a C++ toolchain is
missing the build falls back to the pure-Python implementations in
jcx._pure with identical semantics.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Carry on without the extension when the toolchain is absent."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain-dependent
            print(f"warning: compiled core skipped ({exc}); pure-Python fallback in use")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain-dependent
            print(f"warning: {ext.name} skipped ({exc}); pure-Python fallback in use")


def extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - build-environment dependent
        return []
    return cythonize(
        [
            Extension(
                "jcx._speed",
                ["src/jcx/_speed.pyx"],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
                include_dirs=[np.get_include()],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
