"""Builds the _core extension through the project's CMake tree.

The wheel metadata lives in pyproject.toml; this file only teaches
setuptools how to produce unshade/_core*.so via CMake.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        configure = [
            "cmake",
            "-S",
            str(source_dir),
            "-B",
            str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            "-DUNSHADE_BUILD_TESTS=OFF",
            "-DUNSHADE_BUILD_CLI=OFF",
            "-DUNSHADE_BUILD_PYTHON=ON",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core", "--parallel"],
            check=True,
        )

        built = list((build_dir / "python" / "unshade").glob("_core*"))
        if not built:
            raise RuntimeError("CMake did not produce the _core extension")
        target = Path(self.get_ext_fullpath(ext.name))
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], target)


setup(
    ext_modules=[CMakeExtension("unshade._core")],
    cmdclass={"build_ext": CMakeBuild},
)
