"""Builds the _core extension through the project's CMake tree.

The wheel contains the python/pabeam package plus the compiled pybind11
module; everything else (CLI, tests) stays CMake-only.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


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
            "-S", str(source_dir),
            "-B", str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            "-DPABEAM_BUILD_CLI=OFF",
            "-DPABEAM_BUILD_TESTS=OFF",
            "-DPABEAM_BUILD_PYTHON=ON",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "pabeam_python",
             "--parallel"],
            check=True,
        )

        staged = build_dir / "python" / "pabeam"
        produced = sorted(staged.glob("_core*"))
        if not produced:
            raise RuntimeError("cmake build did not produce the _core module")
        target = Path(self.get_ext_fullpath(ext.name))
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(produced[0], target)


setup(
    packages=["pabeam"],
    package_dir={"pabeam": "python/pabeam"},
    ext_modules=[CMakeExtension("pabeam._core")],
    cmdclass={"build_ext": CMakeBuild},
)
