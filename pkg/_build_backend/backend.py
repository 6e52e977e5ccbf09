"""
Build backend shim: setup.py in this repo is a bundled-data check script,
not a setuptools configuration, so metadata comes from pyproject.toml only.
"""
from setuptools import build_meta as _orig
from setuptools import setup


class _Backend(_orig._BuildMetaBackend):
    def run_setup(self, setup_script: str = "setup.py") -> None:
        setup()


_BACKEND = _Backend()

get_requires_for_build_wheel = _BACKEND.get_requires_for_build_wheel
get_requires_for_build_sdist = _BACKEND.get_requires_for_build_sdist
prepare_metadata_for_build_wheel = _BACKEND.prepare_metadata_for_build_wheel
build_wheel = _BACKEND.build_wheel
build_sdist = _BACKEND.build_sdist
get_requires_for_build_editable = _BACKEND.get_requires_for_build_editable
prepare_metadata_for_build_editable = _BACKEND.prepare_metadata_for_build_editable
build_editable = _BACKEND.build_editable
