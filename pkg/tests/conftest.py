from __future__ import annotations

import json

import pytest

from artic2d import geometry, presets


@pytest.fixture(scope="session")
def lib():
    return geometry.load_prototype_library(geometry.default_data_dir() / "contours.json")


@pytest.fixture(scope="session")
def inventory():
    return presets.load_inventory(presets.default_inventory_path())


@pytest.fixture(scope="session")
def library_doc():
    with open(geometry.default_data_dir() / "contours.json", "r", encoding="utf-8") as fh:
        return json.load(fh)
