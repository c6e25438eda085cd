"""Shared fixtures: random compositions and a tiny on-disk dataset builder."""

import json

import numpy as np
import pytest
from PIL import Image


def random_compositions(rng, n, d):
    """Strictly positive random compositions via a Dirichlet draw."""
    return rng.dirichlet(np.ones(d), size=n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def dataset_dir(tmp_path):
    """Write a 4-spot, 3-type dataset into tmp_path and return the manifest path.

    Positions sit on a 100x100 image; one row has a zero part and one row
    sums to 0.9995 to exercise renormalization.
    """
    proportions = (
        "spot_id,typeA,typeB,typeC\n"
        "s0,0.2,0.3,0.5\n"
        "s1,0.5,0.5,0.0\n"
        "s2,0.25,0.25,0.4995\n"
        "s3,0.1,0.1,0.8\n"
    )
    positions = (
        "spot_id,x,y\n"
        "s0,10.0,10.0\n"
        "s1,90.0,10.0\n"
        "s2,10.0,90.0\n"
        "s3,90.0,90.0\n"
    )
    (tmp_path / "proportions.csv").write_text(proportions)
    (tmp_path / "positions.csv").write_text(positions)
    Image.new("RGB", (100, 100), (200, 180, 190)).save(tmp_path / "image.png")
    manifest = {
        "proportions": "proportions.csv",
        "positions": "positions.csv",
        "image": "image.png",
        "spot_radius_px": 4.0,
    }
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps(manifest))
    return manifest_path
