"""Shared fixtures.

The full labeling search result and the derived class tables are loaded
once per session through the disk cache; tests that need a recomputation
bypass the cache explicitly.
"""

import numpy as np
import pytest

from tripres import _search, store
from tripres.presentations import (Labeling, load_appendix,
                                   triples_from_labeling)


@pytest.fixture(scope="session")
def raw_enumeration():
    return store.raw_enumeration()


@pytest.fixture(scope="session")
def class_codes_color(raw_enumeration):
    def get(mode):
        return store.class_codes(mode, include_dualities=False)
    return get


@pytest.fixture(scope="session")
def class_codes_dual(raw_enumeration):
    def get(mode):
        return store.class_codes(mode, include_dualities=True)
    return get


@pytest.fixture(scope="session")
def appendix_rows():
    return load_appendix()


@pytest.fixture(scope="session")
def representatives_color(class_codes_color):
    """One TrianglePresentation per color-equivalence class, all modes."""
    out = {}
    for mode in ("torsion-free", "torsion"):
        out[mode] = [triples_from_labeling(Labeling.from_code(int(c)))
                     for c in class_codes_color(mode)]
    return out


@pytest.fixture(scope="session")
def flags(raw_enumeration):
    return raw_enumeration[:, 1].astype(np.int64)


@pytest.fixture(scope="session")
def torsion_mask(flags):
    return (flags & _search.FLAG_TORSION) != 0


@pytest.fixture(scope="session")
def multicover_mask(flags):
    return (flags & _search.FLAG_MULTICOVER) != 0
