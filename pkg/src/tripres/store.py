"""Disk cache for the raw labeling search and derived class tables.

The full backtracking search over row labelings is by far the most
expensive step of the pipeline (minutes of CPU), and its result is a
small, immutable array.  This module memoizes it — and the equivalence
reduction built on it — under a per-user cache directory so repeated CLI
invocations and test runs pay the cost once.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from . import _search
from .presentations import reduce_codes

_RAW_FILE = "raw_labelings_v1.npy"
_BALL_FILE = "ball_certificates_v1.json"


def cache_dir() -> Path:
    env = os.environ.get("TRIPRES_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "tripres"


def raw_enumeration(workers: int = 1, cache: bool = True,
                    progress=None) -> np.ndarray:
    """The (code, flags) array of all valid labelings, sorted by code.

    Identical for every worker count; cached on disk unless ``cache`` is
    false.
    """
    path = cache_dir() / _RAW_FILE
    if cache and path.exists():
        return np.load(path)
    raw = _search.enumerate_raw(workers=workers, progress=progress)
    if cache:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npy")
        np.save(tmp, raw)
        os.replace(tmp, path)
    return raw


def class_codes(mode: str, include_dualities: bool,
                workers: int = 1, cache: bool = True) -> np.ndarray:
    """Sorted canonical labeling codes of the equivalence classes."""
    variant = "dual" if include_dualities else "color"
    path = cache_dir() / f"classes_{mode}_{variant}_v1.npy"
    if cache and path.exists():
        return np.load(path)
    raw = raw_enumeration(workers=workers, cache=cache)
    codes = raw[:, 0]
    flags = raw[:, 1].astype(np.int64)
    keep = (flags & _search.FLAG_MULTICOVER) == 0
    torsion = (flags & _search.FLAG_TORSION) != 0
    if mode == "torsion-free":
        keep &= ~torsion
    elif mode == "torsion":
        keep &= torsion
    elif mode != "all":
        raise ValueError(f"unknown mode {mode!r}")
    out = np.unique(reduce_codes(codes[keep], include_dualities))
    if cache:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npy")
        np.save(tmp, out)
        os.replace(tmp, path)
    return out


def ball_certificate(K, cache: bool = True) -> str:
    """Building-invariant certificate of a presentation, as a string.

    The ball is invariant under color permutations (they relabel the
    complex) and under dualities (the label-erased complex of the
    mirrored presentation is the same CW complex), so results are keyed
    by the canonical labeling code of the full-equivalence orbit.
    """
    import json

    from .building import building_invariant, develop_two_ball
    from .presentations import labeling_of

    code = labeling_of(K).code()
    key = str(int(reduce_codes(np.array([code], dtype=np.uint64), True)[0]))
    path = cache_dir() / _BALL_FILE
    table = {}
    if cache and path.exists():
        table = json.loads(path.read_text())
        if key in table:
            return table[key]
    cert = building_invariant(develop_two_ball(K)).data.decode()
    if cache:
        table[key] = cert
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.json")
        tmp.write_text(json.dumps(table, sort_keys=True))
        os.replace(tmp, path)
    return cert
