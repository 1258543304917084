"""Triangle presentations over the quadrangle and their equivalence.

A *labeling* names the 15 rows of the fixed line table y_1..y_15 (a
permutation).  With the basic bijection x_i <-> y_i, each labeling
determines the 45 *slots* (a, b) — point x_b on the line named y_a — and
a triangle presentation is an exact cover of the slots by cyclic triples,
where (a, b, c) covers slots (a, b), (b, c), (c, a) and a diagonal triple
(a, a, a) covers only (a, a).

Points, labels and rows are 1-based in the public types, matching the
x_i / y_i names of the line table; internal arrays are 0-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _search
from .geometry import GraphAutomorphism, automorphism_group, build_gq22


class NoCover(ValueError):
    """The labeling admits no exact slot cover."""


class MultipleCovers(ValueError):
    """The labeling admits more than one exact slot cover."""

    def __init__(self, covers):
        super().__init__(f"{len(covers)} covers")
        self.covers = covers


class ActionIncompatible(ValueError):
    """The group element does not map this presentation to a valid one."""


# rows of the line table, 1-based point letters
_ROWS1 = tuple(tuple(p + 1 for p in line) for line in build_gq22().lines)


@dataclass(frozen=True)
class Labeling:
    """Row labeling: ``labels[r]`` = i means row r+1 is the line y_i."""

    labels: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.labels) != list(range(1, 16)):
            raise ValueError("labels must be a permutation of 1..15")

    def sigma(self) -> tuple[int, ...]:
        """Inverse map, 0-based: sigma[a] = row carrying label a+1."""
        s = [0] * 15
        for r, lab in enumerate(self.labels):
            s[lab - 1] = r
        return tuple(s)

    def code(self) -> int:
        return _search.encode_labels(self.labels)

    @classmethod
    def from_code(cls, code: int) -> "Labeling":
        return cls(_search.decode_labels(code))


def _min_rotation(entries):
    a, b, c = entries
    return min((a, b, c), (b, c, a), (c, a, b))


@dataclass(frozen=True, order=True)
class Triple:
    """Cyclic 3-tuple of point letters, stored in minimal rotation."""

    entries: tuple[int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "entries", _min_rotation(self.entries))

    @property
    def is_diagonal(self) -> bool:
        a, b, c = self.entries
        return a == b == c

    def slots(self):
        a, b, c = self.entries
        if self.is_diagonal:
            return ((a, a),)
        return ((a, b), (b, c), (c, a))


@dataclass(frozen=True)
class TrianglePresentation:
    """Set of cyclic triples covering all 45 slots exactly once."""

    triples: tuple[Triple, ...]

    @classmethod
    def from_entries(cls, entries) -> "TrianglePresentation":
        return cls(tuple(sorted({Triple(tuple(t)) for t in entries})))

    @property
    def diagonal_count(self) -> int:
        return sum(1 for t in self.triples if t.is_diagonal)

    @property
    def triangle_count(self) -> int:
        return len(self.triples)

    def entry_lists(self):
        return [list(t.entries) for t in self.triples]


# --- derivation and validation ----------------------------------------------


def triples_from_labeling(lab: Labeling) -> TrianglePresentation:
    """Solve the exact-cover problem for the labeling's 45 slots.

    Raises NoCover when no cover exists and MultipleCovers (carrying all
    covers found) when the cover is not unique.
    """
    covers = _search.reference_covers(lab.sigma(), cap=3)
    if not covers:
        raise NoCover(f"labeling {lab.labels} admits no cover")
    if len(covers) > 1:
        raise MultipleCovers(
            [TrianglePresentation.from_entries((a + 1, b + 1, c + 1) for a, b, c in cov)
             for cov in covers])
    return TrianglePresentation.from_entries(
        (a + 1, b + 1, c + 1) for a, b, c in covers[0])


def _recover_sigma(K: TrianglePresentation):
    """Row of each label, reconstructed from the covered slots.

    Returns the 0-based sigma tuple, or None when K is not a valid
    presentation over any labeling.
    """
    slots = []
    for t in K.triples:
        slots.extend(t.slots())
    if len(slots) != len(set(slots)):
        return None
    succ = {}
    for a, b in slots:
        succ.setdefault(a, set()).add(b)
    row_of_set = {frozenset(row): r for r, row in enumerate(_ROWS1)}
    sigma = [None] * 15
    for a in range(1, 16):
        r = row_of_set.get(frozenset(succ.get(a, ())))
        if r is None:
            return None
        sigma[a - 1] = r
    if len(set(sigma)) != 15:
        return None
    if len(slots) != 45:
        return None
    return tuple(sigma)


def validate(K: TrianglePresentation) -> bool:
    """Exact slot cover over some labeling, with the identity bijection."""
    return _recover_sigma(K) is not None


def labeling_of(K: TrianglePresentation) -> Labeling:
    """The unique labeling whose slots K covers."""
    sigma = _recover_sigma(K)
    if sigma is None:
        raise ValueError("not a valid triangle presentation")
    labels = [0] * 15
    for a0, r in enumerate(sigma):
        labels[r] = a0 + 1
    return Labeling(tuple(labels))


def has_torsion(K: TrianglePresentation) -> bool:
    return K.diagonal_count > 0


# --- group action ------------------------------------------------------------


@lru_cache(maxsize=2)
def equivalence_group(include_dualities: bool):
    """Automorphisms of the quadrangle acting on labelings."""
    return tuple(automorphism_group(build_gq22(), include_dualities))


def act_on_labeling(phi: GraphAutomorphism, lab: Labeling) -> Labeling:
    """Image labeling under a quadrangle automorphism or duality."""
    tau = [l - 1 for l in lab.labels]  # row -> label, 0-based
    if not phi.swaps_colors:
        pi, rho = phi.point_map, phi.line_map
        rho_inv = [0] * 15
        for r in range(15):
            rho_inv[rho[r]] = r
        tau2 = [pi[tau[rho_inv[r]]] for r in range(15)]
    else:
        # point_map sends points to rows, line_map sends rows to points
        u, v = phi.point_map, phi.line_map
        v_inv = [0] * 15
        for r in range(15):
            v_inv[v[r]] = r
        sigma2 = [u[tau[v_inv[a]]] for a in range(15)]
        tau2 = [0] * 15
        for a, r in enumerate(sigma2):
            tau2[r] = a
    return Labeling(tuple(l + 1 for l in tau2))


def act(phi: GraphAutomorphism, K: TrianglePresentation) -> TrianglePresentation:
    """Image presentation under a quadrangle automorphism or duality.

    Automorphisms act letterwise via the point map; dualities reverse each
    triple and rename letter a to the point of the row carrying label a.
    """
    if not phi.swaps_colors:
        pi = phi.point_map
        K2 = TrianglePresentation.from_entries(
            tuple(pi[x - 1] + 1 for x in t.entries) for t in K.triples)
    else:
        sigma = _recover_sigma(K)
        if sigma is None:
            raise ActionIncompatible("input presentation is invalid")
        v = phi.line_map  # rows -> points
        m = [v[sigma[a]] for a in range(15)]
        K2 = TrianglePresentation.from_entries(
            (m[c - 1] + 1, m[b - 1] + 1, m[a - 1] + 1)
            for (a, b, c) in (t.entries for t in K.triples))
    if not validate(K2):
        raise ActionIncompatible("image presentation does not validate")
    return K2


# --- vectorized orbit reduction ----------------------------------------------

_W64 = np.uint64(1) << (np.uint64(4) * np.arange(15, dtype=np.uint64))


def _pack_rows(M: np.ndarray) -> np.ndarray:
    return (M.astype(np.uint64) * _W64[None, :]).sum(axis=1)


@lru_cache(maxsize=2)
def _group_tables(include_dualities: bool):
    """Precomputed index tables for the vectorized action on tau matrices."""
    colors = []
    duals = []
    for phi in equivalence_group(include_dualities):
        if not phi.swaps_colors:
            pi = np.array(phi.point_map, dtype=np.uint8)
            rho_inv = np.argsort(np.array(phi.line_map))
            colors.append((pi, rho_inv))
        else:
            u = np.array(phi.point_map, dtype=np.uint8)
            v_inv = np.argsort(np.array(phi.line_map))
            duals.append((u, v_inv))
    return tuple(colors), tuple(duals)


def reduce_codes(codes: np.ndarray, include_dualities: bool) -> np.ndarray:
    """Minimal orbit code of each packed labeling under the chosen group."""
    codes = np.asarray(codes, dtype=np.uint64)
    T = np.zeros((len(codes), 15), dtype=np.uint8)
    for r in range(15):
        T[:, r] = ((codes >> np.uint64(4 * r)) & np.uint64(15)).astype(np.uint8)
    best = codes.copy()
    colors, duals = _group_tables(include_dualities)
    for pi, rho_inv in colors:
        np.minimum(best, _pack_rows(pi[T[:, rho_inv]]), out=best)
    arange15 = np.arange(15, dtype=np.uint8)
    for u, v_inv in duals:
        S2 = u[T[:, v_inv]]
        T2 = np.zeros_like(T)
        np.put_along_axis(T2, S2, np.broadcast_to(arange15, S2.shape), axis=1)
        np.minimum(best, _pack_rows(T2), out=best)
    return best


# Presentation equivalence is the quadrangle automorphism action; this
# variant reproduces the published torsion-free class count (45).  Dualities
# give a coarser grouping that is available as the "dual" variant.
DEFAULT_INCLUDE_DUALITIES = False


def canonical_rep(K: TrianglePresentation,
                  include_dualities: bool = DEFAULT_INCLUDE_DUALITIES
                  ) -> TrianglePresentation:
    """Lexicographically minimal orbit image; equal iff equivalent."""
    code = labeling_of(K).code()
    best = int(reduce_codes(np.array([code], dtype=np.uint64),
                            include_dualities)[0])
    return triples_from_labeling(Labeling.from_code(best))


# --- enumeration -------------------------------------------------------------


def enumerate_labelings(mode: str = "all", workers: int = 1, raw=None):
    """Yield (Labeling, TrianglePresentation) for every valid labeling.

    ``mode`` filters on torsion: "torsion-free", "torsion" or "all".
    Emission is in increasing packed-code order regardless of worker
    count.  ``raw`` may supply a precomputed result of
    ``_search.enumerate_raw`` to skip the search.
    """
    if mode not in ("torsion-free", "torsion", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    if raw is None:
        raw = _search.enumerate_raw(workers=workers)
    for code, flags in raw:
        flags = int(flags)
        if flags & _search.FLAG_MULTICOVER:
            continue
        torsion = bool(flags & _search.FLAG_TORSION)
        if mode == "torsion-free" and torsion:
            continue
        if mode == "torsion" and not torsion:
            continue
        lab = Labeling.from_code(int(code))
        yield lab, triples_from_labeling(lab)


def class_representatives(mode: str, workers: int = 1, raw=None,
                          include_dualities: bool = DEFAULT_INCLUDE_DUALITIES):
    """Sorted canonical labeling codes of the equivalence classes."""
    if raw is None:
        raw = _search.enumerate_raw(workers=workers)
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
    reduced = reduce_codes(codes[keep], include_dualities)
    return np.unique(reduced)


# --- appendix dataset format -------------------------------------------------

_LINE_RE = re.compile(r"^\s*(T_?\{?(\d+)\}?)?\s*(\((\d)\))?\s*\$?(.*?)\$?\s*$")


def parse_appendix_labeling(line: str):
    """Parse a dataset line ``T_24 (1) y_1, y_2, ...`` into its parts.

    Returns (name or None, tag or None, Labeling).  The name/tag prefix is
    optional; the labels are a comma list of y_i tokens.
    """
    m = _LINE_RE.match(line.replace("{", "").replace("}", ""))
    if not m:
        raise ValueError(f"malformed line: {line!r}")
    name = f"T{m.group(2)}" if m.group(2) else None
    tag = int(m.group(4)) if m.group(4) else None
    body = m.group(5)
    labels = []
    for tok in body.split(","):
        tok = tok.strip()
        tm = re.fullmatch(r"y_?(\d+)", tok)
        if not tm:
            raise ValueError(f"bad label token {tok!r} in {line!r}")
        labels.append(int(tm.group(1)))
    return name, tag, Labeling(tuple(labels))


def emit_labeling(lab: Labeling, name: str | None = None,
                  tag: int | None = None) -> str:
    parts = []
    if name:
        parts.append(name)
    if tag:
        parts.append(f"({tag})")
    parts.append(", ".join(f"y_{i}" for i in lab.labels))
    return " ".join(parts)


def load_appendix():
    """The embedded list of torsion labelings: (name, tag, Labeling) rows."""
    from importlib import resources

    text = (resources.files("tripres") / "data" / "appendix1.txt").read_text()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_appendix_labeling(line))
    return out


T24_LABELING = Labeling((1, 2, 6, 5, 14, 10, 7, 8, 12, 3, 4, 9, 15, 13, 11))
T25_LABELING = Labeling((1, 2, 9, 10, 3, 5, 14, 8, 15, 13, 7, 4, 6, 12, 11))
