"""Canonical labeling and isomorphism testing for small colored graphs.

Individualization-refinement search in the nauty style, scaled down for
the graphs this project actually handles (trivalent bipartite dual graphs
on 90 vertices, link graphs on 30, developed-ball incidence graphs on a
few thousand).  Certificates are exact: two graphs have equal certificates
iff they are isomorphic respecting colors.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

SIZE_LIMIT = 4096


class SizeLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected loopless graph with an ordered vertex coloring."""

    n: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[int, ...]

    def __post_init__(self):
        assert len(self.colors) == self.n

    @classmethod
    def from_edges(cls, n, edges, colors=None):
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not supported")
            es.add((min(u, v), max(u, v)))
        if colors is None:
            colors = (0,) * n
        return cls(n=n, edges=tuple(sorted(es)), colors=tuple(colors))

    def neighbors(self):
        nbr = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbr[u].append(v)
            nbr[v].append(u)
        return nbr

    def degree_sequence(self):
        nbr = self.neighbors()
        return sorted((self.colors[v], len(nbr[v])) for v in range(self.n))


@dataclass(frozen=True)
class Certificate:
    """Canonical byte-string form of a colored graph."""

    data: bytes

    def hex(self) -> str:
        return self.data.hex()


def _initial_partition(g: ColoredGraph):
    by_color = {}
    for v, c in enumerate(g.colors):
        by_color.setdefault(c, []).append(v)
    return [by_color[c] for c in sorted(by_color)]


def refine(g: ColoredGraph, partition, nbr=None):
    """Equitable refinement of an ordered partition (1-WL).

    Each pass splits every cell, in partition order, by the vertex
    signature "number of neighbours in cell i, for each cell index i";
    fragments are ordered by signature.  Signatures reference only cell
    positions, never vertex names, so the resulting ordered partition is
    an isomorphism invariant of (g, partition).
    """
    if nbr is None:
        nbr = g.neighbors()
    cells = [list(c) for c in partition]
    while True:
        cell_of = [0] * g.n
        for i, c in enumerate(cells):
            for v in c:
                cell_of[v] = i
        sigs = []
        for v in range(g.n):
            counts = {}
            for w in nbr[v]:
                ci = cell_of[w]
                counts[ci] = counts.get(ci, 0) + 1
            sigs.append(tuple(sorted(counts.items())))
        new_cells = []
        changed = False
        for c in cells:
            groups = {}
            for v in c:
                groups.setdefault(sigs[v], []).append(v)
            if len(groups) > 1:
                changed = True
            for key in sorted(groups):
                new_cells.append(groups[key])
        cells = new_cells
        if not changed:
            return [sorted(c) for c in cells]


def _certificate_for_order(g: ColoredGraph, order, nbr):
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    out = array("i")
    out.append(g.n)
    for v in order:
        out.append(-1 - g.colors[v])
        out.extend(sorted(pos[w] for w in nbr[v]))
    return out.tobytes()


def canonical_form(g: ColoredGraph, return_order: bool = False):
    """Canonical certificate via individualization-refinement search.

    Target cell: first largest non-singleton cell; branches are pruned by
    automorphisms discovered when two leaves yield equal certificates.
    """
    if g.n > SIZE_LIMIT:
        raise SizeLimitExceeded(f"graph has {g.n} > {SIZE_LIMIT} vertices")
    nbr = g.neighbors()
    base_cells = refine(g, _initial_partition(g), nbr)

    best = {"cert": None, "order": None}
    automorphisms: list[tuple[int, ...]] = []

    def record_automorphism(o1, o2):
        if len(automorphisms) >= 500:
            return
        perm = [0] * g.n
        for a, b in zip(o1, o2):
            perm[a] = b
        p = tuple(perm)
        if any(p[i] != i for i in range(g.n)) and p not in automorphisms:
            automorphisms.append(p)

    def orbit_reps(candidates, fixed):
        """Representatives of candidate orbits under stored automorphisms
        fixing ``fixed`` pointwise."""
        gens = [p for p in automorphisms if all(p[v] == v for v in fixed)]
        if not gens:
            return candidates
        parent = {v: v for v in candidates}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for p in gens:
            for v in candidates:
                w = p[v]
                if w in parent:
                    rv, rw = find(v), find(w)
                    if rv != rw:
                        parent[max(rv, rw)] = min(rv, rw)
        return [v for v in candidates if find(v) == v]

    def descend(cells, fixed):
        target = None
        for c in cells:
            if len(c) > 1 and (target is None or len(c) > len(target)):
                target = c
        if target is None:
            order = [c[0] for c in cells]
            cert = _certificate_for_order(g, order, nbr)
            if best["cert"] is None or cert < best["cert"]:
                best["cert"] = cert
                best["order"] = order
            elif cert == best["cert"]:
                record_automorphism(best["order"], order)
            return
        ti = cells.index(target)
        for v in orbit_reps(list(target), fixed):
            new_cells = cells[:ti] + [[v], [w for w in target if w != v]] + cells[ti + 1:]
            refined = refine(g, new_cells, nbr)
            descend(refined, fixed + [v])

    descend(base_cells, [])
    if return_order:
        return Certificate(best["cert"]), tuple(best["order"])
    return Certificate(best["cert"])


def _quick_signature(g: ColoredGraph):
    cells = refine(g, _initial_partition(g))
    return (g.n, len(g.edges), tuple(sorted(g.colors)),
            tuple((g.colors[c[0]], len(c)) for c in cells))


def are_isomorphic(g1: ColoredGraph, g2: ColoredGraph) -> bool:
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False
    if g1.degree_sequence() != g2.degree_sequence():
        return False
    if _quick_signature(g1) != _quick_signature(g2):
        return False
    return canonical_form(g1) == canonical_form(g2)


def partition_by_isomorphism(graphs):
    """Group graphs by certificate; classes ordered by certificate bytes.

    Returns a list of lists of input indices.
    """
    by_cert = {}
    for i, g in enumerate(graphs):
        cert = canonical_form(g)
        by_cert.setdefault(cert.data, []).append(i)
    return [by_cert[c] for c in sorted(by_cert)]
