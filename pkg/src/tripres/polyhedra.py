"""Polyhedra from presentations: expansion, links, dual graphs, groups.

The index-3 expansion replaces each point letter x_i by three
superscripted letters x_i^1, x_i^2, x_i^3 and each triple by its
superscript-cycled images; the resulting 45-triple presentation glues to
a polyhedron with three vertices whose links are the quadrangle.

A polyhedron is stored as a list of directed face words over edge ids;
vertices are the corner-identification classes of edge endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .canon import ColoredGraph
from .geometry import GeneralizedPolygonGraph
from .presentations import TrianglePresentation, validate


def _normalize_expanded(t):
    """Rotate an expanded triple so its superscripts read (1, 2, 3)."""
    for r in range(3):
        rot = t[r:] + t[:r]
        if tuple(x[1] for x in rot) == (1, 2, 3):
            return rot
    raise ValueError(f"not an expanded triple: {t}")


@dataclass(frozen=True)
class ExpandedPresentation:
    """45 cyclic triples over superscripted letters (i, s), i in 1..15,
    s in 1..3, stored rotated to superscript order (1, 2, 3)."""

    triples: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def from_triples(cls, triples):
        return cls(tuple(sorted(_normalize_expanded(tuple(t)) for t in triples)))

    def letters(self):
        return sorted({x for t in self.triples for x in t})

    def rotate_superscripts(self) -> "ExpandedPresentation":
        return ExpandedPresentation.from_triples(
            tuple((i, s % 3 + 1) for (i, s) in t) for t in self.triples)


def expand_index3(K: TrianglePresentation) -> ExpandedPresentation:
    """Superscript expansion: diagonal triples give one expanded triple,
    all others three superscript-cycled copies."""
    if not validate(K):
        raise ValueError("presentation does not validate")
    out = []
    for t in K.triples:
        a, b, c = t.entries
        if t.is_diagonal:
            out.append(((a, 1), (a, 2), (a, 3)))
        else:
            for s in range(3):
                out.append(((a, s % 3 + 1), (b, (s + 1) % 3 + 1),
                            (c, (s + 2) % 3 + 1)))
    return ExpandedPresentation.from_triples(out)


# --- polyhedra ---------------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


@dataclass(frozen=True)
class Polyhedron:
    """Oriented polygonal complex given by directed face words.

    ``faces[f]`` is a tuple of edge ids; every edge id is directed and all
    of its occurrences across face boundaries are identified respecting
    orientation.  ``edge_labels[e]`` is the display label of edge e.
    Vertices are numbered 0..vertex_count-1.
    """

    faces: tuple[tuple[int, ...], ...]
    edge_labels: tuple[object, ...]
    vertex_of_tail: tuple[int, ...]
    vertex_of_head: tuple[int, ...]

    @classmethod
    def from_face_words(cls, face_words, edge_labels):
        ne = len(edge_labels)
        # endpoint nodes: tail(e) = 2e, head(e) = 2e + 1
        uf = _UnionFind(2 * ne)
        for word in face_words:
            m = len(word)
            for t in range(m):
                e_in = word[t]
                e_out = word[(t + 1) % m]
                uf.union(2 * e_in + 1, 2 * e_out)
        roots = {}
        tails = []
        heads = []
        for e in range(ne):
            for node, acc in ((2 * e, tails), (2 * e + 1, heads)):
                r = uf.find(node)
                if r not in roots:
                    roots[r] = len(roots)
                acc.append(roots[r])
        return cls(tuple(tuple(w) for w in face_words), tuple(edge_labels),
                   tuple(tails), tuple(heads))

    @property
    def face_count(self) -> int:
        return len(self.faces)

    @property
    def edge_count(self) -> int:
        return len(self.edge_labels)

    @property
    def vertex_count(self) -> int:
        seen = set(self.vertex_of_tail) | set(self.vertex_of_head)
        return len(seen)

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def edge_side_counts(self):
        counts = [0] * self.edge_count
        for word in self.faces:
            for e in word:
                counts[e] += 1
        return counts

    def link_germs(self, v: int):
        """Germ index tables at vertex v.

        Returns (in_edges, out_edges): sorted edge ids whose head (resp.
        tail) is v.  In the link graph, in-germs are the lines (white
        side) and out-germs the points (black side).
        """
        in_edges = sorted(e for e in range(self.edge_count)
                          if self.vertex_of_head[e] == v)
        out_edges = sorted(e for e in range(self.edge_count)
                           if self.vertex_of_tail[e] == v)
        return in_edges, out_edges

    def link_corner_pairs(self, v: int):
        """Corners at v as (in-edge, out-edge) pairs, one per face corner."""
        pairs = []
        for word in self.faces:
            m = len(word)
            for t in range(m):
                e_in = word[t]
                e_out = word[(t + 1) % m]
                if self.vertex_of_head[e_in] == v:
                    pairs.append((e_in, e_out))
        return pairs


def build_polyhedron(E) -> Polyhedron:
    """Polyhedron of an expanded (or raw triangle) presentation.

    Expanded input gives 45 faces, 45 edges of thickness 3 and 3 vertices;
    a raw torsion-free presentation gives N faces, 15 edges, 1 vertex.
    """
    if isinstance(E, TrianglePresentation):
        if not validate(E):
            raise ValueError("presentation does not validate")
        letters = sorted({x for t in E.triples for x in t.entries})
        words = [t.entries for t in E.triples]
        labels = [f"x{i}" for i in letters]
    else:
        letters = E.letters()
        words = [t for t in E.triples]
        labels = [f"x{i}^{s}" for (i, s) in letters]
    index = {x: e for e, x in enumerate(letters)}
    face_words = [tuple(index[x] for x in w) for w in words]
    return Polyhedron.from_face_words(face_words, labels)


def vertex_link(X: Polyhedron, v: int) -> GeneralizedPolygonGraph:
    """Link of v: points = outgoing edge-germs, lines = incoming ones,
    incidences = face corners at v."""
    in_edges, out_edges = X.link_germs(v)
    in_pos = {e: j for j, e in enumerate(in_edges)}
    out_pos = {e: p for p, e in enumerate(out_edges)}
    lines = [[] for _ in in_edges]
    for e_in, e_out in X.link_corner_pairs(v):
        lines[in_pos[e_in]].append(out_pos[e_out])
    return GeneralizedPolygonGraph(point_count=len(out_edges),
                                   lines=tuple(tuple(sorted(pl)) for pl in lines))


def check_links(X: Polyhedron):
    """True iff every vertex link is the thick generalized quadrangle."""
    from .geometry import is_generalized_m_gon, is_thick

    for v in range(X.vertex_count):
        link = vertex_link(X, v)
        if not (is_generalized_m_gon(link, 4) and is_thick(link)):
            return False
    return True


# --- dual graph --------------------------------------------------------------


@dataclass(frozen=True)
class DualGraph:
    """Bipartite graph of edge-nodes (letters) vs face-nodes (triples)."""

    letters: tuple[tuple[int, int], ...]
    triples: tuple[tuple[tuple[int, int], ...], ...]
    graph: ColoredGraph

    def serialize(self) -> str:
        import json

        header = json.dumps({"letter_nodes": len(self.letters),
                             "face_nodes": len(self.triples)})
        body = "\n".join(f"{u} {v}" for u, v in self.graph.edges)
        return header + "\n" + body + "\n"


def dual_graph(E: ExpandedPresentation) -> DualGraph:
    """Letters 0..44 then triples 45..89; an edge joins letter i to face j
    when letter i lies on the boundary of face j.  Uniform coloring: the
    classification compares dual graphs as plain graphs."""
    letters = tuple(E.letters())
    index = {x: i for i, x in enumerate(letters)}
    edges = []
    for j, t in enumerate(E.triples):
        for x in t:
            edges.append((index[x], 45 + j))
    g = ColoredGraph.from_edges(90, edges, (0,) * 90)
    return DualGraph(letters=letters, triples=E.triples, graph=g)


# --- group presentations -----------------------------------------------------


@dataclass(frozen=True)
class GroupPresentation:
    """Generators x_1..x_n with relator words given as index tuples."""

    generator_count: int
    relators: tuple[tuple[int, ...], ...]

    def to_text(self) -> str:
        gens = ",".join(f"x{i}" for i in range(1, self.generator_count + 1))
        rels = ", ".join("*".join(f"x{i}" for i in w) for w in self.relators)
        return f"< {gens} | {rels} >"


def group_presentation(K: TrianglePresentation) -> GroupPresentation:
    if not validate(K):
        raise ValueError("presentation does not validate")
    return GroupPresentation(
        generator_count=15,
        relators=tuple(t.entries for t in K.triples))


def presentation_from_relators(G: GroupPresentation) -> TrianglePresentation:
    return TrianglePresentation.from_entries(G.relators)


def abelianization(G: GroupPresentation):
    """Elementary divisors and free rank of the abelianized group.

    The relation matrix (relators x generators, exponent sums) is put in
    Smith normal form; divisors are the nonzero diagonal entries and the
    free rank is generator count minus matrix rank.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    rows = []
    for w in G.relators:
        row = [0] * G.generator_count
        for i in w:
            row[i - 1] += 1
        rows.append(row)
    if not rows:
        return [], G.generator_count
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    divisors = [abs(snf[k, k]) for k in range(min(snf.shape)) if snf[k, k] != 0]
    return divisors, G.generator_count - len(divisors)
