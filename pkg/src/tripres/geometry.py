"""Incidence geometry of the smallest thick generalized quadrangle.

Points are the 15 unordered pairs from {1,...,6} in lexicographic order
(x_1 = {1,2}, x_2 = {1,3}, ..., x_15 = {5,6}); lines are the 15 perfect
matchings of K_6, each consisting of the three pairs it matches.  This
realizes GQ(2,2): 15 points, 15 lines, 3 points per line, 3 lines per
point, 45 flags, diameter 4 and girth 8 as a bipartite incidence graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache


@dataclass(frozen=True)
class GeneralizedPolygonGraph:
    """Bipartite point-line incidence structure.

    ``lines[j]`` is the tuple of point indices incident with line ``j``.
    Vertices of the incidence graph are numbered 0..point_count-1 for
    points followed by point_count..point_count+line_count-1 for lines.
    """

    point_count: int
    lines: tuple[tuple[int, ...], ...]

    @property
    def line_count(self) -> int:
        return len(self.lines)

    @property
    def vertex_count(self) -> int:
        return self.point_count + self.line_count

    def flags(self):
        """All incident (point, line) pairs, sorted."""
        return sorted((p, j) for j, pts in enumerate(self.lines) for p in pts)

    def point_lines(self, p: int) -> tuple[int, ...]:
        """Indices of the lines through point p."""
        return self._point_lines()[p]

    @lru_cache(maxsize=None)
    def _point_lines(self):
        out = [[] for _ in range(self.point_count)]
        for j, pts in enumerate(self.lines):
            for p in pts:
                out[p].append(j)
        return tuple(tuple(x) for x in out)

    @lru_cache(maxsize=None)
    def adjacency(self) -> tuple[int, ...]:
        """Per-vertex neighbour bitsets over the combined vertex numbering."""
        n = self.vertex_count
        adj = [0] * n
        for j, pts in enumerate(self.lines):
            v = self.point_count + j
            for p in pts:
                adj[p] |= 1 << v
                adj[v] |= 1 << p
        return tuple(adj)

    def degree(self, v: int) -> int:
        return self.adjacency()[v].bit_count()

    def edge_list_text(self) -> str:
        """Plain-text flag list, one ``pointIndex lineIndex`` pair per line."""
        return "\n".join(f"{p} {j}" for p, j in self.flags()) + "\n"

    def to_dot(self) -> str:
        lines = ["graph quadrangle {"]
        for p in range(self.point_count):
            lines.append(f'  p{p} [shape=circle,label="x{p + 1}"];')
        for j in range(self.line_count):
            lines.append(f'  l{j} [shape=box,label="y{j + 1}"];')
        for p, j in self.flags():
            lines.append(f"  p{p} -- l{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GraphAutomorphism:
    """Automorphism (or duality) of a point-line geometry.

    For a color-preserving automorphism, ``point_map`` permutes point
    indices and ``line_map`` permutes line indices.  For a duality
    (``swaps_colors``), ``point_map`` sends each point index to a line
    index and ``line_map`` each line index to a point index.
    """

    point_map: tuple[int, ...]
    line_map: tuple[int, ...]
    swaps_colors: bool = False

    def apply_flag(self, flag):
        p, j = flag
        if self.swaps_colors:
            return (self.line_map[j], self.point_map[p])
        return (self.point_map[p], self.line_map[j])

    def __mul__(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """Composition: (self * other) applies ``other`` first."""
        if not other.swaps_colors:
            pm = tuple(self.point_map[other.point_map[p]] for p in range(len(other.point_map)))
            lm = tuple(self.line_map[other.line_map[j]] for j in range(len(other.line_map)))
            return GraphAutomorphism(pm, lm, self.swaps_colors)
        # other maps points to lines, so self acts on the swapped sides
        pm = tuple(self.line_map[other.point_map[p]] for p in range(len(other.point_map)))
        lm = tuple(self.point_map[other.line_map[j]] for j in range(len(other.line_map)))
        return GraphAutomorphism(pm, lm, not self.swaps_colors)

    def inverse(self) -> "GraphAutomorphism":
        n = len(self.point_map)
        m = len(self.line_map)
        if not self.swaps_colors:
            pm = [0] * n
            lm = [0] * m
            for p in range(n):
                pm[self.point_map[p]] = p
            for j in range(m):
                lm[self.line_map[j]] = j
            return GraphAutomorphism(tuple(pm), tuple(lm), False)
        # inverse of points->lines is lines->points
        pm = [0] * m
        lm = [0] * n
        for p in range(n):
            lm[self.point_map[p]] = p
        for j in range(m):
            pm[self.line_map[j]] = j
        return GraphAutomorphism(tuple(pm), tuple(lm), True)


# --- construction -----------------------------------------------------------

PAIRS: tuple[tuple[int, int], ...] = tuple(itertools.combinations(range(1, 7), 2))
_PAIR_INDEX = {p: i for i, p in enumerate(PAIRS)}


def _perfect_matchings():
    out = []

    def rec(remaining, current):
        if not remaining:
            out.append(tuple(sorted(_PAIR_INDEX[p] for p in current)))
            return
        a = remaining[0]
        for b in remaining[1:]:
            rec([x for x in remaining if x not in (a, b)], current + [(a, b)])

    rec(list(range(1, 7)), [])
    return tuple(sorted(out))


@lru_cache(maxsize=1)
def build_gq22() -> GeneralizedPolygonGraph:
    """The smallest thick generalized quadrangle, with the fixed line table.

    Line j consists of the three pairwise-disjoint pairs of a perfect
    matching of {1..6}; lines are ordered lexicographically by their sorted
    point-index triples, which reproduces the reference incidence tableau
    row for row.
    """
    return GeneralizedPolygonGraph(point_count=15, lines=_perfect_matchings())


# --- generalized polygon test ----------------------------------------------


def _bfs_dist(adj, start, n):
    dist = [-1] * n
    dist[start] = 0
    dq = deque([start])
    while dq:
        x = dq.popleft()
        m = adj[x]
        while m:
            y = (m & -m).bit_length() - 1
            m &= m - 1
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist


def _girth(adj, n):
    best = -1
    for s in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[s] = 0
        dq = deque([s])
        while dq:
            x = dq.popleft()
            m = adj[x]
            while m:
                y = (m & -m).bit_length() - 1
                m &= m - 1
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    dq.append(y)
                elif y != parent[x]:
                    cyc = dist[x] + dist[y] + 1
                    if best < 0 or cyc < best:
                        best = cyc
    return best


def is_generalized_m_gon(g: GeneralizedPolygonGraph, m: int) -> bool:
    """Connected bipartite graph of diameter m, girth 2m, min degree >= 2."""
    n = g.vertex_count
    if n == 0:
        return False
    adj = g.adjacency()
    if any(a.bit_count() < 2 for a in adj):
        return False
    ecc = 0
    for s in range(n):
        dist = _bfs_dist(adj, s, n)
        if min(dist) < 0:
            return False  # disconnected
        ecc = max(ecc, max(dist))
    if ecc != m:
        return False
    return _girth(adj, n) == 2 * m


def is_thick(g: GeneralizedPolygonGraph) -> bool:
    adj = g.adjacency()
    return all(a.bit_count() >= 3 for a in adj)


# --- automorphisms ----------------------------------------------------------


def _all_isomorphisms(g1: GeneralizedPolygonGraph, g2: GeneralizedPolygonGraph, swap: bool):
    """Yield all vertex bijections g1 -> g2 preserving incidence.

    With ``swap`` the points of g1 map to lines of g2 and vice versa.
    Backtracking over a BFS order with candidate sets intersected over
    already-mapped neighbours.
    """
    n = g1.vertex_count
    if n != g2.vertex_count:
        return
    if swap and (g1.point_count != g2.line_count or g1.line_count != g2.point_count):
        return
    if not swap and (g1.point_count != g2.point_count):
        return
    adj1 = g1.adjacency()
    adj2 = g2.adjacency()
    if not n:
        return

    order = []
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        dq = deque([root])
        while dq:
            x = dq.popleft()
            order.append(x)
            m = adj1[x]
            while m:
                y = (m & -m).bit_length() - 1
                m &= m - 1
                if not seen[y]:
                    seen[y] = True
                    dq.append(y)

    def is_point2(v):
        return v < g2.point_count

    def target_is_point(v1):
        p1 = v1 < g1.point_count
        return p1 != swap

    img = [-1] * n
    used = [False] * n

    def rec(i):
        if i == n:
            yield tuple(img)
            return
        x = order[i]
        cand_mask = None
        m = adj1[x]
        while m:
            y = (m & -m).bit_length() - 1
            m &= m - 1
            if img[y] >= 0:
                a = adj2[img[y]]
                cand_mask = a if cand_mask is None else cand_mask & a
        if cand_mask is None:
            cands = range(n)
        else:
            cands = []
            while cand_mask:
                t = (cand_mask & -cand_mask).bit_length() - 1
                cand_mask &= cand_mask - 1
                cands.append(t)
        want_point = target_is_point(x)
        for t in cands:
            if used[t] or is_point2(t) != want_point:
                continue
            if adj1[x].bit_count() != adj2[t].bit_count():
                continue
            img[x] = t
            used[t] = True
            yield from rec(i + 1)
            img[x] = -1
            used[t] = False

    yield from rec(0)


def automorphism_group(g: GeneralizedPolygonGraph, include_dualities: bool = False):
    """Every automorphism of g, optionally including point-line dualities.

    Exhaustive backtracking; the returned list is closed under composition
    and inversion and contains the identity.
    """
    autos = []
    pc, lc = g.point_count, g.line_count
    for img in _all_isomorphisms(g, g, swap=False):
        pm = tuple(img[:pc])
        lm = tuple(v - pc for v in img[pc:])
        autos.append(GraphAutomorphism(pm, lm, False))
    if include_dualities and pc == lc:
        for img in _all_isomorphisms(g, g, swap=True):
            pm = tuple(v - pc for v in img[:pc])
            lm = tuple(img[pc:])
            autos.append(GraphAutomorphism(pm, lm, True))
    return autos
