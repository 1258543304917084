"""m-gonal presentations from a triangle presentation and a pattern word.

A pattern word w = z_1...z_m over {a, b, c} starting with abc and free of
proper powers turns each expanded triple into an m-tuple by substituting
a, b, c with the triple's three superscripted letters.  The 45 m-tuples
form a polygonal presentation whose polyhedron has m vertices, one
between each pair of consecutive word positions, and every vertex link
is the quadrangle incidence graph in one of two orientations: G when the
outgoing germs play the point role, G' when they play the line role.
The orientation is predicted positionwise by the sign of the transition
z_t -> z_{t+1} (cyclically), +1 on ab, bc, ca and -1 on ba, cb, ac.

Letter occurrences at different word positions are distinct sides: the
polygon sides carry (position, letter) identities, so the glued
polyhedron keeps its m vertices even when w repeats a letter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .presentations import TrianglePresentation, _ROWS1, labeling_of, validate
from .polyhedra import Polyhedron, expand_index3


class BadPrefix(ValueError):
    """The pattern word does not start with abc."""


class ProperPower(ValueError):
    """The pattern word contains a proper power (z_t = z_{t+1} or z_m = a)."""


class VerificationFailed(RuntimeError):
    """A vertex link does not match its predicted type; carries the vertex."""

    def __init__(self, vertex, expected, measured):
        self.vertex = vertex
        self.expected = expected
        self.measured = measured
        super().__init__(
            f"vertex {vertex + 1}: expected {expected}, measured {measured}")


_ROLE = {"a": 1, "b": 2, "c": 3}
_SIGN = {"ab": 1, "bc": 1, "ca": 1, "ba": -1, "cb": -1, "ac": -1}


@dataclass(frozen=True)
class PatternWord:
    """Word z_1...z_m over {a, b, c} with z_1z_2z_3 = abc, z_m != a and
    z_t != z_{t+1}; construct through validate_pattern_word."""

    letters: str

    @property
    def m(self) -> int:
        return len(self.letters)


def validate_pattern_word(letters: str) -> PatternWord:
    if any(z not in "abc" for z in letters) or not letters.startswith("abc"):
        raise BadPrefix(f"word must start with abc over {{a,b,c}}: {letters!r}")
    if letters[-1] == "a":
        raise ProperPower(f"last letter may not be a: {letters!r}")
    for t in range(len(letters) - 1):
        if letters[t] == letters[t + 1]:
            raise ProperPower(f"double letter at position {t + 1}: {letters!r}")
    return PatternWord(letters)


def _min_rotation(seq):
    return min(tuple(seq[r:] + seq[:r]) for r in range(len(seq)))


@dataclass(frozen=True)
class MTuplePresentation:
    """45 cyclic m-tuples over superscripted letters, minimal-rotation
    normalized."""

    m: int
    tuples: tuple[tuple[tuple[int, int], ...], ...]


def make_mgon(K: TrianglePresentation, w: PatternWord) -> MTuplePresentation:
    """Substitute each expanded triple into the pattern word."""
    E = expand_index3(K)
    out = []
    for (a, b, c) in E.triples:
        sub = {"a": a, "b": b, "c": c}
        out.append(_min_rotation(tuple(sub[z] for z in w.letters)))
    return MTuplePresentation(m=w.m, tuples=tuple(sorted(out)))


@dataclass(frozen=True)
class LinkTypeVector:
    """Predicted link orientation per vertex, entries "G" or "G'"."""

    types: tuple[str, ...]


def link_types(w: PatternWord) -> LinkTypeVector:
    zs = w.letters
    out = []
    for t in range(len(zs)):
        pair = zs[t] + zs[(t + 1) % len(zs)]
        out.append("G" if _SIGN[pair] == 1 else "G'")
    return LinkTypeVector(types=tuple(out))


def mgon_polyhedron(K: TrianglePresentation, w: PatternWord) -> Polyhedron:
    """Polyhedron of the m-gonal presentation with positioned sides.

    Edge identities are (position, letter) pairs, 15 per position; each
    face word visits positions 1..m in order.
    """
    if not validate(K):
        raise ValueError("presentation does not validate")
    E = expand_index3(K)
    m = w.m
    edge_ids = {}
    labels = []
    for t, z in enumerate(w.letters):
        s = _ROLE[z]
        for i in range(1, 16):
            edge_ids[(t, (i, s))] = len(labels)
            labels.append(f"x{i}^{s}@{t + 1}")
    face_words = []
    for (a, b, c) in E.triples:
        sub = {"a": a, "b": b, "c": c}
        face_words.append(tuple(edge_ids[(t, sub[z])]
                                for t, z in enumerate(w.letters)))
    return Polyhedron.from_face_words(face_words, tuple(labels))


def _measured_type(X: Polyhedron, v: int, position_of, letter_of, sigma):
    """Orientation of the link at v via the letter-anchored germ maps.

    The quadrangle is self-dual, so an unanchored colored-graph test
    cannot tell the two orientations apart; instead the germs are tied
    to their letters.  G: every corner (in-germ j, out-germ i) realizes
    incidence y_i on the line of row sigma(j).  G': the transpose.
    """
    in_edges, out_edges = X.link_germs(v)
    if len(in_edges) != 15 or len(out_edges) != 15:
        return None
    for germs in (in_edges, out_edges):
        if len({letter_of[e][0] for e in germs}) != 15:
            return None
    corners = X.link_corner_pairs(v)
    if len(corners) != 45 or len(set(corners)) != 45:
        return None
    is_g = all(letter_of[e_out][0] in _ROWS1[sigma[letter_of[e_in][0] - 1]]
               for e_in, e_out in corners)
    is_gp = all(letter_of[e_in][0] in _ROWS1[sigma[letter_of[e_out][0] - 1]]
                for e_in, e_out in corners)
    if is_g and not is_gp:
        return "G"
    if is_gp and not is_g:
        return "G'"
    return None


@dataclass(frozen=True)
class TheoremReport:
    """Per-vertex outcome of the link-type verification."""

    m: int
    vertex_count: int
    face_count: int
    expected: tuple[str, ...]
    measured: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.expected == self.measured


def verify_theorem_4_1(K: TrianglePresentation,
                       w: PatternWord) -> TheoremReport:
    """Build the m-gon polyhedron and check every vertex link type.

    Raises VerificationFailed at the first vertex whose measured link
    orientation differs from the sign-rule prediction, and ValueError if
    the glued polyhedron does not have m vertices with 45 m-gonal faces.
    """
    X = mgon_polyhedron(K, w)
    m = w.m
    if X.vertex_count != m or X.face_count != 45:
        raise ValueError(
            f"polyhedron has {X.vertex_count} vertices / {X.face_count} faces")
    if any(len(word) != m for word in X.faces):
        raise ValueError("face boundary length differs from m")
    position_of = {}
    letter_of = {}
    for t, z in enumerate(w.letters):
        s = _ROLE[z]
        for i in range(1, 16):
            e = (t * 15) + (i - 1)
            position_of[e] = t
            letter_of[e] = (i, s)
    # vertex v sits after word position t when position-t edges head there
    vertex_at = {}
    for e in range(X.edge_count):
        t = position_of[e]
        v = X.vertex_of_head[e]
        if vertex_at.setdefault(t, v) != v:
            raise ValueError(f"position {t + 1} edges head at two vertices")
    if len(set(vertex_at.values())) != m:
        raise ValueError("word positions do not separate the vertices")
    sigma = labeling_of(K).sigma()
    expected = link_types(w).types
    measured = []
    for t in range(m):
        got = _measured_type(X, vertex_at[t], position_of, letter_of, sigma)
        measured.append(got)
        if got != expected[t]:
            raise VerificationFailed(t, expected[t], got)
    return TheoremReport(m=m, vertex_count=X.vertex_count,
                         face_count=X.face_count,
                         expected=expected, measured=tuple(measured))
