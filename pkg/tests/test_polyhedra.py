"""Polyhedra, vertex links, dual graphs, and group presentations.

Oracles: the one-vertex / three-vertex polyhedron shapes and the
trivalent 90-vertex dual graphs are [PAPER]; the quadrangle links are
[PAPER] (the link lemma); numeric class counts are [DERIVED].
"""

import pytest

from tripres.canon import partition_by_isomorphism
from tripres.geometry import is_generalized_m_gon, is_thick
from tripres.polyhedra import (abelianization, build_polyhedron, check_links,
                               dual_graph, expand_index3, group_presentation,
                               presentation_from_relators, vertex_link)
from tripres.presentations import T24_LABELING, triples_from_labeling


def test_raw_polyhedron_shape_torsion_free(representatives_color):
    # [PAPER] one vertex, 15 edges, N = 15 faces for torsion-free
    K = representatives_color["torsion-free"][0]
    X = build_polyhedron(K)
    assert X.vertex_count == 1
    assert X.edge_count == 15
    assert X.face_count == 15
    assert all(c == 3 for c in X.edge_side_counts())


def test_raw_link_is_quadrangle(representatives_color):
    X = build_polyhedron(representatives_color["torsion-free"][0])
    link = vertex_link(X, 0)
    assert is_generalized_m_gon(link, 4)
    assert is_thick(link)


def test_expanded_shape():
    # [PAPER] 45 triangles, three vertices, 45 edges of thickness 3
    E = expand_index3(triples_from_labeling(T24_LABELING))
    assert len(E.triples) == 45
    assert len(E.letters()) == 45
    X = build_polyhedron(E)
    assert X.vertex_count == 3
    assert X.edge_count == 45
    assert all(c == 3 for c in X.edge_side_counts())


def test_expanded_links_are_quadrangles():
    E = expand_index3(triples_from_labeling(T24_LABELING))
    assert check_links(build_polyhedron(E))


def test_superscript_rotation_is_symmetry():
    # [DERIVED] rotating superscripts maps the expansion to itself
    E = expand_index3(triples_from_labeling(T24_LABELING))
    assert E.rotate_superscripts() == E


def test_dual_graph_shape():
    # [PAPER] trivalent bipartite graphs with 90 vertices
    g = dual_graph(expand_index3(triples_from_labeling(T24_LABELING))).graph
    assert g.n == 90
    deg = [0] * 90
    for u, v in g.edges:
        assert (u < 45) != (v < 45)
        deg[u] += 1
        deg[v] += 1
    assert set(deg) == {3}


def test_dual_graph_classes_torsion_free(representatives_color):
    # [PAPER] 45 classes collapse to 23 non-isomorphic dual graphs
    graphs = [dual_graph(expand_index3(K)).graph
              for K in representatives_color["torsion-free"]]
    assert len(partition_by_isomorphism(graphs)) == 23


def test_group_presentation_and_abelianization():
    K = triples_from_labeling(T24_LABELING)
    G = group_presentation(K)
    assert G.generator_count == 15
    assert len(G.relators) == 17
    assert presentation_from_relators(G).triples == K.triples
    divisors, rank = abelianization(G)
    assert rank >= 0
    assert all(d >= 1 for d in divisors)
    assert len(divisors) + rank <= 15
