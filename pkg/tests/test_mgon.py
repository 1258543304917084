"""m-gonal presentations and the link-type theorem.

Oracles: the sign table and the polygonal-presentation statement are
[PAPER]; the concrete link-type vectors for the worked examples are
[DERIVED] by full build-and-check.
"""

import pytest

from tripres.mgon import (BadPrefix, ProperPower, link_types, make_mgon,
                          mgon_polyhedron, validate_pattern_word,
                          verify_theorem_4_1)
from tripres.polyhedra import expand_index3
from tripres.presentations import (T24_LABELING, Labeling,
                                   triples_from_labeling)
from tripres import store


@pytest.fixture(scope="module")
def t1(class_codes_dual):
    codes = class_codes_dual("torsion-free")
    return triples_from_labeling(Labeling.from_code(int(codes[0])))


@pytest.fixture(scope="module")
def t24():
    return triples_from_labeling(T24_LABELING)


def test_word_validation():
    assert validate_pattern_word("abc").m == 3
    assert validate_pattern_word("abcbcb").m == 6
    with pytest.raises(BadPrefix):
        validate_pattern_word("acb")
    with pytest.raises(BadPrefix):
        validate_pattern_word("abd")
    with pytest.raises(ProperPower):
        validate_pattern_word("abcc")
    with pytest.raises(ProperPower):
        validate_pattern_word("abca")


def test_sign_rule():
    # [PAPER] sign table: +1 on ab, bc, ca; -1 on the reverses
    assert link_types(validate_pattern_word("abc")).types == ("G", "G", "G")
    assert link_types(validate_pattern_word("abcb")).types == \
        ("G", "G", "G'", "G'")
    assert link_types(validate_pattern_word("abcbcb")).types == \
        ("G", "G", "G'", "G", "G'", "G'")


def test_make_mgon_abc_is_expansion(t24):
    # [DERIVED] w = abc reproduces the index-3 expansion as cyclic tuples
    from tripres.mgon import _min_rotation

    mg = make_mgon(t24, validate_pattern_word("abc"))
    E = expand_index3(t24)
    assert {_min_rotation(tuple(t)) for t in E.triples} == set(mg.tuples)
    assert mg.m == 3
    assert len(mg.tuples) == 45


def test_theorem_t1_abc(t1):
    # [PAPER] m = 3: all three links are G
    report = verify_theorem_4_1(t1, validate_pattern_word("abc"))
    assert report.ok
    assert report.vertex_count == 3
    assert report.face_count == 45
    assert report.measured == ("G", "G", "G")


def test_theorem_t1_abcb(t1):
    # [DERIVED] m = 4: links G, G, G', G'
    report = verify_theorem_4_1(t1, validate_pattern_word("abcb"))
    assert report.ok
    assert report.vertex_count == 4
    assert report.measured == ("G", "G", "G'", "G'")


def test_theorem_t24_abcbcb(t24):
    # [DERIVED] m = 6 on a torsion presentation
    report = verify_theorem_4_1(t24, validate_pattern_word("abcbcb"))
    assert report.ok
    assert report.vertex_count == 6
    assert report.face_count == 45


def test_polyhedron_positions_separate_vertices(t24):
    w = validate_pattern_word("abcb")
    X = mgon_polyhedron(t24, w)
    assert X.vertex_count == 4
    assert X.face_count == 45
    assert X.edge_count == 60
    assert all(len(word) == 4 for word in X.faces)


def test_theorem_many_words(t24, t1):
    # [DERIVED] random valid words keep the theorem true
    for K in (t24, t1):
        for word in ("abcb", "abcbc", "abcabc", "abcbab", "abcbacbc"):
            assert verify_theorem_4_1(K, validate_pattern_word(word)).ok
