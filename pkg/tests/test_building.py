"""Ball development, exact ball isomorphism, and building classification.

Oracles: the ball shape (721 vertices, 1935 edges, 1215 faces) is
[DERIVED] from the forced development; the two-class outcome over the
dataset is [DERIVED] (see also the acceptance suite for where it agrees
with and departs from the printed tags).
"""

import pytest

from tripres import store
from tripres.balliso import ball_isomorphism, match_anchor
from tripres.building import (BasedBall, MoreThanTwoClasses,
                              building_invariant, classify_buildings,
                              develop_two_ball, reference_balls)
from tripres.presentations import (T24_LABELING, T25_LABELING, load_appendix,
                                   triples_from_labeling)


@pytest.fixture(scope="module")
def appendix():
    return {name: lab for name, _tag, lab in load_appendix()}


@pytest.fixture(scope="module")
def ball_t24():
    return develop_two_ball(triples_from_labeling(T24_LABELING))


@pytest.fixture(scope="module")
def ball_t25():
    return develop_two_ball(triples_from_labeling(T25_LABELING))


def test_ball_shape(ball_t24):
    # [DERIVED] 1 + 30 + 690 vertices; 30 + 45 + 780 + 1080 edges;
    # 45 + 90 + 1080 faces
    assert ball_t24.vertex_count == 721
    assert len(ball_t24.edges) == 1935
    assert len(ball_t24.faces) == 1215
    dist = ball_t24.vertex_dist
    assert dist.count(0) == 1
    assert dist.count(1) == 30
    assert dist.count(2) == 690


def test_ball_inner_degrees(ball_t24):
    deg = [0] * ball_t24.vertex_count
    for _l, t, h in ball_t24.edges:
        deg[t] += 1
        deg[h] += 1
    for v, d in enumerate(ball_t24.vertex_dist):
        if d <= 1:
            assert deg[v] == 30


def test_self_isomorphism(ball_t24):
    vmap = ball_isomorphism(ball_t24, ball_t24)
    assert vmap is not None
    assert vmap[ball_t24.base] == ball_t24.base


def test_reference_balls_are_the_anchors(ball_t24, ball_t25):
    a1, a2 = reference_balls()
    assert ball_isomorphism(ball_t24, a1) is not None
    assert ball_isomorphism(ball_t25, a2) is not None


def test_invariant_values(ball_t24, ball_t25):
    assert building_invariant(ball_t24).data == b"ball:1"
    assert building_invariant(ball_t25).data == b"ball:2"


def test_t27_shares_t24_ball(appendix):
    # [DERIVED] explicit verified isomorphism between the two balls
    b27 = develop_two_ball(triples_from_labeling(appendix["T27"]))
    assert match_anchor(b27, reference_balls()) == 0


def test_isomorphism_is_verified_bijection(appendix, ball_t24):
    b27 = develop_two_ball(triples_from_labeling(appendix["T27"]))
    vmap = ball_isomorphism(b27, ball_t24)
    assert vmap is not None
    assert len(set(vmap.values())) == ball_t24.vertex_count
    # distances to the base are preserved
    for v, w in vmap.items():
        assert b27.vertex_dist[v] == ball_t24.vertex_dist[w]


def test_classify_small_set(appendix):
    ks = [triples_from_labeling(appendix[n]) for n in ("T24", "T25", "T28")]
    out = classify_buildings(ks)
    assert out == {0: 1, 1: 2, 2: 2}


def test_ball_certificate_cache_consistent(appendix):
    K = triples_from_labeling(appendix["T28"])
    assert store.ball_certificate(K) == "ball:2"
    assert store.ball_certificate(K, cache=False) == "ball:2"


def test_development_deterministic(appendix):
    k = triples_from_labeling(appendix["T30"])
    b1 = develop_two_ball(k)
    b2 = develop_two_ball(k)
    assert b1 == b2
