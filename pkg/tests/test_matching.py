import random
from itertools import permutations

import pytest
from hypothesis import given

from sgraft.errors import MalformedMorphismError
from sgraft.graph import IN, Connection, Graph
from sgraft.matching import (GraphMorphism, IsoIndex, are_isomorphic, find_monomorphisms,
                             is_homomorphism, iter_monomorphisms)

from strategies import random_graph, seeds, shuffled_copy


def brute_monos(p: Graph, h: Graph) -> set:
    pv = sorted(p.labels)
    out = set()
    for image in permutations(sorted(h.labels), len(pv)):
        m = dict(zip(pv, image))
        if is_homomorphism(GraphMorphism(p, h, m)):
            out.add(tuple(sorted(m.items())))
    return out


def brute_iso(g: Graph, h: Graph) -> bool:
    if len(g.labels) != len(h.labels) or len(g.edges) != len(h.edges):
        return False
    return any(len(m) == len(g.labels) for m in brute_monos(g, h))


@given(seeds)
def test_monomorphisms_match_brute_force(seed):
    rng = random.Random(seed)
    directed = rng.random() < 0.5
    p = random_graph(rng, rng.randint(1, 3), directed=directed, p=0.5)
    h = random_graph(rng, rng.randint(2, 5), directed=directed, p=0.5, prefix="w")
    got = {tuple(sorted(m.items())) for m in iter_monomorphisms(p, h)}
    assert got == brute_monos(p, h)


@given(seeds)
def test_isomorphism_matches_brute_force(seed):
    rng = random.Random(seed)
    directed = rng.random() < 0.5
    g = random_graph(rng, rng.randint(1, 5), directed=directed, p=0.4)
    h = shuffled_copy(rng, g)
    if rng.random() < 0.5:
        h = random_graph(rng, len(g.labels), directed=directed, p=0.4, prefix="z")
    assert are_isomorphic(g, h) == brute_iso(g, h)


@given(seeds)
def test_renaming_preserves_isomorphism(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 7), directed=rng.random() < 0.5)
    assert are_isomorphic(g, shuffled_copy(rng, g))


def test_connections_participate_in_matching():
    p = Graph.build({"x": "a"}, [], [Connection("b", "e", "e", "x", IN)])
    with_conn = Graph.build({"y": "a"}, [], [Connection("b", "e", "e", "y", IN)])
    without = Graph.build({"y": "a"}, [])
    assert list(iter_monomorphisms(p, with_conn)) == [{"x": "y"}]
    assert list(iter_monomorphisms(p, without)) == []
    assert not are_isomorphic(with_conn, without)


def test_homomorphism_rejects_unknown_vertices():
    g = Graph.build({"a": "x"}, [])
    with pytest.raises(MalformedMorphismError):
        is_homomorphism(GraphMorphism(g, g, {"a": "zzz"}))


def test_find_monomorphisms_sorted():
    p = Graph.build({"u": "a"}, [])
    h = Graph.build({"c": "a", "b": "a", "d": "b"}, [])
    assert [m.vertex_map for m in find_monomorphisms(p, h)] == [{"u": "b"}, {"u": "c"}]


def test_iso_index_dedups():
    idx = IsoIndex()
    g = Graph.build({"a": "x", "b": "y"}, [("a", "e", "b")])
    assert idx.add(g, 1)
    assert not idx.add(g.rename({"a": "q"}), 2)
    assert idx.find(g.rename({"b": "r"})) == 1
    assert len(idx) == 1
