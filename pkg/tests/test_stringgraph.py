import random
from itertools import permutations

import pytest
from hypothesis import given

from sgraft.errors import ClassificationError, IncompleteDecodingError, MalformedInputError
from sgraft.families import (BIALGEBRA, LOCALCOMP, bipartite_string_graph, complete_encoded,
                             complete_string_graph, star_string_graph)
from sgraft.graph import Graph
from sgraft.matching import are_isomorphic
from sgraft.stringgraph import (ENCODED_STRING_GRAPH, NEITHER, STRING_GRAPH, DecodingRule, DecodingSystem,
                                classify, decode, decode_sequential, encode_preimages, io,
                                is_encoded_string_graph, is_string_graph, iter_preimages, validate_decoding)

from strategies import decoding_for, random_encoded, seeds

WIRE_RULE = DecodingRule(("alpha", "n", "n"),
                         Graph.build({"a": "n", "b": "n", "c": "w"}, [("a", "e", "c"), ("c", "e", "b")],
                                     directed=False), ("a", "b"))
WIRE = DecodingSystem.of([WIRE_RULE], "wire", directed=False)


def test_classify_examples():
    assert classify(star_string_graph(4), LOCALCOMP).kind == STRING_GRAPH
    assert classify(complete_encoded(4), LOCALCOMP).kind == ENCODED_STRING_GRAPH
    bad = Graph.build({"u": "g", "v": "g", "w": "w"}, [("u", "e", "w"), ("v", "e", "w")])
    c = classify(bad, BIALGEBRA)
    assert c.kind == NEITHER and c.offending == ["w"]


def test_adjacent_nodes_and_misplaced_encoding_edges():
    g = Graph.build({"u": "n", "v": "n"}, [("u", "e", "v")], directed=False)
    assert classify(g, LOCALCOMP).kind == NEITHER
    g = Graph.build({"u": "n", "w": "w"}, [("u", "alpha", "w")], directed=False)
    assert classify(g, LOCALCOMP).kind == NEITHER


def test_io_examples():
    lone = Graph.build({"w": "w"}, directed=False)
    assert io(lone, LOCALCOMP) == ({"w"}, {"w"})
    ins, outs = io(bipartite_string_graph(3, 2), BIALGEBRA)
    assert (len(ins), len(outs)) == (3, 2)
    circle = Graph.build({"u": "n", "v": "n", "a": "w", "b": "w"},
                         [("u", "e", "a"), ("a", "e", "v"), ("v", "e", "b"), ("b", "e", "u")], directed=False)
    assert io(circle, LOCALCOMP) == (frozenset(), frozenset())
    with pytest.raises(ClassificationError):
        io(complete_encoded(2), LOCALCOMP)


def test_validate_decoding_examples(corpus):
    assert validate_decoding(WIRE, LOCALCOMP, used={("alpha", "n", "n")}).errors == []
    bare = DecodingRule(("alpha", "n", "n"), Graph.build({"a": "n", "b": "n"}, directed=False), ("a", "b"))
    assert "too-small" in validate_decoding(DecodingSystem.of([bare], directed=False), LOCALCOMP).kinds()
    enc = DecodingRule(("alpha", "n", "n"),
                       Graph.build({"a": "n", "b": "n", "c": "w"},
                                   [("a", "e", "c"), ("c", "e", "b"), ("a", "alpha", "b")], directed=False),
                       ("a", "b"))
    assert "encoding" in validate_decoding(DecodingSystem.of([enc], directed=False), LOCALCOMP).kinds()
    opened = DecodingRule(("alpha", "n", "n"),
                          Graph.build({"a": "n", "b": "n", "c": "w", "d": "w"},
                                      [("a", "e", "c"), ("c", "e", "b"), ("a", "e", "d")], directed=False),
                          ("a", "b"))
    assert "open-wires" in validate_decoding(DecodingSystem.of([opened], directed=False), LOCALCOMP).kinds()


def test_missing_triples_error_only_when_used():
    r = validate_decoding(WIRE, LOCALCOMP, used={("alpha", "n", "h")})
    assert [i.subject for i in r.errors] == ["(alpha, h, n)"]
    assert all(i.kind == "missing-rule" for i in r.warnings)


def test_decode_complete_graph_counts():
    sk4 = decode(complete_encoded(4), WIRE, LOCALCOMP)
    assert (len(sk4.labels), len(sk4.edges)) == (14, 16)
    assert are_isomorphic(sk4, complete_string_graph(4))
    assert classify(sk4, LOCALCOMP).kind == STRING_GRAPH


def test_decode_without_redexes_is_identity():
    g = star_string_graph(3)
    assert decode(g, WIRE, LOCALCOMP) == g


def test_decode_errors():
    g = Graph.build({"u": "n", "v": "h"}, [("u", "alpha", "v")], directed=False)
    with pytest.raises(IncompleteDecodingError):
        decode(g, WIRE, LOCALCOMP)
    g = Graph.build({"u": "n", "v": "w"}, [("u", "alpha", "v")], directed=False)
    with pytest.raises(MalformedInputError):
        decode(g, WIRE, LOCALCOMP)


def test_two_redex_orders_agree():
    g = complete_encoded(3)
    results = [decode_sequential(g, WIRE, order, LOCALCOMP) for order in permutations(range(3))]
    assert all(are_isomorphic(r, results[0]) for r in results)
    assert are_isomorphic(results[0], decode(g, WIRE, LOCALCOMP))


def test_preimages_of_complete_graph():
    h = complete_string_graph(3)
    raw = list(iter_preimages(h, WIRE))
    # every subset of the three internal wires may be contracted
    assert len(raw) == 2 ** 3
    assert [len(chosen) for _, chosen in raw] == [3, 2, 2, 2, 1, 1, 1, 0]
    pre = encode_preimages(h, WIRE, a=LOCALCOMP)
    assert len(pre) == 4
    assert any(are_isomorphic(p, complete_encoded(3)) for p in pre)
    assert any(are_isomorphic(p, h) for p in pre)


def test_preimages_bounded_by_contractions():
    raw = list(iter_preimages(complete_string_graph(3), WIRE, max_contractions=1))
    assert len(raw) == 4


def test_preimages_without_occurrence():
    h = star_string_graph(1)
    assert [g for g, _ in iter_preimages(h, WIRE)] == [h]


def test_open_rhs_never_contracts():
    # hub - wire - leaf together with both open wires: interiors are closed in the
    # match, but the rule itself is illegal and must not produce contractions
    rhs = Graph.build({"a": "h", "b": "n", "c": "w", "o": "w", "p": "w"},
                      [("a", "e", "c"), ("c", "e", "b"), ("a", "e", "o"), ("b", "e", "p")], directed=False)
    t = DecodingSystem.of([DecodingRule(("alpha", "h", "n"), rhs, ("a", "b"))], directed=False)
    h = star_string_graph(2)
    assert len(encode_preimages(h, t, a=LOCALCOMP)) == 1


def test_preimages_need_string_graph():
    with pytest.raises(ClassificationError):
        encode_preimages(complete_encoded(2), WIRE, a=LOCALCOMP)


@given(seeds)
def test_decode_is_confluent(seed):
    rng = random.Random(seed)
    directed = rng.random() < 0.5
    a, t = decoding_for(directed)
    g = random_encoded(rng, directed, max_encoding=3)
    n = sum(1 for e in g.edges if e[1] in a.encoding)
    ref = decode(g, t, a)
    assert not any(e[1] in a.encoding for e in ref.edges)
    orders = list(permutations(range(n)))
    for order in rng.sample(orders, min(3, len(orders))):
        assert are_isomorphic(decode_sequential(g, t, order, a), ref)


@given(seeds)
def test_decoding_preserves_string_graph_shape(seed):
    rng = random.Random(seed)
    directed = rng.random() < 0.5
    a, t = decoding_for(directed)
    g = random_encoded(rng, directed)
    assert is_encoded_string_graph(g, a) == is_string_graph(decode(g, t, a), a)


@given(seeds)
def test_every_preimage_decodes_back(seed):
    rng = random.Random(seed)
    directed = rng.random() < 0.5
    a, t = decoding_for(directed)
    g = random_encoded(rng, directed, max_vertices=8, max_encoding=3, defect_rate=0)
    h = decode(g, t, a)
    pre = encode_preimages(h, t, a=a)
    assert any(are_isomorphic(p, g) for p in pre)
    for p in pre:
        assert are_isomorphic(decode(p, t, a), h)
