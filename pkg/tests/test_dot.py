import re

from sgraft.besg import validate_besg
from sgraft.dot import export_dot, grammar_to_dot, graph_to_dot, rule_to_dot
from sgraft.families import LOCALCOMP, complete_encoded, complete_string_graph
from sgraft.grammar_rewrite import besg_rewrite, check_admissibility, find_grammar_matches
from sgraft.graph import Graph
from sgraft.schema import instantiate

from conftest import GOLDEN


def _count(text: str, pattern: str) -> int:
    return len(re.findall(pattern, text))


def test_complete_graph_rendering_counts():
    dot = graph_to_dot(complete_string_graph(3), LOCALCOMP, "sK3")
    assert _count(dot, r"shape=circle, style=filled") == 3
    assert _count(dot, r"shape=point") == 6
    assert _count(dot, r" -- ") == 9
    assert dot == (GOLDEN / "sk3.dot").read_text()


def test_encoding_edges_dashed():
    dot = graph_to_dot(complete_encoded(3), LOCALCOMP)
    assert _count(dot, r'label="alpha", style=dashed') == 3


def test_grammar_has_one_cluster_per_production(corpus):
    for name in ("star.gg", "complete.gg", "bialg_left.gg"):
        g = corpus(name)
        dot = grammar_to_dot(g)
        assert _count(dot, r'subgraph "cluster_') == len(g.productions)
        assert _count(dot, r"style=dotted") == sum(len(p.rhs.connections) for p in g.productions)
    assert grammar_to_dot(corpus("star.gg")) == (GOLDEN / "star_grammar.dot").read_text()


def test_empty_graph():
    dot = graph_to_dot(Graph.empty())
    assert dot == (GOLDEN / "empty.dot").read_text() == 'digraph "G" {\n}\n'


def test_rule_rendering(corpus):
    span = instantiate(corpus("localcomp.pat"), corpus("lc2.script").script).span
    dot = rule_to_dot(span, LOCALCOMP)
    assert _count(dot, r'subgraph "cluster_') == 3
    assert export_dot(span, LOCALCOMP) == dot


def test_export_is_deterministic(corpus):
    b = corpus("complete.besg")
    assert export_dot(b) == export_dot(corpus("complete.besg"))


def test_report_goldens(corpus):
    assert validate_besg(corpus("complete.besg")).to_text() == (GOLDEN / "complete_validate.txt").read_text()
    host, rule = corpus("big_host.besg"), corpus("bialg.pat")
    result = besg_rewrite(host, rule, find_grammar_matches(rule, host)[0])
    verdict = check_admissibility(host, result, rule, corpus("mn32.script").script, seed=7)
    assert verdict.to_text() == (GOLDEN / "bialg_mn32_admissibility.txt").read_text()
