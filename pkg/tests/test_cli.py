import pytest

from sgraft.cli import IO_ERROR, INVALID, NO, OK, UNDEFINED, main
from sgraft.families import (LOCALCOMP, bialgebra_string_graph, bipartite_string_graph, complete_encoded,
                             complete_string_graph, star_string_graph)
from sgraft.matching import are_isomorphic
from sgraft.textformat import load, parse, serialize_graph

from checks import same_grammar
from conftest import CORPUS


@pytest.fixture
def graphs(tmp_path):
    def write(name, g, alphabets=None):
        path = tmp_path / name
        path.write_text(serialize_graph(g, path.stem, alphabets))
        return str(path)
    return write


def c(name: str) -> str:
    return str(CORPUS / name)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_accepts_corpus(capsys):
    for name in ("complete.gg", "wire.dec", "complete.besg", "localcomp.pat", "bialg.pat", "mn32.script"):
        code, out, _ = run(capsys, "validate", c(name))
        assert code == OK, (name, out)


def test_validate_reports_rejection(capsys, tmp_path):
    bad = tmp_path / "bad.gg"
    bad.write_text("sgraft-format 1\ngrammar bad undirected {\n  alphabet { node n; nonterminal S; edge e; }\n"
                   "  initial S;\n  production p : S { vertex X : S; vertex u : n; }\n}\n")
    code, out, _ = run(capsys, "validate", bad)
    assert code == INVALID and "status rejected" in out and "unproductive" in out


def test_syntax_and_io_errors(capsys, tmp_path):
    broken = tmp_path / "broken.sg"
    broken.write_text("sgraft-format 1\ngraph g directed {\n  vertex a : ;\n}\n")
    code, _, err = run(capsys, "validate", broken)
    assert code == IO_ERROR and "broken.sg:3" in err
    code, _, err = run(capsys, "validate", tmp_path / "missing.gg")
    assert code == IO_ERROR and err.startswith("error io")


def test_mode_mismatch(capsys):
    code, _, err = run(capsys, "--mode", "directed", "validate", c("complete.besg"))
    assert code == INVALID and "error mode" in err


def test_derive_encoded_and_decoded(capsys, tmp_path):
    out = tmp_path / "k3.sg"
    assert run(capsys, "derive", c("complete.besg"), "--script", c("lc3.script"), "--encoded", "-o", out)[0] == OK
    assert are_isomorphic(load(out).graph, complete_encoded(3))
    code, text, _ = run(capsys, "derive", c("complete.besg"), "--script", c("lc3.script"))
    assert code == OK and are_isomorphic(parse(text).graph, complete_string_graph(3))


def test_derive_bad_script_is_undefined(capsys, tmp_path):
    s = tmp_path / "bad.script"
    s.write_text("sgraft-format 1\nscript bad {\n  step nowhere p1;\n}\n")
    code, _, err = run(capsys, "derive", c("complete.gg"), "--script", s)
    assert code == UNDEFINED and "ReplayError" in err


def test_enumerate(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", c("complete.besg"), "--max-vertices", 14, "--out-dir", tmp_path)
    assert code == OK and "count 4" in out.splitlines()
    for k in range(4):
        assert are_isomorphic(load(tmp_path / f"member{k}.sg").graph, complete_string_graph(k + 1))


def test_member(capsys, graphs):
    code, out, _ = run(capsys, "member", c("complete.besg"), graphs("sk4.sg", complete_string_graph(4)))
    assert code == OK and out.startswith("member sk4 yes")
    witness = parse(out.split("\n", 1)[1]).script
    assert len(witness) == 4
    code, out, _ = run(capsys, "member", c("complete.besg"), graphs("ss4.sg", star_string_graph(4)))
    assert code == NO and out.strip() == "member ss4 no"


def test_decode(capsys, graphs):
    path = graphs("k4.sg", complete_encoded(4), LOCALCOMP)
    code, out, _ = run(capsys, "decode", path, c("wire.dec"))
    assert code == OK and are_isomorphic(parse(out).graph, complete_string_graph(4))


def test_instantiate_then_apply(capsys, tmp_path, graphs):
    rule = tmp_path / "sK32_rule.rr"
    assert run(capsys, "instantiate", c("bialg.pat"), "--script", c("mn32.script"), "-o", rule)[0] == OK
    host = graphs("sk32.sg", bipartite_string_graph(3, 2))
    out = tmp_path / "ss32.sg"
    assert run(capsys, "apply", rule, host, "--match", 0, "-o", out)[0] == OK
    assert are_isomorphic(load(out).graph, bialgebra_string_graph(3, 2))
    code, _, err = run(capsys, "apply", rule, host, "--match", 999)
    assert code == UNDEFINED and "no-match" in err


def test_apply_complete_to_star(capsys, tmp_path, graphs):
    rule = tmp_path / "sk4_rule.rr"
    run(capsys, "instantiate", c("localcomp.pat"), "--script", c("lc4.script"), "-o", rule)
    code, out, _ = run(capsys, "apply", rule, graphs("sk4.sg", complete_string_graph(4)), "--match", 0)
    assert code == OK and are_isomorphic(parse(out).graph, star_string_graph(4))


def test_rewrite_grammar(capsys, tmp_path):
    out = tmp_path / "lc_result.besg"
    assert run(capsys, "rewrite-grammar", c("lc_host.besg"), c("localcomp.pat"), "-o", out)[0] == OK
    assert same_grammar(load(out).grammar, load(c("lc_result.gg")))


def test_check_admissible(capsys):
    code, out, _ = run(capsys, "--seed", 3, "check-admissible", c("big_host.besg"), c("bialg.pat"),
                       "--script", c("mn22.script"))
    assert code == OK and "status admissible" in out and "sequence.length 1" in out


def test_check_admissible_missing_match(capsys):
    code, _, err = run(capsys, "check-admissible", c("big_host.besg"), c("bialg.pat"), "--match", 5,
                       "--script", c("mn22.script"))
    assert code == UNDEFINED and "no-match" in err


def test_export_dot(capsys, graphs):
    code, out, _ = run(capsys, "export-dot", c("star.gg"))
    assert code == OK and out.count('subgraph "cluster_') == 2
    path = graphs("sk3.sg", complete_string_graph(3))
    code, out, _ = run(capsys, "export-dot", path, "--alphabet-from", c("complete.gg"))
    assert code == OK and out.count("style=filled") == 3
    code, _, _ = run(capsys, "export-dot", c("lc1.script"))
    assert code == INVALID
