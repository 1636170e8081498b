"""Command-line interface.

Exit codes: 0 success or member, 1 not a member or bounded search failed,
2 validation failure, 3 operation undefined (gluing, replay), 4 I/O or syntax.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .besg import BesgGrammar, besg_language, membership, validate_besg
from .dot import export_dot
from .dpo import GraphRuleSpan, dpo_rewrite, find_matches
from .ednce import Grammar, run_script, validate_grammar
from .errors import ParseError, SgraftError
from .grammar_rewrite import besg_rewrite, check_admissibility, find_grammar_matches
from .graph import Alphabets, validate_graph
from .report import Report, block
from .schema import BesgRewriteRule, instantiate, validate_besg_rule
from .stringgraph import DecodingSystem, classify, decode, validate_decoding
from .textformat import (NamedGraph, NamedScript, load, serialize_besg, serialize_graph,
                         serialize_rule, serialize_script)

OK, NO, INVALID, UNDEFINED, IO_ERROR = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


def _load(path: str, *kinds):
    try:
        obj = load(path)
    except ParseError as exc:
        raise CliError(IO_ERROR, "syntax", str(exc)) from exc
    except OSError as exc:
        raise CliError(IO_ERROR, "io", f"{path}: {exc.strerror}") from exc
    if kinds and not isinstance(obj, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise CliError(IO_ERROR, "wrong-kind", f"{path}: expected {names}, found {type(obj).__name__}")
    return obj


def _mode_of(obj):
    if isinstance(obj, NamedGraph):
        return obj.graph.directed
    if isinstance(obj, (Grammar, DecodingSystem)):
        return obj.directed
    if isinstance(obj, BesgGrammar):
        return obj.grammar.directed
    if isinstance(obj, GraphRuleSpan):
        return obj.left.directed
    if isinstance(obj, BesgRewriteRule):
        return obj.pattern.left.directed
    return None


def _check_mode(args, *objs):
    if args.mode is None:
        return
    want = args.mode == "directed"
    for o in objs:
        have = _mode_of(o)
        if have is not None and have != want:
            raise CliError(INVALID, "mode", f"object is {'directed' if have else 'undirected'}, "
                           f"--mode asks for {args.mode}")


def _graph(path: str) -> NamedGraph:
    return _load(path, NamedGraph)


def _script(path: str):
    return _load(path, NamedScript).script


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _decoding_alphabets(t: DecodingSystem) -> Alphabets:
    # standalone: endpoint labels are node labels, everything else is a wire label
    nodes = {k[1] for k in t.rules} | {k[2] for k in t.rules}
    wires = set()
    edges = set()
    for r in t.rules.values():
        wires |= {l for l in r.rhs.labels.values() if l not in nodes}
        edges |= {lab for _, lab, _ in r.rhs.edges}
    return Alphabets.of(node=nodes, wire=wires, edge=edges - t.encoding_labels,
                        encoding=t.encoding_labels, directed=t.directed)


def cmd_validate(args) -> int:
    obj = _load(args.file)
    _check_mode(args, obj)
    if isinstance(obj, NamedGraph):
        report = validate_graph(obj.graph, obj.alphabets)
        report.name = obj.name
        if obj.alphabets is not None:
            report.info["class"] = classify(obj.graph, obj.alphabets).kind
    elif isinstance(obj, Grammar):
        report = validate_grammar(obj)
    elif isinstance(obj, DecodingSystem):
        report = validate_decoding(obj, _decoding_alphabets(obj))
    elif isinstance(obj, BesgGrammar):
        report = validate_besg(obj, args.probe_depth)
    elif isinstance(obj, GraphRuleSpan):
        report = obj.validate()
    elif isinstance(obj, BesgRewriteRule):
        report = validate_besg_rule(obj, args.probe_depth)
    else:
        report = Report(getattr(obj, "name", "script"))
    print(report.to_text(), end="")
    return OK if report.ok else INVALID


def cmd_derive(args) -> int:
    obj = _load(args.grammar, Grammar, BesgGrammar)
    _check_mode(args, obj)
    g = obj.grammar if isinstance(obj, BesgGrammar) else obj
    form = run_script(g, _script(args.script))
    graph = form.graph
    if isinstance(obj, BesgGrammar) and form.concrete and not args.encoded:
        graph = decode(graph, obj.decoding, g.alphabets)
    _emit(args, serialize_graph(graph, "derived"))
    return OK


def cmd_enumerate(args) -> int:
    b = _load(args.besg, BesgGrammar)
    _check_mode(args, b)
    members = besg_language(b, args.max_vertices)
    fields = {"count": len(members)}
    for k, m in enumerate(members):
        fields[f"member.{k}.vertices"] = len(m.graph.labels)
        fields[f"member.{k}.edges"] = len(m.graph.edges)
        fields[f"member.{k}.script"] = " ".join(f"{v}:{p}" for v, p in m.script)
        if args.out_dir:
            out = Path(args.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"member{k}.sg").write_text(serialize_graph(m.graph, f"member{k}"), encoding="utf-8")
    print(block("language", b.label, fields), end="")
    return OK


def cmd_member(args) -> int:
    b = _load(args.besg, BesgGrammar)
    h = _graph(args.graph)
    _check_mode(args, b, h)
    result = membership(b, h.graph)
    if result.member:
        print(f"member {h.name} yes")
        print(serialize_script(result.witness, "witness"), end="")
        return OK
    print(f"member {h.name} no")
    return NO


def cmd_decode(args) -> int:
    h = _graph(args.graph)
    t = _load(args.decoding, DecodingSystem)
    _check_mode(args, h, t)
    _emit(args, serialize_graph(decode(h.graph, t, h.alphabets), f"{h.name}_decoded"))
    return OK


def cmd_instantiate(args) -> int:
    rule = _load(args.pattern, BesgRewriteRule)
    _check_mode(args, rule)
    inst = instantiate(rule, _script(args.script))
    _emit(args, serialize_rule(inst.span))
    return OK


def cmd_apply(args) -> int:
    rule = _load(args.rule, GraphRuleSpan)
    h = _graph(args.graph)
    _check_mode(args, rule, h)
    matches = find_matches(h.graph, rule)
    if not 0 <= args.match < len(matches):
        raise CliError(UNDEFINED, "no-match", f"match {args.match} requested, {len(matches)} available")
    _emit(args, serialize_graph(dpo_rewrite(h.graph, rule, matches[args.match]), f"{h.name}_rewritten"))
    return OK


def _grammar_match(args):
    host = _load(args.besg, BesgGrammar)
    rule = _load(args.pattern, BesgRewriteRule)
    _check_mode(args, host, rule)
    matches = find_grammar_matches(rule, host)
    if not 0 <= args.match < len(matches):
        raise CliError(UNDEFINED, "no-match", f"match {args.match} requested, {len(matches)} available")
    return host, rule, matches[args.match]


def cmd_rewrite_grammar(args) -> int:
    host, rule, m = _grammar_match(args)
    _emit(args, serialize_besg(besg_rewrite(host, rule, m)))
    return OK


def cmd_check_admissible(args) -> int:
    host, rule, m = _grammar_match(args)
    result = besg_rewrite(host, rule, m)
    verdict = check_admissibility(host, result, rule, _script(args.script), seed=args.seed)
    print(verdict.to_text(), end="")
    return OK if verdict.success else NO


def cmd_export_dot(args) -> int:
    obj = _load(args.object)
    _check_mode(args, obj)
    alphabets = None
    if args.alphabet_from:
        src = _load(args.alphabet_from, Grammar, BesgGrammar)
        alphabets = src.alphabets
    if isinstance(obj, NamedScript):
        raise CliError(INVALID, "wrong-kind", "scripts have no DOT rendering")
    _emit(args, export_dot(obj, alphabets))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sgraft", description="String-graph grammars and their rewriting.")
    p.add_argument("--mode", choices=("directed", "undirected"),
                   help="require every loaded object to be in this mode")
    p.add_argument("--seed", type=int, default=None,
                   help="shuffle search candidate order reproducibly")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, output=False):
        sp = sub.add_parser(name)
        for arg in positional:
            sp.add_argument(arg)
        if output:
            sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "file")
    sp.add_argument("--probe-depth", type=int, default=6)
    sp = add("derive", cmd_derive, "grammar", output=True)
    sp.add_argument("--script", required=True)
    sp.add_argument("--encoded", action="store_true", help="do not decode the terminal form")
    sp = add("enumerate", cmd_enumerate, "besg")
    sp.add_argument("--max-vertices", type=int, required=True)
    sp.add_argument("--out-dir")
    add("member", cmd_member, "besg", "graph")
    add("decode", cmd_decode, "graph", "decoding", output=True)
    sp = add("instantiate", cmd_instantiate, "pattern", output=True)
    sp.add_argument("--script", required=True)
    sp = add("apply", cmd_apply, "rule", "graph", output=True)
    sp.add_argument("--match", type=int, default=0)
    sp = add("rewrite-grammar", cmd_rewrite_grammar, "besg", "pattern", output=True)
    sp.add_argument("--match", type=int, default=0)
    sp = add("check-admissible", cmd_check_admissible, "besg", "pattern")
    sp.add_argument("--match", type=int, default=0)
    sp.add_argument("--script", required=True)
    sp = add("export-dot", cmd_export_dot, "object", output=True)
    sp.add_argument("--alphabet-from", help="grammar or bundle whose alphabet styles a bare graph or rule")
    return p


def _fail(code: int, kind: str, message: str) -> int:
    print(block("error", kind, {"exit": code, "message": message}), end="", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        return _fail(exc.code, exc.kind, str(exc))
    except SgraftError as exc:
        return _fail(UNDEFINED, type(exc).__name__, str(exc))
    except OSError as exc:
        return _fail(IO_ERROR, "io", str(exc))


if __name__ == "__main__":
    sys.exit(main())
