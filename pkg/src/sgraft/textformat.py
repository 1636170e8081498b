"""Reading and writing the ``sgraft-format 1`` text files.

One file holds one object, introduced by a keyword after the header line:
``graph``, ``grammar``, ``decoding``, ``besg``, ``rule``, ``pattern`` or
``script``.  ``#`` starts a comment.  Vertex bodies look like::

    vertex u : n;
    edge u e o;
    connect n alpha alpha u in;

Bundles (``besg``, ``pattern``) refer to other files by quoted path,
relative to the bundle, or embed the object inline.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .besg import BesgGrammar
from .dpo import GraphRuleSpan
from .ednce import DerivationScript, Grammar, Production
from .errors import ParseError
from .graph import IN, OUT, Alphabets, Connection, Graph
from .schema import BesgRewriteRule, Correspondence, GrammarPattern, synthesize_interface
from .stringgraph import DecodingRule, DecodingSystem

HEADER = "sgraft-format 1"
_TOKEN = re.compile(r'\s+|#[^\n]*|(?P<str>"(?:[^"\\]|\\.)*")|(?P<id>[A-Za-z0-9_.\'~+\-|@^]+)|(?P<p>[{}();:,=])')
_BARE = re.compile(r"[A-Za-z0-9_.'~+\-|@^]+")


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "str", "p", "eof"
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class NamedGraph:
    name: str
    graph: Graph
    alphabets: Alphabets | None = None


@dataclass(frozen=True)
class NamedScript:
    name: str
    script: DerivationScript


def tokenize(text: str, source: str = "<text>") -> list:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, source)
        kind = m.lastgroup
        if kind:
            raw = m.group()
            value = json.loads(raw) if kind == "str" else raw
            out.append(Token(kind, value, line, col))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class Parser:
    def __init__(self, text: str, source: str = "<text>", base: Path | None = None):
        self.source = source
        self.base = base
        lines = text.splitlines()
        first = next((i for i, l in enumerate(lines) if l.strip() and not l.strip().startswith("#")), None)
        if first is None or lines[first].strip() != HEADER:
            raise ParseError(f"missing header line {HEADER!r}", (first or 0) + 1, 1, source)
        body = "\n".join("" if i <= first else l for i, l in enumerate(lines))
        self.toks = tokenize(body, source)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col, self.source)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("id", "p") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of file'!r}")
        return self.next()

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind not in ("id", "str"):
            self.fail(f"expected {what}, found {self.tok.text or 'end of file'!r}")
        return self.next().text

    def idents_until(self, stop: str = ";") -> list:
        out = []
        while not self.at(stop):
            out.append(self.ident())
        self.expect(stop)
        return out

    def mode(self) -> bool:
        t = self.tok
        word = self.ident("directed or undirected")
        if word not in ("directed", "undirected"):
            self.fail(f"expected directed or undirected, found {word!r}", t)
        return word == "directed"

    # -- objects
    def document(self):
        t = self.tok
        kind = self.ident("object keyword")
        parse = {"graph": self.graph_doc, "grammar": self.grammar, "decoding": self.decoding,
                 "besg": self.besg, "rule": self.rule, "pattern": self.pattern,
                 "script": self.script}.get(kind)
        if parse is None:
            self.fail(f"unknown object kind {kind!r}", t)
        obj = parse()
        if self.tok.kind != "eof":
            self.fail(f"trailing input {self.tok.text!r}")
        return obj

    def alphabet(self, directed: bool) -> Alphabets:
        self.expect("{")
        kinds = {"node": set(), "wire": set(), "nonterminal": set(), "edge": set(), "encoding": set()}
        seen = {}
        while not self.at("}"):
            t = self.tok
            kind = self.ident("label kind")
            if kind not in kinds:
                self.fail(f"unknown label kind {kind!r}", t)
            for lab_tok in self._label_tokens():
                if lab_tok.text in seen and seen[lab_tok.text] != kind:
                    self.fail(f"label {lab_tok.text!r} declared as {seen[lab_tok.text]} and {kind}", lab_tok)
                seen[lab_tok.text] = kind
                kinds[kind].add(lab_tok.text)
        self.expect("}")
        return Alphabets.of(directed=directed, **kinds)

    def _label_tokens(self) -> list:
        out = []
        while not self.at(";"):
            if self.tok.kind not in ("id", "str"):
                self.fail("expected label")
            out.append(self.next())
        self.expect(";")
        return out

    def graph_body(self, directed: bool, a: Alphabets | None, open_brace: bool = True) -> Graph:
        """Parse ``{ vertex/edge/connect ... }``; the brace may already be consumed."""
        if open_brace:
            self.expect("{")
        labels, edges, conns = {}, [], []
        while not self.at("}"):
            t = self.tok
            word = self.ident("vertex, edge or connect")
            if word == "vertex":
                names = []
                while not self.at(":"):
                    names.append(self.next())
                    if names[-1].kind not in ("id", "str"):
                        self.fail("expected vertex identifier", names[-1])
                self.expect(":")
                lt = self.tok
                label = self.ident("vertex label")
                self.expect(";")
                if a is not None and label not in a.sigma:
                    self.fail(f"undeclared vertex label {label!r}", lt)
                for n in names:
                    if n.text in labels:
                        self.fail(f"duplicate vertex {n.text!r}", n)
                    labels[n.text] = label
            elif word == "edge":
                toks = [self.tok]
                s = self.ident("edge source")
                toks.append(self.tok)
                lab = self.ident("edge label")
                toks.append(self.tok)
                tgt = self.ident("edge target")
                self.expect(";")
                for v, vt in ((s, toks[0]), (tgt, toks[2])):
                    if v not in labels:
                        self.fail(f"edge endpoint {v!r} is not a declared vertex", vt)
                if a is not None and lab not in a.edge:
                    self.fail(f"undeclared edge label {lab!r}", toks[1])
                edges.append((s, lab, tgt))
            elif word == "connect":
                toks, vals = [], []
                for what in ("sigma", "beta", "gamma", "target vertex"):
                    toks.append(self.tok)
                    vals.append(self.ident(what))
                d = IN
                if not self.at(";"):
                    dt = self.tok
                    d = self.ident("direction")
                    if d not in (IN, OUT):
                        self.fail(f"direction must be in or out, found {d!r}", dt)
                self.expect(";")
                sigma, beta, gamma, x = vals
                if x not in labels:
                    self.fail(f"instruction target {x!r} is not a declared vertex", toks[3])
                if a is not None:
                    if sigma not in a.sigma:
                        self.fail(f"undeclared vertex label {sigma!r}", toks[0])
                    for lab, lt in ((beta, toks[1]), (gamma, toks[2])):
                        if lab not in a.edge:
                            self.fail(f"undeclared edge label {lab!r}", lt)
                conns.append(Connection(sigma, beta, gamma, x, d))
            else:
                self.fail(f"expected vertex, edge or connect, found {word!r}", t)
        self.expect("}")
        return Graph.build(labels, edges, conns, directed=directed)

    def graph_doc(self) -> NamedGraph:
        name = self.ident("graph name")
        directed = self.mode()
        a = None
        self.expect("{")
        if self.at("alphabet"):
            self.next()
            a = self.alphabet(directed)
        return NamedGraph(name, self.graph_body(directed, a, open_brace=False), a)

    def grammar(self) -> Grammar:
        name = self.ident("grammar name")
        directed = self.mode()
        self.expect("{")
        self.expect("alphabet")
        a = self.alphabet(directed)
        self.expect("initial")
        it = self.tok
        initial = self.ident("initial label")
        self.expect(";")
        if initial not in a.nonterminal:
            self.fail(f"initial label {initial!r} is not a declared nonterminal", it)
        prods, names = [], set()
        while not self.at("}"):
            self.expect("production")
            nt = self.tok
            pname = self.ident("production name")
            if pname in names:
                self.fail(f"duplicate production {pname!r}", nt)
            names.add(pname)
            self.expect(":")
            lt = self.tok
            lhs = self.ident("left-hand side label")
            if lhs not in a.nonterminal:
                self.fail(f"left-hand side {lhs!r} is not a declared nonterminal", lt)
            prods.append(Production(pname, lhs, self.graph_body(directed, a)))
        self.expect("}")
        return Grammar(a, tuple(prods), initial, name)

    def decoding(self) -> DecodingSystem:
        name = self.ident("decoding name")
        directed = self.mode()
        self.expect("{")
        rules = {}
        while not self.at("}"):
            rt = self.expect("rule")
            self.expect("(")
            alpha = self.ident("encoding label")
            self.expect(",")
            s1 = self.ident("node label")
            self.expect(",")
            s2 = self.ident("node label")
            self.expect(")")
            self.expect("{")
            self.expect("endpoints")
            e1, e2 = self.ident("endpoint"), self.ident("endpoint")
            self.expect(";")
            rhs = self.graph_body(directed, None, open_brace=False)
            if (alpha, s1, s2) in rules:
                self.fail(f"duplicate rule ({alpha}, {s1}, {s2})", rt)
            rules[(alpha, s1, s2)] = DecodingRule((alpha, s1, s2), rhs, (e1, e2))
        self.expect("}")
        return DecodingSystem(rules, name, directed)

    def _ref(self, kind: str):
        """A quoted path to another file, or an inline object of ``kind``."""
        if self.tok.kind == "str":
            t = self.next()
            path = (self.base or Path(".")) / t.text
            try:
                obj = load(path)
            except OSError as exc:
                self.fail(f"cannot read {t.text!r}: {exc.strerror}", t)
            self.expect(";")
            return obj, t.text
        self.expect(kind)
        parse = {"grammar": self.grammar, "decoding": self.decoding}[kind]
        return parse(), None

    def besg(self) -> BesgGrammar:
        name = self.ident("bundle name")
        directed = self.mode()
        self.expect("{")
        self.expect("grammar")
        g, _ = self._ref("grammar")
        self.expect("decoding")
        t, _ = self._ref("decoding")
        self.expect("}")
        if g.directed != directed or t.directed != directed:
            self.fail(f"bundle {name!r} is {'directed' if directed else 'undirected'} "
                      "but a component is not")
        return BesgGrammar(g, t, name)

    def _map(self) -> dict:
        self.expect("{")
        out = {}
        while not self.at("}"):
            k = self.ident()
            self.expect("=")
            out[k] = self.ident()
            self.expect(";")
        self.expect("}")
        return out

    def rule(self) -> GraphRuleSpan:
        name = self.ident("rule name")
        directed = self.mode()
        self.expect("{")
        a = None
        if self.at("alphabet"):
            self.next()
            a = self.alphabet(directed)
        parts = {}
        for part in ("left", "interface", "right"):
            self.expect(part)
            parts[part] = self.graph_body(directed, a)
        self.expect("lmap")
        lmap = self._map()
        self.expect("rmap")
        rmap = self._map()
        self.expect("}")
        return GraphRuleSpan(parts["left"], parts["interface"], parts["right"], lmap, rmap, name)

    def pattern(self) -> BesgRewriteRule:
        name = self.ident("pattern name")
        self.expect("{")
        self.expect("left")
        left, _ = self._ref("grammar")
        self.expect("interface")
        auto = self.at("auto")
        if auto:
            self.next()
            self.expect(";")
            iface = None
        else:
            iface, _ = self._ref("grammar")
        self.expect("right")
        right, _ = self._ref("grammar")
        self.expect("decoding")
        dec, _ = self._ref("decoding")
        corrs = []
        while not self.at("}"):
            self.expect("correspond")
            pi = self.ident("interface production")
            self.expect("=")
            pl = self.ident("left production")
            self.expect(",")
            pr = self.ident("right production")
            lmap, rmap = {}, {}
            if self.at("{"):
                self.next()
                while not self.at("}"):
                    iv = self.ident()
                    self.expect("=")
                    lmap[iv] = self.ident()
                    self.expect(",")
                    rmap[iv] = self.ident()
                    self.expect(";")
                self.expect("}")
            else:
                self.expect(";")
            corrs.append(Correspondence(pi, pl, pr, lmap, rmap))
        self.expect("}")
        if auto:
            return synthesize_interface(BesgGrammar(left, dec), BesgGrammar(right, dec),
                                        [(c.left, c.right) for c in corrs], name)
        return BesgRewriteRule(GrammarPattern(left, iface, right, tuple(corrs), name), dec)

    def script(self) -> NamedScript:
        name = self.ident("script name")
        self.expect("{")
        steps = []
        while not self.at("}"):
            self.expect("step")
            v = self.ident("vertex")
            p = self.ident("production")
            self.expect(";")
            steps.append((v, p))
        self.expect("}")
        return NamedScript(name, DerivationScript(tuple(steps)))


def parse(text: str, source: str = "<text>", base: Path | None = None):
    return Parser(text, source, base).document()


def load(path) -> object:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), str(path), path.parent)


# -- serialization -----------------------------------------------------------

def _q(s: str) -> str:
    return s if _BARE.fullmatch(s) else json.dumps(s)


def _mode(directed: bool) -> str:
    return "directed" if directed else "undirected"


def _alphabet_lines(a: Alphabets, indent: str) -> list:
    out = [f"{indent}alphabet {{"]
    enc = set(a.encoding)
    for kind, labs in (("node", a.node), ("wire", a.wire), ("nonterminal", a.nonterminal),
                       ("edge", set(a.edge) - enc), ("encoding", enc)):
        if labs:
            out.append(f"{indent}  {kind} {' '.join(_q(l) for l in sorted(labs))};")
    out.append(f"{indent}}}")
    return out


def _body_lines(g: Graph, indent: str) -> list:
    out = []
    by_label: dict = {}
    for v, l in sorted(g.labels.items()):
        by_label.setdefault(l, []).append(v)
    for l in sorted(by_label):
        out.append(f"{indent}vertex {' '.join(_q(v) for v in by_label[l])} : {_q(l)};")
    for s, lab, t in sorted(g.edges):
        out.append(f"{indent}edge {_q(s)} {_q(lab)} {_q(t)};")
    for c in sorted(g.connections):
        d = f" {c.d}" if g.directed else ""
        out.append(f"{indent}connect {_q(c.sigma)} {_q(c.beta)} {_q(c.gamma)} {_q(c.x)}{d};")
    return out


def _block(head: str, lines: list, indent: str) -> list:
    return [f"{indent}{head} {{", *lines, f"{indent}}}"]


def serialize_graph(g: Graph, name: str = "g", alphabets: Alphabets | None = None) -> str:
    lines = [HEADER, f"graph {_q(name)} {_mode(g.directed)} {{"]
    if alphabets is not None:
        lines += _alphabet_lines(alphabets, "  ")
    lines += _body_lines(g, "  ")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _grammar_lines(g: Grammar, indent: str) -> list:
    lines = [f"{indent}grammar {_q(g.name)} {_mode(g.directed)} {{"]
    lines += _alphabet_lines(g.alphabets, indent + "  ")
    lines.append(f"{indent}  initial {_q(g.initial)};")
    for p in g.productions:
        lines += _block(f"production {_q(p.name)} : {_q(p.lhs)}", _body_lines(p.rhs, indent + "    "),
                        indent + "  ")
    lines.append(f"{indent}}}")
    return lines


def _decoding_lines(t: DecodingSystem, indent: str) -> list:
    lines = [f"{indent}decoding {_q(t.name)} {_mode(t.directed)} {{"]
    for key, r in sorted(t.rules.items()):
        alpha, s1, s2 = key
        inner = [f"{indent}    endpoints {_q(r.endpoints[0])} {_q(r.endpoints[1])};"]
        inner += _body_lines(r.rhs, indent + "    ")
        lines += _block(f"rule ({_q(alpha)}, {_q(s1)}, {_q(s2)})", inner, indent + "  ")
    lines.append(f"{indent}}}")
    return lines


def serialize_grammar(g: Grammar) -> str:
    return "\n".join([HEADER, *_grammar_lines(g, "")]) + "\n"


def serialize_decoding(t: DecodingSystem) -> str:
    return "\n".join([HEADER, *_decoding_lines(t, "")]) + "\n"


def serialize_besg(b: BesgGrammar, grammar_path: str | None = None, decoding_path: str | None = None) -> str:
    lines = [HEADER, f"besg {_q(b.label)} {_mode(b.grammar.directed)} {{"]
    # each slot holds a quoted path or the slot keyword followed by an inline object
    for slot, path, inner in (("grammar", grammar_path, _grammar_lines(b.grammar, "  ")),
                              ("decoding", decoding_path, _decoding_lines(b.decoding, "  "))):
        if path:
            lines.append(f"  {slot} {json.dumps(path)};")
        else:
            lines.append(f"  {slot} {inner[0].lstrip()}")
            lines += inner[1:]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _map_lines(m: dict, indent: str) -> list:
    return [f"{indent}{_q(k)} = {_q(v)};" for k, v in sorted(m.items())]


def serialize_rule(r: GraphRuleSpan, alphabets: Alphabets | None = None) -> str:
    lines = [HEADER, f"rule {_q(r.name)} {_mode(r.left.directed)} {{"]
    if alphabets is not None:
        lines += _alphabet_lines(alphabets, "  ")
    for part, g in (("left", r.left), ("interface", r.interface), ("right", r.right)):
        lines += _block(part, _body_lines(g, "    "), "  ")
    lines += _block("lmap", _map_lines(r.lmap, "    "), "  ")
    lines += _block("rmap", _map_lines(r.rmap, "    "), "  ")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_pattern(b: BesgRewriteRule, paths: dict | None = None) -> str:
    """``paths`` may give file references for ``left``, ``interface``, ``right`` and ``decoding``."""
    paths = paths or {}
    gp = b.pattern
    lines = [HEADER, f"pattern {_q(gp.name)} {{"]
    for part, g in (("left", gp.left), ("interface", gp.interface), ("right", gp.right)):
        if part in paths:
            lines.append(f"  {part} {json.dumps(paths[part])};")
        else:
            inner = _grammar_lines(g, "  ")
            lines.append(f"  {part} {inner[0].lstrip()}")
            lines += inner[1:]
    if "decoding" in paths:
        lines.append(f"  decoding {json.dumps(paths['decoding'])};")
    else:
        inner = _decoding_lines(b.decoding, "  ")
        lines.append(f"  decoding {inner[0].lstrip()}")
        lines += inner[1:]
    for c in gp.correspondences:
        head = f"  correspond {_q(c.interface)} = {_q(c.left)} , {_q(c.right)}"
        if c.lmap:
            lines.append(head + " {")
            for iv in sorted(c.lmap):
                lines.append(f"    {_q(iv)} = {_q(c.lmap[iv])} , {_q(c.rmap[iv])};")
            lines.append("  }")
        else:
            lines.append(head + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_script(s: DerivationScript, name: str = "script") -> str:
    lines = [HEADER, f"script {_q(name)} {{"]
    lines += [f"  step {_q(v)} {_q(p)};" for v, p in s]
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize(obj, name: str | None = None) -> str:
    if isinstance(obj, NamedGraph):
        return serialize_graph(obj.graph, obj.name, obj.alphabets)
    if isinstance(obj, Graph):
        return serialize_graph(obj, name or "g")
    if isinstance(obj, Grammar):
        return serialize_grammar(obj)
    if isinstance(obj, DecodingSystem):
        return serialize_decoding(obj)
    if isinstance(obj, BesgGrammar):
        return serialize_besg(obj)
    if isinstance(obj, GraphRuleSpan):
        return serialize_rule(obj)
    if isinstance(obj, BesgRewriteRule):
        return serialize_pattern(obj)
    if isinstance(obj, NamedScript):
        return serialize_script(obj.script, obj.name)
    if isinstance(obj, DerivationScript):
        return serialize_script(obj, name or "script")
    raise TypeError(f"cannot serialize {type(obj).__name__}")
