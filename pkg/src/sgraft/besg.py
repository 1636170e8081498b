"""B-ESG grammars: a boundary grammar paired with a decoding system."""
from __future__ import annotations

from dataclasses import dataclass

from .ednce import (DerivationScript, Grammar, explore, is_boundary, non_growing_cycles,
                    validate_grammar)
from .errors import ClassificationError, CoherenceError, IncompleteDecodingError, MalformedInputError
from .graph import IN, Graph
from .matching import IsoIndex, are_isomorphic
from .report import Report
from .stringgraph import (NEITHER, STRING_GRAPH, DecodingSystem, classify, decode, iter_preimages,
                          validate_decoding)


@dataclass(frozen=True)
class BesgGrammar:
    grammar: Grammar
    decoding: DecodingSystem
    name: str = ""

    @property
    def alphabets(self):
        return self.grammar.alphabets

    @property
    def label(self) -> str:
        return self.name or self.grammar.name


@dataclass(frozen=True)
class LanguageMember:
    graph: Graph
    encoded: Graph
    script: DerivationScript


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    witness: DerivationScript | None = None
    preimage: Graph | None = None
    candidates: int = 0

    def __bool__(self):
        return self.member


def _used_triples(g: Grammar) -> set:
    a = g.alphabets
    out = set()
    for p in g.productions:
        rhs = p.rhs
        for s, lab, t in rhs.edges:
            ls, lt = rhs.labels[s], rhs.labels[t]
            if lab in a.encoding and ls in a.node and lt in a.node:
                out.add((lab, ls, lt))
        for c in rhs.connections:
            lx = rhs.labels.get(c.x)
            if c.gamma in a.encoding and c.sigma in a.node and lx in a.node:
                out.add((c.gamma, c.sigma, lx) if c.d == IN else (c.gamma, lx, c.sigma))
    return out


def _structural(b: BesgGrammar, report: Report) -> None:
    a = b.alphabets
    for p in b.grammar.productions:
        rhs = p.rhs
        for s, lab, t in sorted(rhs.edges):
            if lab in a.encoding:
                kinds = {a.kind(rhs.labels[s]), a.kind(rhs.labels[t])}
                if "wire" in kinds:
                    report.error("encoding", f"encoding edge ({s}, {lab}, {t}) touches a wire vertex", p.name)
            elif a.kind(rhs.labels[s]) == "node" and a.kind(rhs.labels[t]) == "node":
                report.error("node-adjacency", f"edge ({s}, {lab}, {t}) joins two node vertices", p.name)
        for c in sorted(rhs.connections):
            kx = a.kind(rhs.labels.get(c.x, ""))
            ks = a.kind(c.sigma)
            if c.gamma in a.encoding:
                if kx == "wire" or ks == "wire":
                    report.error("encoding", f"instruction {tuple(c)} creates an encoding edge at a wire", p.name)
            elif ks == "node" and kx == "node":
                report.error("node-adjacency", f"instruction {tuple(c)} joins two node vertices", p.name)
        for x, l in sorted(rhs.labels.items()):
            if l not in a.wire:
                continue
            conns = [c for c in rhs.conns_at(x) if c.gamma not in a.encoding]
            if rhs.directed:
                ins = rhs.in_degree(x) + sum(1 for c in conns if c.d == IN)
                outs = rhs.out_degree(x) + sum(1 for c in conns if c.d != IN)
                if ins > 1:
                    report.error("wire-degree", f"wire {x} can receive {ins} incoming edges", p.name)
                if outs > 1:
                    report.error("wire-degree", f"wire {x} can emit {outs} outgoing edges", p.name)
            else:
                total = rhs.degree(x) + len(conns)
                if total > 2:
                    report.error("wire-degree", f"wire {x} can reach degree {total}", p.name)


def validate_besg(b: BesgGrammar, probe_depth: int = 6) -> Report:
    """Structural checks plus semantic probing of all derivations up to ``probe_depth`` steps."""
    g = b.grammar
    report = Report(b.label)
    report.extend(validate_grammar(g))
    if not is_boundary(g):
        report.error("boundary", "grammar is not a boundary grammar")
    if b.decoding.directed != g.directed:
        report.error("mode", "decoding system mode differs from grammar mode")
    report.extend(validate_decoding(b.decoding, g.alphabets, _used_triples(g)), prefix="decoding:")
    _structural(b, report)
    report.info["probe_depth"] = probe_depth
    if non_growing_cycles(g) or report.errors:
        report.info["probed_forms"] = 0
        return report
    probed = 0
    for form in explore(g, lambda _: 0, 0, max_steps=probe_depth):
        probed += 1
        script = " ".join(f"{v}:{p}" for v, p in form.provenance)
        c = classify(form.graph, g.alphabets)
        if c.kind == NEITHER:
            report.error("coherence", f"terminal form is not an encoded string graph: "
                         f"{list(c.diagnostics)[:3]}", script)
            continue
        try:
            dec = decode(form.graph, b.decoding, g.alphabets)
        except (IncompleteDecodingError, MalformedInputError) as exc:
            report.error("coherence", f"decoding failed: {exc}", script)
            continue
        if classify(dec, g.alphabets).kind != STRING_GRAPH:
            report.error("coherence", "decoded form is not a string graph", script)
    report.info["probed_forms"] = probed
    return report


def decoded_size_bound(b: BesgGrammar):
    """Lower bound on the decoded size of anything derivable from a form; never decreases."""
    a = b.alphabets
    term = a.terminal
    extra = {alpha: b.decoding.min_interior(alpha) for alpha in a.encoding}

    def cost(graph: Graph) -> int:
        n = sum(1 for l in graph.labels.values() if l in term)
        for s, lab, t in graph.edges:
            if lab in extra and graph.labels[s] in term and graph.labels[t] in term:
                n += extra[lab]
        return n
    return cost


def _terminal_forms(b: BesgGrammar, bound: int):
    return explore(b.grammar, decoded_size_bound(b), bound)


def besg_language(b: BesgGrammar, max_vertices: int) -> list:
    """Decoded members with at most ``max_vertices`` vertices, up to isomorphism."""
    index = IsoIndex()
    a = b.alphabets
    for form in _terminal_forms(b, max_vertices):
        try:
            dec = decode(form.graph, b.decoding, a)
        except (IncompleteDecodingError, MalformedInputError) as exc:
            raise CoherenceError(f"{b.label}: {exc}") from exc
        if len(dec.labels) > max_vertices:
            continue
        if classify(dec, a).kind != STRING_GRAPH:
            raise CoherenceError(f"{b.label}: decoded form is not a string graph")
        index.add(dec, LanguageMember(dec, form.graph, form.provenance))
    members = [m for _, m in index.items]
    members.sort(key=lambda m: (len(m.graph.labels), len(m.graph.edges), m.script.steps))
    return members


def membership(b: BesgGrammar, h: Graph) -> MembershipResult:
    """Decide whether ``h`` is (isomorphic to) a member of the language of ``b``."""
    a = b.alphabets
    if classify(h, a).kind != STRING_GRAPH:
        raise ClassificationError("membership is defined for string graphs only")
    forms = IsoIndex()
    for form in _terminal_forms(b, len(h.labels)):
        forms.add(form.graph, form)
    if not len(forms):
        return MembershipResult(False)
    tried = 0
    for h0, _ in iter_preimages(h, b.decoding):
        tried += 1
        if not forms.has_key(h0):
            continue
        form = forms.find(h0)
        if form is not None and are_isomorphic(decode(form.graph, b.decoding, a), h):
            return MembershipResult(True, form.provenance, h0, tried)
    return MembershipResult(False, candidates=tried)
