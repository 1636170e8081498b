"""String graphs, encoded string graphs and decoding systems."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .dpo import GraphRuleSpan, dpo_rewrite
from .errors import ClassificationError, IncompleteDecodingError, MalformedInputError
from .graph import Alphabets, Graph, fresh_names
from .matching import IsoIndex, iter_monomorphisms
from .report import Report

STRING_GRAPH = "string_graph"
ENCODED_STRING_GRAPH = "encoded_string_graph"
NEITHER = "neither"


@dataclass(frozen=True)
class Classification:
    kind: str
    diagnostics: tuple = ()

    @property
    def offending(self) -> list:
        return sorted({v for v, _ in self.diagnostics})


def _defects(g: Graph, a: Alphabets) -> tuple:
    out = []
    has_encoding = False
    for v, l in sorted(g.labels.items()):
        k = a.kind(l)
        if k is None:
            out.append((v, f"undeclared label {l}"))
        elif k == "nonterminal":
            out.append((v, "nonterminal vertex"))
    for s, lab, t in sorted(g.edges):
        ks, kt = a.kind(g.labels.get(s, "")), a.kind(g.labels.get(t, ""))
        if lab in a.encoding:
            has_encoding = True
            if ks != "node" or kt != "node":
                out.append((s, f"encoding edge ({s}, {lab}, {t}) not between node vertices"))
        elif ks == "node" and kt == "node":
            out.append((s, f"node vertices {s} and {t} are directly adjacent"))
    for v, l in sorted(g.labels.items()):
        if a.kind(l) != "wire":
            continue
        if g.directed:
            if g.in_degree(v) > 1:
                out.append((v, f"wire vertex has in-degree {g.in_degree(v)}"))
            if g.out_degree(v) > 1:
                out.append((v, f"wire vertex has out-degree {g.out_degree(v)}"))
        elif g.degree(v) > 2:
            out.append((v, f"wire vertex has degree {g.degree(v)}"))
    return tuple(out), has_encoding


def classify(g: Graph, a: Alphabets) -> Classification:
    """Most specific of string_graph, encoded_string_graph, neither."""
    defects, has_encoding = _defects(g, a)
    if defects:
        return Classification(NEITHER, defects)
    return Classification(ENCODED_STRING_GRAPH if has_encoding else STRING_GRAPH)


def is_string_graph(g: Graph, a: Alphabets) -> bool:
    return classify(g, a).kind == STRING_GRAPH


def is_encoded_string_graph(g: Graph, a: Alphabets) -> bool:
    """String graphs count as encoded string graphs with no encoding edges."""
    return classify(g, a).kind != NEITHER


@dataclass(frozen=True)
class StringGraphView:
    graph: Graph
    inputs: frozenset
    outputs: frozenset


def boundary_wires(g: Graph, a: Alphabets) -> tuple:
    wires = [v for v, l in g.labels.items() if l in a.wire]
    if g.directed:
        ins = frozenset(v for v in wires if g.in_degree(v) == 0)
        outs = frozenset(v for v in wires if g.out_degree(v) == 0)
    else:
        # no orientation: every open end is both an input and an output
        ins = outs = frozenset(v for v in wires if g.degree(v) <= 1)
    return ins, outs


def view(g: Graph, a: Alphabets) -> StringGraphView:
    c = classify(g, a)
    if c.kind != STRING_GRAPH:
        raise ClassificationError(f"not a string graph ({c.kind}): {list(c.diagnostics)[:3]}")
    ins, outs = boundary_wires(g, a)
    return StringGraphView(g, ins, outs)


def io(g, a: Alphabets | None = None) -> tuple:
    """``(inputs, outputs)`` of a string graph or :class:`StringGraphView`."""
    if isinstance(g, StringGraphView):
        return g.inputs, g.outputs
    if a is None:
        raise TypeError("alphabets are required for a bare graph")
    v = view(g, a)
    return v.inputs, v.outputs


# -- decoding systems -------------------------------------------------------

@dataclass(frozen=True)
class DecodingRule:
    key: tuple  # (alpha, sigma1, sigma2)
    rhs: Graph
    endpoints: tuple

    @property
    def interior(self) -> list:
        return sorted(set(self.rhs.labels) - set(self.endpoints))

    def open_ends(self, node_labels) -> list:
        """Interior wires (labels outside ``node_labels``) left open in the rhs."""
        g = self.rhs
        out = []
        for v in self.interior:
            if g.labels[v] in node_labels:
                continue
            if (g.in_degree(v) == 0 or g.out_degree(v) == 0) if g.directed else g.degree(v) <= 1:
                out.append(v)
        return out

    def as_span(self) -> GraphRuleSpan:
        """The DPO rule ``sigma1 -alpha-> sigma2  <-  {e1, e2}  ->  rhs``."""
        alpha, s1, s2 = self.key
        e1, e2 = self.endpoints
        left = Graph.build({e1: s1, e2: s2}, [(e1, alpha, e2)], directed=self.rhs.directed)
        iface = Graph.build({e1: s1, e2: s2}, directed=self.rhs.directed)
        return GraphRuleSpan(left, iface, self.rhs, {e1: e1, e2: e2}, {e1: e1, e2: e2},
                             f"decode{self.key}")


@dataclass(frozen=True)
class DecodingSystem:
    rules: Mapping
    name: str = "decoding"
    directed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "rules", dict(self.rules))

    @classmethod
    def of(cls, rules: Iterable[DecodingRule], name="decoding", directed=True):
        return cls({r.key: r for r in rules}, name, directed)

    @property
    def encoding_labels(self) -> set:
        return {k[0] for k in self.rules}

    @property
    def node_labels(self) -> set:
        return {k[1] for k in self.rules} | {k[2] for k in self.rules}

    def lookup(self, alpha: str, s1: str, s2: str):
        """``(rule, swapped)``; undirected systems also match the reversed key."""
        r = self.rules.get((alpha, s1, s2))
        if r is not None:
            return r, False
        if not self.directed:
            r = self.rules.get((alpha, s2, s1))
            if r is not None:
                return r, True
        return None, False

    def min_interior(self, alpha: str) -> int:
        sizes = [len(r.interior) for k, r in self.rules.items() if k[0] == alpha]
        return min(sizes) if sizes else 1


def used_triples(graphs: Iterable[Graph], a: Alphabets) -> set:
    out = set()
    for g in graphs:
        for s, lab, t in g.edges:
            if lab in a.encoding:
                out.add((lab, g.labels[s], g.labels[t]))
    return out


def validate_decoding(t: DecodingSystem, a: Alphabets, used: Iterable | None = None) -> Report:
    report = Report(t.name)
    for key, rule in sorted(t.rules.items()):
        alpha, s1, s2 = key
        subject = f"({alpha}, {s1}, {s2})"
        rhs = rule.rhs
        if rhs.directed != t.directed:
            report.error("mode", "rule mode differs from decoding system mode", subject)
        if alpha not in a.encoding:
            report.error("alphabet", f"{alpha} is not an encoding label", subject)
        if s1 not in a.node or s2 not in a.node:
            report.error("alphabet", "endpoint labels must be node labels", subject)
        e1, e2 = rule.endpoints
        if e1 == e2:
            report.error("endpoints", "endpoints coincide", subject)
        for e, s in ((e1, s1), (e2, s2)):
            if e not in rhs.labels:
                report.error("endpoints", f"endpoint {e} missing from rhs", subject)
            elif rhs.labels[e] != s:
                report.error("endpoints", f"endpoint {e} labelled {rhs.labels[e]}, expected {s}", subject)
        if len(set(rhs.labels) - {e1, e2}) < 1:
            report.error("too-small", "rhs needs at least one vertex besides the endpoints", subject)
        if any(lab in a.encoding for _, lab, _ in rhs.edges):
            report.error("encoding", "rhs contains encoding edges", subject)
        c = classify(rhs.replace(edges=frozenset(e for e in rhs.edges if e[1] not in a.encoding)), a)
        if c.kind != STRING_GRAPH:
            report.error("not-string-graph", f"rhs is not a string graph: {list(c.diagnostics)}", subject)
        else:
            ins, outs = boundary_wires(rhs, a)
            if ins or outs:
                report.error("open-wires", f"rhs has inputs/outputs {sorted(ins | outs)}", subject)
    used = set(used or ())
    for alpha in sorted(a.encoding):
        for s1 in sorted(a.node):
            for s2 in sorted(a.node):
                if not t.directed and s2 < s1:
                    continue
                if t.lookup(alpha, s1, s2)[0] is not None:
                    continue
                if (alpha, s1, s2) in used or (not t.directed and (alpha, s2, s1) in used):
                    report.error("missing-rule", "no rule for a triple the grammar uses",
                                 f"({alpha}, {s1}, {s2})")
                else:
                    report.warn("missing-rule", "no rule for an unused triple",
                                f"({alpha}, {s1}, {s2})")
    return report


def _encoding_labels(t: DecodingSystem, a: Alphabets | None) -> set:
    return set(a.encoding) if a is not None else t.encoding_labels


def decode(g: Graph, t: DecodingSystem, a: Alphabets | None = None) -> Graph:
    """Replace every encoding edge by a copy of its decoding rule, in one pass."""
    enc = _encoding_labels(t, a)
    redexes = sorted(e for e in g.edges if e[1] in enc)
    if not redexes:
        return g
    labels = dict(g.labels)
    edges = {e for e in g.edges if e[1] not in enc}
    for k, (s, alpha, w) in enumerate(redexes):
        if a is not None and (a.kind(g.labels[s]) != "node" or a.kind(g.labels[w]) != "node"):
            raise MalformedInputError(f"encoding edge ({s}, {alpha}, {w}) touches a non-node vertex")
        rule, swapped = t.lookup(alpha, g.labels[s], g.labels[w])
        if rule is None:
            raise IncompleteDecodingError(f"no decoding rule for ({alpha}, {g.labels[s]}, {g.labels[w]})")
        e1, e2 = rule.endpoints
        ends = {e1: w, e2: s} if swapped else {e1: s, e2: w}
        interior = [v for v in rule.rhs.labels if v not in ends]
        fresh = fresh_names([f"d{k}.{v}" for v in interior], set(labels))
        place = dict(ends)
        for v in interior:
            place[v] = fresh[f"d{k}.{v}"]
            labels[place[v]] = rule.rhs.labels[v]
        for x, lab, y in rule.rhs.edges:
            edges.add(g.edge(place[x], lab, place[y]))
    return Graph(labels, frozenset(edges), g.connections, g.directed)


def decode_sequential(g: Graph, t: DecodingSystem, order: Iterable[int] | None = None,
                      a: Alphabets | None = None) -> Graph:
    """Decode one redex at a time by DPO rewriting, visiting redexes in ``order``.

    ``order`` indexes the sorted list of encoding edges of ``g``.
    """
    enc = _encoding_labels(t, a)
    redexes = sorted(e for e in g.edges if e[1] in enc)
    order = list(range(len(redexes))) if order is None else list(order)
    if sorted(order) != list(range(len(redexes))):
        raise ValueError("order must be a permutation of the redexes")
    for i in order:
        s, alpha, w = redexes[i]
        rule, swapped = t.lookup(alpha, g.labels[s], g.labels[w])
        if rule is None:
            raise IncompleteDecodingError(f"no decoding rule for ({alpha}, {g.labels[s]}, {g.labels[w]})")
        e1, e2 = rule.endpoints
        m = {e1: w, e2: s} if swapped else {e1: s, e2: w}
        g = dpo_rewrite(g, rule.as_span(), m)
    return g


@dataclass(frozen=True)
class Occurrence:
    """An embedded decoding fragment that can be folded back into one encoding edge."""

    key: tuple
    edge: tuple
    interior: frozenset
    edges: frozenset = field(default=frozenset(), compare=False)


def decoding_occurrences(h: Graph, t: DecodingSystem) -> list:
    found = {}
    for key, rule in sorted(t.rules.items()):
        if rule.open_ends(t.node_labels):
            # an rhs with open wires is not a legal decoding fragment
            continue
        e1, e2 = rule.endpoints
        inner = set(rule.rhs.labels) - {e1, e2}
        for m in iter_monomorphisms(rule.rhs, h):
            img_edges = frozenset(h.edge(m[x], lab, m[y]) for x, lab, y in rule.rhs.edges)
            img_inner = frozenset(m[v] for v in inner)
            closed = all(e in img_edges for v in img_inner for e in h.incident(v))
            if not closed:
                continue
            edge = h.edge(m[e1], key[0], m[e2])
            occ = Occurrence(key, edge, img_inner, img_edges)
            found.setdefault((edge, img_inner), occ)
    return [found[k] for k in sorted(found)]


def _contract(h: Graph, chosen) -> Graph:
    drop = set()
    for o in chosen:
        drop |= o.interior
    g = h.without(drop)
    return g.replace(edges=g.edges | {o.edge for o in chosen})


def iter_preimages(h: Graph, t: DecodingSystem, max_contractions: int | None = None) -> Iterator:
    """Yield ``(preimage, occurrences)`` for compatible contraction sets, largest first.

    Not deduplicated; :func:`encode_preimages` is the deduplicated view.
    """
    occs = decoding_occurrences(h, t)
    top = len(occs) if max_contractions is None else min(max_contractions, len(occs))
    for k in range(top, -1, -1):
        for chosen in combinations(occs, k):
            seen_inner: set = set()
            seen_edges: set = set()
            ok = True
            for o in chosen:
                if o.interior & seen_inner or o.edge in seen_edges or o.edge in h.edges:
                    ok = False
                    break
                seen_inner |= o.interior
                seen_edges.add(o.edge)
            if ok:
                yield _contract(h, chosen), chosen


def encode_preimages(h: Graph, t: DecodingSystem, max_contractions: int | None = None,
                     a: Alphabets | None = None) -> list:
    """All graphs (up to isomorphism) that decode to ``h``, ``h`` itself included."""
    if a is not None and classify(h, a).kind != STRING_GRAPH:
        raise ClassificationError("preimages are computed for string graphs only")
    index = IsoIndex()
    for g, _ in iter_preimages(h, t, max_contractions):
        index.add(g)
    return [g for g, _ in index.items]
