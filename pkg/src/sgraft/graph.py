"""Labeled graphs, connection instructions and edNCE substitution.

A single immutable :class:`Graph` class carries both plain labeled graphs and
extended graphs (graphs with a connection relation).  ``LabeledGraph`` and
``ExtendedGraph`` are aliases kept for readability at call sites.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from .errors import UnknownVertexError
from .report import Report

IN = "in"
OUT = "out"

Edge = tuple  # (source, edge label, target)


class Connection(NamedTuple):
    """Connection instruction ``(sigma, beta, gamma, x, d)``."""

    sigma: str
    beta: str
    gamma: str
    x: str
    d: str = IN


@dataclass(frozen=True)
class Alphabets:
    """Vertex and edge label alphabets plus the graph mode.

    Terminal labels are ``node | wire``; everything in ``nonterminal`` is a
    nonterminal label.  Encoding labels are edge labels too.
    """

    node: frozenset = frozenset()
    wire: frozenset = frozenset()
    nonterminal: frozenset = frozenset()
    edge: frozenset = frozenset()
    encoding: frozenset = frozenset()
    directed: bool = True

    def __post_init__(self):
        for name in ("node", "wire", "nonterminal", "edge", "encoding"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @classmethod
    def of(cls, node=(), wire=(), nonterminal=(), edge=(), encoding=(), directed=True):
        return cls(frozenset(node), frozenset(wire), frozenset(nonterminal),
                   frozenset(edge) | frozenset(encoding), frozenset(encoding), directed)

    @property
    def terminal(self) -> frozenset:
        return self.node | self.wire

    @property
    def sigma(self) -> frozenset:
        return self.node | self.wire | self.nonterminal

    @property
    def gamma(self) -> frozenset:
        return self.edge | self.encoding

    def kind(self, label: str) -> str | None:
        if label in self.node:
            return "node"
        if label in self.wire:
            return "wire"
        if label in self.nonterminal:
            return "nonterminal"
        return None

    def is_nonterminal(self, label: str) -> bool:
        return label in self.nonterminal

    def merge(self, other: "Alphabets") -> "Alphabets":
        if self.directed != other.directed:
            raise ValueError("cannot merge alphabets of different modes")
        return Alphabets(self.node | other.node, self.wire | other.wire,
                         self.nonterminal | other.nonterminal,
                         self.edge | other.edge, self.encoding | other.encoding,
                         self.directed)

    def problems(self) -> list[str]:
        out = []
        for a, b in (("node", "wire"), ("node", "nonterminal"), ("wire", "nonterminal")):
            both = getattr(self, a) & getattr(self, b)
            if both:
                out.append(f"labels {sorted(both)} are both {a} and {b}")
        if not self.encoding <= self.gamma:
            out.append("encoding labels must be edge labels")
        return out


def _canon(edge: Edge, directed: bool) -> Edge:
    s, lab, t = edge
    if not directed and t < s:
        return (t, lab, s)
    return (s, lab, t)


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite vertex- and edge-labeled graph with an optional connection relation.

    Edges are ``(source, label, target)`` triples; in undirected mode each is
    stored with ``source <= target``.  Construction does not validate; use
    :func:`validate_graph` for that.
    """

    labels: Mapping[str, str]
    edges: frozenset = frozenset()
    connections: frozenset = frozenset()
    directed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        object.__setattr__(self, "edges",
                           frozenset(_canon(tuple(e), self.directed) for e in self.edges))
        conns = frozenset(Connection(*c) for c in self.connections)
        if not self.directed:
            conns = frozenset(c._replace(d=IN) for c in conns)
        object.__setattr__(self, "connections", conns)

    @classmethod
    def build(cls, vertices: Mapping[str, str], edges: Iterable = (),
              connections: Iterable = (), directed: bool = True) -> "Graph":
        return cls(dict(vertices), frozenset(tuple(e) for e in edges),
                   frozenset(Connection(*c) for c in connections), directed)

    @classmethod
    def empty(cls, directed: bool = True) -> "Graph":
        return cls({}, directed=directed)

    # identifier-level equality; semantic equality is isomorphism
    def _key(self):
        return (frozenset(self.labels.items()), self.edges, self.connections, self.directed)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"Graph(|V|={len(self.labels)}, |E|={len(self.edges)}, "
                f"|C|={len(self.connections)}, directed={self.directed})")

    def __len__(self):
        return len(self.labels)

    def __contains__(self, v):
        return v in self.labels

    @property
    def vertices(self) -> list[str]:
        return sorted(self.labels)

    def label(self, v: str) -> str:
        try:
            return self.labels[v]
        except KeyError:
            raise UnknownVertexError(v) from None

    @cached_property
    def _adjacency(self):
        out: dict = {v: set() for v in self.labels}
        inc: dict = {v: set() for v in self.labels}
        for s, lab, t in self.edges:
            out.setdefault(s, set()).add((lab, t))
            inc.setdefault(t, set()).add((lab, s))
            if not self.directed:
                out.setdefault(t, set()).add((lab, s))
                inc.setdefault(s, set()).add((lab, t))
        return out, inc

    def out_adj(self, v: str) -> set:
        """``{(edge label, target)}`` for edges leaving ``v`` (all incident edges if undirected)."""
        return self._adjacency[0].get(v, set())

    def in_adj(self, v: str) -> set:
        return self._adjacency[1].get(v, set())

    @cached_property
    def _conns_at(self):
        at: dict = {}
        for c in self.connections:
            at.setdefault(c.x, set()).add(c)
        return at

    def conns_at(self, v: str) -> set:
        return self._conns_at.get(v, set())

    def has_edge(self, s: str, lab: str, t: str) -> bool:
        return _canon((s, lab, t), self.directed) in self.edges

    def incident(self, v: str) -> list:
        return [e for e in self.edges if e[0] == v or e[2] == v]

    def neighbors(self, v: str) -> set:
        return {w for _, w in self.out_adj(v)} | {w for _, w in self.in_adj(v)}

    def in_degree(self, v: str) -> int:
        return len(self.in_adj(v))

    def out_degree(self, v: str) -> int:
        return len(self.out_adj(v))

    def degree(self, v: str) -> int:
        if self.directed:
            return len(self.in_adj(v)) + len(self.out_adj(v))
        return len(self.out_adj(v))

    def edge(self, s: str, lab: str, t: str) -> Edge:
        return _canon((s, lab, t), self.directed)

    # -- structural updates (all return new graphs) --

    def plain(self) -> "Graph":
        """The underlying graph without connection instructions."""
        if not self.connections:
            return self
        return Graph(self.labels, self.edges, frozenset(), self.directed)

    def replace(self, labels=None, edges=None, connections=None) -> "Graph":
        return Graph(self.labels if labels is None else labels,
                     self.edges if edges is None else edges,
                     self.connections if connections is None else connections,
                     self.directed)

    def without(self, vertices: Iterable[str]) -> "Graph":
        drop = set(vertices)
        return Graph({v: l for v, l in self.labels.items() if v not in drop},
                     frozenset(e for e in self.edges if e[0] not in drop and e[2] not in drop),
                     frozenset(c for c in self.connections if c.x not in drop),
                     self.directed)

    def rename(self, mapping: Mapping[str, str]) -> "Graph":
        f = lambda v: mapping.get(v, v)  # noqa: E731
        labels = {f(v): l for v, l in self.labels.items()}
        if len(labels) != len(self.labels):
            raise ValueError("renaming is not injective")
        return Graph(labels,
                     frozenset((f(s), lab, f(t)) for s, lab, t in self.edges),
                     frozenset(c._replace(x=f(c.x)) for c in self.connections),
                     self.directed)

    def union(self, other: "Graph") -> "Graph":
        labels = dict(self.labels)
        for v, l in other.labels.items():
            if labels.setdefault(v, l) != l:
                raise ValueError(f"vertex {v!r} has conflicting labels")
        return Graph(labels, self.edges | other.edges,
                     self.connections | other.connections, self.directed)

    def prefixed(self, prefix: str) -> "Graph":
        return self.rename({v: f"{prefix}{v}" for v in self.labels})


LabeledGraph = Graph
ExtendedGraph = Graph


def fresh_names(names: Iterable[str], taken: set, tag: str = "'") -> dict:
    """Deterministic renaming of ``names`` so that none collides with ``taken``.

    Colliding names get the shortest suffix ``tag``, ``tag2``, ... that is free.
    """
    out = {}
    used = set(taken)
    for v in sorted(names):
        if v not in used:
            out[v] = v
        else:
            i = 1
            cand = f"{v}{tag}"
            while cand in used:
                i += 1
                cand = f"{v}{tag}{i}"
            out[v] = cand
        used.add(out[v])
    return out


def substitute_with_renaming(host: Graph, v: str, daughter: Graph) -> tuple:
    """``host[v/daughter]`` together with the renaming applied to the daughter."""
    if v not in host.labels:
        raise UnknownVertexError(v)
    if host.directed != daughter.directed:
        raise ValueError("host and daughter have different modes")
    taken = set(host.labels) - {v}
    ren = fresh_names(daughter.labels, taken)
    if any(a != b for a, b in ren.items()):
        daughter = daughter.rename(ren)
    directed = host.directed

    labels = {u: l for u, l in host.labels.items() if u != v}
    labels.update(daughter.labels)
    edges = {e for e in host.edges if e[0] != v and e[2] != v}
    edges |= daughter.edges

    # embedding: host neighbours of v reconnect to daughter vertices
    for c in daughter.connections:
        if directed and c.d == OUT:
            for lab, w in host.out_adj(v):
                if lab == c.beta and host.labels[w] == c.sigma:
                    edges.add((c.x, c.gamma, w))
        else:
            for lab, w in host.in_adj(v):
                if lab == c.beta and host.labels[w] == c.sigma:
                    edges.add(_canon((w, c.gamma, c.x), directed))

    conns = {c for c in host.connections if c.x != v}
    by_key: dict = {}
    for c in daughter.connections:
        by_key.setdefault((c.sigma, c.beta, c.d), []).append(c)
    for hc in host.connections:
        if hc.x != v:
            continue
        # (s, b, g, v, d) then (s, g, h, x, d) composes to (s, b, h, x, d)
        for dc in by_key.get((hc.sigma, hc.gamma, hc.d), ()):
            conns.add(Connection(hc.sigma, hc.beta, dc.gamma, dc.x, hc.d))
    return Graph(labels, frozenset(edges), frozenset(conns), directed), ren


def substitute(host: Graph, v: str, daughter: Graph) -> Graph:
    """Replace vertex ``v`` of ``host`` by ``daughter`` using edNCE embedding.

    Daughter identifiers clashing with host identifiers are freshened.
    Host connection instructions at ``v`` are composed through the daughter's
    instructions so nested substitutions behave associatively.
    """
    return substitute_with_renaming(host, v, daughter)[0]


def validate_graph(g: Graph, alphabets: Alphabets | None = None) -> Report:
    report = Report("graph")
    for s, lab, t in sorted(g.edges):
        if s == t:
            report.error("self-loop", f"edge ({s}, {lab}, {t}) is a self-loop", s)
        for end in (s, t):
            if end not in g.labels:
                report.error("dangling-edge", f"edge ({s}, {lab}, {t}) references unknown vertex {end}", end)
    for c in sorted(g.connections):
        if c.x not in g.labels:
            report.error("dangling-connection", f"connection {tuple(c)} targets unknown vertex", c.x)
    if alphabets is not None:
        if alphabets.directed != g.directed:
            report.error("mode", "graph mode differs from alphabet mode")
        for v in g.vertices:
            if g.labels[v] not in alphabets.sigma:
                report.error("unknown-label", f"vertex {v} has undeclared label {g.labels[v]}", v)
        for s, lab, t in sorted(g.edges):
            if lab not in alphabets.gamma:
                report.error("unknown-label", f"edge ({s}, {lab}, {t}) has undeclared label", s)
        for c in sorted(g.connections):
            if c.sigma not in alphabets.sigma:
                report.error("unknown-label", f"connection {tuple(c)} has undeclared vertex label", c.x)
            if c.beta not in alphabets.gamma or c.gamma not in alphabets.gamma:
                report.error("unknown-label", f"connection {tuple(c)} has undeclared edge label", c.x)
    return report


def vertex_kinds(g: Graph, alphabets: Alphabets) -> dict:
    return {v: alphabets.kind(l) for v, l in g.labels.items()}


def nonterminal_vertices(g: Graph, alphabets: Alphabets) -> list[str]:
    return sorted(v for v, l in g.labels.items() if l in alphabets.nonterminal)


def is_terminal(g: Graph, alphabets: Alphabets) -> bool:
    return not any(l in alphabets.nonterminal for l in g.labels.values())


def single_vertex(v: str, label: str, directed: bool = True) -> Graph:
    """The handle ``sn(label, v)``."""
    return Graph({v: label}, directed=directed)
