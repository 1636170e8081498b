"""Seeded random generators shared by property tests and the acceptance suite.

Each generator takes a ``random.Random`` so a single integer seed fixes the
instance; hypothesis strategies below just draw that seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from hypothesis import strategies as st

from sgraft.dpo import GraphRuleSpan
from sgraft.graph import IN, OUT, Alphabets, Connection, Graph
from sgraft.stringgraph import DecodingRule, DecodingSystem

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_graph(rng: random.Random, n: int, vlabels=("a", "b"), elabels=("e", "f"),
                 directed: bool = True, p: float = 0.35, prefix: str = "v") -> Graph:
    labels = {f"{prefix}{i}": rng.choice(vlabels) for i in range(n)}
    vs = sorted(labels)
    edges = set()
    for s in vs:
        for t in vs:
            if s == t or (not directed and s > t):
                continue
            if rng.random() < p:
                edges.add((s, rng.choice(elabels), t))
    return Graph.build(labels, edges, directed=directed)


def shuffled_copy(rng: random.Random, g: Graph) -> Graph:
    """``g`` with its vertices renamed by a random bijection."""
    vs = sorted(g.labels)
    names = [f"z{i}" for i in range(len(vs))]
    rng.shuffle(names)
    return g.rename(dict(zip(vs, names)))


# -- encoded string graphs ----------------------------------------------------

def _path(ends: tuple, inner: list, directed: bool) -> Graph:
    """Endpoint ``a``, the labelled inner vertices in order, endpoint ``b``."""
    (a, la), (b, lb) = ends
    labels = {a: la, b: lb}
    chain = [a]
    for k, l in enumerate(inner):
        labels[f"k{k}"] = l
        chain.append(f"k{k}")
    chain.append(b)
    edges = [(chain[i], "e", chain[i + 1]) for i in range(len(chain) - 1)]
    return Graph.build(labels, edges, directed=directed)


def decoding_for(directed: bool) -> tuple:
    """A decoding system total over its alphabet, with rules of different shapes."""
    if directed:
        a = Alphabets.of(node={"g", "r"}, wire={"w"}, edge={"e"}, encoding={"alpha"}, directed=True)
        shapes = {("alpha", "g", "r"): ["w"], ("alpha", "r", "g"): ["w", "w"],
                  ("alpha", "g", "g"): ["w", "r", "w"], ("alpha", "r", "r"): ["w"]}
    else:
        a = Alphabets.of(node={"n", "m"}, wire={"w"}, edge={"e"}, encoding={"alpha", "beta"},
                         directed=False)
        shapes = {("alpha", "n", "n"): ["w"], ("alpha", "m", "m"): ["w", "w"],
                  ("alpha", "m", "n"): ["w", "n", "w"], ("beta", "n", "n"): ["w", "w", "w"]}
    rules = []
    for key, inner in shapes.items():
        _, s1, s2 = key
        rules.append(DecodingRule(key, _path((("a", s1), ("b", s2)), inner, directed), ("a", "b")))
    return a, DecodingSystem.of(rules, "test", directed)


def random_encoded(rng: random.Random, directed: bool, max_vertices: int = 10,
                   max_encoding: int = 4, defect_rate: float = 0.25) -> Graph:
    """A random graph whose encoding edges join node vertices.

    With probability ``defect_rate`` one string-graph defect is planted, so
    both sides of the classification biconditional get exercised.
    """
    a, _ = decoding_for(directed)
    nodes_l = sorted(a.node)
    n_nodes = rng.randint(1, 4)
    n_wires = rng.randint(0, max_vertices - n_nodes)
    labels = {f"u{i}": rng.choice(nodes_l) for i in range(n_nodes)}
    labels.update({f"w{i}": "w" for i in range(n_wires)})
    nodes = [v for v in labels if labels[v] != "w"]
    wires = [v for v in labels if labels[v] == "w"]
    edges = set()
    free_in = set(wires)
    free_out = set(wires)
    for w in wires:
        # hook each wire to at most one predecessor and one successor
        if rng.random() < 0.7:
            cands = nodes + [x for x in wires if x != w and x in free_out]
            src = rng.choice(cands)
            if src in free_out:
                free_out.discard(src)
            if w in free_in:
                free_in.discard(w)
                edges.add((src, "e", w))
        if rng.random() < 0.6 and w in free_out:
            cands = nodes + [x for x in wires if x != w and x in free_in]
            tgt = rng.choice(cands)
            if tgt in free_in:
                free_in.discard(tgt)
            free_out.discard(w)
            if directed or not any({s, t} == {w, tgt} for s, _, t in edges):
                edges.add((w, "e", tgt))
    enc = sorted(a.encoding)
    pairs = [(s, t) for s in nodes for t in nodes if s != t and (directed or s < t)]
    rng.shuffle(pairs)
    for s, t in pairs[:rng.randint(0, max_encoding)]:
        lab = rng.choice(enc)
        if lab == "beta" and not (labels[s] == labels[t] == "n"):
            lab = "alpha"
        edges.add((s, lab, t))
    if rng.random() < defect_rate:
        if len(nodes) >= 2 and rng.random() < 0.5:
            s, t = rng.sample(nodes, 2)
            edges.add((s, "e", t))
        elif wires:
            w = rng.choice(wires)
            for x in rng.sample(nodes, min(len(nodes), 3)):
                edges.add((x, "e", w))
    return Graph.build(labels, edges, directed=directed)


# -- commutation instances --------------------------------------------------------

@dataclass
class CommutationInstance:
    host: Graph
    daughter: Graph
    outer: GraphRuleSpan
    inner: GraphRuleSpan
    m1: dict
    m2: dict
    v: str


def _subset(rng, items, p=0.5) -> list:
    return [x for x in sorted(items) if rng.random() < p]


def commutation_instance(rng: random.Random, directed: bool, max_vertices: int = 8) -> CommutationInstance:
    """A host with a nonterminal ``x`` matched by an outer rule keeping ``x``, and a
    daughter matched by an inner rule; built so that the side conditions hold."""
    vl, el = ("a", "b"), ("e", "f")
    # outer rule: left = x plus 1-2 terminals
    L1 = random_graph(rng, rng.randint(1, 2), vl, el, directed, 0.6, "l")
    labels = dict(L1.labels, x="N")
    edges = set(L1.edges)
    for v in sorted(L1.labels):
        if rng.random() < 0.7:
            edges.add((v, rng.choice(el), "x") if rng.random() < 0.5 or not directed else ("x", rng.choice(el), v))
    L1 = Graph.build(labels, edges, directed=directed)
    kept1 = ["x"] + _subset(rng, set(L1.labels) - {"x"})
    I1 = Graph.build({v: L1.labels[v] for v in kept1},
                     _subset(rng, {e for e in L1.edges if e[0] in kept1 and e[2] in kept1}, 0.7),
                     directed=directed)
    new1 = {f"r{i}": rng.choice(vl) for i in range(rng.randint(0, 2))}
    R1_labels = dict(I1.labels, **new1)
    R1_edges = set(I1.edges)
    rv = sorted(R1_labels)
    for s in rv:
        for t in rv:
            if s != t and (s in new1 or t in new1) and rng.random() < 0.4 and (directed or s < t):
                R1_edges.add((s, rng.choice(el), t))
    R1 = Graph.build(R1_labels, R1_edges, directed=directed)
    ident1 = {v: v for v in I1.labels}
    outer = GraphRuleSpan(L1, I1, R1, ident1, ident1, "outer")

    # host: left plus context hanging off kept terminals only
    budget = max_vertices - len(L1.labels)
    ctx = {f"c{i}": rng.choice(vl) for i in range(rng.randint(0, max(0, min(3, budget))))}
    anchors = [v for v in kept1 if v != "x"] + sorted(ctx)
    h_edges = set(L1.edges)
    for c in sorted(ctx):
        for a in anchors:
            if a != c and rng.random() < 0.4:
                h_edges.add((c, rng.choice(el), a) if rng.random() < 0.5 else (a, rng.choice(el), c))
    host = Graph.build(dict(L1.labels, **ctx), h_edges, directed=directed)

    # inner rule with instructions keyed on labels that actually neighbour x
    around = sorted({(L1.labels[u], lab, d) for lab, u in L1.in_adj("x") for d in [IN]}
                    | {(L1.labels[u], lab, OUT if directed else IN) for lab, u in L1.out_adj("x")})
    L2 = random_graph(rng, rng.randint(1, 3), vl, el, directed, 0.4, "p")

    def instructions(g: Graph, p: float) -> set:
        out = set()
        for y in sorted(g.labels):
            for sigma, beta, d in around:
                if rng.random() < p:
                    out.add(Connection(sigma, beta, rng.choice(el), y, d))
        return out
    L2 = L2.replace(connections=frozenset(instructions(L2, 0.5)))
    kept2 = _subset(rng, L2.labels, 0.6)
    I2 = Graph.build({v: L2.labels[v] for v in kept2},
                     _subset(rng, {e for e in L2.edges if e[0] in kept2 and e[2] in kept2}, 0.7),
                     _subset(rng, {c for c in L2.connections if c.x in kept2}, 0.7), directed=directed)
    new2 = {f"q{i}": rng.choice(vl) for i in range(rng.randint(0, 2))}
    R2 = Graph.build(dict(I2.labels, **new2), set(I2.edges), set(I2.connections), directed=directed)
    extra = set()
    rv2 = sorted(R2.labels)
    for s in rv2:
        for t in rv2:
            if s != t and (s in new2 or t in new2) and rng.random() < 0.4 and (directed or s < t):
                extra.add((s, rng.choice(el), t))
    R2 = R2.replace(edges=R2.edges | {R2.edge(*e) for e in extra},
                    connections=R2.connections | instructions(Graph.build(new2, directed=directed), 0.4))
    ident2 = {v: v for v in I2.labels}
    inner = GraphRuleSpan(L2, I2, R2, ident2, ident2, "inner")

    budget = max_vertices - len(L2.labels)
    ctx2 = {f"k{i}": rng.choice(vl) for i in range(rng.randint(0, max(0, min(2, budget))))}
    anchors2 = kept2 + sorted(ctx2)
    d_edges = set(L2.edges)
    for c in sorted(ctx2):
        for a in anchors2:
            if a != c and rng.random() < 0.4:
                d_edges.add((c, rng.choice(el), a) if rng.random() < 0.5 else (a, rng.choice(el), c))
    daughter = Graph.build(dict(L2.labels, **ctx2), d_edges, L2.connections, directed=directed)
    return CommutationInstance(host, daughter, outer, inner,
                               {v: v for v in L1.labels}, {v: v for v in L2.labels}, "x")
