"""Direct constructions of the running example families.

These builders never go through a grammar, so tests use them as independent
oracles for derivation, decoding and rewriting results.

Undirected families (local complementation): node label ``n``, hub label
``h``, wire label ``w``, edge label ``e``.  Directed families (bialgebra):
green ``g`` and red ``r`` nodes, inputs point into their node, outputs point
away from it, and internal wires run green -> wire -> red.
"""
from __future__ import annotations

from .graph import Alphabets, Graph

LOCALCOMP = Alphabets.of(node={"n", "h", "m"}, wire={"w"}, nonterminal={"S"},
                         edge={"e"}, encoding={"alpha"}, directed=False)
BIALGEBRA = Alphabets.of(node={"g", "r", "x"}, wire={"w"}, nonterminal={"S", "T"},
                         edge={"e"}, encoding={"alpha"}, directed=True)


def complete_string_graph(n: int, decorated: bool = False) -> Graph:
    """sK_n: n nodes, pairwise joined by one-vertex wires, one open wire each.

    ``decorated`` hangs an extra ``m`` node (with its own open wire) on every
    open wire, giving the local complementation host family.
    """
    labels, edges = {}, []
    for i in range(1, n + 1):
        labels[f"u{i}"] = "n"
        labels[f"o{i}"] = "w"
        edges.append((f"u{i}", "e", f"o{i}"))
        if decorated:
            labels[f"m{i}"] = "m"
            labels[f"q{i}"] = "w"
            edges += [(f"o{i}", "e", f"m{i}"), (f"m{i}", "e", f"q{i}")]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            labels[f"c{i}_{j}"] = "w"
            edges += [(f"u{i}", "e", f"c{i}_{j}"), (f"c{i}_{j}", "e", f"u{j}")]
    return Graph.build(labels, edges, directed=False)


def complete_encoded(n: int) -> Graph:
    """K_n with ``alpha`` encoding edges and one open wire per node (pre-decoding sK_n)."""
    labels, edges = {}, []
    for i in range(1, n + 1):
        labels[f"u{i}"] = "n"
        labels[f"o{i}"] = "w"
        edges.append((f"u{i}", "e", f"o{i}"))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            edges.append((f"u{i}", "alpha", f"u{j}"))
    return Graph.build(labels, edges, directed=False)


def star_string_graph(n: int, decorated: bool = False) -> Graph:
    """sS_n: an ``h`` hub plus n-1 ``n`` leaves, one open wire per node."""
    if n < 1:
        raise ValueError("star needs at least the hub")
    labels = {"hub": "h", "o0": "w"}
    edges = [("hub", "e", "o0")]
    if decorated:
        labels.update({"m0": "m", "q0": "w"})
        edges += [("o0", "e", "m0"), ("m0", "e", "q0")]
    for i in range(1, n):
        labels.update({f"u{i}": "n", f"o{i}": "w", f"a{i}": "w"})
        edges += [(f"u{i}", "e", f"o{i}"), (f"u{i}", "e", f"a{i}"), (f"a{i}", "e", "hub")]
        if decorated:
            labels.update({f"m{i}": "m", f"q{i}": "w"})
            edges += [(f"o{i}", "e", f"m{i}"), (f"m{i}", "e", f"q{i}")]
    return Graph.build(labels, edges, directed=False)


def bipartite_string_graph(m: int, n: int, decorated: bool = False) -> Graph:
    """sK_{m,n}: m green nodes with an input each, n red nodes with an output each,
    every green joined to every red by a one-vertex wire.

    ``decorated`` precedes every input by an ``x`` node with its own input.
    """
    labels, edges = {}, []
    for k in range(1, m + 1):
        labels[f"g{k}"] = "g"
        labels[f"i{k}"] = "w"
        edges.append((f"i{k}", "e", f"g{k}"))
        if decorated:
            labels[f"x{k}"] = "x"
            labels[f"j{k}"] = "w"
            edges += [(f"j{k}", "e", f"x{k}"), (f"x{k}", "e", f"i{k}")]
    for j in range(1, n + 1):
        labels[f"r{j}"] = "r"
        labels[f"o{j}"] = "w"
        edges.append((f"r{j}", "e", f"o{j}"))
    for k in range(1, m + 1):
        for j in range(1, n + 1):
            labels[f"c{k}_{j}"] = "w"
            edges += [(f"g{k}", "e", f"c{k}_{j}"), (f"c{k}_{j}", "e", f"r{j}")]
    return Graph.build(labels, edges, directed=True)


def bialgebra_string_graph(m: int, n: int, decorated: bool = False) -> Graph:
    """sS_{m,n}: one red node taking all m inputs, one wire to a green node
    emitting all n outputs."""
    labels = {"R": "r", "G": "g", "c": "w"}
    edges = [("R", "e", "c"), ("c", "e", "G")]
    for k in range(1, m + 1):
        labels[f"i{k}"] = "w"
        edges.append((f"i{k}", "e", "R"))
        if decorated:
            labels[f"x{k}"] = "x"
            labels[f"j{k}"] = "w"
            edges += [(f"j{k}", "e", f"x{k}"), (f"x{k}", "e", f"i{k}")]
    for j in range(1, n + 1):
        labels[f"o{j}"] = "w"
        edges.append(("G", "e", f"o{j}"))
    return Graph.build(labels, edges, directed=True)
