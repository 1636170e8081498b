"""Homomorphisms, monomorphism search and isomorphism of (extended) graphs.

The search is a plain backtracking matcher: pattern vertices are ordered so
that each one (after the first of a component) is adjacent to an already
mapped vertex, and candidates are filtered by label, local degree signature
and connection instructions.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import MalformedMorphismError
from .graph import Graph


@dataclass(frozen=True)
class GraphMorphism:
    source: Graph
    target: Graph
    vertex_map: Mapping[str, str]

    def __call__(self, v):
        return self.vertex_map[v]

    @property
    def injective(self) -> bool:
        return len(set(self.vertex_map.values())) == len(self.vertex_map)


def is_homomorphism(f: GraphMorphism) -> bool:
    """Label-, edge- and instruction-preserving check of a vertex map."""
    src, tgt, m = f.source, f.target, f.vertex_map
    for v, w in m.items():
        if v not in src.labels or w not in tgt.labels:
            bad = v if v not in src.labels else w
            raise MalformedMorphismError(f"vertex map references unknown vertex {bad!r}")
    if set(m) != set(src.labels):
        return False
    if src.directed != tgt.directed:
        return False
    for v, w in m.items():
        if src.labels[v] != tgt.labels[w]:
            return False
    for s, lab, t in src.edges:
        if not tgt.has_edge(m[s], lab, m[t]):
            return False
    for c in src.connections:
        if c._replace(x=m[c.x]) not in tgt.connections:
            return False
    return True


def is_monomorphism(f: GraphMorphism) -> bool:
    return f.injective and is_homomorphism(f)


def _signature(g: Graph, v: str) -> Counter:
    sig = Counter()
    labels = g.labels
    for lab, w in g.out_adj(v):
        sig[("o", lab, labels[w])] += 1
    if g.directed:
        for lab, w in g.in_adj(v):
            sig[("i", lab, labels[w])] += 1
    return sig


def _conn_keys(g: Graph, v: str) -> frozenset:
    return frozenset((c.sigma, c.beta, c.gamma, c.d) for c in g.conns_at(v))


def _order(pattern: Graph, cands: dict) -> list:
    remaining = set(pattern.labels)
    order = []
    placed = set()
    while remaining:
        frontier = [v for v in remaining if pattern.neighbors(v) & placed]
        pool = frontier or list(remaining)
        v = min(pool, key=lambda u: (-len(pattern.neighbors(u) & placed), len(cands[u]), u))
        order.append(v)
        placed.add(v)
        remaining.discard(v)
    return order


def iter_monomorphisms(pattern: Graph, host: Graph, *, exact: bool = False,
                       seed_map: Mapping | None = None) -> Iterator[dict]:
    """Yield injective label/edge/instruction-preserving vertex maps.

    With ``exact`` the local signatures must agree, which is what
    isomorphism search needs (sizes are checked by the caller).
    ``seed_map`` fixes the images of some pattern vertices.
    """
    if pattern.directed != host.directed:
        return
    if len(pattern.labels) > len(host.labels):
        return
    seed_map = dict(seed_map or {})
    by_label: dict = {}
    for w, l in host.labels.items():
        by_label.setdefault(l, []).append(w)
    host_sig = {}
    cands = {}
    for v, l in pattern.labels.items():
        psig = _signature(pattern, v)
        pconn = _conn_keys(pattern, v)
        ok = []
        for w in by_label.get(l, ()):
            if w not in host_sig:
                host_sig[w] = _signature(host, w)
            hs = host_sig[w]
            if exact:
                if hs != psig or _conn_keys(host, w) != pconn:
                    continue
            else:
                if any(hs[k] < n for k, n in psig.items()):
                    continue
                if not pconn <= _conn_keys(host, w):
                    continue
            ok.append(w)
        if v in seed_map:
            ok = [w for w in ok if w == seed_map[v]]
        if not ok:
            return
        cands[v] = ok
    order = _order(pattern, cands)
    pos = {v: i for i, v in enumerate(order)}
    # for each position, edges to earlier vertices as (label, other, v_is_source)
    back = []
    for i, v in enumerate(order):
        cons = []
        for lab, u in pattern.out_adj(v):
            if pos[u] < i:
                cons.append((lab, u, True))
        if pattern.directed:
            for lab, u in pattern.in_adj(v):
                if pos[u] < i:
                    cons.append((lab, u, False))
        back.append(cons)
    cand_sets = {v: set(c) for v, c in cands.items()}
    n = len(order)
    mapping: dict = {}
    used: set = set()

    def candidates(i):
        v = order[i]
        cons = back[i]
        if not cons:
            return cands[v]
        lab, u, v_src = cons[0]
        fu = mapping[u]
        adj = host.in_adj(fu) if v_src else host.out_adj(fu)
        if not host.directed:
            adj = host.out_adj(fu)
        return sorted(w for l2, w in adj if l2 == lab and w in cand_sets[v])

    def consistent(i, w):
        for lab, u, v_src in back[i]:
            fu = mapping[u]
            if v_src:
                if not host.has_edge(w, lab, fu):
                    return False
            elif not host.has_edge(fu, lab, w):
                return False
        if exact:
            # no extra host edges between w and already-mapped images
            count = sum(1 for _, x in host.out_adj(w) if x in used)
            if host.directed:
                count += sum(1 for _, x in host.in_adj(w) if x in used)
            if count != len(back[i]):
                return False
        return True

    def rec(i):
        if i == n:
            yield dict(mapping)
            return
        v = order[i]
        for w in candidates(i):
            if w in used or not consistent(i, w):
                continue
            mapping[v] = w
            used.add(w)
            yield from rec(i + 1)
            used.discard(w)
            del mapping[v]

    for m in rec(0):
        if pattern.connections and not all(
                c._replace(x=m[c.x]) in host.connections for c in pattern.connections):
            continue
        yield m


def find_monomorphisms(pattern: Graph, host: Graph) -> list[GraphMorphism]:
    """All monomorphisms ``pattern -> host`` in deterministic order."""
    keys = sorted(pattern.labels)
    maps = sorted(iter_monomorphisms(pattern, host), key=lambda m: [m[k] for k in keys])
    return [GraphMorphism(pattern, host, m) for m in maps]


def invariant(g: Graph) -> tuple:
    """Cheap isomorphism invariant: per-vertex label, signature and instructions."""
    per = []
    for v, l in g.labels.items():
        per.append((l, tuple(sorted(_signature(g, v).items())),
                    tuple(sorted(_conn_keys(g, v)))))
    per.sort()
    return (g.directed, len(g.edges), len(g.connections), tuple(per))


def find_isomorphism(g: Graph, h: Graph) -> dict | None:
    if (len(g.labels) != len(h.labels) or len(g.edges) != len(h.edges)
            or len(g.connections) != len(h.connections) or g.directed != h.directed):
        return None
    if Counter(g.labels.values()) != Counter(h.labels.values()):
        return None
    for m in iter_monomorphisms(g, h, exact=True):
        return m
    return None


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


class IsoIndex:
    """Collects graphs up to isomorphism, bucketed by :func:`invariant`."""

    def __init__(self):
        self._buckets: dict = {}
        self.items: list = []

    def find(self, g: Graph):
        for other, payload in self._buckets.get(invariant(g), ()):
            if are_isomorphic(g, other):
                return payload
        return None

    def add(self, g: Graph, payload=None) -> bool:
        """Add ``g``; return False when an isomorphic graph was already present."""
        key = invariant(g)
        bucket = self._buckets.setdefault(key, [])
        for other, _ in bucket:
            if are_isomorphic(g, other):
                return False
        bucket.append((g, payload))
        self.items.append((g, payload))
        return True

    def has_key(self, g: Graph) -> bool:
        return invariant(g) in self._buckets

    def __len__(self):
        return len(self.items)
