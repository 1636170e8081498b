"""Double-pushout rewriting of extended graphs and rewrite-rule substitution."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import GluingError, MalformedMorphismError, MalformedSubstitutionError
from .graph import Alphabets, Graph, fresh_names, substitute
from .matching import GraphMorphism, are_isomorphic, is_homomorphism, iter_monomorphisms
from .report import Report, block


@dataclass(frozen=True)
class GraphRuleSpan:
    """Span of monomorphisms ``left <-l- interface -r-> right``."""

    left: Graph
    interface: Graph
    right: Graph
    lmap: Mapping
    rmap: Mapping
    name: str = "rule"

    def __post_init__(self):
        object.__setattr__(self, "lmap", dict(self.lmap))
        object.__setattr__(self, "rmap", dict(self.rmap))

    @property
    def l(self) -> GraphMorphism:
        return GraphMorphism(self.interface, self.left, self.lmap)

    @property
    def r(self) -> GraphMorphism:
        return GraphMorphism(self.interface, self.right, self.rmap)

    @classmethod
    def identity(cls, g: Graph, name: str = "identity") -> "GraphRuleSpan":
        ident = {v: v for v in g.labels}
        return cls(g, g, g, ident, ident, name)

    def inverse(self) -> "GraphRuleSpan":
        return GraphRuleSpan(self.right, self.interface, self.left, self.rmap, self.lmap,
                             f"{self.name}^-1")

    def validate(self) -> Report:
        report = Report(self.name)
        for side, f in (("l", self.l), ("r", self.r)):
            try:
                mono = f.injective and is_homomorphism(f)
            except MalformedMorphismError as exc:
                report.error("malformed", f"{side}: {exc}", side)
                continue
            if not mono:
                report.error("not-mono", f"{side} is not a monomorphism", side)
        return report


@dataclass(frozen=True)
class Matching:
    """A candidate match ``left -> host`` with its gluing diagnostics."""

    mapping: Mapping
    violations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        object.__setattr__(self, "violations", tuple(self.violations))

    @property
    def ok(self) -> bool:
        return not self.violations


def _image_edges(g_from: Graph, g_to: Graph, f: Mapping) -> set:
    return {g_to.edge(f[s], lab, f[t]) for s, lab, t in g_from.edges}


def _check_match(h: Graph, rule: GraphRuleSpan, m: Mapping) -> None:
    L = rule.left
    if set(m) != set(L.labels):
        raise MalformedMorphismError("matching must be total on the left-hand side")
    if len(set(m.values())) != len(m):
        raise MalformedMorphismError("matching is not injective")
    if not is_homomorphism(GraphMorphism(L, h, m)):
        raise MalformedMorphismError("matching does not preserve labels, edges or instructions")


def gluing_violations(h: Graph, rule: GraphRuleSpan, m: Mapping) -> list[str]:
    """Dangling edges and dangling connection instructions at ``m``."""
    _check_match(h, rule, m)
    L = rule.left
    kept = set(rule.lmap.values())
    deleted = {m[v] for v in L.labels if v not in kept}
    matched_edges = _image_edges(L, h, m)
    matched_conns = {c._replace(x=m[c.x]) for c in L.connections}
    out = []
    for e in sorted(h.edges):
        if (e[0] in deleted or e[2] in deleted) and e not in matched_edges:
            out.append(f"dangling edge ({e[0]}, {e[1]}, {e[2]})")
    for c in sorted(h.connections):
        if c.x in deleted and c not in matched_conns:
            out.append(f"dangling connection {tuple(c)}")
    return out


def make_matching(h: Graph, rule: GraphRuleSpan, m: Mapping) -> Matching:
    return Matching(m, gluing_violations(h, rule, m))


def find_matches(h: Graph, rule: GraphRuleSpan, *, valid_only: bool = True) -> list[Matching]:
    """Matches of ``rule.left`` in ``h``, sorted, optionally filtered by gluing."""
    keys = sorted(rule.left.labels)
    maps = sorted(iter_monomorphisms(rule.left, h), key=lambda m: [m[k] for k in keys])
    out = []
    for m in maps:
        match = make_matching(h, rule, m)
        if match.ok or not valid_only:
            out.append(match)
    return out


def dpo_apply(h: Graph, rule: GraphRuleSpan, m) -> tuple:
    """Rewrite ``h`` at ``m``; return ``(result, comatch)`` with comatch ``right -> result``.

    Host identifiers survive; new right-hand-side vertices keep their own
    identifiers unless those clash, in which case they are freshened.
    """
    mapping = m.mapping if isinstance(m, Matching) else dict(m)
    violations = gluing_violations(h, rule, mapping)
    if violations:
        raise GluingError(violations)
    L, I, R = rule.left, rule.interface, rule.right
    kept = set(rule.lmap.values())
    deleted = {mapping[v] for v in L.labels if v not in kept}
    kept_edges = _image_edges(I, L, rule.lmap)
    del_edges = {h.edge(mapping[s], lab, mapping[t]) for s, lab, t in L.edges
                 if (s, lab, t) not in kept_edges}
    kept_conns = {c._replace(x=rule.lmap[c.x]) for c in I.connections}
    del_conns = {c._replace(x=mapping[c.x]) for c in L.connections if c not in kept_conns}

    labels = {v: l for v, l in h.labels.items() if v not in deleted}
    edges = {e for e in h.edges
             if e not in del_edges and e[0] not in deleted and e[2] not in deleted}
    conns = {c for c in h.connections if c not in del_conns and c.x not in deleted}

    rinv = {rv: iv for iv, rv in rule.rmap.items()}
    new = [v for v in R.labels if v not in rinv]
    fresh = fresh_names(new, set(labels))
    comatch = {}
    for v in R.labels:
        if v in rinv:
            comatch[v] = mapping[rule.lmap[rinv[v]]]
        else:
            comatch[v] = fresh[v]
            labels[fresh[v]] = R.labels[v]
    for s, lab, t in R.edges:
        edges.add(h.edge(comatch[s], lab, comatch[t]))
    for c in R.connections:
        conns.add(c._replace(x=comatch[c.x]))
    return Graph(labels, frozenset(edges), frozenset(conns), h.directed), comatch


def dpo_rewrite(h: Graph, rule: GraphRuleSpan, m) -> Graph:
    return dpo_apply(h, rule, m)[0]


def substituted_mono(m1: GraphMorphism, m2: GraphMorphism, x: str) -> GraphMorphism:
    """The mono ``G[x/D] -> G'[m1(x)/D']`` acting as ``m1`` on G and ``m2`` on D."""
    G, Gp, D, Dp = m1.source, m1.target, m2.source, m2.target
    if x not in G.labels:
        raise MalformedSubstitutionError(f"{x!r} is not a vertex of the mother graph")
    for f, name in ((m1, "m1"), (m2, "m2")):
        try:
            good = f.injective and is_homomorphism(f)
        except MalformedMorphismError as exc:
            raise MalformedSubstitutionError(f"{name}: {exc}") from exc
        if not good:
            raise MalformedSubstitutionError(f"{name} is not a monomorphism")
    if set(D.labels) & (set(G.labels) - {x}):
        raise MalformedSubstitutionError("daughter identifiers overlap the mother graph")
    x2 = m1.vertex_map[x]
    if set(Dp.labels) & (set(Gp.labels) - {x2}):
        raise MalformedSubstitutionError("target daughter identifiers overlap the target graph")
    vmap = {v: w for v, w in m1.vertex_map.items() if v != x}
    for v, w in m2.vertex_map.items():
        vmap[v] = w
    if len(set(vmap.values())) != len(vmap):
        raise MalformedSubstitutionError("images of the two monomorphisms overlap")
    src = substitute(G, x, D)
    tgt = substitute(Gp, x2, Dp)
    f = GraphMorphism(src, tgt, vmap)
    if not is_homomorphism(f):
        raise MalformedSubstitutionError("induced map is not a homomorphism")
    return f


def _prefix_for(taken: set, base: str) -> str:
    k = 1
    while True:
        pre = f"{base}{k}."
        if not any(t.startswith(pre) for t in taken):
            return pre
        k += 1


def _prefixed_span(b: GraphRuleSpan, pre: str) -> GraphRuleSpan:
    return GraphRuleSpan(b.left.prefixed(pre), b.interface.prefixed(pre), b.right.prefixed(pre),
                         {pre + i: pre + v for i, v in b.lmap.items()},
                         {pre + i: pre + v for i, v in b.rmap.items()}, b.name)


def rule_substitute(b1: GraphRuleSpan, v: str, b2: GraphRuleSpan) -> GraphRuleSpan:
    """``b1[v/b2]``: substitute the components of ``b2`` for ``v`` in ``b1``.

    ``b2`` is renamed apart (with a ``b<k>.`` prefix) when its identifiers
    collide with ``b1``'s.
    """
    if v not in b1.interface.labels:
        raise MalformedSubstitutionError(f"{v!r} is not an interface vertex")
    taken = set(b1.left.labels) | set(b1.interface.labels) | set(b1.right.labels)
    mine = set(b2.left.labels) | set(b2.interface.labels) | set(b2.right.labels)
    if taken & mine:
        b2 = _prefixed_span(b2, _prefix_for(taken, "b"))
    l3 = substituted_mono(b1.l, b2.l, v)
    r3 = substituted_mono(b1.r, b2.r, v)
    return GraphRuleSpan(l3.target, l3.source, r3.target, l3.vertex_map, r3.vertex_map,
                         f"{b1.name}[{v}/{b2.name}]")


# -- substitution / rewriting commutation -----------------------------------

@dataclass
class CommutationVerdict:
    holds: bool | None
    reasons: list = field(default_factory=list)
    substituted_then_rewritten: Graph | None = None
    rewritten_then_substituted: Graph | None = None

    def to_text(self) -> str:
        status = {True: "commutes", False: "counterexample", None: "precondition-failed"}[self.holds]
        fields = {"status": status}
        for n, r in enumerate(self.reasons):
            fields[f"reason.{n}"] = r
        for key, g in (("left", self.substituted_then_rewritten),
                       ("right", self.rewritten_then_substituted)):
            if g is not None:
                fields[f"{key}.vertices"] = len(g.labels)
                fields[f"{key}.edges"] = len(g.edges)
        return block("commutation", "verdict", fields)


def commutation_side_conditions(h: Graph, d: Graph, b1: GraphRuleSpan, b2: GraphRuleSpan,
                                m1: Mapping, m2: Mapping, v: str,
                                alphabets: Alphabets | None = None) -> list[str]:
    """Reasons why the commutation square is not covered by the implemented conditions.

    Conditions: both rewrites defined; ``v`` an interface vertex; every edge
    and instruction of ``h`` at ``m1(l1(v))`` is matched by an item of the
    left-hand side at ``l1(v)``; every instruction of ``d`` is matched by ``m2``;
    with alphabets, both graphs are boundary.
    """
    reasons = []
    for name, g, b, m in (("host", h, b1, m1), ("daughter", d, b2, m2)):
        try:
            bad = gluing_violations(g, b, m)
        except MalformedMorphismError as exc:
            reasons.append(f"{name} matching malformed: {exc}")
            continue
        reasons += [f"{name}: {x}" for x in bad]
    if v not in b1.interface.labels:
        reasons.append(f"{v!r} is not an interface vertex of the outer rule")
        return reasons
    if reasons:
        return reasons
    lv = b1.lmap[v]
    x = m1[lv]
    at_lv = {h.edge(m1[s], lab, m1[t]) for s, lab, t in b1.left.edges if lv in (s, t)}
    for e in sorted(h.edges):
        if x in (e[0], e[2]) and e not in at_lv:
            reasons.append(f"host edge {e} at the substituted vertex is not matched")
    conns_lv = {c._replace(x=x) for c in b1.left.conns_at(lv)}
    for c in sorted(h.conns_at(x)):
        if c not in conns_lv:
            reasons.append(f"host instruction {tuple(c)} at the substituted vertex is not matched")
    matched = {c._replace(x=m2[c.x]) for c in b2.left.connections}
    for c in sorted(d.connections):
        if c not in matched:
            reasons.append(f"daughter instruction {tuple(c)} is not matched")
    if alphabets is not None:
        nt = alphabets.nonterminal
        for name, g in (("host", h), ("daughter", d)):
            for s, lab, t in g.edges:
                if g.labels[s] in nt and g.labels[t] in nt:
                    reasons.append(f"{name} is not boundary: edge ({s}, {lab}, {t})")
            for c in g.connections:
                if c.sigma in nt:
                    reasons.append(f"{name} is not boundary: instruction {tuple(c)}")
    return reasons


def check_commutation(h: Graph, d: Graph, b1: GraphRuleSpan, b2: GraphRuleSpan,
                      m1: Mapping, m2: Mapping, v: str,
                      alphabets: Alphabets | None = None) -> CommutationVerdict:
    """Compare ``rewrite(h[x/d], b1[v/b2], SM(m1, m2))`` with ``rewrite(h, b1)[x'/rewrite(d, b2)]``."""
    m1, m2 = dict(m1), dict(m2)
    reasons = commutation_side_conditions(h, d, b1, b2, m1, m2, v, alphabets)
    if reasons:
        return CommutationVerdict(None, reasons)
    # rename the daughter side apart so no substitution needs freshening
    taken = (set(h.labels) | set(b1.left.labels) | set(b1.interface.labels)
             | set(b1.right.labels))
    pre = _prefix_for(taken, "d")
    d = d.prefixed(pre)
    m2 = {pre + a: pre + b for a, b in m2.items()}
    b2 = _prefixed_span(b2, pre)

    b3 = rule_substitute(b1, v, b2)
    m3 = substituted_mono(GraphMorphism(b1.left, h, m1), GraphMorphism(b2.left, d, m2),
                          b1.lmap[v])
    h2, comatch = dpo_apply(h, b1, m1)
    d2 = dpo_rewrite(d, b2, m2)
    right = substitute(h2, comatch[b1.rmap[v]], d2)
    try:
        left = dpo_rewrite(m3.target, b3, m3.vertex_map)
    except GluingError as exc:
        return CommutationVerdict(False, [f"substituted rewrite undefined: {msg}" for msg in exc.violations],
                                  None, right)
    holds = are_isomorphic(left, right)
    return CommutationVerdict(holds, [] if holds else ["results are not isomorphic"], left, right)
