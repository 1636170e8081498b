"""edNCE / B-edNCE grammars: derivation, bounded enumeration and analysis."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .errors import (MalformedMorphismError, NonGrowingCycleError, NotNonterminalError,
                     ReplayError, SgraftError, UnknownVertexError, WrongProductionError)
from .graph import Alphabets, Graph, nonterminal_vertices, substitute, validate_graph
from .matching import GraphMorphism, IsoIndex, is_homomorphism
from .report import Report

ROOT = "root"


@dataclass(frozen=True)
class Production:
    name: str
    lhs: str
    rhs: Graph


@dataclass(frozen=True)
class Grammar:
    alphabets: Alphabets
    productions: tuple
    initial: str
    name: str = "grammar"

    def __post_init__(self):
        object.__setattr__(self, "productions", tuple(self.productions))

    @property
    def directed(self) -> bool:
        return self.alphabets.directed

    def production(self, name: str) -> Production:
        for p in self.productions:
            if p.name == name:
                return p
        raise KeyError(name)

    def productions_for(self, label: str) -> list:
        return [p for p in self.productions if p.lhs == label]

    @property
    def names(self) -> list:
        return [p.name for p in self.productions]

    def with_productions(self, productions, name=None) -> "Grammar":
        return Grammar(self.alphabets, tuple(productions), self.initial, name or self.name)


@dataclass(frozen=True)
class DerivationScript:
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(tuple(s) for s in self.steps))

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def then(self, vertex: str, production: str) -> "DerivationScript":
        return DerivationScript(self.steps + ((vertex, production),))


@dataclass(frozen=True)
class SententialForm:
    graph: Graph
    provenance: DerivationScript = field(default_factory=DerivationScript)
    concrete: bool = False


def is_boundary(g: Grammar) -> bool:
    nt = g.alphabets.nonterminal
    for p in g.productions:
        rhs = p.rhs
        for s, _, t in rhs.edges:
            if rhs.labels.get(s) in nt and rhs.labels.get(t) in nt:
                return False
        if any(c.sigma in nt for c in rhs.connections):
            return False
    return True


def terminal_growth(p: Production, alphabets: Alphabets) -> int:
    return sum(1 for l in p.rhs.labels.values() if l in alphabets.terminal)


def non_growing_cycles(g: Grammar) -> list:
    """Strongly connected groups of nonterminals that can rewrite into each
    other without adding any terminal vertex."""
    nt = g.alphabets.nonterminal
    succ: dict = {x: set() for x in nt}
    for p in g.productions:
        if p.lhs in nt and terminal_growth(p, g.alphabets) == 0:
            succ.setdefault(p.lhs, set()).update(l for l in p.rhs.labels.values() if l in nt)
    cycles = []
    for comp in _sccs(succ):
        if len(comp) > 1 or any(x in succ.get(x, ()) for x in comp):
            cycles.append(sorted(comp))
    return sorted(cycles)


def _sccs(succ: Mapping) -> list:
    index, low, stack, on, out = {}, {}, [], set(), []
    counter = [0]

    def visit(v):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        for w in sorted(succ.get(v, ())):
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = set()
            while True:
                w = stack.pop()
                on.discard(w)
                comp.add(w)
                if w == v:
                    break
            out.append(comp)

    for v in sorted(succ):
        if v not in index:
            visit(v)
    return out


def validate_grammar(g: Grammar) -> Report:
    a = g.alphabets
    report = Report(g.name)
    for msg in a.problems():
        report.error("alphabet", msg)
    if g.initial not in a.nonterminal:
        report.error("alphabet", f"initial label {g.initial} is not a nonterminal")
    seen = set()
    for p in g.productions:
        if p.name in seen:
            report.error("duplicate", f"production name {p.name} repeated", p.name)
        seen.add(p.name)
        if p.lhs not in a.nonterminal:
            report.error("alphabet", f"lhs {p.lhs} is not a nonterminal", p.name)
        if p.rhs.directed != a.directed:
            report.error("mode", "production mode differs from grammar mode", p.name)
        report.extend(validate_graph(p.rhs, a), prefix=f"{p.name}:")
        rhs = p.rhs
        for s, lab, t in sorted(rhs.edges):
            if rhs.labels.get(s) in a.nonterminal and rhs.labels.get(t) in a.nonterminal:
                report.error("boundary", f"edge ({s}, {lab}, {t}) joins two nonterminals", p.name)
        keys: dict = {}
        for c in sorted(rhs.connections):
            if c.sigma in a.nonterminal:
                report.error("boundary", f"connection {tuple(c)} is keyed on nonterminal {c.sigma}", p.name)
            keys.setdefault((c.sigma, c.beta, c.d), set()).add(c.x)
        for key, xs in sorted(keys.items()):
            if len(xs) > 1:
                report.warn("fan-out", f"instructions {key} reconnect to {sorted(xs)}; "
                            "composition through nested nonterminals duplicates them", p.name)

    productive: set = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs in productive:
                continue
            needed = {l for l in p.rhs.labels.values() if l in a.nonterminal}
            if needed <= productive:
                productive.add(p.lhs)
                changed = True
    reachable = {g.initial}
    frontier = [g.initial]
    while frontier:
        x = frontier.pop()
        for p in g.productions_for(x):
            for l in p.rhs.labels.values():
                if l in a.nonterminal and l not in reachable:
                    reachable.add(l)
                    frontier.append(l)
    used = {p.lhs for p in g.productions} | {l for p in g.productions
                                             for l in p.rhs.labels.values() if l in a.nonterminal}
    for x in sorted(used | {g.initial}):
        if x not in productive:
            report.error("unproductive", f"nonterminal {x} derives no terminal graph", x)
        if x not in reachable:
            report.warn("unreachable", f"nonterminal {x} is unreachable from {g.initial}", x)
    cycles = non_growing_cycles(g)
    for cyc in cycles:
        report.error("non-growing-cycle", f"nonterminals {cyc} can cycle without adding terminals")
    report.info["boundary"] = is_boundary(g)
    report.info["productions"] = len(g.productions)
    return report


def initial_form(g: Grammar) -> SententialForm:
    return SententialForm(Graph({ROOT: g.initial}, directed=g.directed))


def fresh_copy(rhs: Graph, step: int) -> Graph:
    return rhs.prefixed(f"{step}.")


def derive_step(form: SententialForm, v: str, production: str, g: Grammar) -> SententialForm:
    graph = form.graph
    if v not in graph.labels:
        raise UnknownVertexError(v)
    label = graph.labels[v]
    if label not in g.alphabets.nonterminal:
        raise NotNonterminalError(f"vertex {v!r} has terminal label {label!r}")
    try:
        p = g.production(production)
    except KeyError:
        raise WrongProductionError(f"no production named {production!r}") from None
    if p.lhs != label:
        raise WrongProductionError(f"production {production} rewrites {p.lhs}, vertex {v} is {label}")
    step = len(form.provenance) + 1
    new = substitute(graph, v, fresh_copy(p.rhs, step))
    concrete = not nonterminal_vertices(new, g.alphabets)
    return SententialForm(new, form.provenance.then(v, production), concrete)


def run_script(g: Grammar, script: DerivationScript, start: SententialForm | None = None) -> SententialForm:
    form = start or initial_form(g)
    for i, (v, p) in enumerate(script, start=1):
        try:
            form = derive_step(form, v, p, g)
        except SgraftError as exc:
            raise ReplayError(i, str(exc)) from exc
    return form


def leftmost_nonterminal(graph: Graph, alphabets: Alphabets) -> str | None:
    nts = nonterminal_vertices(graph, alphabets)
    return nts[0] if nts else None


def explore(g: Grammar, cost: Callable[[Graph], int], bound: int,
            max_steps: int | None = None) -> Iterator[SententialForm]:
    """Breadth-first leftmost derivations, pruning forms whose ``cost`` exceeds
    ``bound``; yields every terminal form reached (not deduplicated).

    ``cost`` must never decrease along a derivation.  Expanding only the
    leftmost nonterminal is complete because boundary derivations commute.
    """
    cycles = non_growing_cycles(g)
    if cycles:
        raise NonGrowingCycleError(cycles)
    frontier = [initial_form(g)]
    depth = 0
    while frontier:
        nxt = IsoIndex()
        for form in frontier:
            v = leftmost_nonterminal(form.graph, g.alphabets)
            if v is None:
                yield form
                continue
            if max_steps is not None and depth >= max_steps:
                continue
            for p in g.productions_for(form.graph.labels[v]):
                child = derive_step(form, v, p.name, g)
                if cost(child.graph) > bound:
                    continue
                nxt.add(child.graph, child)
        frontier = [payload for _, payload in nxt.items]
        depth += 1


def terminal_count(alphabets: Alphabets) -> Callable[[Graph], int]:
    term = alphabets.terminal
    return lambda graph: sum(1 for l in graph.labels.values() if l in term)


def enumerate_language(g: Grammar, max_vertices: int, max_steps: int | None = None) -> list:
    """Terminal sentential forms with at most ``max_vertices`` vertices, up to isomorphism.

    Returns :class:`SententialForm` objects whose provenance is a witness script.
    Without ``max_steps`` the search is bounded by vertex growth alone, which
    terminates because non-growing cycles are refused.
    """
    index = IsoIndex()
    for form in explore(g, terminal_count(g.alphabets), max_vertices, max_steps):
        index.add(form.graph, form)
    forms = [payload for _, payload in index.items]
    forms.sort(key=lambda f: (len(f.graph.labels), len(f.graph.edges), f.provenance.steps))
    return forms


def grammar_homomorphism_check(production_map: Mapping, components: Mapping,
                               g1: Grammar, g2: Grammar) -> bool:
    """Is ``(production_map, components)`` a grammar homomorphism ``g1 -> g2``?"""
    for p in g1.productions:
        if p.name not in production_map:
            raise MalformedMorphismError(f"production {p.name} is not mapped")
        if p.name not in components:
            raise MalformedMorphismError(f"no component for production {p.name}")
        try:
            q = g2.production(production_map[p.name])
        except KeyError:
            raise MalformedMorphismError(f"unknown target production {production_map[p.name]}") from None
        if p.lhs != q.lhs:
            return False
        if not is_homomorphism(GraphMorphism(p.rhs, q.rhs, components[p.name])):
            return False
    return True


def concrete_scripts(g: Grammar, max_steps: int) -> list:
    """Every leftmost script of at most ``max_steps`` steps ending in a terminal form."""
    out = []

    def rec(form: SententialForm):
        v = leftmost_nonterminal(form.graph, g.alphabets)
        if v is None:
            out.append(form.provenance)
            return
        if len(form.provenance) >= max_steps:
            return
        for p in g.productions_for(form.graph.labels[v]):
            rec(derive_step(form, v, p.name, g))

    rec(initial_form(g))
    return sorted(out, key=lambda s: (len(s), s.steps))
