"""Grammar-level rewrite rules: patterns, their validation, and parallel instantiation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .besg import BesgGrammar, validate_besg
from .dpo import GraphRuleSpan, substituted_mono
from .ednce import (DerivationScript, Grammar, Production, concrete_scripts, derive_step,
                    fresh_copy, initial_form, validate_grammar)
from .errors import InstantiationError, MalformedMorphismError, SgraftError, SynthesisError
from .graph import IN, Alphabets, Graph
from .matching import GraphMorphism, is_homomorphism
from .report import Report
from .stringgraph import DecodingSystem, decode


@dataclass(frozen=True)
class Correspondence:
    """Interface production ``interface`` sits under ``left`` and ``right``.

    ``lmap``/``rmap`` send the interface production's vertices into the
    corresponding left/right productions.
    """

    interface: str
    left: str
    right: str
    lmap: Mapping
    rmap: Mapping

    def __post_init__(self):
        object.__setattr__(self, "lmap", dict(self.lmap))
        object.__setattr__(self, "rmap", dict(self.rmap))


@dataclass(frozen=True)
class GrammarPattern:
    left: Grammar
    interface: Grammar
    right: Grammar
    correspondences: tuple
    name: str = "pattern"

    def __post_init__(self):
        object.__setattr__(self, "correspondences", tuple(self.correspondences))

    def correspondence(self, interface_production: str) -> Correspondence:
        for c in self.correspondences:
            if c.interface == interface_production:
                return c
        raise KeyError(interface_production)

    def production_span(self, c: Correspondence) -> GraphRuleSpan:
        return GraphRuleSpan(self.left.production(c.left).rhs, self.interface.production(c.interface).rhs,
                             self.right.production(c.right).rhs, c.lmap, c.rmap, c.interface)


@dataclass(frozen=True)
class BesgRewriteRule:
    pattern: GrammarPattern
    decoding: DecodingSystem

    @property
    def name(self) -> str:
        return self.pattern.name

    @property
    def left(self) -> BesgGrammar:
        return BesgGrammar(self.pattern.left, self.decoding)

    @property
    def right(self) -> BesgGrammar:
        return BesgGrammar(self.pattern.right, self.decoding)

    @property
    def interface(self) -> BesgGrammar:
        return BesgGrammar(self.pattern.interface, self.decoding)


@dataclass(frozen=True)
class ProductionIoClassification:
    inputs: frozenset
    outputs: frozenset
    isolated: frozenset


def classify_production_io(p: Production, a: Alphabets) -> ProductionIoClassification:
    """Production inputs/outputs, counting realized edges and connection instructions.

    Undirected wires have no orientation, so an open end (at most one edge or
    instruction) is both an input and an output.
    """
    rhs = p.rhs
    ins, outs, iso = set(), set(), set()
    for x, l in rhs.labels.items():
        if l not in a.wire:
            continue
        conns = rhs.conns_at(x)
        if rhs.directed:
            n_in = rhs.in_degree(x) + sum(1 for c in conns if c.d == IN)
            n_out = rhs.out_degree(x) + sum(1 for c in conns if c.d != IN)
            if n_in == 0:
                ins.add(x)
            if n_out == 0:
                outs.add(x)
            if n_in == 0 and n_out == 0:
                iso.add(x)
        else:
            total = rhs.degree(x) + len(conns)
            if total <= 1:
                ins.add(x)
                outs.add(x)
            if total == 0:
                iso.add(x)
    return ProductionIoClassification(frozenset(ins), frozenset(outs), frozenset(iso))


def _check_component(report: Report, side: str, c: Correspondence, src: Graph, tgt: Graph,
                     vmap: Mapping, a: Alphabets) -> None:
    subject = f"{c.interface}->{side}:{getattr(c, side)}"
    try:
        hom = is_homomorphism(GraphMorphism(src, tgt, vmap))
    except MalformedMorphismError as exc:
        report.error("malformed", str(exc), subject)
        return
    if not hom:
        report.error("not-homomorphism", "vertex map does not preserve labels, edges or instructions", subject)
    if len(set(vmap.values())) != len(vmap):
        report.error("not-mono", "vertex map is not injective", subject)
    nt_src = {v for v, l in src.labels.items() if l in a.nonterminal}
    nt_tgt = {v for v, l in tgt.labels.items() if l in a.nonterminal}
    if {vmap.get(v) for v in nt_src} != nt_tgt:
        report.error("nonterminal-bijection",
                     f"nonterminals {sorted(nt_src)} do not correspond to {sorted(nt_tgt)}", subject)


def validate_pattern(gp: GrammarPattern) -> Report:
    report = Report(gp.name)
    L, I, R = gp.left, gp.interface, gp.right
    a = L.alphabets.merge(I.alphabets).merge(R.alphabets)
    if not (L.initial == I.initial == R.initial):
        report.error("initial", f"initial labels differ: {L.initial}, {I.initial}, {R.initial}")
    if not (L.directed == I.directed == R.directed):
        report.error("mode", "component grammars disagree on mode")
    for side, g in (("interface", I), ("left", L), ("right", R)):
        if len(g.productions) != len(gp.correspondences):
            report.error("bijection", f"{side} has {len(g.productions)} productions, "
                         f"the correspondence has {len(gp.correspondences)}")
        names = [getattr(c, side) for c in gp.correspondences]
        if len(set(names)) != len(names):
            report.error("bijection", f"{side} productions used more than once: {sorted(names)}")
        missing = set(g.names) - set(names)
        if missing:
            report.error("bijection", f"{side} productions without correspondence: {sorted(missing)}")
    for c in gp.correspondences:
        try:
            pi, pl, pr = I.production(c.interface), L.production(c.left), R.production(c.right)
        except KeyError as exc:
            report.error("bijection", f"unknown production {exc}", c.interface)
            continue
        if not (pi.lhs == pl.lhs == pr.lhs):
            report.error("lhs", f"left-hand sides differ: {pl.lhs}, {pi.lhs}, {pr.lhs}", c.interface)
        _check_component(report, "left", c, pi.rhs, pl.rhs, c.lmap, a)
        _check_component(report, "right", c, pi.rhs, pr.rhs, c.rmap, a)
    return report


def validate_besg_rule(b: BesgRewriteRule, probe_depth: int = 6) -> Report:
    gp = b.pattern
    report = validate_pattern(gp)
    if report.errors:
        return report
    a = gp.left.alphabets.merge(gp.interface.alphabets).merge(gp.right.alphabets)
    for c in gp.correspondences:
        pi = gp.interface.production(c.interface)
        io_i = classify_production_io(pi, a)
        for v, l in sorted(pi.rhs.labels.items()):
            if l in a.nonterminal:
                continue
            if l not in a.wire or v not in io_i.isolated:
                report.error("boundary", f"interface vertex {v} is neither a nonterminal "
                             "nor an isolated wire vertex", c.interface)
        for side, g, vmap in (("left", gp.left, c.lmap), ("right", gp.right, c.rmap)):
            p = g.production(getattr(c, side))
            io_p = classify_production_io(p, a)
            image = {vmap[v] for v in io_i.isolated}
            for kind, have in (("inputs", io_p.inputs), ("outputs", io_p.outputs)):
                missed = sorted(have - image)
                if missed:
                    report.error("io1", f"{side} production {kind} {missed} are not images "
                                 "of interface wires", c.interface)
            hit = [vmap[v] for v in io_i.isolated]
            if len(set(hit)) != len(hit):
                report.warn("io1", f"{side} map identifies interface wires", c.interface)
        for v in sorted(io_i.isolated):
            lp = classify_production_io(gp.left.production(c.left), a)
            rp = classify_production_io(gp.right.production(c.right), a)
            lv, rv = c.lmap[v], c.rmap[v]
            both_in = lv in lp.inputs and rv in rp.inputs
            both_out = lv in lp.outputs and rv in rp.outputs
            if not (both_in or both_out):
                report.error("io2", f"interface wire {v} is not an input (or output) on both sides",
                             c.interface)
    report.extend(validate_grammar(gp.interface), prefix="interface:")
    report.extend(validate_besg(b.left, probe_depth), prefix="left:")
    report.extend(validate_besg(b.right, probe_depth), prefix="right:")
    return report


def _pair(left: list, right: list) -> list:
    """Pair identifiers equal on both sides first, the rest in sorted order."""
    ls, rs = sorted(left), sorted(right)
    same = [v for v in ls if v in rs]
    pairs = [(v, v) for v in same]
    pairs += list(zip([v for v in ls if v not in same], [v for v in rs if v not in same]))
    return pairs


def synthesize_interface(bl: BesgGrammar, br: BesgGrammar, correspondence,
                         name: str = "pattern") -> BesgRewriteRule:
    """Build the interface grammar from nonterminals and production inputs/outputs.

    ``correspondence`` maps each left production name to a right production
    name (a dict, or an iterable of pairs).  Interface productions reuse the
    left production names and left vertex identifiers.
    """
    L, R = bl.grammar, br.grammar
    if L.directed != R.directed:
        raise SynthesisError("left and right grammars disagree on mode")
    if L.initial != R.initial:
        raise SynthesisError("left and right grammars have different initial labels")
    a = L.alphabets.merge(R.alphabets)
    pairs = list(correspondence.items()) if isinstance(correspondence, Mapping) else list(correspondence)
    if sorted(pl for pl, _ in pairs) != sorted(L.names) or sorted(pr for _, pr in pairs) != sorted(R.names):
        raise SynthesisError("correspondence is not a bijection between the productions")
    prods, corrs = [], []
    for pl_name, pr_name in pairs:
        pl, pr = L.production(pl_name), R.production(pr_name)
        where = f"({pl_name}, {pr_name})"
        if pl.lhs != pr.lhs:
            raise SynthesisError(f"{where}: left-hand sides {pl.lhs} and {pr.lhs} differ")
        labels, lmap, rmap = {}, {}, {}
        for nt in sorted(a.nonterminal):
            lv = [v for v, l in pl.rhs.labels.items() if l == nt]
            rv = [v for v, l in pr.rhs.labels.items() if l == nt]
            if len(lv) != len(rv):
                raise SynthesisError(f"{where}: {len(lv)} vs {len(rv)} nonterminals labelled {nt}")
            for x, y in _pair(lv, rv):
                labels[x], lmap[x], rmap[x] = nt, x, y
        io_l, io_r = classify_production_io(pl, a), classify_production_io(pr, a)
        used_l, used_r = set(), set()
        for kind in ("inputs", "outputs"):
            lw = sorted(getattr(io_l, kind) - used_l)
            rw = sorted(getattr(io_r, kind) - used_r)
            if len(lw) != len(rw):
                raise SynthesisError(f"{where}: {len(lw)} vs {len(rw)} production {kind}")
            for x, y in _pair(lw, rw):
                if pl.rhs.labels[x] != pr.rhs.labels[y]:
                    raise SynthesisError(f"{where}: wire labels of {x} and {y} differ")
                labels[x], lmap[x], rmap[x] = pl.rhs.labels[x], x, y
                used_l.add(x)
                used_r.add(y)
        prods.append(Production(pl_name, pl.lhs, Graph(labels, directed=L.directed)))
        corrs.append(Correspondence(pl_name, pl_name, pr_name, lmap, rmap))
    iface = Grammar(a, tuple(prods), L.initial, f"{name}_interface")
    left = Grammar(a, L.productions, L.initial, L.name)
    right = Grammar(a, R.productions, R.initial, R.name)
    return BesgRewriteRule(GrammarPattern(left, iface, right, tuple(corrs), name), bl.decoding)


# -- parallel instantiation --------------------------------------------------

@dataclass(frozen=True)
class Instantiation:
    span: GraphRuleSpan
    script: DerivationScript
    left_script: DerivationScript
    right_script: DerivationScript
    encoded: GraphRuleSpan = field(compare=False, default=None)


def instantiate(b: BesgRewriteRule, script: DerivationScript) -> Instantiation:
    """Coupled derivation in all three grammars, then decoding of the results.

    ``script`` names interface-grammar vertices and productions; each step is
    transported to the corresponding left/right production and vertex.
    """
    gp = b.pattern
    grammars = {"interface": gp.interface, "left": gp.left, "right": gp.right}
    forms = {k: initial_form(g) for k, g in grammars.items()}
    lmap = {v: v for v in forms["interface"].graph.labels}
    rmap = dict(lmap)
    for step, (v, pname) in enumerate(script, start=1):
        try:
            c = gp.correspondence(pname)
        except KeyError:
            raise InstantiationError(f"interface step {step}: unknown production {pname}") from None
        if v not in lmap:
            raise InstantiationError(f"interface step {step}: unknown vertex {v}")
        targets = {"interface": (v, c.interface), "left": (lmap[v], c.left), "right": (rmap[v], c.right)}
        new = {}
        for comp, (x, pn) in targets.items():
            try:
                new[comp] = derive_step(forms[comp], x, pn, grammars[comp])
            except SgraftError as exc:
                raise InstantiationError(f"{comp} step {step}: {exc}") from exc
        pi = fresh_copy(gp.interface.production(c.interface).rhs, step)
        pre = f"{step}."
        maps = {}
        for comp, vmap, prod in (("left", lmap, c.left), ("right", rmap, c.right)):
            rhs = fresh_copy(grammars[comp].production(prod).rhs, step)
            m1 = GraphMorphism(forms["interface"].graph, forms[comp].graph, vmap)
            cmap = c.lmap if comp == "left" else c.rmap
            m2 = GraphMorphism(pi, rhs, {pre + a: pre + t for a, t in cmap.items()})
            try:
                maps[comp] = substituted_mono(m1, m2, v)
            except SgraftError as exc:
                raise InstantiationError(f"{comp} step {step}: {exc}") from exc
            if maps[comp].target != new[comp].graph:
                raise InstantiationError(f"{comp} step {step}: tracked embedding lost sync with the derivation")
        forms = new
        lmap, rmap = dict(maps["left"].vertex_map), dict(maps["right"].vertex_map)
    for comp, f in forms.items():
        if not f.concrete:
            raise InstantiationError(f"{comp}: script does not reach a terminal form")
    a = gp.interface.alphabets
    gi = forms["interface"].graph
    if any(lab in a.encoding for _, lab, _ in gi.edges):
        raise InstantiationError("interface instance contains encoding edges")
    encoded = GraphRuleSpan(forms["left"].graph, gi, forms["right"].graph, lmap, rmap,
                            f"{b.name}@encoded")
    span = GraphRuleSpan(decode(forms["left"].graph, b.decoding, gp.left.alphabets), gi,
                         decode(forms["right"].graph, b.decoding, gp.right.alphabets),
                         lmap, rmap, f"{b.name}@{len(script)}")
    return Instantiation(span, DerivationScript(tuple(script)), forms["left"].provenance,
                         forms["right"].provenance, encoded)


def parallel_instantiate(b: BesgRewriteRule, script: DerivationScript) -> GraphRuleSpan:
    return instantiate(b, script).span


def instantiation_scripts(b: BesgRewriteRule, max_steps: int) -> list:
    return concrete_scripts(b.pattern.interface, max_steps)
