"""Rewriting B-ESG grammars with B-ESG rewrite rules, and checking admissibility."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Mapping

from .besg import BesgGrammar
from .dpo import dpo_apply, find_matches, gluing_violations
from .ednce import DerivationScript, Production, run_script
from .errors import GluingError, IncompatibleRuleError, InstantiationError, SgraftError
from .matching import IsoIndex, are_isomorphic, iter_monomorphisms
from .report import block
from .schema import BesgRewriteRule, classify_production_io, instantiate, instantiation_scripts
from .stringgraph import decode


@dataclass(frozen=True)
class GrammarMatching:
    """Production map ``left production -> host production`` with per-production vertex maps."""

    production_map: Mapping
    components: Mapping
    violations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "production_map", dict(self.production_map))
        object.__setattr__(self, "components", {k: dict(v) for k, v in self.components.items()})
        object.__setattr__(self, "violations", tuple(self.violations))

    @property
    def ok(self) -> bool:
        return not self.violations

    def sort_key(self):
        return tuple((p, self.production_map[p], tuple(sorted(self.components[p].items())))
                     for p in sorted(self.production_map))


def same_decoding(t1, t2) -> bool:
    if t1.directed != t2.directed or set(t1.rules) != set(t2.rules):
        return False
    for k, r in t1.rules.items():
        o = t2.rules[k]
        if r.endpoints != o.endpoints or not are_isomorphic(r.rhs, o.rhs):
            return False
    return True


def _conditions(rule: BesgRewriteRule, host: BesgGrammar, pmap: Mapping, comps: Mapping) -> list:
    gp = rule.pattern
    a = host.alphabets.merge(gp.left.alphabets)
    out = []
    by_left = {c.left: c for c in gp.correspondences}
    for pl_name, ph_name in sorted(pmap.items()):
        c = by_left[pl_name]
        span = gp.production_span(c)
        ph = host.grammar.production(ph_name)
        m = comps[pl_name]
        out += [f"{ph_name}: {v}" for v in gluing_violations(ph.rhs, span, m)]
        image = set(m.values())
        for s, lab, t in sorted(ph.rhs.edges):
            if lab in a.encoding and (s in image) != (t in image):
                out.append(f"{ph_name}: encoding edge ({s}, {lab}, {t}) partially overlaps the match")
        kept = set(c.lmap.values())
        io_l = classify_production_io(gp.left.production(pl_name), a)
        io_h = classify_production_io(ph, a)
        for w in sorted(io_l.inputs | io_l.outputs):
            if w not in kept and m[w] not in io_h.inputs | io_h.outputs:
                out.append(f"{ph_name}: production input/output {w} is neither preserved "
                           "nor an input/output of the host production")
    covered = {p.lhs for p in gp.left.productions}
    for p in host.grammar.productions:
        if p.lhs in covered and p.name not in pmap.values():
            out.append(f"{p.name}: host production for {p.lhs} is not matched")
    return out


def find_grammar_matches(rule: BesgRewriteRule, host: BesgGrammar, valid_only: bool = True) -> list:
    """Grammar monomorphisms from the rule's left grammar into ``host``, deterministic order."""
    if not same_decoding(rule.decoding, host.decoding):
        raise IncompatibleRuleError("rule and host use different decoding systems")
    left = rule.pattern.left
    if left.directed != host.grammar.directed:
        raise IncompatibleRuleError("rule and host disagree on mode")
    hprods = host.grammar.productions
    if len(left.productions) > len(hprods):
        return []
    lnames = left.names
    found = []

    def assign(i: int, pmap: dict):
        if i == len(lnames):
            options = []
            for pl in lnames:
                src = left.production(pl).rhs
                tgt = host.grammar.production(pmap[pl]).rhs
                maps = sorted(iter_monomorphisms(src, tgt), key=lambda m: sorted(m.items()))
                if not maps:
                    return
                options.append(maps)
            for combo in cartesian(*options):
                comps = dict(zip(lnames, combo))
                bad = _conditions(rule, host, pmap, comps)
                if bad and valid_only:
                    continue
                found.append(GrammarMatching(pmap, comps, bad))
            return
        pl = left.production(lnames[i])
        for ph in hprods:
            if ph.lhs == pl.lhs and ph.name not in pmap.values():
                pmap[pl.name] = ph.name
                assign(i + 1, pmap)
                del pmap[pl.name]

    assign(0, {})
    return sorted(found, key=GrammarMatching.sort_key)


def besg_rewrite(host: BesgGrammar, rule: BesgRewriteRule, m: GrammarMatching,
                 name: str | None = None) -> BesgGrammar:
    """Production-wise DPO rewrite; unmatched productions are carried over unchanged."""
    gp = rule.pattern
    by_left = {c.left: c for c in gp.correspondences}
    inverse = {ph: pl for pl, ph in m.production_map.items()}
    prods = []
    for p in host.grammar.productions:
        if p.name not in inverse:
            prods.append(p)
            continue
        pl = inverse[p.name]
        span = gp.production_span(by_left[pl])
        try:
            rhs, _ = dpo_apply(p.rhs, span, m.components[pl])
        except GluingError as exc:
            raise GluingError([f"{p.name}: {v}" for v in exc.violations]) from exc
        prods.append(Production(p.name, p.lhs, rhs))
    a = host.alphabets.merge(gp.right.alphabets)
    g = host.grammar
    new = type(g)(a, tuple(prods), g.initial, name or f"{g.name}_rewritten")
    return BesgGrammar(new, host.decoding)


def instance(b: BesgGrammar, script: DerivationScript):
    try:
        form = run_script(b.grammar, script)
    except SgraftError as exc:
        raise InstantiationError(f"{b.label}: {exc}") from exc
    if not form.concrete:
        raise InstantiationError(f"{b.label}: script does not reach a terminal form")
    return decode(form.graph, b.decoding, b.alphabets)


@dataclass
class AdmissibilityVerdict:
    success: bool
    sequence: list = field(default_factory=list)
    explored: int = 0
    rule_scripts: int = 0
    max_rule_steps: int = 0
    max_sequence: int = 0

    def to_text(self) -> str:
        fields = {"status": "admissible" if self.success else "bounded-failure",
                  "sequence.length": len(self.sequence) if self.success else "none",
                  "explored": self.explored, "rule_scripts": self.rule_scripts,
                  "bound.rule_steps": self.max_rule_steps, "bound.sequence": self.max_sequence}
        for i, (rname, script, match) in enumerate(self.sequence):
            fields[f"step.{i}.rule"] = rname
            fields[f"step.{i}.script"] = " ".join(f"{v}:{p}" for v, p in script)
            fields[f"step.{i}.match"] = " ".join(f"{k}={v}" for k, v in sorted(match.items()))
        return block("admissibility", "verdict", fields)


def check_admissibility(host: BesgGrammar, result: BesgGrammar, rule: BesgRewriteRule,
                        script: DerivationScript, max_rule_steps: int | None = None,
                        max_sequence: int = 3, seed: int | None = None) -> AdmissibilityVerdict:
    """Search for a sequence of instantiated rules turning the host instance into the result instance.

    ``script`` is replayed on both grammars (rewriting keeps production names
    and nonterminal identifiers).  Rule instances come from interface scripts
    of at most ``len(script) + 2`` steps unless ``max_rule_steps`` is given.
    A ``seed`` shuffles the order in which rule instances are tried.
    """
    k, k2 = instance(host, script), instance(result, script)
    max_rule_steps = len(script) + 2 if max_rule_steps is None else max_rule_steps
    rules = []
    for s in instantiation_scripts(rule, max_rule_steps):
        inst = instantiate(rule, s)
        rules.append((s, inst.span))
    if seed is not None:
        random.Random(seed).shuffle(rules)
    verdict = AdmissibilityVerdict(False, [], 0, len(rules), max_rule_steps, max_sequence)
    if are_isomorphic(k, k2):
        verdict.success = True
        return verdict
    seen = IsoIndex()
    seen.add(k)
    frontier = [(k, [])]
    for _ in range(max_sequence):
        nxt = []
        for g, seq in frontier:
            for s, span in rules:
                for match in find_matches(g, span):
                    child, _ = dpo_apply(g, span, match)
                    verdict.explored += 1
                    path = seq + [(span.name, s, match.mapping)]
                    if are_isomorphic(child, k2):
                        verdict.success = True
                        verdict.sequence = path
                        return verdict
                    if seen.add(child):
                        nxt.append((child, path))
        frontier = nxt
    return verdict
