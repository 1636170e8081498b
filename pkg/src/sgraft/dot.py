"""Graphviz DOT rendering of graphs, grammars, rules and patterns."""
from __future__ import annotations

import json

from .dpo import GraphRuleSpan
from .ednce import Grammar
from .graph import IN, Alphabets, Graph


def _id(s: str) -> str:
    return json.dumps(s)


def _vertex_attrs(label: str, a: Alphabets | None) -> str:
    kind = a.kind(label) if a is not None else None
    if kind == "node":
        return f'shape=circle, style=filled, fillcolor=gray80, label={_id(label)}'
    if kind == "wire":
        return 'shape=point, label=""'
    if kind == "nonterminal":
        return f'shape=box, label={_id(label)}'
    return f'shape=ellipse, label={_id(label)}'


def _graph_lines(g: Graph, a: Alphabets | None, prefix: str, indent: str) -> list:
    arrow = "->" if g.directed else "--"
    out = []
    for v, l in sorted(g.labels.items()):
        out.append(f"{indent}{_id(prefix + v)} [{_vertex_attrs(l, a)}];")
    for s, lab, t in sorted(g.edges):
        style = ", style=dashed" if a is not None and lab in a.encoding else ""
        out.append(f"{indent}{_id(prefix + s)} {arrow} {_id(prefix + t)} [label={_id(lab)}{style}];")
    return out


def _conn_lines(g: Graph, prefix: str, indent: str) -> list:
    """Connection instructions as dotted edges from an outside context vertex."""
    arrow = "->" if g.directed else "--"
    out = []
    for k, c in enumerate(sorted(g.connections)):
        ctx = _id(f"{prefix}ctx{k}")
        out.append(f"{indent}{ctx} [shape=plaintext, label={_id(c.sigma)}];")
        lab = _id(f"{c.beta}/{c.gamma}")
        if g.directed and c.d != IN:
            out.append(f"{indent}{_id(prefix + c.x)} {arrow} {ctx} [label={lab}, style=dotted];")
        else:
            out.append(f"{indent}{ctx} {arrow} {_id(prefix + c.x)} [label={lab}, style=dotted];")
    return out


def graph_to_dot(g: Graph, a: Alphabets | None = None, name: str = "G") -> str:
    head = "digraph" if g.directed else "graph"
    lines = [f"{head} {_id(name)} {{", *_graph_lines(g, a, "", "  "), *_conn_lines(g, "", "  "), "}"]
    return "\n".join(lines) + "\n"


def grammar_to_dot(gr: Grammar, name: str | None = None) -> str:
    """One cluster per production; instructions cross the cluster border."""
    head = "digraph" if gr.directed else "graph"
    lines = [f"{head} {_id(name or gr.name)} {{", "  compound=true;"]
    for i, p in enumerate(gr.productions):
        pre = f"{p.name}/"
        lines.append(f"  subgraph {_id(f'cluster_{i}')} {{")
        lines.append(f"    label={_id(f'{p.name} : {p.lhs}')};")
        lines += _graph_lines(p.rhs, gr.alphabets, pre, "    ")
        lines.append("  }")
        lines += _conn_lines(p.rhs, pre, "  ")
    lines.append("}")
    return "\n".join(lines) + "\n"


def rule_to_dot(r: GraphRuleSpan, a: Alphabets | None = None) -> str:
    """Left, interface and right side by side; the legs are drawn dashed gray."""
    d = r.left.directed
    head = "digraph" if d else "graph"
    arrow = "->" if d else "--"
    lines = [f"{head} {_id(r.name)} {{"]
    for i, (part, g) in enumerate((("left", r.left), ("interface", r.interface), ("right", r.right))):
        lines.append(f"  subgraph {_id(f'cluster_{i}')} {{")
        lines.append(f"    label={_id(part)};")
        lines += _graph_lines(g, a, f"{part}/", "    ")
        lines.append("  }")
    for iv in sorted(r.lmap):
        lines.append(f"  {_id('interface/' + iv)} {arrow} {_id('left/' + r.lmap[iv])} "
                     "[style=dashed, color=gray, constraint=false];")
        lines.append(f"  {_id('interface/' + iv)} {arrow} {_id('right/' + r.rmap[iv])} "
                     "[style=dashed, color=gray, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, alphabets: Alphabets | None = None) -> str:
    from .besg import BesgGrammar
    from .schema import BesgRewriteRule
    from .textformat import NamedGraph

    if isinstance(obj, NamedGraph):
        return graph_to_dot(obj.graph, obj.alphabets or alphabets, obj.name)
    if isinstance(obj, Graph):
        return graph_to_dot(obj, alphabets)
    if isinstance(obj, Grammar):
        return grammar_to_dot(obj)
    if isinstance(obj, BesgGrammar):
        return grammar_to_dot(obj.grammar, obj.label)
    if isinstance(obj, GraphRuleSpan):
        return rule_to_dot(obj, alphabets)
    if isinstance(obj, BesgRewriteRule):
        gp = obj.pattern
        return "".join(grammar_to_dot(g, f"{gp.name}_{part}") for part, g in
                       (("left", gp.left), ("interface", gp.interface), ("right", gp.right)))
    raise TypeError(f"cannot render {type(obj).__name__}")
