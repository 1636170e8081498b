"""Enumerate the star and complete languages and compare each member with the closed-form family."""
import argparse
from importlib.resources import files

from sgraft.besg import besg_language
from sgraft.ednce import enumerate_language
from sgraft.families import complete_string_graph, star_string_graph
from sgraft.matching import are_isomorphic
from sgraft.textformat import load


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=14)
    args = ap.parse_args()
    corpus = files("sgraft") / "corpus"
    failures = 0
    stars = enumerate_language(load(corpus / "star.gg"), args.max_vertices)
    for n, f in enumerate(stars, start=1):
        ok = are_isomorphic(f.graph, star_string_graph(n))
        failures += not ok
        print(f"star n={n} vertices={len(f.graph.labels)} iso={ok}")
    members = besg_language(load(corpus / "complete.besg"), args.max_vertices)
    for n, m in enumerate(members, start=1):
        ok = are_isomorphic(m.graph, complete_string_graph(n))
        failures += not ok
        print(f"complete n={n} vertices={len(m.graph.labels)} iso={ok}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
