"""Time membership of complete and star string graphs against the complete grammar."""
import argparse
import time
from importlib.resources import files

from sgraft.besg import membership
from sgraft.families import complete_string_graph, star_string_graph
from sgraft.textformat import load


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    grammar = load(files("sgraft") / "corpus" / "complete.besg")
    print("family n member seconds witness_steps")
    for name, family in (("complete", complete_string_graph), ("star", star_string_graph)):
        for n in range(1, args.max_n + 1):
            start = time.perf_counter()
            r = membership(grammar, family(n))
            elapsed = time.perf_counter() - start
            steps = len(r.witness) if r.member else "-"
            print(f"{name} {n} {'yes' if r.member else 'no'} {elapsed:.4f} {steps}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
