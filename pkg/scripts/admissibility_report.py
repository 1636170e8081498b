"""Rewrite both host grammars and check every short derivation for an admissible rule sequence."""
import argparse
from importlib.resources import files

from sgraft.ednce import concrete_scripts
from sgraft.grammar_rewrite import besg_rewrite, check_admissibility, find_grammar_matches
from sgraft.textformat import load

CASES = [("lc_host.besg", "localcomp.pat"), ("big_host.besg", "bialg.pat")]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=4)
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()
    corpus = files("sgraft") / "corpus"
    failed = 0
    for host_name, rule_name in CASES:
        host, rule = load(corpus / host_name), load(corpus / rule_name)
        matches = find_grammar_matches(rule, host)
        if not matches:
            print(f"{host_name}: no grammar match")
            failed += 1
            continue
        result = besg_rewrite(host, rule, matches[0])
        for script in concrete_scripts(host.grammar, args.steps):
            v = check_admissibility(host, result, rule, script, seed=args.seed)
            steps = " ".join(f"{v}:{p}" for v, p in script)
            length = len(v.sequence) if v.success else "-"
            failed += not v.success
            print(f"{host_name} [{steps}] admissible={v.success} sequence_length={length}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
