"""Run every acceptance criterion and write one JSON record per criterion.

    python scripts/reproduce_all.py --out results/

Criterion 9 needs the naive oracles from tests/oracles.py.
"""
import argparse
import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(HERE, "..", "tests"))

from dioph_lab import campaigns  # noqa: E402
from dioph_lab.exact import to_json_value  # noqa: E402
from oracles import naive_lambda1_perp_sq, naive_shortest_grid_vector, naive_successive_minima  # noqa: E402


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    try:
        return to_json_value(v)
    except (TypeError, ValueError):
        return str(v)


def criterion9():
    return campaigns.criterion9(naive_successive_minima, naive_shortest_grid_vector,
                                lambda x, a: naive_lambda1_perp_sq(x.p, x.q, a))


RUNNERS = {f.__name__: f for f in campaigns.ALL}
RUNNERS["criterion9"] = criterion9


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--only", nargs="*", help="criterion numbers to run (default all)")
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    names = [f"criterion{k}" for k in args.only] if args.only else list(RUNNERS)
    failed = 0
    for name in names:
        r = RUNNERS[name]()
        print(r.line(), flush=True)
        failed += not r.passed
        rec = {"criterion": r.number, "title": r.title, "passed": r.passed, "note": r.note,
               "seconds": round(r.seconds, 2), "stats": _plain(r.stats)}
        with open(os.path.join(args.out, f"{name}.json"), "w") as fh:
            json.dump(rec, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
