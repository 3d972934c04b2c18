"""Per-level sum ratios of the restricted Farey tree as the depth grows.

Prints, for each depth, the minimum ratio per level of the built tree and
the ratio over all restricted children of the level-1 node, at
s = n^2/(n+1) - delta. Useful to see how far desk depths are from ratio 1.

    python scripts/fractal_depth_study.py --max-depth 4
"""
import argparse
import math
from fractions import Fraction

from dioph_lab import campaigns, farey


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-depth", type=int, default=3)
    ap.add_argument("--eta", default="1/4")
    ap.add_argument("--delta", default="1/4")
    ap.add_argument("--N-cap", type=int, default=50)
    args = ap.parse_args(argv)
    for depth in range(2, args.max_depth + 1):
        cfg = campaigns.FractalCampaign(Fraction(args.eta), Fraction(args.delta), Fraction(1, 2), depth, args.N_cap)
        tree = campaigns.fractal_tree(cfg)
        s = campaigns._s_value(cfg)
        rep = farey.validate_selfsimilar(tree, s)
        levels = {k: round(math.log10(v["min_ratio"]), 3) for k, v in sorted(rep.per_level.items())}
        full = farey.full_sum_ratio(tree, tree.level(1)[0], s)
        print(f"depth {depth}: nodes {len(tree.nodes)}, s = {s}, log10 min ratio per level {levels}, "
              f"log10 full level-1 ratio {full.log10:.3f}")


if __name__ == "__main__":
    main()
