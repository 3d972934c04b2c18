"""Tally the half-size counting bound over the fibres of the default fractal tree.

With b = 1/2 the restriction keeps odd heights, and heights along a fibre
step by the (odd) parent height, so they alternate in parity. A fibre of
odd length that starts on an even height keeps floor(card/2) children.
This script lists how many fibres fall in each (parity of start, parity of
length) class and how many break 2 * restricted >= card.
"""
from collections import Counter

from dioph_lab import campaigns, farey


def main():
    cfg = campaigns.FractalCampaign()
    tree = campaigns.fractal_tree(cfg)
    tally = Counter()
    fails = Counter()
    for node in tree.nodes:
        eps = node.eps
        for rec in node.counts:
            f = farey.zeta_fiber(node.x, rec.alpha, eps)
            if f.count == 0:
                continue
            key = ("even start" if f.heights()[0] % 2 == 0 else "odd start",
                   "odd length" if f.count % 2 else "even length")
            tally[key] += 1
            if not rec.half_bound:
                fails[key] += 1
    for key in sorted(tally):
        print(f"{key[0]:>10}, {key[1]:<11}: {tally[key]:4d} fibres, {fails[key]:4d} below half")


if __name__ == "__main__":
    main()
