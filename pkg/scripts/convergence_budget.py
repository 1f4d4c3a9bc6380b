"""Success fraction of the lone-habitat GA as the generation budget and indel rate vary.

Shows how far the default configuration sits from the 90% convergence target and
how the misaligned local optima of the edit-distance landscape respond to indels.
"""

import argparse
from dataclasses import replace

from eve_sim.habitat import GAParams
from eve_sim.recipes import generations_to_optimum


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--indel", default="0,0.01,0.05,0.2")
    ap.add_argument("--budgets", default="100,200,400,800")
    args = ap.parse_args()
    budgets = [int(b) for b in args.budgets.split(",")]
    print("indel  " + "  ".join(f"G={b:<4d}" for b in budgets))
    for indel in (float(x) for x in args.indel.split(",")):
        params = replace(GAParams(), indel_rate=indel)
        hits = [generations_to_optimum(s, max(budgets), params=params) for s in range(args.seeds)]
        fracs = [sum(h is not None and h <= b for h in hits) / args.seeds for b in budgets]
        print(f"{indel:<5g}  " + "  ".join(f"{f:6.3f}" for f in fracs))


if __name__ == "__main__":
    main()
