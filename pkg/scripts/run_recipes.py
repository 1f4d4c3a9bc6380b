"""Run every canned experiment and write one JSON verdict per recipe.

    python scripts/run_recipes.py --out results/recipes [--only sectors,feedback]
"""

import argparse
import sys
from pathlib import Path

from eve_sim import recipes
from eve_sim.outputs import dump_json


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/recipes")
    ap.add_argument("--only", default="", help="comma-separated recipe names")
    args = ap.parse_args()
    names = [n for n in args.only.split(",") if n] or list(recipes.RECIPES)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for name in names:
        verdict = recipes.RECIPES[name]()
        (out / f"{name}.json").write_text(dump_json(verdict))
        failed += not verdict["pass"]
        print(f"{name:15s} {'PASS' if verdict['pass'] else 'FAIL'}  {verdict['seconds']:.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
