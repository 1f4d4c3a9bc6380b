"""Sweep the species floor and report final diversity with and without feedback."""

import argparse
from dataclasses import replace

from eve_sim.config import SimConfig
from eve_sim.engine import run


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--epochs", type=int, default=100)
    ap.add_argument("--floors", default="0,10,20,40,80")
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()
    print("floor  seed  species  shannon  active_epochs")
    for floor in (int(f) for f in args.floors.split(",")):
        for seed in range(args.seeds):
            reports = run(replace(SimConfig(), seed=seed, epochs=args.epochs, feedback_floor=floor))
            last = reports[-1]
            active = sum(r.feedback_active for r in reports)
            print(f"{floor:5d}  {seed:4d}  {last.species_count:7d}  {last.shannon:7.3f}  {active:13d}")


if __name__ == "__main__":
    main()
