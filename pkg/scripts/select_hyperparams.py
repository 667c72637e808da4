"""Pick (threshold, learning rate) per OvO pair from the small default grid.

    python scripts/select_hyperparams.py --test-path data/optdigits.tes --pairs 3:0 7:0 4:0

The grid is thresholds {0.1, 0.25, 0.5} x learning rates {0.02, 0.05, 0.2},
the same rate for both classes.  Prints one JSON line per pair with every grid
point, best first.
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict

from qperceptron.datasets import ovo
from qperceptron.harness import ExperimentConfig
from qperceptron.harness.experiments import DEFAULT_GRID, grid_search
from qperceptron.perceptron import Hyperparams


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--test-path", default="data/optdigits.tes")
    ap.add_argument("--train-path")
    ap.add_argument("--validation", default="resubstitution", choices=("resubstitution", "holdout"))
    ap.add_argument("--pairs", nargs="+", default=["3:0", "7:0", "4:0"], help="pos:neg")
    ap.add_argument("--epochs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = ExperimentConfig(train_path=args.train_path, test_path=args.test_path,
                           validation=args.validation,
                           hyperparams=Hyperparams(epochs=args.epochs, seed=args.seed))
    for pair in args.pairs:
        pos, neg = map(int, pair.split(":"))
        points = grid_search(cfg, ovo(pos, neg), DEFAULT_GRID)
        print(json.dumps({"pos": pos, "neg": neg, "grid": [asdict(p) for p in points]}))


if __name__ == "__main__":
    main()
