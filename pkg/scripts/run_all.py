"""Run the OvO grid and the OvA sweep for every available dataset and validation method.

    python scripts/run_all.py --out results/ [--epochs 10] [--seed 0] [--workers 4]

Semeion runs resubstitution only, and only when data/semeion.data (or
$QPERCEPTRON_SEMEION) exists.  Results land in --out as JSON, CSV and markdown.
"""
from __future__ import annotations

import argparse
import logging
import os
from pathlib import Path

from qperceptron.harness import ExperimentConfig, export_results, run_experiment
from qperceptron.perceptron import Hyperparams

ROOT = Path(__file__).resolve().parents[1]


def configs(args) -> list[ExperimentConfig]:
    hp = Hyperparams(epochs=args.epochs, seed=args.seed)
    tra, tes = ROOT / "data" / "optdigits.tra", ROOT / "data" / "optdigits.tes"
    semeion = Path(os.environ.get("QPERCEPTRON_SEMEION", ROOT / "data" / "semeion.data"))
    out = []
    for task in ("ovo", "ova"):
        out.append(ExperimentConfig(test_path=str(tes), task=task, hyperparams=hp, workers=args.workers))
        out.append(ExperimentConfig(train_path=str(tra), test_path=str(tes), validation="holdout",
                                    task=task, hyperparams=hp, workers=args.workers))
        if semeion.exists():
            out.append(ExperimentConfig(dataset="semeion", train_path=str(semeion), task=task,
                                        hyperparams=hp, workers=args.workers))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--epochs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    for cfg in configs(args):
        res = run_experiment(cfg)
        paths = export_results(res, args.out)
        logging.info("%s %s %s: %.0f s -> %s", cfg.task, cfg.dataset, cfg.validation,
                     res.wall_time, ", ".join(p.name for p in paths))


if __name__ == "__main__":
    main()
