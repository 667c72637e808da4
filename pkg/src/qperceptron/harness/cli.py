"""Command-line interface.

    qperceptron stats  --dataset digits --train-path data/optdigits.tra --test-path data/optdigits.tes
    qperceptron encode --bits 0110100110010110 [--weight-bits ...] [--out circuit.txt]
    qperceptron readout --bits 0000 --weight-bits 0010 --shots 1000 --repeats 1000 --out hist.csv
    qperceptron train --test-path data/optdigits.tes --pos 3 --neg 0 --out results/
    qperceptron ovo --test-path data/optdigits.tes --out results/
    qperceptron ova --test-path data/optdigits.tes --out results/
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .. import perceptron
from ..core import map_to_signs
from ..datasets import binarize, dataset_stats, load_optdigits, load_semeion
from ..encoder import build_perceptron_circuit, build_Ui, circuit_stats
from ..simulator import make_rng
from . import export
from .config import DATASETS, DEFAULT_CUTOFF, FORMATS, VALIDATIONS, load_config
from .experiments import model_of, run_experiment

log = logging.getLogger("qperceptron")


def _parse_bits(text: str) -> np.ndarray:
    chars = text.replace(",", "").replace(" ", "")
    if not chars or set(chars) - {"0", "1"}:
        raise ValueError(f"expected a string of 0/1 characters, got {text!r}")
    return np.array([int(c) for c in chars], dtype=np.int8)


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", choices=DATASETS)
    p.add_argument("--train-path", dest="train_path")
    p.add_argument("--test-path", dest="test_path")
    p.add_argument("--cutoff", type=int, help="binarization cutoff (digits default 10)")


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    _add_data_flags(p)
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--validation", choices=VALIDATIONS)
    p.add_argument("--threshold", type=float)
    p.add_argument("--lr-pos", dest="lr_pos", type=float)
    p.add_argument("--lr-neg", dest="lr_neg", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--readout-mode", dest="readout_mode", choices=perceptron.READOUT_MODES)
    p.add_argument("--early-stop-metric", dest="early_stop_metric", choices=perceptron.EARLY_STOP_METRICS)
    p.add_argument("--early-stop-value", dest="early_stop_value", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", dest="formats", action="append", choices=FORMATS,
                   help="repeatable; defaults to all formats")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qperceptron", description="Quantum perceptron experiments")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="instance counts and imbalance ratio")
    _add_data_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("encode", help="dump the circuit for a pattern")
    _add_data_flags(p)
    p.add_argument("--bits", help="pattern as a 0/1 string")
    p.add_argument("--index", type=int, help="instance index in --train-path instead of --bits")
    p.add_argument("--weight-bits", dest="weight_bits", help="also build the full perceptron circuit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("readout", help="exact and sampled readout of one pattern/weight pair")
    p.add_argument("--bits", required=True)
    p.add_argument("--weight-bits", dest="weight_bits", required=True)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--repeats", type=int, default=0, help="sampled readouts to histogram")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="histogram CSV path (with --repeats)")
    p.set_defaults(func=cmd_readout)

    for name, helptext in (("train", "train and evaluate one binary task"),
                           ("ovo", "one-vs-one grid over all class pairs"),
                           ("ova", "one-vs-all sweep over the ten classes")):
        p = sub.add_parser(name, help=helptext)
        _add_experiment_flags(p)
        if name == "train":
            p.add_argument("--pos", type=int, required=True)
            p.add_argument("--neg", type=int, help="omit for positive-vs-rest")
        p.set_defaults(func=cmd_experiment, task={"train": "single"}.get(name, name))
    return ap


def cmd_stats(args) -> int:
    dataset = args.dataset or "digits"
    loader = load_optdigits if dataset == "digits" else load_semeion
    paths = [p for p in (args.train_path, args.test_path) if p]
    if not paths:
        raise ValueError("stats needs --train-path and/or --test-path")
    sets = [loader(p) for p in paths]
    report = {str(p): asdict(dataset_stats(d)) for p, d in zip(paths, sets)}
    if len(sets) == 2:
        report["combined"] = asdict(dataset_stats(sets[0].concat(sets[1])))
    print(json.dumps(report, indent=1))
    return 0


def cmd_encode(args) -> int:
    if args.bits is not None:
        bits = _parse_bits(args.bits)
    elif args.index is not None and args.train_path:
        dataset = args.dataset or "digits"
        data = (load_optdigits if dataset == "digits" else load_semeion)(args.train_path)
        cutoff = args.cutoff if args.cutoff is not None else DEFAULT_CUTOFF[dataset]
        bits = binarize(data[args.index], cutoff)
    else:
        raise ValueError("encode needs --bits or --index with --train-path")
    signs = map_to_signs(bits)
    if args.weight_bits:
        circ = build_perceptron_circuit(signs, map_to_signs(_parse_bits(args.weight_bits)))
    else:
        circ = build_Ui(signs)
    text = circ.dump()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    s = circuit_stats(circ)
    print(f"# qubits={circ.num_qubits} gates={s.gate_count} layers={s.layer_count} "
          f"max_control_arity={s.max_control_arity}", file=sys.stderr)
    return 0


def cmd_readout(args) -> int:
    i = map_to_signs(_parse_bits(args.bits))
    w = map_to_signs(_parse_bits(args.weight_bits))
    rng = make_rng(args.seed)
    out = {"exact": perceptron.exact_readout(i, w),
           "sampled": perceptron.sampled_readout(i, w, args.shots, rng), "shots": args.shots}
    if args.repeats:
        dist = perceptron.readout_distribution(i, w, args.shots, args.repeats, rng)
        out["repeats"] = args.repeats
        out["mean"] = float(dist.mean())
        if args.out:
            Path(args.out).write_text(export.histogram_csv(dist))
    print(json.dumps(out))
    return 0


_CONFIG_KEYS = ("dataset", "train_path", "test_path", "validation", "pos", "neg", "threshold",
                "lr_pos", "lr_neg", "epochs", "shots", "readout_mode", "early_stop_metric",
                "early_stop_value", "seed", "cutoff", "out", "formats", "workers")


def cmd_experiment(args) -> int:
    overrides = {k: getattr(args, k, None) for k in _CONFIG_KEYS}
    overrides["task"] = args.task
    cfg = load_config(args.config, overrides)
    res = run_experiment(cfg)
    log.info("%s finished in %.1f s", res.kind, res.wall_time)
    if cfg.out:
        for path in export.export_results(res, cfg.out, cfg.formats):
            log.info("wrote %s", path)
        if res.kind == "single" and res.tasks[0].trained:
            model_path = Path(cfg.out) / f"{res.tasks[0].name}.model"
            perceptron.save_model(model_of(res.tasks[0], cfg), model_path)
    else:
        sys.stdout.write(export.markdown(res))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"qperceptron: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
