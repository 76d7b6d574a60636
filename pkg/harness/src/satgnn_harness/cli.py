"""Command line driver: train a model and report the rewiring comparison."""

from __future__ import annotations

import argparse
import sys

import torch

from .data import DataError
from .train import TrainConfig, eval_rewired, metrics_json, train


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="satgnn-harness",
        description="Train a GNN on a SAT dataset manifest and evaluate the "
        "test-time-rewiring effect.",
    )
    parser.add_argument("--train-manifest", required=True)
    parser.add_argument("--test-manifest", required=True)
    parser.add_argument("--rewired-manifest", required=True)
    parser.add_argument("--model", default="neurosat", choices=("neurosat", "gcn"))
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--lr", type=float, default=1e-4)
    parser.add_argument("--rounds", type=int, default=26)
    parser.add_argument("--dim", type=int, default=128)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--checkpoint", help="optional path for the trained weights")
    args = parser.parse_args(argv)

    cfg = TrainConfig(
        model=args.model, epochs=args.epochs, lr=args.lr, rounds=args.rounds,
        dim=args.dim, seed=args.seed,
    )
    try:
        model, _ = train(args.train_manifest, cfg)
        acc_plain, acc_rewired = eval_rewired(
            model, args.test_manifest, args.rewired_manifest
        )
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.checkpoint:
        torch.save(model.state_dict(), args.checkpoint)
    print(metrics_json(args.model, args.seed, acc_plain, acc_rewired))
    return 0


if __name__ == "__main__":
    sys.exit(main())
