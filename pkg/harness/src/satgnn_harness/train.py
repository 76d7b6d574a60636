"""Training loop, verified-assignment accuracy, and the rewiring comparison."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import torch

from .data import DataError, ManifestDataset, load_manifest, satisfies
from .models import MODELS, build_model, clause_unsat_loss, decode_assignment


@dataclass
class TrainConfig:
    model: str = "neurosat"
    epochs: int = 100
    lr: float = 1e-4
    decay_epoch: int = 50
    grad_clip: float = 1.0
    rounds: int = 26
    dim: int = 128
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.lr <= 0 or self.grad_clip <= 0 or self.rounds < 1 or self.dim < 1:
            raise ValueError("lr, grad_clip, rounds, and dim must be positive")


def _seed_everything(seed: int) -> None:
    torch.manual_seed(seed)
    torch.use_deterministic_algorithms(True)


def accuracy(model: torch.nn.Module, dataset: ManifestDataset) -> float:
    """Fraction of instances whose decoded assignment satisfies the formula.

    Only verified satisfying assignments count; an instance whose decoding
    falsifies any clause contributes zero regardless of its label.
    """
    model.eval()
    hits = 0
    formulas = dataset.formulas()
    with torch.no_grad():
        for formula in formulas:
            scores = model(formula, rounds=model.eval_rounds(formula))
            hits += satisfies(formula, decode_assignment(scores))
    return hits / len(formulas)


def train(manifest_path, cfg: TrainConfig) -> tuple[torch.nn.Module, dict]:
    """Train on a labeled dataset manifest; returns (model, metrics).

    Metrics carry the per-epoch loss trace and final train accuracy; the run
    is exactly reproducible for a fixed config.
    """
    dataset = load_manifest(manifest_path)
    _seed_everything(cfg.seed)
    model = build_model(cfg.model, dim=cfg.dim, rounds=cfg.rounds)
    optimizer = torch.optim.AdamW(model.parameters(), lr=cfg.lr)
    scheduler = torch.optim.lr_scheduler.MultiStepLR(
        optimizer, milestones=[cfg.decay_epoch], gamma=0.5
    )
    formulas = dataset.formulas()
    loss_trace = []
    for _ in range(cfg.epochs):
        model.train()
        total = 0.0
        for formula in formulas:
            optimizer.zero_grad()
            loss = clause_unsat_loss(formula, model(formula))
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), cfg.grad_clip)
            optimizer.step()
            total += float(loss.detach())
        scheduler.step()
        loss_trace.append(total / len(formulas))
    metrics = {
        "model": cfg.model,
        "seed": cfg.seed,
        "epochs": cfg.epochs,
        "loss_trace": loss_trace,
        "train_accuracy": accuracy(model, dataset),
    }
    return model, metrics


def eval_rewired(
    model: torch.nn.Module, test_manifest, rewired_manifest
) -> tuple[float, float]:
    """(accuracy_plain, accuracy_rewired) on paired test sets.

    The rewired manifest must list the same number of instances in the same
    order; satisfaction of the rewired side is checked against the rewired
    formulas, since rewiring modifies the constraints.
    """
    plain = load_manifest(test_manifest)
    rewired = load_manifest(rewired_manifest)
    if len(plain) != len(rewired) or plain.n_vars != rewired.n_vars:
        raise DataError("test and rewired manifests do not pair up")
    return accuracy(model, plain), accuracy(model, rewired)


def metrics_json(model: str, seed: int, acc_plain: float, acc_rewired: float) -> str:
    return json.dumps(
        {
            "model": model,
            "seed": seed,
            "acc_plain": acc_plain,
            "acc_rewired": acc_rewired,
        },
        indent=2,
    )
