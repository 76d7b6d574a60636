"""Desk-scale GNN harness for satcurv-generated SAT datasets.

Consumes the primary toolchain only through its file formats (DIMACS,
dataset manifest JSON) and CLI; trains GCN and NeuroSAT-style models and
measures the test-time-rewiring effect directionally.
"""

from .data import Formula, ManifestDataset, load_manifest, parse_dimacs
from .models import Gcn, NeuroSat, build_model
from .train import TrainConfig, accuracy, eval_rewired, metrics_json, train

__all__ = [
    "Formula",
    "ManifestDataset",
    "load_manifest",
    "parse_dimacs",
    "Gcn",
    "NeuroSat",
    "build_model",
    "TrainConfig",
    "accuracy",
    "eval_rewired",
    "metrics_json",
    "train",
]
