"""Literal-clause message-passing models.

Both models operate on the bipartite incidence of a formula with learned
initial embeddings and partition-specialized updates. ``NeuroSat`` ties one
set of recurrent weights across all message-passing rounds and feeds each
literal its negation's state (flip link: literal ids differ in the lowest
bit). ``Gcn`` is a plain fixed-depth convolution with mean aggregation.
"""

from __future__ import annotations

import torch
from torch import nn

from .data import Formula, incidence


def _scatter_sum(src: torch.Tensor, index: torch.Tensor, size: int) -> torch.Tensor:
    out = src.new_zeros((size, src.shape[1]))
    out.index_add_(0, index, src)
    return out


def _degrees(index: torch.Tensor, size: int) -> torch.Tensor:
    deg = torch.zeros(size, dtype=torch.float32)
    deg.index_add_(0, index, torch.ones_like(index, dtype=torch.float32))
    return deg.clamp(min=1.0).unsqueeze(1)


def _flip(lits: torch.Tensor) -> torch.Tensor:
    idx = torch.arange(lits.shape[0])
    return lits[idx ^ 1]


class NeuroSat(nn.Module):
    def __init__(self, dim: int = 128, rounds: int = 26):
        super().__init__()
        self.dim = dim
        self.rounds = rounds
        self.lit_init = nn.Parameter(torch.randn(dim) / dim**0.5)
        self.clause_init = nn.Parameter(torch.randn(dim) / dim**0.5)
        self.lit_msg = nn.Sequential(nn.Linear(dim, dim), nn.ReLU(), nn.Linear(dim, dim))
        self.clause_msg = nn.Sequential(nn.Linear(dim, dim), nn.ReLU(), nn.Linear(dim, dim))
        self.clause_update = nn.GRUCell(dim, dim)
        self.lit_update = nn.GRUCell(2 * dim, dim)
        self.vote = nn.Sequential(nn.Linear(dim, dim), nn.ReLU(), nn.Linear(dim, 1))

    def forward(self, formula: Formula, rounds: int | None = None) -> torch.Tensor:
        """Per-literal scores, shape (2*num_vars,)."""
        lit_idx, clause_idx = incidence(formula)
        n_lits, n_clauses = 2 * formula.num_vars, formula.num_clauses
        lits = self.lit_init.expand(n_lits, -1).contiguous()
        clauses = self.clause_init.expand(n_clauses, -1).contiguous()
        for _ in range(rounds if rounds is not None else self.rounds):
            to_clauses = _scatter_sum(self.lit_msg(lits)[lit_idx], clause_idx, n_clauses)
            clauses = self.clause_update(to_clauses, clauses)
            to_lits = _scatter_sum(self.clause_msg(clauses)[clause_idx], lit_idx, n_lits)
            lits = self.lit_update(torch.cat([to_lits, _flip(lits)], dim=1), lits)
        return self.vote(lits).squeeze(1)

    def eval_rounds(self, formula: Formula) -> int:
        # test-time rule: scale the number of rounds with the instance size
        return 2 * formula.num_vars


class Gcn(nn.Module):
    def __init__(self, dim: int = 128, layers: int = 4):
        super().__init__()
        self.dim = dim
        self.lit_init = nn.Parameter(torch.randn(dim) / dim**0.5)
        self.clause_init = nn.Parameter(torch.randn(dim) / dim**0.5)
        self.lit_layers = nn.ModuleList(nn.Linear(2 * dim, dim) for _ in range(layers))
        self.clause_layers = nn.ModuleList(nn.Linear(2 * dim, dim) for _ in range(layers))
        self.vote = nn.Sequential(nn.Linear(dim, dim), nn.ReLU(), nn.Linear(dim, 1))

    def forward(self, formula: Formula, rounds: int | None = None) -> torch.Tensor:
        lit_idx, clause_idx = incidence(formula)
        n_lits, n_clauses = 2 * formula.num_vars, formula.num_clauses
        lit_deg = _degrees(lit_idx, n_lits)
        clause_deg = _degrees(clause_idx, n_clauses)
        lits = self.lit_init.expand(n_lits, -1).contiguous()
        clauses = self.clause_init.expand(n_clauses, -1).contiguous()
        for lit_layer, clause_layer in zip(self.lit_layers, self.clause_layers):
            to_clauses = _scatter_sum(lits[lit_idx], clause_idx, n_clauses) / clause_deg
            to_lits = _scatter_sum(clauses[clause_idx], lit_idx, n_lits) / lit_deg
            clauses = torch.relu(clause_layer(torch.cat([clauses, to_clauses], dim=1)))
            lits = torch.relu(lit_layer(torch.cat([lits, to_lits], dim=1)))
        return self.vote(lits).squeeze(1)

    def eval_rounds(self, formula: Formula) -> int | None:
        return None  # fixed depth


MODELS = ("gcn", "neurosat")


def build_model(name: str, dim: int = 128, rounds: int = 26) -> nn.Module:
    if name == "neurosat":
        return NeuroSat(dim=dim, rounds=rounds)
    if name == "gcn":
        return Gcn(dim=dim, layers=rounds)
    raise ValueError(f"unknown model {name!r}; expected one of {MODELS}")


def decode_assignment(scores: torch.Tensor) -> list[bool]:
    """Variable assignment from literal scores: x_v iff +v outscores -v."""
    pos = scores[0::2]
    neg = scores[1::2]
    return (pos > neg).tolist()


def clause_unsat_loss(formula: Formula, scores: torch.Tensor) -> torch.Tensor:
    """Smooth fraction of unsatisfied clauses; zero iff decoding satisfies all."""
    prob_true = torch.sigmoid(scores)
    lit_idx, clause_idx = incidence(formula)
    log_false = torch.log1p(-prob_true.clamp(max=1 - 1e-6))
    clause_log_unsat = _scatter_sum(
        log_false[lit_idx].unsqueeze(1), clause_idx, formula.num_clauses
    ).squeeze(1)
    return clause_log_unsat.exp().mean()
