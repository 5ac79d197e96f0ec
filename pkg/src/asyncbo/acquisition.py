"""Confidence-bound scoring and candidate-set experiment selection.

The next experiment maximizes the upper confidence bound mean + lambda *
std over a fresh batch of uniform random candidates; the matching lower
confidence bound mean - lambda * std doubles as the placeholder value of
the LCB liar policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from asyncbo.gp import GPModel, _rbf_from_sq, _sq_dists

#: Default exploration constant, 5 / sqrt(2).
LAMBDA_DEFAULT = 5.0 / math.sqrt(2.0)

#: Default number of uniform candidates per input dimension.
CANDIDATES_PER_DIM = 1024


@dataclass(frozen=True)
class AcquisitionConfig:
    """Selection settings: exploration constant and candidate budget.

    The candidate count scales with dimension: M = candidates_per_dim * D.
    The random stream that draws candidates is owned by the caller and
    passed to :func:`select_next` explicitly, keeping this config pure data.
    """

    lam: float = LAMBDA_DEFAULT
    candidates_per_dim: int = CANDIDATES_PER_DIM

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if self.candidates_per_dim < 1:
            raise ValueError("candidates_per_dim must be >= 1")

    def candidate_count(self, dimension: int) -> int:
        return self.candidates_per_dim * dimension


def ucb_score(mean, std, lam: float):
    """Optimistic score mean + lam * std; monotone in both arguments."""
    return mean + lam * std


def lcb_score(mean, std, lam: float):
    """Pessimistic score mean - lam * std; may be negative, never clamped."""
    return mean - lam * std


_SCORE_BLOCK = 1024


def select_next(
    model: GPModel,
    cfg: AcquisitionConfig,
    dimension: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Pick the UCB-maximizing point among fresh uniform candidates.

    Draws ``cfg.candidate_count(dimension)`` points from ``rng``, scores
    them and returns the first candidate attaining the maximal score
    (lowest index wins ties), so the result is deterministic given the
    model and the stream state.

    Equivalent to scoring every candidate, but candidates are visited in
    blocks of descending posterior mean: since no score can exceed its
    mean plus lam * sqrt(signal_variance), whole blocks are skipped once
    they provably cannot beat the best exact score found so far.
    """
    m = cfg.candidate_count(dimension)
    candidates = rng.random((m, dimension))
    if len(model.train) == 0:
        return candidates[0].copy()  # a prior model scores every point equally
    if model.train.dimension != dimension:
        raise ValueError(
            f"model dimension {model.train.dimension} does not match {dimension}"
        )
    params = model.params
    Kstar = _rbf_from_sq(_sq_dists(model.train.inputs, candidates), params)
    means = Kstar.T @ model.weight_vector
    cap = cfg.lam * math.sqrt(params.signal_variance)

    order = np.argsort(-means, kind="stable")
    best_score = -np.inf
    best_idx = -1
    for start in range(0, m, _SCORE_BLOCK):
        block = order[start : start + _SCORE_BLOCK]
        if means[block[0]] + cap < best_score:
            break  # strict: later candidates cannot even tie the best
        V = model.inv_chol @ Kstar[:, block]
        var = params.signal_variance - np.einsum("ij,ij->j", V, V)
        scores = means[block] + cfg.lam * np.sqrt(np.maximum(var, 0.0, out=var), out=var)
        top = float(scores.max())
        if top > best_score:
            best_score = top
            best_idx = int(block[scores == top].min())
        elif top == best_score:
            best_idx = min(best_idx, int(block[scores == top].min()))
    return candidates[best_idx].copy()
