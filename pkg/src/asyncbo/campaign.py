"""One simulated optimization campaign, serial or buffered.

Serial mode repeats fit / select / measure one experiment at a time.
Buffered (asynchronous) mode keeps ``buffer_length`` experiments in
flight under a uniform delay: measurements complete in submission order,
each completion replaces its placeholder with the real observation, and
a new experiment is selected from a model trained on all real data plus
the placeholders still pending. Placeholder values are computed once at
assignment, from the model current at that moment, and never refreshed.

Experiments all take one time unit, so the k-th completion lands at
effective time k in serial mode and (k - 1) / buffer_length + 1 when
buffer_length experiments run concurrently.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from asyncbo import gp
from asyncbo.acquisition import AcquisitionConfig, select_next
from asyncbo.gp import FactorizationError, TrainingSet
from asyncbo.policies import PendingExperiment, Policy, hallucinate_one
from asyncbo.tripeak import RESPONSE_FLOOR, NoiseModel, TriPeakSpec, global_optimum, tripeak_true

# Fixed offsets deriving one independent stream per purpose from the
# campaign seed, so replicates with equal seeds share initialization
# points regardless of policy or buffer length.
STREAM_INIT = 0
STREAM_CANDIDATES = 1
STREAM_NOISE = 2
STREAM_FIT = 3


class CampaignError(RuntimeError):
    """A campaign aborted; carries the 1-based index of the failed experiment."""

    def __init__(self, message: str, experiment_index: int):
        super().__init__(message)
        self.experiment_index = experiment_index


@dataclass(frozen=True)
class CampaignConfig:
    """One campaign setup; ``buffer_length`` 0 means serial sampling.

    ``fit_noise`` selects whether the surrogate model fits its noise
    variance or keeps it pinned at the jitter floor (the default, which
    makes the model interpolate and gives placeholder responses their
    full repulsive effect on the confidence-bound selection).
    """

    policy: Policy
    buffer_length: int
    dimension: int
    noise_std: float
    budget: int
    seed: int
    init_count: int = 5
    fit_noise: bool = False
    acquisition: AcquisitionConfig = field(default_factory=AcquisitionConfig)

    def __post_init__(self):
        if (self.policy is Policy.SERIAL) != (self.buffer_length == 0):
            raise ValueError("buffer_length 0 and the serial policy imply each other")
        if not 0 <= self.buffer_length <= 10:
            raise ValueError(f"buffer_length must be in 0..10, got {self.buffer_length}")
        if not 2 <= self.dimension <= 6:
            raise ValueError(f"dimension must be in 2..6, got {self.dimension}")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if self.init_count < 1:
            raise ValueError("init_count must be >= 1")
        if self.budget <= self.init_count:
            raise ValueError("budget must exceed init_count")


@dataclass(frozen=True)
class CampaignTrace:
    """Per-completion history: inputs, observations, noiseless truth, loss."""

    config: CampaignConfig
    f_star: float
    inputs: np.ndarray
    y_observed: np.ndarray
    y_true: np.ndarray
    loss: np.ndarray
    effective_time: np.ndarray

    def __post_init__(self):
        for name in ("inputs", "y_observed", "y_true", "loss", "effective_time"):
            object.__setattr__(self, name, gp._readonly(getattr(self, name)))

    def __len__(self) -> int:
        return self.loss.shape[0]


def effective_time(k: int, buffer_length: int) -> float:
    """Completion time of the k-th experiment in single-experiment units."""
    if buffer_length == 0:
        return float(k)
    return (k - 1) / buffer_length + 1.0


def loss_at(trace: CampaignTrace, k: int) -> float:
    """Simple regret after k completions: f_star minus the best true value."""
    if not 1 <= k <= len(trace):
        raise ValueError(f"experiment index {k} outside 1..{len(trace)}")
    return float(trace.loss[k - 1])


def _stream(seed: int, offset: int) -> np.random.Generator:
    return np.random.default_rng([seed, offset])


def run_campaign(cfg: CampaignConfig, surrogate: TriPeakSpec, probe=None) -> CampaignTrace:
    """Simulate one campaign to ``cfg.budget`` completed experiments.

    The trace is a pure function of (cfg, surrogate): initialization,
    candidate, noise and fit-seed streams are all derived from cfg.seed.
    ``probe``, if given, is called with a dict at every model fit; it is
    a diagnostic hook and has no effect on the campaign.
    """
    if surrogate.dimension != cfg.dimension:
        raise ValueError(
            f"surrogate dimension {surrogate.dimension} != campaign dimension {cfg.dimension}"
        )
    if surrogate.noise_std != cfg.noise_std:
        raise ValueError(
            f"surrogate noise_std {surrogate.noise_std} != campaign noise_std {cfg.noise_std}"
        )

    d = cfg.dimension
    budget = cfg.budget
    init_rng = _stream(cfg.seed, STREAM_INIT)
    cand_rng = _stream(cfg.seed, STREAM_CANDIDATES)
    noise = NoiseModel(cfg.noise_std, _stream(cfg.seed, STREAM_NOISE))
    fit_rng = _stream(cfg.seed, STREAM_FIT)

    _, f_star = global_optimum(surrogate)

    inputs = np.empty((budget, d))
    y_obs = np.empty(budget)
    y_true = np.empty(budget)
    loss = np.empty(budget)
    completed = 0
    best_true = -np.inf

    def complete(x: np.ndarray) -> None:
        nonlocal completed, best_true
        true = tripeak_true(surrogate, x)
        inputs[completed] = x
        y_true[completed] = true
        y_obs[completed] = true + noise.draw()
        best_true = max(best_true, true)
        loss[completed] = f_star - best_true
        completed += 1

    init_points = init_rng.random((cfg.init_count, d))
    for x in init_points:
        complete(x)

    pending: deque[PendingExperiment] = deque()
    warm = None

    def refit() -> gp.GPModel:
        nonlocal warm
        if pending:
            tx = np.concatenate([inputs[:completed], [p.x for p in pending]])
            ty = np.concatenate([y_obs[:completed], [p.hallucinated_y for p in pending]])
        else:
            tx, ty = inputs[:completed], y_obs[:completed]
        if probe is not None:
            probe(
                {
                    "n_real": completed,
                    "occupancy": len(pending),
                    "hallucinated": tuple(p.hallucinated_y for p in pending),
                    "submit_indices": tuple(p.submit_index for p in pending),
                }
            )
        try:
            model = gp.fit(
                TrainingSet(tx, ty),
                seed=int(fit_rng.integers(2**63)),
                warm_start=warm,
                optimize_noise=cfg.fit_noise,
            )
        except FactorizationError as exc:
            raise CampaignError(
                f"model fit failed before experiment {completed + 1}: {exc}",
                completed + 1,
            ) from exc
        warm = model.params
        return model

    if cfg.policy is Policy.SERIAL:
        while completed < budget:
            model = refit()
            complete(select_next(model, cfg.acquisition, d, cand_rng))
    else:
        submitted = completed

        def select_and_push() -> None:
            nonlocal submitted
            model = refit()
            x = select_next(model, cfg.acquisition, d, cand_rng)
            value = hallucinate_one(
                cfg.policy,
                model,
                x,
                position=len(pending) + 1,
                capacity=cfg.buffer_length,
                lam=cfg.acquisition.lam,
                floor=RESPONSE_FLOOR,
            )
            pending.append(PendingExperiment(x, value, submitted))
            submitted += 1

        for _ in range(cfg.buffer_length):
            if submitted == budget:
                break
            select_and_push()
        while pending:
            complete(pending.popleft().x)
            if submitted < budget:
                select_and_push()

    times = np.array([effective_time(k, cfg.buffer_length) for k in range(1, budget + 1)])
    return CampaignTrace(
        config=cfg,
        f_star=f_star,
        inputs=inputs,
        y_observed=y_obs,
        y_true=y_true,
        loss=loss,
        effective_time=times,
    )
