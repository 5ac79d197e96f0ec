"""Asynchronous Bayesian optimization with buffered liar policies.

Library layout:

- ``gp``: Gaussian process regression (RBF kernel, marginal-likelihood fit)
- ``tripeak``: the TriPeak synthetic ground truth and its optimum
- ``acquisition``: upper/lower confidence bound scoring and selection
- ``policies``: hallucinated placeholder values for in-flight experiments
- ``campaign``: one serial or buffered optimization campaign
- ``bench``: replicate suites, aggregation, CSV and SVG output
"""

from asyncbo.acquisition import AcquisitionConfig, lcb_score, select_next, ucb_score
from asyncbo.campaign import CampaignConfig, CampaignTrace, effective_time, loss_at, run_campaign
from asyncbo.gp import (
    FactorizationError,
    GPModel,
    KernelParams,
    TrainingSet,
    fit,
    log_marginal_likelihood,
    predict,
    rbf_kernel,
)
from asyncbo.policies import (
    PendingExperiment,
    Policy,
    hallucinate,
    hallucinate_one,
    parse_policy,
)
from asyncbo.tripeak import (
    NoiseModel,
    RESPONSE_FLOOR,
    TriPeakSpec,
    global_optimum,
    tripeak_observe,
    tripeak_true,
)

__all__ = [
    "AcquisitionConfig",
    "CampaignConfig",
    "CampaignTrace",
    "FactorizationError",
    "GPModel",
    "KernelParams",
    "NoiseModel",
    "PendingExperiment",
    "Policy",
    "RESPONSE_FLOOR",
    "TrainingSet",
    "TriPeakSpec",
    "effective_time",
    "fit",
    "global_optimum",
    "hallucinate",
    "hallucinate_one",
    "lcb_score",
    "log_marginal_likelihood",
    "loss_at",
    "parse_policy",
    "predict",
    "rbf_kernel",
    "run_campaign",
    "select_next",
    "tripeak_observe",
    "tripeak_true",
    "ucb_score",
]

__version__ = "0.1.0"
