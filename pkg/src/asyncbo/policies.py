"""Placeholder ("liar") responses for experiments still in flight.

While a buffered campaign waits on measurements, each pending input is
paired with a hallucinated response so the model can be retrained. Five
rules are supported, from trusting the model outright to assuming the
worst at every pending point:

- greedy:            the model mean at each pending input
- pessimistic:       the response floor (0 for TriPeak) everywhere
- asc-pessimism:     model mean scaled by (N - j) / N at position j, so
                     pessimism grows toward the newest entry
- desc-pessimism:    model mean scaled by (j - 1) / N, the mirror image
- lcb-liar:          the lower confidence bound mean - lambda * std
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from asyncbo.acquisition import LAMBDA_DEFAULT, lcb_score
from asyncbo.gp import GPModel, predict
from asyncbo.tripeak import RESPONSE_FLOOR


class Policy(Enum):
    """Buffer policy tags; values double as the CLI / config spellings."""

    SERIAL = "serial"
    GREEDY = "greedy"
    PESSIMISTIC = "pessimistic"
    ASC_PESSIMISM = "asc-pessimism"
    DESC_PESSIMISM = "desc-pessimism"
    LCB_LIAR = "lcb-liar"


#: Policies that hallucinate buffer values (everything except serial).
ASYNC_POLICIES = tuple(p for p in Policy if p is not Policy.SERIAL)


def parse_policy(name: str) -> Policy:
    try:
        return Policy(name)
    except ValueError:
        valid = ", ".join(p.value for p in Policy)
        raise ValueError(f"unknown policy {name!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class PendingExperiment:
    """An in-flight experiment: input, frozen placeholder, submission order."""

    x: np.ndarray
    hallucinated_y: float
    submit_index: int

    def __post_init__(self):
        if not np.isfinite(self.hallucinated_y):
            raise ValueError("hallucinated response must be finite")


def hallucinate_one(
    policy: Policy,
    model: GPModel,
    x,
    position: int,
    capacity: int,
    lam: float = LAMBDA_DEFAULT,
    floor: float = RESPONSE_FLOOR,
) -> float:
    """Placeholder value for a single pending input at 1-based FIFO
    ``position`` in a buffer of ``capacity`` slots."""
    if policy is Policy.SERIAL:
        raise ValueError("serial campaigns have no pending experiments to hallucinate")
    if not 1 <= position <= capacity:
        raise ValueError(f"position {position} outside buffer of capacity {capacity}")
    if policy is Policy.PESSIMISTIC:
        return float(floor)
    mean, std = predict(model, np.asarray(x, dtype=float))
    if policy is Policy.GREEDY:
        return mean
    if policy is Policy.ASC_PESSIMISM:
        return (capacity - position) / capacity * mean
    if policy is Policy.DESC_PESSIMISM:
        return (position - 1) / capacity * mean
    if policy is Policy.LCB_LIAR:
        return lcb_score(mean, std, lam)
    raise ValueError(f"unhandled policy {policy}")


def hallucinate(
    policy: Policy,
    model: GPModel,
    pending,
    lam: float = LAMBDA_DEFAULT,
    floor: float = RESPONSE_FLOOR,
) -> list[float]:
    """Placeholder values for a whole pending list, oldest first.

    Position j runs 1..N over ``pending`` in FIFO order and N is the
    pending count, matching the buffer-array definitions above.
    """
    n = len(pending)
    if n < 1:
        raise ValueError("pending list is empty")
    return [
        hallucinate_one(policy, model, x, position=j, capacity=n, lam=lam, floor=floor)
        for j, x in enumerate(pending, start=1)
    ]
