"""
Model fitting and confidence-bound selection
============================================

A Gaussian process with an RBF kernel is fit to a handful of TriPeak
observations, then the next experiment is chosen by maximizing the upper
confidence bound mean + lambda * std over a fresh random candidate set.
The exploration constant lambda = 5/sqrt(2) is deliberately aggressive.
"""

import numpy as np

from asyncbo import (
    AcquisitionConfig,
    TriPeakSpec,
    TrainingSet,
    fit,
    predict,
    select_next,
    tripeak_true,
    ucb_score,
)

rng = np.random.default_rng(0)
spec = TriPeakSpec(dimension=2)

# %% Observe eight random points of the 2-D surface.
X = rng.random((8, 2))
y = tripeak_true(spec, X)
train = TrainingSet(X, y)

# %% Hyperparameters maximize the log marginal likelihood. The noise
# variance stays at the jitter floor by default, so the fit interpolates.
model = fit(train, seed=42)
p = model.params
print(f"fitted: length_scale={p.length_scale:.4f} signal_variance={p.signal_variance:.5f} "
      f"noise_variance={p.noise_variance:.2e}")

# %% The posterior interpolates the data and is uncertain elsewhere.
mean, std = predict(model, X[0])
print(f"\nat a training point:  mean={mean:.5f} (true {y[0]:.5f}), std={std:.2e}")
mean, std = predict(model, np.array([0.95, 0.05]))
print(f"far from the data:    mean={mean:.5f}, std={std:.4f}")

# %% Selection scores a dimension-scaled batch of uniform candidates.
cfg = AcquisitionConfig()
x_next = select_next(model, cfg, 2, np.random.default_rng(1))
m, s = predict(model, x_next)
print(f"\nnext experiment at {np.round(x_next, 4)}")
print(f"score = {m:.4f} + {cfg.lam:.4f} * {s:.4f} = {ucb_score(m, s, cfg.lam):.4f}")
print(f"true value there: {tripeak_true(spec, x_next):.4f}")
