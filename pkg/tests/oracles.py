"""Independent reference computations used to pin expected values.

Everything here is deliberately written the slow, obvious way (scalar
loops, dense inversion, finite differences) so it shares no code path
with the library it checks.
"""

from __future__ import annotations

import math

import numpy as np

TRIPEAK_A = (4.0, 1.5, 4.0)
TRIPEAK_MU = (0.2, 0.5, 0.8)
TRIPEAK_B = (0.3, 0.2, 0.6)


def tripeak_scalar(x) -> float:
    """Direct per-term evaluation of the three-peak test function."""
    x = list(x)
    d = len(x)
    c = 1.0 / (d * (TRIPEAK_B[0] + TRIPEAK_B[1] + TRIPEAK_B[2]))
    total = 0.0
    for a, mu, b in zip(TRIPEAK_A, TRIPEAK_MU, TRIPEAK_B):
        expo = 0.0
        for xi in x:
            expo += a * a * (xi - mu) * (xi - mu)
        total += b * math.exp(-expo)
    return c * total


def rbf_scalar(a, b, length_scale: float, signal_variance: float) -> float:
    sq = 0.0
    for ai, bi in zip(a, b):
        sq += (ai - bi) ** 2
    return signal_variance * math.exp(-sq / (2.0 * length_scale**2))


def gram(X, length_scale, signal_variance, noise_variance):
    """Dense covariance of a training set, observation noise on the diagonal."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    K = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            K[i, j] = rbf_scalar(X[i], X[j], length_scale, signal_variance)
    return K + noise_variance * np.eye(n)


def gp_predict_dense(X, y, Q, length_scale, signal_variance, noise_variance):
    """Posterior mean/std by explicit dense inversion, no Cholesky."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    y = np.asarray(y, dtype=float)
    Kinv = np.linalg.inv(gram(X, length_scale, signal_variance, noise_variance))
    means, stds = [], []
    for q in Q:
        kstar = np.array([rbf_scalar(xi, q, length_scale, signal_variance) for xi in X])
        kss = rbf_scalar(q, q, length_scale, signal_variance)
        mean = kstar @ Kinv @ y
        var = kss - kstar @ Kinv @ kstar
        means.append(mean)
        stds.append(math.sqrt(max(0.0, var)))
    return np.array(means), np.array(stds)


def lml_dense(X, y, length_scale, signal_variance, noise_variance):
    """Gaussian log density of y under the dense covariance."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    n = len(y)
    Ky = gram(X, length_scale, signal_variance, noise_variance)
    sign, logdet = np.linalg.slogdet(Ky)
    assert sign > 0
    return -0.5 * (y @ np.linalg.solve(Ky, y)) - 0.5 * logdet - 0.5 * n * math.log(2 * math.pi)


def lml_fd_gradient(X, y, length_scale, signal_variance, noise_variance, h=1e-5):
    """Central finite differences of the log density in log-parameter space."""
    logp = np.log([length_scale, signal_variance, noise_variance])
    grad = np.empty(3)
    for i in range(3):
        up, dn = logp.copy(), logp.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (lml_dense(X, y, *np.exp(up)) - lml_dense(X, y, *np.exp(dn))) / (2 * h)
    return grad


def quantiles_linear(values, q) -> float:
    """Linear-interpolation quantile of a 1-D sample (sorted order statistics)."""
    v = sorted(float(x) for x in values)
    n = len(v)
    pos = q * (n - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, n - 1)
    frac = pos - lo
    return v[lo] * (1 - frac) + v[hi] * frac
