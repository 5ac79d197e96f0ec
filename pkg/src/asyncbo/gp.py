"""Gaussian process regression with an isotropic RBF kernel.

The posterior mean and standard deviation come from a Cholesky
factorization of the noisy covariance; hyperparameters (length scale,
signal variance, noise variance) are fit by maximizing the log marginal
likelihood with L-BFGS-B in log-parameter space, restarted from a few
random initializations plus an optional warm start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, get_lapack_funcs
from scipy.optimize import minimize

#: Numerical jitter floor for the noise variance.
JITTER_FLOOR = 1e-10

#: Box bounds for (log length_scale, log signal_variance, log noise_variance).
LOG_BOUNDS = (
    (math.log(1e-2), math.log(1e1)),
    (math.log(1e-3), math.log(1e2)),
    (math.log(JITTER_FLOOR), math.log(1e1)),
)

#: Start used when no warm start is supplied: mid-range length scale, unit
#: amplitude, noise at the jitter floor (so noiseless data is interpolated).
DEFAULT_START = (0.5, 1.0, JITTER_FLOOR)

_MAX_JITTER_ESCALATIONS = 5
_LOG2PI = math.log(2.0 * math.pi)

_potrf, _potri, _trtri = get_lapack_funcs(
    ("potrf", "potri", "trtri"), (np.empty(0, dtype=np.float64),)
)


class FactorizationError(RuntimeError):
    """Covariance factorization failed even after jitter escalation."""

    def __init__(self, message: str, condition_estimate: float):
        super().__init__(message)
        self.condition_estimate = condition_estimate


@dataclass(frozen=True)
class KernelParams:
    """RBF hyperparameters; the noise variance is clamped to the jitter floor."""

    length_scale: float
    signal_variance: float
    noise_variance: float

    def __post_init__(self):
        if not self.length_scale > 0:
            raise ValueError(f"length_scale must be > 0, got {self.length_scale}")
        if not self.signal_variance > 0:
            raise ValueError(f"signal_variance must be > 0, got {self.signal_variance}")
        if self.noise_variance < 0:
            raise ValueError(f"noise_variance must be >= 0, got {self.noise_variance}")
        if self.noise_variance < JITTER_FLOOR:
            object.__setattr__(self, "noise_variance", JITTER_FLOOR)

    def to_log(self) -> np.ndarray:
        return np.log([self.length_scale, self.signal_variance, self.noise_variance])

    @classmethod
    def from_log(cls, log_params) -> "KernelParams":
        ls, sv, nv = np.exp(np.asarray(log_params, dtype=float))
        return cls(float(ls), float(sv), float(nv))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TrainingSet:
    """Immutable observations: inputs in the unit hypercube, real responses."""

    inputs: np.ndarray
    responses: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        y = np.asarray(self.responses, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} inputs but {y.shape[0]} responses")
        if X.size and (X.min() < 0.0 or X.max() > 1.0):
            raise ValueError("training inputs must lie in the unit hypercube")
        object.__setattr__(self, "inputs", _readonly(X))
        object.__setattr__(self, "responses", _readonly(y))

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def dimension(self) -> int:
        return self.inputs.shape[1]


@dataclass(frozen=True)
class GPModel:
    """Trained posterior: hyperparameters, data and its factored covariance.

    ``chol_factor`` is the lower Cholesky factor of K + noise_variance * I,
    ``inv_chol`` its inverse (kept so batched posterior variances reduce to
    one matrix product), and ``weight_vector`` solves
    (K + noise_variance * I) w = y. Instances are immutable and safe to
    share across threads for prediction.
    """

    params: KernelParams
    train: TrainingSet
    chol_factor: np.ndarray
    weight_vector: np.ndarray
    inv_chol: np.ndarray

    def __post_init__(self):
        for name in ("chol_factor", "weight_vector", "inv_chol"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))

    @classmethod
    def prior(cls, params: KernelParams, dimension: int) -> "GPModel":
        """Data-free model: predictions fall back to the prior mean 0."""
        empty = TrainingSet(np.empty((0, dimension)), np.empty(0))
        return cls(params, empty, np.empty((0, 0)), np.empty(0), np.empty((0, 0)))

    def predict(self, query):
        return predict(self, query)


def _sq_dists(A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
    """Pairwise squared Euclidean distances, clipped at 0."""
    if B is None:
        B = A
    aa = np.sum(A * A, axis=1)[:, None]
    bb = np.sum(B * B, axis=1)[None, :]
    sq = A @ B.T
    sq *= -2.0
    sq += aa
    sq += bb
    return np.maximum(sq, 0.0, out=sq)


def _rbf_from_sq(sq: np.ndarray, params: KernelParams) -> np.ndarray:
    """Turn a squared-distance matrix into kernel values, in place."""
    sq *= -0.5 / (params.length_scale**2)
    np.exp(sq, out=sq)
    sq *= params.signal_variance
    return sq


def rbf_kernel(a, b, params: KernelParams) -> float:
    """Covariance between two points: sv * exp(-|a - b|^2 / (2 ls^2))."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    sq = float(np.sum((a - b) ** 2))
    return params.signal_variance * math.exp(-0.5 * sq / params.length_scale**2)


def _lml_core(sq: np.ndarray, y: np.ndarray, log_params: np.ndarray):
    """Log marginal likelihood and its log-space gradient.

    Raises np.linalg.LinAlgError if the noisy covariance is not positive
    definite at these parameters.
    """
    ls, sv, nv = np.exp(log_params)
    n = y.shape[0]
    K = sq * (-0.5 / (ls * ls))
    np.exp(K, out=K)
    K *= sv  # noise-free covariance, reused by the gradient
    Ky = K.copy()
    Ky.flat[:: n + 1] += nv
    L, info = _potrf(Ky, lower=1, overwrite_a=1, clean=1)
    if info != 0:
        raise np.linalg.LinAlgError(f"leading minor {info} not positive definite")
    alpha = cho_solve((L, True), y, check_finite=False)
    value = (
        -0.5 * float(y @ alpha)
        - float(np.sum(np.log(np.diagonal(L))))
        - 0.5 * n * _LOG2PI
    )
    # d(LML)/d(theta) = 0.5 * [alpha^T C alpha - sum(Kinv o C)] per
    # parameter, with C = K o sq / ls^2, K, and nv * I respectively.
    Kinv, info = _potri(L, lower=1, overwrite_c=1)
    if info != 0:
        raise np.linalg.LinAlgError("covariance inversion failed")
    d = Kinv.diagonal().copy()
    T = Kinv + Kinv.T  # potri fills one triangle; diagonal counted twice
    KS = K * sq
    Ka = K @ alpha
    KSa = KS @ alpha
    sum_inv_K = float(np.sum(T * K)) - float(d @ K.diagonal())
    sum_inv_KS = float(np.sum(T * KS)) - float(d @ KS.diagonal())
    grad = np.array(
        [
            0.5 * (float(alpha @ KSa) - sum_inv_KS) / (ls * ls),
            0.5 * (float(alpha @ Ka) - sum_inv_K),
            0.5 * nv * (float(alpha @ alpha) - float(d.sum())),
        ]
    )
    return value, grad


def log_marginal_likelihood(train: TrainingSet, params: KernelParams):
    """Marginal log likelihood of the data and its gradient in log space.

    Returns ``(value, gradient)`` with the gradient taken with respect to
    (log length_scale, log signal_variance, log noise_variance).
    """
    if len(train) == 0:
        raise ValueError("training set is empty")
    sq = _sq_dists(train.inputs)
    try:
        return _lml_core(sq, train.responses, params.to_log())
    except np.linalg.LinAlgError as exc:
        cond = _condition_estimate(train, params)
        raise FactorizationError(
            f"covariance factorization failed (condition estimate {cond:.3e}): {exc}",
            cond,
        ) from exc


def _condition_estimate(train: TrainingSet, params: KernelParams) -> float:
    K = _rbf_from_sq(_sq_dists(train.inputs), params)
    K.flat[:: len(train) + 1] += params.noise_variance
    return float(np.linalg.cond(K))


def _build_model(train: TrainingSet, params: KernelParams) -> GPModel:
    """Factorize the covariance, escalating jitter x10 at most 5 times."""
    n = len(train)
    K = _rbf_from_sq(_sq_dists(train.inputs), params)
    nv = params.noise_variance
    for _ in range(_MAX_JITTER_ESCALATIONS + 1):
        Ky = K.copy()
        Ky.flat[:: n + 1] += nv
        L, info = _potrf(Ky, lower=1, overwrite_a=1, clean=1)
        if info == 0:
            if nv != params.noise_variance:
                params = KernelParams(params.length_scale, params.signal_variance, nv)
            alpha = cho_solve((L, True), train.responses, check_finite=False)
            Linv, inv_info = _trtri(L, lower=1)
            if inv_info == 0:
                return GPModel(params, train, L, alpha, Linv)
        nv = max(nv, JITTER_FLOOR) * 10.0
    cond = _condition_estimate(train, params)
    raise FactorizationError(
        f"covariance factorization failed after {_MAX_JITTER_ESCALATIONS} jitter "
        f"escalations (condition estimate {cond:.3e})",
        cond,
    )


def fit(
    train: TrainingSet,
    seed,
    *,
    warm_start: KernelParams | None = None,
    fixed_params: KernelParams | None = None,
    optimize_noise: bool = False,
    restarts: int = 3,
    maxiter: int = 50,
    restart_maxiter: int = 8,
) -> GPModel:
    """Fit hyperparameters by maximizing the log marginal likelihood.

    L-BFGS-B runs once from ``warm_start`` (or a fixed default start) and
    once from ``restarts`` random points drawn log-uniformly inside the
    parameter bounds; random restarts get a tighter iteration cap since
    they only need to locate competing basins. The best final value wins,
    with ties within optimizer tolerance resolved in favor of the earlier
    start so that warm starts are sticky. Deterministic for a given
    training set and seed.

    By default the noise variance stays pinned at the jitter floor, so the
    model interpolates its training data; ``optimize_noise=True`` fits it
    alongside the other hyperparameters instead, letting inconsistent
    responses be absorbed as observation noise. ``fixed_params`` skips the
    search entirely and conditions the model on the given hyperparameters.
    """
    if len(train) == 0:
        raise ValueError("training set is empty")
    if fixed_params is not None:
        return _build_model(train, fixed_params)

    sq = _sq_dists(train.inputs)
    y = train.responses

    def objective(log_params):
        try:
            value, grad = _lml_core(sq, y, log_params)
        except np.linalg.LinAlgError:
            return 1e25, np.zeros(3)
        return -value, -grad

    log_floor = math.log(JITTER_FLOOR)
    bounds = LOG_BOUNDS if optimize_noise else LOG_BOUNDS[:2] + ((log_floor, log_floor),)
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    starts = [np.log(np.asarray(warm_start_tuple(warm_start)))]
    starts += [rng.uniform(lo, hi) for _ in range(restarts)]

    best_fun = None
    best_x = None
    for i, x0 in enumerate(starts):
        res = minimize(
            objective,
            np.clip(x0, lo, hi),
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={
                "maxiter": maxiter if i == 0 else restart_maxiter,
                "ftol": 1e-7,
                "gtol": 1e-4,
            },
        )
        if not np.isfinite(res.fun) or res.fun >= 1e25:
            continue
        if best_fun is None or res.fun < best_fun - 1e-9 * (1.0 + abs(best_fun)):
            best_fun = res.fun
            best_x = res.x
    if best_x is None:
        raise FactorizationError(
            "no hyperparameter start produced a finite likelihood",
            _condition_estimate(train, KernelParams(*warm_start_tuple(warm_start))),
        )
    return _build_model(train, KernelParams.from_log(best_x))


def warm_start_tuple(warm_start: KernelParams | None):
    if warm_start is None:
        return DEFAULT_START
    return (warm_start.length_scale, warm_start.signal_variance, warm_start.noise_variance)


def posterior_stats(model: GPModel, Q: np.ndarray):
    """Mean and std arrays for a (m, D) query batch; no shape checks."""
    sv = model.params.signal_variance
    if len(model.train) == 0:
        return np.zeros(Q.shape[0]), np.full(Q.shape[0], math.sqrt(sv))
    Kstar = _rbf_from_sq(_sq_dists(model.train.inputs, Q), model.params)
    mean = Kstar.T @ model.weight_vector
    V = model.inv_chol @ Kstar
    var = sv - np.einsum("ij,ij->j", V, V)
    std = np.sqrt(np.maximum(var, 0.0, out=var), out=var)
    return mean, std


def predict(model: GPModel, query):
    """Posterior mean and standard deviation at one query (D,) or a batch (m, D).

    The standard deviation is of the latent function (no observation
    noise); negative variances from rounding are clamped to zero.
    """
    Q = np.asarray(query, dtype=float)
    single = Q.ndim == 1
    Q = np.atleast_2d(Q)
    d = model.train.dimension if len(model.train) else Q.shape[1]
    if Q.shape[1] != d:
        raise ValueError(f"query dimension {Q.shape[1]} does not match data dimension {d}")
    mean, std = posterior_stats(model, Q)
    if single:
        return float(mean[0]), float(std[0])
    return mean, std
