"""Seeded finite-n simulation of the spiked GOE observation model.

Each trial draws its own generator from ``(seed, trial_index)`` through
:class:`numpy.random.SeedSequence`, so reports do not depend on how trials are
scheduled across worker threads.  Aggregation is always in trial order.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
import scipy.stats

from . import semicircle
from .errors import EigensolverFailure, RankExceedsDimension, ShapeMismatch, ValidationError
from .model import InferenceModel, SignalModel, effective_rank, validate

MIN_DIMENSION = 16
# Above this size only the top-d eigenvectors are computed, by Lanczos.
DENSE_VECTOR_LIMIT = 1024


class SignalPrior(str, enum.Enum):
    SPHERE = "sphere"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class EnsembleConfig:
    n: int
    trials: int
    seed: int
    signal: SignalModel
    prior: SignalPrior = SignalPrior.SPHERE

    def __post_init__(self):
        object.__setattr__(self, "prior", SignalPrior(self.prior))
        if int(self.n) != self.n or self.n < MIN_DIMENSION:
            raise ValidationError(f"n must be an integer >= {MIN_DIMENSION}, got {self.n}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.signal.rank > self.n:
            raise RankExceedsDimension(f"r = {self.signal.rank} exceeds n = {self.n}")
        validate(self.signal, InferenceModel((), 1.0))


@dataclass(frozen=True)
class MonteCarloReport:
    outlier_means: tuple[float, ...]
    overlap_sq_means: tuple[float, ...]
    bulk_edge_mean: float
    esd_ks: float
    per_trial_seeds: tuple[int, ...]


def trial_seed(seed: int, trial_index: int) -> int:
    """64-bit seed for one trial, derived from the run seed and the trial index."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(trial_index),))
    return int(ss.generate_state(1, np.uint64)[0])


def sample_goe(n: int, rng: np.random.Generator) -> np.ndarray:
    """Symmetric noise with N(0, 1) off-diagonal and N(0, 2) diagonal entries."""
    g = rng.standard_normal((n, n))
    w = (g + g.T) / math.sqrt(2.0)
    return w


def _gram_schmidt(x: np.ndarray) -> np.ndarray:
    # Modified Gram-Schmidt with one reorthogonalisation pass; columns keep
    # their projected norms.
    q = np.array(x, dtype=float, copy=True)
    for j in range(q.shape[1]):
        for _ in range(2):
            for i in range(j):
                unit = q[:, i] / np.linalg.norm(q[:, i])
                q[:, j] -= (unit @ q[:, j]) * unit
    return q


def _check_rank(n, r):
    if r > n:
        raise RankExceedsDimension(f"r = {r} exceeds n = {n}")


def sample_sphere_signals(n: int, r: int, rng: np.random.Generator, orthogonalize: bool = True):
    """``r`` columns on the sphere of radius ``sqrt(n)``.

    With ``orthogonalize`` (the prior's setting) the columns are made exactly
    orthogonal before rescaling; without it they are iid uniform.
    """
    _check_rank(n, r)
    x = rng.standard_normal((n, r))
    if orthogonalize:
        x = _gram_schmidt(x)
    if r == 0:
        return x
    return x * (math.sqrt(n) / np.linalg.norm(x, axis=0))


def sample_gaussian_signals(n: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """iid standard Gaussian columns, projected to be pairwise orthogonal (norms not rescaled)."""
    _check_rank(n, r)
    return _gram_schmidt(rng.standard_normal((n, r)))


def assemble_observation(signals: np.ndarray, signal_model: SignalModel, w: np.ndarray) -> np.ndarray:
    """``Y = sqrt(snr_true / n) * sum_i alpha_i s_i s_i^T + W``."""
    w = np.asarray(w, dtype=float)
    signals = np.asarray(signals, dtype=float)
    n = w.shape[0]
    if w.ndim != 2 or w.shape != (n, n):
        raise ShapeMismatch(f"noise must be square, got shape {w.shape}")
    if signals.ndim != 2 or signals.shape != (n, signal_model.rank):
        raise ShapeMismatch(
            f"signals must have shape ({n}, {signal_model.rank}), got {signals.shape}"
        )
    if signal_model.rank == 0:
        return w.copy()
    alphas = np.asarray(signal_model.alphas)
    spike = (signals * alphas) @ signals.T
    spike = 0.5 * (spike + spike.T)
    return w + math.sqrt(signal_model.snr_true / n) * spike


def _top_eigvecs(y: np.ndarray, d: int, rng: np.random.Generator, solver: str):
    n = y.shape[0]
    if solver == "dense" or (solver == "auto" and (n <= DENSE_VECTOR_LIMIT or d >= n // 4)):
        vals, vecs = scipy.linalg.eigh(y, subset_by_index=[n - d, n - 1])
        return vals[::-1], vecs[:, ::-1]
    v0 = rng.standard_normal(n)
    vals, vecs = scipy.sparse.linalg.eigsh(y, k=d, which="LA", v0=v0, tol=0.0)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def _run_trial(config: EnsembleConfig, d: int, index: int, solver: str):
    seed = trial_seed(config.seed, index)
    rng = np.random.default_rng(seed)
    n, r = config.n, config.signal.rank
    w = sample_goe(n, rng)
    if config.prior is SignalPrior.SPHERE:
        s = sample_sphere_signals(n, r, rng)
    else:
        s = sample_gaussian_signals(n, r, rng)
    y = assemble_observation(s, config.signal, w) / math.sqrt(n)
    try:
        eigvals = scipy.linalg.eigvalsh(y)
        if not np.all(np.isfinite(eigvals)):
            raise np.linalg.LinAlgError("non-finite eigenvalues")
        if abs(np.trace(y) - math.fsum(eigvals)) > 1e-8 * n:
            raise np.linalg.LinAlgError("eigenvalue sum does not match the trace")
        overlaps = np.empty(0)
        if d:
            top_vals, top_vecs = _top_eigvecs(y, d, rng, solver)
            if np.max(np.abs(top_vals - eigvals[::-1][:d])) > 1e-8 * max(1.0, eigvals[-1]):
                raise np.linalg.LinAlgError("eigenvector solver disagrees with the spectrum")
            units = s[:, :d] / np.linalg.norm(s[:, :d], axis=0)
            overlaps = np.einsum("ij,ij->j", top_vecs, units) ** 2
    except (np.linalg.LinAlgError, scipy.sparse.linalg.ArpackError) as exc:
        raise EigensolverFailure(
            f"trial {index} (seed {seed}): {exc}", trial_index=index, trial_seed=seed
        ) from exc
    descending = eigvals[::-1]
    bulk = eigvals[: n - d]
    ks = scipy.stats.kstest(bulk, semicircle.sc_cdf).statistic
    return descending[:d], overlaps, descending[d], float(ks), seed


def spectral_report(config: EnsembleConfig, workers: int = 1, solver: str = "auto") -> MonteCarloReport:
    """Average outliers, overlaps, bulk edge and bulk-ESD KS distance over trials.

    The outlier/bulk split uses the theoretical effective rank ``d``.
    ``solver`` picks how top eigenvectors are found: ``"dense"`` (LAPACK
    subset), ``"lanczos"`` (ARPACK, seeded start vector) or ``"auto"``.
    The full spectrum always comes from a dense symmetric solver.
    """
    if solver not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown solver {solver!r}")
    d = effective_rank(config.signal)

    def run(i):
        return _run_trial(config, d, i, solver)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(config.trials)))
    else:
        results = [run(i) for i in range(config.trials)]

    outliers = np.mean([res[0] for res in results], axis=0) if d else np.empty(0)
    overlaps = np.mean([res[1] for res in results], axis=0) if d else np.empty(0)
    return MonteCarloReport(
        outlier_means=tuple(float(x) for x in outliers),
        overlap_sq_means=tuple(float(x) for x in overlaps),
        bulk_edge_mean=float(np.mean([res[2] for res in results])),
        esd_ks=float(np.mean([res[3] for res in results])),
        per_trial_seeds=tuple(res[4] for res in results),
    )


def orthogonality_experiment(n: int, r: int, epsilon: float, trials: int, seed: int):
    """Fraction of trials where iid sphere vectors have some ``|<s_i, s_j>|/n > epsilon``.

    Returns ``(empirical_prob, bound)`` with the concentration bound
    ``r^2 exp(-n epsilon^2 / 2)``, which may exceed 1.
    """
    if n < 1 or r < 1 or trials < 1:
        raise ValidationError("n, r and trials must be positive")
    if not epsilon > 0:
        raise ValidationError(f"epsilon must be > 0, got {epsilon}")
    violations = 0
    for t in range(trials):
        rng = np.random.default_rng(trial_seed(seed, t))
        s = sample_sphere_signals(n, r, rng, orthogonalize=False)
        gram = np.abs(s.T @ s) / n
        np.fill_diagonal(gram, 0.0)
        violations += bool(np.any(gram > epsilon))
    return violations / trials, r * r * math.exp(-n * epsilon**2 / 2.0)
