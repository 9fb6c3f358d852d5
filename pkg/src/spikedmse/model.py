"""True/inference model parameters and the three governing ranks.

The observation is ``Y = sqrt(snr_true / n) * sum_i alpha_i s_i s_i^T + W`` and
the statistician infers with ``k`` components of powers ``beta`` at SNR
``snr_inferred``.  Three integers summarise how the two models interact:

* effective rank ``d``: true components with ``sqrt(snr_true) * alpha_i > 1``
  (they create spectral outliers);
* inference rank ``c``: among the first ``min(k, d)`` components, those with
  ``sqrt(snr_true * snr_inferred) * alpha_i * beta_i > 1``;
* overfitting rank ``e``: the last inferred component beyond ``d`` with
  ``sqrt(snr_inferred) * beta_i > 1`` (``e = d`` when ``k <= d``).

All thresholds are strict.  Powers are sorted, so each set of indices
satisfying a threshold is a prefix and the ranks are prefix lengths.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositivePower, NonPositiveSnr, RankCapExceeded, UnsortedPowers

DEFAULT_RANK_CAP = 64


class Regime(str, enum.Enum):
    UNDER = "UnderParameterized"
    EXACT = "ExactlyParameterized"
    OVER = "OverParameterized"


@dataclass(frozen=True)
class SignalModel:
    """True signal powers (non-increasing) and true SNR."""

    alphas: tuple[float, ...]
    snr_true: float

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "snr_true", float(self.snr_true))

    @property
    def rank(self) -> int:
        return len(self.alphas)

    @property
    def spike_strengths(self) -> np.ndarray:
        """``sqrt(snr_true) * alpha_i``, the BBP spike strengths."""
        return math.sqrt(self.snr_true) * np.asarray(self.alphas, dtype=float)


@dataclass(frozen=True)
class InferenceModel:
    """Assumed signal powers (non-increasing) and assumed SNR."""

    betas: tuple[float, ...]
    snr_inferred: float

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "snr_inferred", float(self.snr_inferred))

    @property
    def rank(self) -> int:
        return len(self.betas)

    @property
    def weights(self) -> np.ndarray:
        """``sqrt(snr_inferred) * beta_i``."""
        return math.sqrt(self.snr_inferred) * np.asarray(self.betas, dtype=float)


@dataclass(frozen=True)
class RankProfile:
    effective: int
    inference: int
    overfitting: int
    regime: Regime = field(default=Regime.EXACT)

    @property
    def d(self) -> int:
        return self.effective

    @property
    def c(self) -> int:
        return self.inference

    @property
    def e(self) -> int:
        return self.overfitting


def _check_powers(values, name):
    for i, v in enumerate(values):
        if not v > 0 or not math.isfinite(v):
            raise NonPositivePower(f"{name}[{i}] = {v!r} must be a positive finite number")
    for i in range(1, len(values)):
        if values[i] > values[i - 1]:
            raise UnsortedPowers(
                f"{name} must be non-increasing; {name}[{i}] = {values[i]!r} "
                f"> {name}[{i - 1}] = {values[i - 1]!r}"
            )


def _check_snr(value, name):
    if not value > 0 or not math.isfinite(value):
        raise NonPositiveSnr(f"{name} = {value!r} must be a positive finite number")


def validate(signal: SignalModel, inference: InferenceModel, rank_cap: int = DEFAULT_RANK_CAP):
    """Check every type invariant of the pair and return it unchanged.

    Raises
    ------
    NonPositivePower, UnsortedPowers, NonPositiveSnr, RankCapExceeded
    """
    _check_powers(signal.alphas, "alphas")
    _check_powers(inference.betas, "betas")
    _check_snr(signal.snr_true, "snr_true")
    _check_snr(inference.snr_inferred, "snr_inferred")
    for name, rank in (("r", signal.rank), ("k", inference.rank)):
        if rank > rank_cap:
            raise RankCapExceeded(f"{name} = {rank} exceeds the rank cap {rank_cap}")
    return signal, inference


def _prefix_length(mask: np.ndarray) -> int:
    # Leading run of True values; equals the count when the mask is a prefix.
    if mask.size == 0 or mask.all():
        return int(mask.size)
    return int(np.argmin(mask))


def effective_rank(signal: SignalModel) -> int:
    return _prefix_length(signal.spike_strengths > 1.0)


def inference_rank(signal: SignalModel, inference: InferenceModel) -> int:
    m = min(inference.rank, effective_rank(signal))
    if m == 0:
        return 0
    scale = math.sqrt(signal.snr_true * inference.snr_inferred)
    alphas = np.asarray(signal.alphas[:m])
    betas = np.asarray(inference.betas[:m])
    return _prefix_length(scale * alphas * betas > 1.0)


def overfitting_rank(signal: SignalModel, inference: InferenceModel) -> int:
    d = effective_rank(signal)
    if inference.rank <= d:
        return d
    return d + _prefix_length(inference.weights[d:] > 1.0)


def rank_profile(signal: SignalModel, inference: InferenceModel) -> RankProfile:
    d = effective_rank(signal)
    c = inference_rank(signal, inference)
    e = overfitting_rank(signal, inference)
    if inference.rank < d:
        regime = Regime.UNDER
    elif e > d:
        regime = Regime.OVER
    else:
        regime = Regime.EXACT
    return RankProfile(d, c, e, regime)


def threshold_distance(signal: SignalModel, inference: InferenceModel) -> float:
    """Smallest ``|q - 1|`` over the threshold quantities that decide the ranks.

    Covers every spike strength, every product ``sqrt(snr_true*snr_inferred)
    alpha_i beta_i`` with ``i <= min(r, k)`` and every weight
    ``sqrt(snr_inferred) beta_i``.  Returns ``inf`` when there are none.
    """
    theta = signal.spike_strengths
    eta = inference.weights
    m = min(len(theta), len(eta))
    quantities = np.concatenate([theta, theta[:m] * eta[:m], eta])
    if quantities.size == 0:
        return math.inf
    return float(np.min(np.abs(quantities - 1.0)))
