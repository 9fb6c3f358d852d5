"""SNR sweeps of the limiting MSE, recomputing ranks at every grid point."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import InferenceModel, SignalModel, validate
from .mse import Prior, mse

COLUMNS = (
    "lambda",
    "lambda_star",
    "d",
    "c",
    "e",
    "inference_term",
    "overfitting_term",
    "constant_term",
    "total",
)


class GridScale(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


class SnrMode(str, enum.Enum):
    MATCHED = "matched"  # lambda = lambda_star at every grid point
    FIXED_TRUE = "fixed-true"  # lambda_star held at the template value


@dataclass(frozen=True)
class SweepSpec:
    start: float
    stop: float
    points: int
    signal: SignalModel
    inference: InferenceModel
    scale: GridScale = GridScale.LOG
    snr_mode: SnrMode = SnrMode.MATCHED
    model: Prior = Prior.SPHERE

    def __post_init__(self):
        object.__setattr__(self, "scale", GridScale(self.scale))
        object.__setattr__(self, "snr_mode", SnrMode(self.snr_mode))
        object.__setattr__(self, "model", Prior(self.model))
        if not self.start < self.stop:
            raise ValidationError(f"grid start {self.start} must be below stop {self.stop}")
        if int(self.points) != self.points or self.points < 2:
            raise ValidationError(f"grid needs at least 2 points, got {self.points}")
        if not self.start > 0:
            raise ValidationError(f"all SNR values on the grid must be > 0, got start {self.start}")

    def grid(self) -> np.ndarray:
        if self.scale is GridScale.LOG:
            return np.geomspace(self.start, self.stop, int(self.points))
        return np.linspace(self.start, self.stop, int(self.points))


def run_sweep(spec: SweepSpec) -> list[dict]:
    """One row per grid point with the columns in :data:`COLUMNS`."""
    validate(spec.signal, spec.inference)
    rows = []
    for lam in spec.grid():
        lam = float(lam)
        ls = lam if spec.snr_mode is SnrMode.MATCHED else spec.signal.snr_true
        result = mse(SignalModel(spec.signal.alphas, ls), InferenceModel(spec.inference.betas, lam), spec.model)
        rows.append(
            {
                "lambda": lam,
                "lambda_star": ls,
                "d": result.profile.d,
                "c": result.profile.c,
                "e": result.profile.e,
                "inference_term": result.inference_term,
                "overfitting_term": result.overfitting_term,
                "constant_term": result.constant_term,
                "total": result.total,
            }
        )
    return rows
