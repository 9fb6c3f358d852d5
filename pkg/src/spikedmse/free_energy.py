"""Limiting mismatched free energy and its SNR gradients.

The free energy is a sum of per-component contributions: ``h1`` for each of
the ``c`` true components the inference model locks onto, and ``h2`` for each
inferred component ``d < i <= e`` that fits pure noise.  Every other
component contributes exactly zero.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import semicircle
from .errors import DomainError, RegimeError, ThresholdWarning
from .model import InferenceModel, SignalModel, rank_profile, threshold_distance

THRESHOLD_TOL = 1e-9


@dataclass(frozen=True)
class FreeEnergyValue:
    value: float
    per_component_h1: tuple[float, ...]
    per_component_h2: tuple[float, ...]


def _positive(**kwargs):
    for name, x in kwargs.items():
        if np.any(~(np.asarray(x, dtype=float) > 0.0)):
            raise DomainError(f"{name} must be > 0, got {x}")


def h1(lambda_star, lam, alpha, beta):
    """Contribution of a detected and inferred true component.

    Requires ``sqrt(lambda_star) alpha > 1`` and
    ``sqrt(lambda_star lam) alpha beta > 1``; vanishes continuously at the
    second threshold.
    """
    _positive(lambda_star=lambda_star, lam=lam, alpha=alpha, beta=beta)
    theta = np.sqrt(lambda_star) * alpha
    product = np.sqrt(lambda_star * lam) * alpha * beta
    if np.any(~(theta > 1.0)) or np.any(~(product > 1.0)):
        raise RegimeError(
            "h1 needs sqrt(lambda_star)*alpha > 1 and sqrt(lambda_star*lam)*alpha*beta > 1"
        )
    return (
        lam / 4.0 * beta**2
        - np.sqrt(lam) / 2.0 * beta * (theta + 1.0 / theta)
        + 1.0 / (4.0 * lambda_star * alpha**2)
        + 0.5 * np.log(product)
        + 0.5
    )


def h2(lam, beta):
    """Contribution of an inferred component that overfits noise (``sqrt(lam) beta > 1``)."""
    _positive(lam=lam, beta=beta)
    eta = np.sqrt(lam) * beta
    if np.any(~(eta > 1.0)):
        raise RegimeError("h2 needs sqrt(lam)*beta > 1")
    return lam / 4.0 * beta**2 - eta + 0.5 * np.log(eta) + 0.75


def asymptotic_free_energy(signal: SignalModel, inference: InferenceModel) -> FreeEnergyValue:
    prof = rank_profile(signal, inference)
    ls, lam = signal.snr_true, inference.snr_inferred
    first = tuple(
        float(h1(ls, lam, signal.alphas[i], inference.betas[i])) for i in range(prof.c)
    )
    second = tuple(float(h2(lam, inference.betas[i])) for i in range(prof.d, prof.e))
    return FreeEnergyValue(math.fsum(first) + math.fsum(second), first, second)


def free_energy_from_spherical_integrals(signal: SignalModel, inference: InferenceModel) -> float:
    """Free energy assembled from the spherical-integral rate, without ``h1``/``h2``.

    ``f = sum_i [lam beta_i^2 / 4 - J(sqrt(lam) beta_i, gamma_i) / 2]`` with
    ``gamma_i`` the limiting outlier of spike ``i`` (the bulk edge 2 for
    undetected or missing spikes, which is the limit of an infinitesimally
    super-critical auxiliary spike).
    """
    lam = inference.snr_inferred
    theta = signal.spike_strengths
    total = []
    for i, beta in enumerate(inference.betas):
        gamma = semicircle.outlier_location(theta[i]) if i < len(theta) else semicircle.EDGE
        eta = math.sqrt(lam) * beta
        total.append(lam * beta**2 / 4.0 - 0.5 * semicircle.j_sc(eta, gamma))
    return math.fsum(total)


def dh1_dlambda(lambda_star, lam, alpha, beta):
    theta = np.sqrt(lambda_star) * alpha
    return beta**2 / 4.0 - beta / (4.0 * np.sqrt(lam)) * (theta + 1.0 / theta) + 1.0 / (4.0 * lam)


def dh1_dlambda_star(lambda_star, lam, alpha, beta):
    return (
        -beta / 4.0 * np.sqrt(lam / lambda_star) * (alpha - 1.0 / (lambda_star * alpha))
        - 1.0 / (4.0 * lambda_star**2 * alpha**2)
        + 1.0 / (4.0 * lambda_star)
    )


def dh2_dlambda(lam, beta):
    return 0.25 * (beta - 1.0 / np.sqrt(lam)) ** 2


def free_energy_grad(signal: SignalModel, inference: InferenceModel) -> tuple[float, float]:
    """Closed-form ``(df/dlambda, df/dlambda_star)`` inside a fixed rank regime.

    Emits :class:`ThresholdWarning` when a threshold quantity lies within
    ``1e-9`` of 1; the returned values are then those of the regime selected
    by the strict-inequality ranks.
    """
    if threshold_distance(signal, inference) <= THRESHOLD_TOL:
        warnings.warn(
            "parameters lie on a rank-transition threshold; gradients are one-sided",
            ThresholdWarning,
            stacklevel=2,
        )
    prof = rank_profile(signal, inference)
    ls, lam = signal.snr_true, inference.snr_inferred
    d_lam, d_ls = [], []
    for i in range(prof.c):
        a, b = signal.alphas[i], inference.betas[i]
        d_lam.append(dh1_dlambda(ls, lam, a, b))
        d_ls.append(dh1_dlambda_star(ls, lam, a, b))
    for i in range(prof.d, prof.e):
        d_lam.append(dh2_dlambda(lam, inference.betas[i]))
    return math.fsum(d_lam), math.fsum(d_ls)


def free_energy_grad_fd(signal: SignalModel, inference: InferenceModel, step: float = 1e-5):
    """Central finite differences of :func:`asymptotic_free_energy` in both SNRs."""

    def f(ls, lam):
        return asymptotic_free_energy(
            SignalModel(signal.alphas, ls), InferenceModel(inference.betas, lam)
        ).value

    ls, lam = signal.snr_true, inference.snr_inferred
    d_lam = (f(ls, lam + step) - f(ls, lam - step)) / (2.0 * step)
    d_ls = (f(ls + step, lam) - f(ls - step, lam)) / (2.0 * step)
    return d_lam, d_ls
