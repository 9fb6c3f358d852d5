"""Limiting mismatched matrix-MSE for spherical and Gaussian signal priors.

Both priors share the same three-term structure::

    MSE = sum_{i <= c} g(alpha_i, beta_i, lambda_star, lam)   # inference term
        + sum_{d < i <= e} overfit(beta_i, lam)               # overfitting term
        + sum_{i <= r} alpha_i^2                              # constant term

Only the per-component functions differ between priors.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import free_energy
from .errors import DomainError, RegimeError
from .model import InferenceModel, RankProfile, SignalModel, rank_profile


class Prior(str, enum.Enum):
    SPHERE = "sphere"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class MseBreakdown:
    inference_term: float
    overfitting_term: float
    constant_term: float
    total: float
    profile: RankProfile


def _check_detected(alpha, beta, lambda_star, lam):
    for name, x in (("alpha", alpha), ("beta", beta), ("lambda_star", lambda_star), ("lam", lam)):
        if np.any(~(np.asarray(x, dtype=float) > 0.0)):
            raise DomainError(f"{name} must be > 0, got {x}")
    theta = np.sqrt(lambda_star) * alpha
    product = np.sqrt(lambda_star * lam) * alpha * beta
    if np.any(~(theta > 1.0)) or np.any(~(product > 1.0)):
        raise RegimeError("component is not in the detected-and-inferred regime")


def g_sph(alpha, beta, lambda_star, lam):
    """Inference-term summand for the spherical prior."""
    _check_detected(alpha, beta, lambda_star, lam)
    return _g_sph(alpha, beta, lambda_star, lam)


def _g_sph(alpha, beta, lambda_star, lam):
    return (
        beta * (beta - 2.0 * alpha)
        + 2.0 * beta / alpha * (1.0 / lambda_star - 1.0 / np.sqrt(lambda_star * lam))
        + 2.0 * np.sqrt(lambda_star / lam) * (1.0 / lambda_star - 1.0 / (alpha**2 * lambda_star**2))
        + 1.0 / (alpha**2 * lambda_star * lam)
    )


def g_gau(alpha, beta, lambda_star, lam):
    """Inference-term summand for the Gaussian prior."""
    _check_detected(alpha, beta, lambda_star, lam)
    return _g_gau(alpha, beta, lambda_star, lam)


def _g_gau(alpha, beta, lambda_star, lam):
    ratio = np.sqrt(lambda_star / lam)
    return (
        alpha**2 * (-2.0 * ratio + lambda_star / lam)
        + 2.0 / np.sqrt(lambda_star * lam)
        + 1.0 / (lam**2 * beta**2)
        + 2.0 * alpha / (lam * beta) * (1.0 - ratio)
        - 2.0 / (lambda_star * lam * beta * alpha)
    )


def overfit_sph(beta, lam):
    return (beta - 1.0 / np.sqrt(lam)) ** 2


def overfit_gau(beta, lam):
    return (1.0 / np.sqrt(lam) - 1.0 / (lam * beta)) ** 2


def _breakdown(signal, inference, g, overfit) -> MseBreakdown:
    prof = rank_profile(signal, inference)
    ls, lam = signal.snr_true, inference.snr_inferred
    inf_term = math.fsum(
        float(g(signal.alphas[i], inference.betas[i], ls, lam)) for i in range(prof.c)
    )
    over_term = math.fsum(float(overfit(inference.betas[i], lam)) for i in range(prof.d, prof.e))
    const = math.fsum(a * a for a in signal.alphas)
    return MseBreakdown(inf_term, over_term, const, inf_term + over_term + const, prof)


def mse_sph(signal: SignalModel, inference: InferenceModel) -> MseBreakdown:
    # Late lookup so a patched module-level g_sph is honoured (mutation tests).
    return _breakdown(signal, inference, lambda *a: g_sph(*a), overfit_sph)


def mse_gau(signal: SignalModel, inference: InferenceModel) -> MseBreakdown:
    return _breakdown(signal, inference, lambda *a: g_gau(*a), overfit_gau)


def mse(signal: SignalModel, inference: InferenceModel, prior=Prior.SPHERE) -> MseBreakdown:
    prior = Prior(prior)
    return mse_sph(signal, inference) if prior is Prior.SPHERE else mse_gau(signal, inference)


def mse_sph_matched(alphas, betas, snr) -> float:
    """Spherical-prior MSE at ``lam = lambda_star = snr`` from the reduced display.

    Here the inference summand collapses to
    ``beta (beta - 2 alpha) + 2/snr - 1/(snr^2 alpha^2)``.
    """
    prof = rank_profile(SignalModel(alphas, snr), InferenceModel(betas, snr))
    total = [
        betas[i] * (betas[i] - 2.0 * alphas[i]) + 2.0 / snr - 1.0 / (snr**2 * alphas[i] ** 2)
        for i in range(prof.c)
    ]
    total += [(betas[i] - 1.0 / math.sqrt(snr)) ** 2 for i in range(prof.d, prof.e)]
    total += [a * a for a in alphas]
    return math.fsum(total)


def mse_rank_one_gau(alpha, beta, lambda_star, lam) -> float:
    """Rank-one Gaussian-prior MSE in its three-branch piecewise form."""
    for name, x in (("alpha", alpha), ("beta", beta), ("lambda_star", lambda_star), ("lam", lam)):
        if not x > 0:
            raise DomainError(f"{name} must be > 0, got {x}")
    if lambda_star * alpha**2 <= 1.0 and lam * beta**2 > 1.0:
        return (1.0 / math.sqrt(lam) - 1.0 / (lam * beta)) ** 2 + alpha**2
    if lambda_star * alpha**2 > 1.0 and lambda_star * lam * alpha**2 * beta**2 > 1.0:
        return float(_g_gau(alpha, beta, lambda_star, lam)) + alpha**2
    return alpha**2


def immse_residual(
    signal: SignalModel,
    inference: InferenceModel,
    prior=Prior.SPHERE,
    fd_step: float = 1e-5,
    finite_differences: bool = False,
) -> float:
    """Absolute residual of the generalized I-MMSE identity at the limit.

    ``|df/dlam + (2 - s) s df/dlambda_star + sum(alpha^2)/4 - MSE/4|`` with
    ``s = sqrt(lambda_star / lam)``.  Gradients come from the closed forms, or
    from central differences of the free energy when ``finite_differences``.
    """
    if Prior(prior) is not Prior.SPHERE:
        raise ValueError("the free energy is only available for the spherical prior")
    if finite_differences:
        if not 0.0 < fd_step <= 1e-3:
            raise DomainError(f"fd_step must lie in (0, 1e-3], got {fd_step}")
        d_lam, d_ls = free_energy.free_energy_grad_fd(signal, inference, fd_step)
    else:
        d_lam, d_ls = free_energy.free_energy_grad(signal, inference)
    s = math.sqrt(signal.snr_true / inference.snr_inferred)
    power = math.fsum(a * a for a in signal.alphas)
    lhs = d_lam + (2.0 - s) * s * d_ls + power / 4.0
    return abs(lhs - mse_sph(signal, inference).total / 4.0)
