"""Semicircle-law analytics and the rank-one spherical-integral rate.

The bulk of ``Y / sqrt(n)`` follows the semicircle law on ``[-2, 2]``.  A
spike of strength ``theta = sqrt(snr_true) * alpha`` above 1 pushes an
eigenvalue out to ``theta + 1/theta``; below 1 it is absorbed at the edge.

Parametrising ``z = theta + 1/theta`` (``theta >= 1``) gives the compact
closed forms used throughout::

    stieltjes(z)     = 1/theta
    log_potential(z) = ln(theta) + 1/(2 theta^2)

The spherical-integral rate ``j_sc(eta, gamma)`` takes the *doubled* weight,
i.e. callers pass ``sqrt(snr_inferred) * beta`` directly.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .model import InferenceModel, SignalModel

EDGE = 2.0


def sc_density(x):
    """Semicircle density ``sqrt(4 - x^2) / (2 pi)`` on ``[-2, 2]``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) <= EDGE
    out = np.zeros_like(x)
    out[inside] = np.sqrt(4.0 - x[inside] ** 2) / (2.0 * math.pi)
    return out if out.ndim else float(out)


def sc_cdf(x):
    """Semicircle CDF ``1/2 + x sqrt(4-x^2)/(4 pi) + arcsin(x/2)/pi``, clamped to [0, 1]."""
    x = np.clip(np.asarray(x, dtype=float), -EDGE, EDGE)
    out = 0.5 + x * np.sqrt(4.0 - x**2) / (4.0 * math.pi) + np.arcsin(x / 2.0) / math.pi
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def _require_right_of_edge(z, name):
    z = np.asarray(z, dtype=float)
    if np.any(~(z >= EDGE)):
        raise DomainError(f"{name} must be >= 2 (right of the bulk edge), got {z}")
    return z


def _theta_of(z):
    # Inverse of z = theta + 1/theta on theta >= 1.
    return 0.5 * (z + np.sqrt(z * z - 4.0))


def sc_stieltjes(z):
    """Stieltjes transform ``int dmu(x) / (z - x)`` for real ``z >= 2``.

    Evaluated as ``2 / (z + sqrt(z^2 - 4))`` to avoid cancellation at large z.
    """
    z = _require_right_of_edge(z, "z")
    out = 2.0 / (z + np.sqrt(z * z - 4.0))
    return out if out.ndim else float(out)


def sc_stieltjes_inv(eta):
    """Inverse of :func:`sc_stieltjes` on ``(0, 1]``: ``eta + 1/eta``."""
    eta = np.asarray(eta, dtype=float)
    if np.any(~((eta > 0.0) & (eta <= 1.0))):
        raise DomainError(f"eta must lie in (0, 1], got {eta}")
    out = eta + 1.0 / eta
    return out if out.ndim else float(out)


def sc_log_potential(v):
    """``int ln|v - x| dmu_SC(x)`` for ``v >= 2``, as ``ln(theta) + 1/(2 theta^2)``."""
    v = _require_right_of_edge(v, "v")
    theta = _theta_of(v)
    out = np.log(theta) + 0.5 / theta**2
    return out if out.ndim else float(out)


def _require_positive(theta, name="theta"):
    theta = np.asarray(theta, dtype=float)
    if np.any(~(theta > 0.0)):
        raise DomainError(f"{name} must be > 0, got {theta}")
    return theta


def outlier_location(theta):
    """Limiting top eigenvalue for spike strength ``theta``; 2 when ``theta <= 1``."""
    theta = _require_positive(theta)
    out = np.where(theta > 1.0, theta + 1.0 / theta, EDGE)
    return out if out.ndim else float(out)


def outlier_overlap_sq(theta):
    """Limiting squared cosine ``max(0, 1 - 1/theta^2)`` between top eigenvector and spike."""
    theta = _require_positive(theta)
    out = np.where(theta > 1.0, 1.0 - 1.0 / theta**2, 0.0)
    return out if out.ndim else float(out)


def k_function(eta, gamma, v):
    """``eta*gamma + (v - gamma) H(v) - ln(eta) - int ln|v-x| dmu(x) - 1``."""
    return (
        eta * gamma
        + (v - gamma) * sc_stieltjes(v)
        - np.log(eta)
        - sc_log_potential(v)
        - 1.0
    )


def j_sc(eta, gamma):
    """Rank-one spherical-integral rate against the semicircle with an outlier at ``gamma``.

    ``v = gamma`` when ``H(gamma) <= eta`` (super-critical), otherwise
    ``v = eta + 1/eta``.  In the sub-critical branch the value is exactly
    ``eta^2 / 2``; in the super-critical branch, with ``gamma = theta + 1/theta``,
    it is ``eta*gamma - ln(eta*theta) - 1/(2 theta^2) - 1``.
    """
    eta = np.asarray(eta, dtype=float)
    gamma = _require_right_of_edge(gamma, "gamma")
    if np.any(~(eta > 0.0)):
        raise DomainError(f"eta must be > 0, got {eta}")
    eta, gamma = np.broadcast_arrays(eta, gamma)
    supercritical = sc_stieltjes(gamma) <= eta
    # Sub-critical means eta < H(gamma) <= 1, where eta + 1/eta inverts H.
    v = np.where(supercritical, gamma, eta + 1.0 / eta)
    out = k_function(eta, gamma, v)
    return out if out.ndim else float(out)


def spherical_integral_rate(weights, outliers):
    """Limit of ``(1/n) ln I_n(A, {eta_i})`` for ``A`` with semicircle bulk.

    ``weights`` are the nonzero eigenvalues ``eta_i`` of the rank-m matrix in
    the exponent and ``outliers`` the matching top eigenvalues ``gamma_i >= 2``
    of ``A``.  Returns ``(1/2) sum_i J(2 eta_i, gamma_i)``; zero weights add 0.
    """
    weights = np.asarray(weights, dtype=float)
    outliers = np.asarray(outliers, dtype=float)
    if weights.shape != outliers.shape:
        raise DomainError("weights and outliers must have the same length")
    if np.any(weights < 0.0):
        raise DomainError("weights must be nonnegative")
    active = weights > 0.0
    if not active.any():
        return 0.0
    return float(0.5 * np.sum(j_sc(2.0 * weights[active], outliers[active])))


def additivity_regime(signal: SignalModel, inference: InferenceModel) -> bool:
    """True when the rank-k spherical integral splits into rank-one integrals.

    The condition is ``sqrt(snr_inferred) * beta_1 / 2 <= min(1, 1/(sqrt(snr_true) alpha_1))``;
    the lower bound ``H_min = -1`` never binds for positive weights.
    """
    if inference.rank == 0:
        return True
    h_max = 1.0
    if signal.rank:
        h_max = min(1.0, 1.0 / float(signal.spike_strengths[0]))
    return bool(inference.weights[0] / 2.0 <= h_max)
