"""Numerical identity suites over seeded random parameter grids.

Each suite checks one closed-form identity the theory guarantees and reports
the worst deviation together with the first failing parameter set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import free_energy, mse, semicircle
from .model import InferenceModel, SignalModel, threshold_distance


@dataclass
class SuiteResult:
    name: str
    passed: bool
    points: int
    worst: float
    tolerance: float
    counterexample: dict | None = field(default=None)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.points} points, worst {self.worst:.3e} (tol {self.tolerance:g})"
        if self.counterexample is not None:
            text += f"; first counterexample {self.counterexample}"
        return text


def random_pair(
    rng: np.random.Generator,
    max_rank: int = 4,
    powers=(0.3, 3.0),
    snrs=(0.2, 9.0),
    margin: float = 1e-4,
):
    """Draw a (signal, inference) pair at least ``margin`` away from every rank threshold."""
    while True:
        r = int(rng.integers(0, max_rank + 1))
        k = int(rng.integers(0, max_rank + 1))
        alphas = np.sort(rng.uniform(*powers, size=r))[::-1]
        betas = np.sort(rng.uniform(*powers, size=k))[::-1]
        signal = SignalModel(alphas, rng.uniform(*snrs))
        inference = InferenceModel(betas, rng.uniform(*snrs))
        if threshold_distance(signal, inference) > margin:
            return signal, inference


def random_pairs(size: int, seed: int, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_pair(rng, **kwargs) for _ in range(size)]


def _describe(signal, inference):
    return {
        "alphas": list(signal.alphas),
        "snr_true": signal.snr_true,
        "betas": list(inference.betas),
        "snr_inferred": inference.snr_inferred,
    }


class _Tracker:
    def __init__(self, name, tolerance):
        self.name, self.tolerance = name, tolerance
        self.points, self.worst, self.counterexample = 0, 0.0, None

    def record(self, error, excess, params):
        # ``excess > 0`` marks a violation; ``error`` is what gets reported.
        self.points += 1
        if not math.isfinite(error) or error > self.worst:
            self.worst = error if math.isfinite(error) else math.inf
        if (excess > 0 or not math.isfinite(error)) and self.counterexample is None:
            self.counterexample = params

    def result(self):
        return SuiteResult(
            self.name, self.counterexample is None, self.points, self.worst, self.tolerance, self.counterexample
        )


def check_immse(size, seed, tol=1e-6):
    t = _Tracker("immse", tol)
    for signal, inference in random_pairs(size, seed):
        res = mse.immse_residual(signal, inference)
        t.record(res, res - tol, _describe(signal, inference))
    return t.result()


def check_gradient_fd(size, seed, rtol=1e-6, atol=1e-9, step=1e-5):
    t = _Tracker("gradient_fd", rtol)
    for signal, inference in random_pairs(size, seed):
        closed = free_energy.free_energy_grad(signal, inference)
        numeric = free_energy.free_energy_grad_fd(signal, inference, step)
        for c_val, n_val in zip(closed, numeric):
            # Relative error, with the scale floored so vanishing gradients
            # are held to an absolute ``atol``.
            rel = abs(c_val - n_val) / max(abs(c_val), atol / rtol)
            t.record(rel, rel - rtol, _describe(signal, inference))
    return t.result()


def check_rank_one(size, seed, tol=1e-12):
    t = _Tracker("rank_one", tol)
    rng = np.random.default_rng(seed)
    for _ in range(size):
        a, b = rng.uniform(0.3, 3.0, size=2)
        ls, lam = rng.uniform(0.05, 9.0, size=2)
        piecewise = mse.mse_rank_one_gau(a, b, ls, lam)
        general = mse.mse_gau(SignalModel([a], ls), InferenceModel([b], lam)).total
        err = abs(piecewise - general)
        t.record(err, err - tol, {"alpha": a, "beta": b, "snr_true": ls, "snr_inferred": lam})
    return t.result()


def check_matched_prior(size, seed, tol=1e-12):
    t = _Tracker("matched_prior", tol)
    rng = np.random.default_rng(seed)
    for _ in range(size):
        lam = rng.uniform(0.2, 9.0)
        a = rng.uniform(1.0 / math.sqrt(lam), 3.0 + 1.0 / math.sqrt(lam)) * (1 + 1e-9)
        err = abs(float(mse.g_gau(a, a, lam, lam)) - float(mse.g_sph(a, a, lam, lam)))
        t.record(err, err - tol, {"alpha": a, "snr": lam})
    return t.result()


def check_j_branches(size, seed, tol_sub=1e-10, tol_cont=1e-8, tol_closed=1e-12):
    """Errors are reported as multiples of each sub-check's own tolerance."""
    t = _Tracker("j_sc_branches", 1.0)

    def record(err, tol, params):
        t.record(err / tol, err / tol - 1.0, params)

    rng = np.random.default_rng(seed)
    for _ in range(size):
        theta = rng.uniform(1.0, 10.0)
        gamma = theta + 1.0 / theta
        h = 1.0 / theta
        eta_sub = rng.uniform(1e-3, h)
        err = abs(semicircle.j_sc(eta_sub, gamma) - eta_sub**2 / 2.0)
        record(err, tol_sub, {"theta": theta, "eta": eta_sub, "branch": "sub"})
        eta_sup = rng.uniform(h, 10.0)
        closed = eta_sup * gamma - math.log(eta_sup * theta) - 0.5 / theta**2 - 1.0
        err = abs(semicircle.j_sc(eta_sup, gamma) - closed)
        record(err, tol_closed, {"theta": theta, "eta": eta_sup, "branch": "super"})
        jump = abs(semicircle.j_sc(h * (1 + 1e-12), gamma) - semicircle.j_sc(h * (1 - 1e-12), gamma))
        record(jump, tol_cont, {"theta": theta, "branch": "continuity"})
    return t.result()


def check_threshold_continuity(size, seed, tol=1e-6, offset=1e-6):
    t = _Tracker("threshold_continuity", tol)
    rng = np.random.default_rng(seed)
    for _ in range(size):
        ls, lam = rng.uniform(0.2, 9.0, size=2)
        theta = rng.uniform(1.0 + 1e-3, 10.0)
        alpha = theta / math.sqrt(ls)
        beta = (1.0 + offset) / (math.sqrt(ls * lam) * alpha)
        v1 = abs(float(free_energy.h1(ls, lam, alpha, beta)))
        t.record(v1, v1 - tol, {"h": "h1", "snr_true": ls, "snr_inferred": lam, "alpha": alpha, "beta": beta})
        beta2 = (1.0 + offset) / math.sqrt(lam)
        v2 = abs(float(free_energy.h2(lam, beta2)))
        t.record(v2, v2 - tol, {"h": "h2", "snr_inferred": lam, "beta": beta2})
    return t.result()


SUITES = (
    check_immse,
    check_rank_one,
    check_matched_prior,
    check_j_branches,
    check_gradient_fd,
    check_threshold_continuity,
)


def run_all(grid_size: int = 100, seed: int = 0) -> list[SuiteResult]:
    return [suite(grid_size, seed) for suite in SUITES]
