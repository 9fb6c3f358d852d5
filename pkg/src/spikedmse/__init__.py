"""Asymptotic theory of mismatched low-rank symmetric matrix estimation under GOE noise."""
from .errors import (
    DomainError,
    EigensolverFailure,
    NonPositivePower,
    NonPositiveSnr,
    RankCapExceeded,
    RankExceedsDimension,
    RegimeError,
    ShapeMismatch,
    ThresholdWarning,
    UnsortedPowers,
    ValidationError,
)
from .free_energy import FreeEnergyValue, asymptotic_free_energy, free_energy_grad, h1, h2
from .model import (
    InferenceModel,
    RankProfile,
    Regime,
    SignalModel,
    effective_rank,
    inference_rank,
    overfitting_rank,
    rank_profile,
    validate,
)
from .montecarlo import EnsembleConfig, MonteCarloReport, orthogonality_experiment, spectral_report
from .mse import MseBreakdown, Prior, g_gau, g_sph, immse_residual, mse_gau, mse_rank_one_gau, mse_sph
from .semicircle import (
    additivity_regime,
    j_sc,
    outlier_location,
    outlier_overlap_sq,
    sc_density,
    sc_log_potential,
    sc_stieltjes,
    sc_stieltjes_inv,
)

__version__ = "0.1.0"
