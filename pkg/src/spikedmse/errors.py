"""Exception and warning types raised across the package."""


class ValidationError(ValueError):
    """Base class for invalid model parameters or configurations."""


class NonPositivePower(ValidationError):
    pass


class UnsortedPowers(ValidationError):
    pass


class NonPositiveSnr(ValidationError):
    pass


class RankCapExceeded(ValidationError):
    pass


class RankExceedsDimension(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class DomainError(ValueError):
    """Argument outside the domain of a closed-form expression."""


class RegimeError(ValueError):
    """A per-component formula was evaluated outside its detection regime."""


class ThresholdWarning(UserWarning):
    """Parameters sit within numerical tolerance of a rank transition."""


class EigensolverFailure(RuntimeError):
    """The dense or Lanczos eigensolver failed for one Monte Carlo trial."""

    def __init__(self, message, trial_index=None, trial_seed=None):
        super().__init__(message)
        self.trial_index = trial_index
        self.trial_seed = trial_seed
