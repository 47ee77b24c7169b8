"""Likelihood evaluation and maximum-likelihood fitting"""

from .likelihood import LikelihoodEvaluation, likelihood_details, neg_log_likelihood
from .optimizer import FitResult, StartRecord, fit_mle
from .spec import PARAMETER_NAMES, FitSpec

__all__ = [
    'FitSpec',
    'PARAMETER_NAMES',
    'LikelihoodEvaluation',
    'likelihood_details',
    'neg_log_likelihood',
    'FitResult',
    'StartRecord',
    'fit_mle',
]
