"""Dynamical degrees of second-order rational mappings.

The pipeline: parse a mapping (mapping module), trace its singular
values as Laurent series with a symbolic index (patterns), convert the
patterns into degree censuses and solve the balance for the iterate
degrees and the dynamical degree (balance), and cross-check everything
against a brute-force degree oracle (oracle).
"""

from .balance import (BalanceResult, Census, DegreeEstimate, build_censuses,
                      dynamical_degree, express_char_poly, fit_closed_form,
                      solve_balance)
from .errors import (AlgentropyError, InconsistentBalanceError,
                     MappingSyntaxError, MappingValidationError,
                     ResourceCapExceeded, UnresolvedPatternError,
                     UnstableSpecializationError)
from .mapping import MappingSpec, load_mapping, parse_mapping
from .oracle import degree_sequence, estimate_lambda
from .patterns import (INFINITY, SingularityAnalysis, SingularityPattern,
                       analyze)
from .report import Report, build_report

__version__ = "0.1.0"

__all__ = [
    "AlgentropyError", "BalanceResult", "Census", "DegreeEstimate",
    "INFINITY", "InconsistentBalanceError", "MappingSpec",
    "MappingSyntaxError", "MappingValidationError", "Report",
    "ResourceCapExceeded", "SingularityAnalysis", "SingularityPattern",
    "UnresolvedPatternError", "UnstableSpecializationError", "analyze",
    "build_censuses", "build_report", "degree_sequence", "dynamical_degree",
    "estimate_lambda", "express_char_poly", "fit_closed_form",
    "load_mapping", "parse_mapping", "solve_balance", "__version__",
]
