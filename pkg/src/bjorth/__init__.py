"""Birkhoff-James orthogonality toolkit for finite real or complex matrix pairs.

A matrix A is Birkhoff-James orthogonal to B when no scalar multiple of B
lowers the operator norm: inf over lambda of ||A + lambda*B|| >= ||A||.
The package decides that relation two independent ways (direct norm
minimization, and witness vectors through the numerical range of a
compressed product), quantifies the sup-inf / inf-sup minimax identity
behind it, and ships a reproducible random-pair evaluation harness plus a
command line front end.
"""

from .core import (ConvergenceError, Field, InputError, Matrix, SpectralData,
                   Vector, hermitian_eig, inner, operator_norm,
                   top_singular_subspace)
from .decision import (DecisionReport, Method, SeparationCertificate, Status,
                       Verdict, Witness, WitnessFailure, WitnessSearchError,
                       check_definitional, decide, epsilon_witness,
                       find_witness, vector_bj_check, zero_in_numerical_range)
from .lineopt import (LineMinResult, global_inf_lambda, inner_inf,
                      limit_lemma_check)
from .minimax import (MinimaxReport, SupInfResult, lhs_sup_inf,
                      minimax_report, rhs_inf_sup)
from .harness import (SuiteConfig, Tolerances, gen_ginibre,
                      gen_orthogonal_pair, run_suite, save_csv,
                      save_report, trial_seed)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "Field", "InputError", "Matrix", "SpectralData",
    "Vector", "hermitian_eig", "inner", "operator_norm",
    "top_singular_subspace",
    "DecisionReport", "Method", "SeparationCertificate", "Status", "Verdict",
    "Witness", "WitnessFailure", "WitnessSearchError", "check_definitional",
    "decide", "epsilon_witness", "find_witness", "vector_bj_check",
    "zero_in_numerical_range",
    "LineMinResult", "global_inf_lambda", "inner_inf", "limit_lemma_check",
    "MinimaxReport", "SupInfResult", "lhs_sup_inf", "minimax_report",
    "rhs_inf_sup",
    "SuiteConfig", "Tolerances", "gen_ginibre", "gen_orthogonal_pair",
    "run_suite", "save_csv", "save_report", "trial_seed",
    "__version__",
]
