"""Interval-valued functions: gH calculus, weak subgradients and optimality checks."""

from .corpus import corpus_get, corpus_names, load_ivf
from .errors import IvfOptError
from .grid import GridSpec
from .interval import Interval, IntervalVector, gh_sub, preceq
from .ivf import Ivf, parse_ivf
from .optimality import (
    diff_inclusion_check,
    efficient_check,
    normal_cone_member_check,
    sum_rule_experiment,
    sup_form_check,
    weak_efficient_check,
    zero_optimality_check,
)
from .weak_subdiff import (
    WeakCandidate,
    equivalence_report,
    frechet_lower_member_check,
    lower_lipschitz_estimate,
    member_check,
    member_checker,
    region_1d,
    support_ivf_eval,
    weak_from_frechet,
)

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "Interval",
    "IntervalVector",
    "Ivf",
    "IvfOptError",
    "WeakCandidate",
    "corpus_get",
    "corpus_names",
    "diff_inclusion_check",
    "efficient_check",
    "equivalence_report",
    "frechet_lower_member_check",
    "gh_sub",
    "load_ivf",
    "lower_lipschitz_estimate",
    "member_check",
    "member_checker",
    "normal_cone_member_check",
    "parse_ivf",
    "preceq",
    "region_1d",
    "sum_rule_experiment",
    "sup_form_check",
    "support_ivf_eval",
    "weak_efficient_check",
    "weak_from_frechet",
    "zero_optimality_check",
]
