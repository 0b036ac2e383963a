"""Exact dyadic step-function machinery for Lorentz spaces, Calderon-Zygmund
decompositions and dyadic martingale operators, with verification harnesses."""
from .stepfn import (
    DecreasingProfile,
    LorentzIndex,
    StepFunction,
    combine,
    distribution,
    indicator,
    lp_norm,
    rearrange,
)
from .lorentz import (
    QuasiNormProfile,
    alpha_for,
    check_hunt_split,
    estimate_quasi_constant,
    hunt_split,
    lorentz_norm,
    nesting_ratio,
    series_quasi_check,
)
from .dyadic_ops import (
    CoeffMatrix,
    DyadicInterval,
    PreconditionError,
    haar,
    martingale_diff,
    maximal_s,
    zero_locality_check,
)
from .cz import (
    CZDecomposition,
    KernelSpec,
    cz_decompose,
    empirical_weak_type,
    hormander_integral,
    kernel_by_name,
    kernel_size_sup,
    verify_cz,
)
from .experiments import (
    counterexample_demo,
    countable_subadd_check,
    level_sets,
    limsup_functional,
    llog_functional,
    weak11_demo,
    yano_chain_check,
)
from .corpus import random_s0
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "DecreasingProfile",
    "LorentzIndex",
    "StepFunction",
    "combine",
    "distribution",
    "indicator",
    "lp_norm",
    "rearrange",
    "QuasiNormProfile",
    "alpha_for",
    "check_hunt_split",
    "estimate_quasi_constant",
    "hunt_split",
    "lorentz_norm",
    "nesting_ratio",
    "series_quasi_check",
    "CoeffMatrix",
    "DyadicInterval",
    "PreconditionError",
    "haar",
    "martingale_diff",
    "maximal_s",
    "zero_locality_check",
    "CZDecomposition",
    "KernelSpec",
    "cz_decompose",
    "empirical_weak_type",
    "hormander_integral",
    "kernel_by_name",
    "kernel_size_sup",
    "verify_cz",
    "counterexample_demo",
    "countable_subadd_check",
    "level_sets",
    "limsup_functional",
    "llog_functional",
    "weak11_demo",
    "yano_chain_check",
    "random_s0",
    "VerificationReport",
    "__version__",
]
