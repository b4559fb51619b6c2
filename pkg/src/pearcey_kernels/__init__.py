"""Exact quartic and sextic random-matrix kernels from hypergeometric closed forms."""

from .hyperf import HypExpr, HypParams, HypTerm, eval_many, expr_eval, pfq
from .kernels import (
    Case,
    FunctionBank,
    KernelValue,
    Regime,
    build_bank,
    corr_quartic,
    corr_sextic,
    correlation,
    density,
    density_quartic,
    density_sextic,
    kernel,
    kernel_quartic,
    kernel_sextic,
)
from .numeric import (
    DEFAULT_CONTEXT,
    ContourError,
    DomainError,
    EvalResult,
    InvalidParams,
    NumericError,
    PoleError,
    PrecisionContext,
    TermBudgetExceeded,
    ToleranceNotMet,
)

__version__ = "0.1.0"

__all__ = [
    "Case", "ContourError", "DEFAULT_CONTEXT", "DomainError", "EvalResult", "FunctionBank",
    "HypExpr", "HypParams", "HypTerm", "InvalidParams", "KernelValue", "NumericError",
    "PoleError", "PrecisionContext", "Regime", "TermBudgetExceeded", "ToleranceNotMet",
    "build_bank", "corr_quartic", "corr_sextic", "correlation", "density", "density_quartic",
    "density_sextic", "eval_many", "expr_eval", "kernel", "kernel_quartic", "kernel_sextic", "pfq",
]
