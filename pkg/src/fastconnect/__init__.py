"""Fast O(N) conversion between Legendre and Chebyshev expansion coefficients.

Typical use::

    from fastconnect import build_plan, execute
    plan = build_plan(len(f), "l2c")
    z = execute(plan, f)

A plan is immutable and can be reused for any vector no longer than the length
it was built for. ``direct_transform`` covers inputs too short to plan.
"""
from ._backend import available as available_backends
from ._backend import default_name as active_backend
from .errors import DirectionError, DirectMethodRequired, DomainError, FormatError, ResourceError, SizeError
from .executor import ExecutionContext, direct_transform, execute, execute_reference_fmm
from .gamma_ratio import LambdaVector, lambda_scalar, lambda_vector
from .hierarchy import Decomposition, build_decomposition
from .kernels import C2L, L2C
from .oracle import RandomSpec, e_inf, oracle_transform, random_decaying
from .planner import Plan, build_plan, flop_estimate, load_plan, memory_footprint, save_plan

__version__ = "0.1.0"

__all__ = [
    "L2C",
    "C2L",
    "Plan",
    "build_plan",
    "save_plan",
    "load_plan",
    "execute",
    "execute_reference_fmm",
    "direct_transform",
    "ExecutionContext",
    "Decomposition",
    "build_decomposition",
    "LambdaVector",
    "lambda_scalar",
    "lambda_vector",
    "flop_estimate",
    "memory_footprint",
    "oracle_transform",
    "e_inf",
    "RandomSpec",
    "random_decaying",
    "available_backends",
    "active_backend",
    "DomainError",
    "DirectMethodRequired",
    "SizeError",
    "DirectionError",
    "ResourceError",
    "FormatError",
]
