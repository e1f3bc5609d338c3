"""
Reference trajectories, limit-point estimates and the expansion verification harness
"""
from .integrator import TrajectorySamples, integrate_trajectory
from .limit import LimitEstimate, estimate_limit
from .verification import VerificationReport, verify_expansion

__all__ = [
    'TrajectorySamples',
    'integrate_trajectory',
    'LimitEstimate',
    'estimate_limit',
    'VerificationReport',
    'verify_expansion',
]
