"""
Pseudo-spectral 2D periodic Navier-Stokes in vorticity-streamfunction form
"""
from .state import SpectralState, spectral_grid
from .solver import simulate, step
from .interpolation import VelocityInterpolator, velocity_at
from .extraction import LeadingTerm, extract_leading_term

__all__ = [
    'SpectralState',
    'spectral_grid',
    'simulate',
    'step',
    'VelocityInterpolator',
    'velocity_at',
    'LeadingTerm',
    'extract_leading_term',
]
