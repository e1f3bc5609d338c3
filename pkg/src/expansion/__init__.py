"""
Exponent semigroups, polynomial vectors, field expansions and the trajectory expansion engine
"""
from .semigroup import Semigroup, build_semigroup, decompositions, s_index
from .polyvec import PolyVec, resolvent_solve
from .field import FieldExpansion, PolyField, TrigField, eval_velocity, q_tensor_poly
from .engine import TrajectoryExpansion, compute_expansion, evaluate_expansion, galilean_compose

__all__ = [
    'Semigroup',
    'build_semigroup',
    'decompositions',
    's_index',
    'PolyVec',
    'resolvent_solve',
    'FieldExpansion',
    'PolyField',
    'TrigField',
    'eval_velocity',
    'q_tensor_poly',
    'TrajectoryExpansion',
    'compute_expansion',
    'evaluate_expansion',
    'galilean_compose',
]
