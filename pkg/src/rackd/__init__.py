"""Finite racks from conjugacy classes of S_m and A_m: type-D certificates, cocycles and survivor tables."""
from .group import Ambient, ConjClassSpec, SplitPart
from .perm import CycleType, Permutation
from .typed import Status, TypeDWitness, check_witness, classify

__all__ = ["Ambient", "ConjClassSpec", "SplitPart", "CycleType", "Permutation",
           "Status", "TypeDWitness", "check_witness", "classify"]
__version__ = "0.1.0"
