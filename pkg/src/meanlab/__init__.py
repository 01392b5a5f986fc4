"""Mean distances, densities and independence for subshifts over Z^d."""
__version__ = "0.1.0"

from .density import asymptotic_density, banach_lower_density, banach_upper_density
from .dsl import parse_set
from .entropy import check_variational, measure_entropy, topological_entropy
from .independence import find_ie_pair, independence_density, is_independent, phi
from .meanmetric import (
    DichotomyError,
    banach_mean_distance,
    besicovitch_distance,
    classify_point,
    classify_system,
    weyl_distance,
)
from .systems import SFT, CylinderSet, FullShift, PeriodicOrbit, SturmianSystem
from .zoo import point, system

__all__ = [
    "CylinderSet", "DichotomyError", "FullShift", "PeriodicOrbit", "SFT", "SturmianSystem",
    "asymptotic_density", "banach_lower_density", "banach_mean_distance", "banach_upper_density",
    "besicovitch_distance", "check_variational", "classify_point", "classify_system", "find_ie_pair",
    "independence_density", "is_independent", "measure_entropy", "parse_set", "phi", "point", "system",
    "topological_entropy", "weyl_distance",
]
