"""Exact arithmetic toolkit for polynomial configurations in the integers."""

from .counting import (DensitySet, balanced_expansion, balanced_function, count_in_set,
                       count_operator, lacks, naive_count, trivial_count)
from .diophantine import (BohrSpec, PowerProgression, bohr_contains, bohr_power_progression,
                          brute_force_recurrence, min_power_distance, nearest_int_distance,
                          simultaneous_power_recurrence)
from .gowers import (fourier_transform, gowers_norm, gowers_norm_local, gowers_norm_scale,
                     u2_fourier_check)
from .grid import GridFunction
from .increment import (density_iteration, exhaustive_increment_oracle, find_power_increment,
                        local_von_neumann_probe, partition_increment, rescale)
from .pet import (BadParameter, LinearSystem, PetState, bad_difference_set, concrete_linearize,
                  instantiate, linearize, pet_step, verify_vdc)
from .poly_config import (BoundExceeded, Configuration, ConfigurationError, DegreeSequence,
                          bound_R, colex_compare, degree_sequence, height, reduce_homogeneous,
                          shift, validate_configuration)
from .polynomials import IntPoly, ParamPoly

__version__ = "0.1.0"
