"""rangecompat: exact decision procedures for (quasi-)range-compatible
maps on linear and affine spaces of matrices over small finite fields."""

from .algebra import (AffineFlat, FieldSpec, GF, Subspace, annihilator,
                      enumerate_cosets, enumerate_subspaces, gaussian_binomial,
                      nullspace, rref, sample_subspace, solve_system)
from .errors import DomainError, ResourceLimitError
from .opspace import (Direction, OperatorSpace, all_directions, apply_to_vector,
                      concat_columns, orthogonal_complement, perp_image,
                      quotient_space, special_type_witness, upper_block_join)
from .solver import (CompatMode, MapClass, OperatorMap, QUASI_ANY, RANGE,
                     SolutionSpace, coprod_map, decompose_special, evaluate_map,
                     induced_quotient_map, is_local, local_map, local_space,
                     oracle_enumerate_maps, pointwise_compatible, quasi,
                     solve_compatible_maps)
from .gallery import build_case, check_case, list_cases
from .verify import (Exhaustive, Sample, VerificationReport, parse_strategy,
                     search_hom_counterexample, verify_gallery, verify_theorem)

__version__ = "0.1.0"
