"""Every construction, continuous and discontinuous, as an :class:`SqcFunction`."""

from .base import Classification, DiscontinuityRecord, SqcFunction
from .catalogue import CATALOGUE, build, catalogue, parse_matrix, parse_vector, square_on
from .classic import max_root_quadratic, quadratic_norm
from .combinators import affine_pullback, restrict
from .fixtures import constant, neg_quadratic
from .multivariate import ClosureSide, boundary_perturbation, point_drop, radial_jump, radial_split
from .univariate import countable_jumps, endpoint_jump, interior_jump_lsc, interior_jump_usc, scan_maximum

__all__ = [
    "Classification",
    "DiscontinuityRecord",
    "SqcFunction",
    "CATALOGUE",
    "build",
    "catalogue",
    "parse_matrix",
    "parse_vector",
    "square_on",
    "quadratic_norm",
    "max_root_quadratic",
    "endpoint_jump",
    "interior_jump_lsc",
    "interior_jump_usc",
    "countable_jumps",
    "scan_maximum",
    "boundary_perturbation",
    "point_drop",
    "radial_jump",
    "radial_split",
    "ClosureSide",
    "restrict",
    "affine_pullback",
    "constant",
    "neg_quadratic",
]
