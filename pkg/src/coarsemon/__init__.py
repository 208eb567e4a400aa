"""Equivariant controlled objects over bornological coarse spaces.

The package checks, by exact computation on seeded random instances, that
the total category of pairs (space, controlled object) carries a symmetric
monoidal structure compatible with the projection to spaces.
"""

from .additive import FakeSigmaMatCat, MatCat, ShiftCat, check_instance_laws, check_strictness
from .coarse import (BornCoarseSpace, compat_check, discrete_line, finite_space, make_space,
                     metric_line, point_space, space_tensor)
from .controlled import (ControlledMorphism, ControlledObject, check_object, mor_add, mor_check,
                         mor_compose, mor_identity, obj_biproduct, obj_check, pushforward_mor,
                         pushforward_obj)
from .errors import CoarsemonError
from .generators import Generator, fixture_space, instances_for
from .groth import (GrothMorphism, GrothObject, biadditive_map, cocartesian_lift,
                    cocartesian_verify, constraint_assoc, constraint_symm, constraint_unit,
                    exchange_map, groth_compose, groth_identity, mor_tensor, obj_tensor,
                    projection, unit_object)
from .groups import action_check, cyclic_group, group_check
from .maps import morphism_check
from .rings import INTEGERS, RATIONALS, Matrix, integers_mod
from .suites import Context, build_report, replay, run_suite

__version__ = "0.1.0"

__all__ = [
    "FakeSigmaMatCat", "MatCat", "ShiftCat", "check_instance_laws", "check_strictness",
    "BornCoarseSpace", "compat_check", "discrete_line", "finite_space", "make_space",
    "metric_line", "point_space", "space_tensor",
    "ControlledMorphism", "ControlledObject", "check_object", "mor_add", "mor_check",
    "mor_compose", "mor_identity", "obj_biproduct", "obj_check", "pushforward_mor",
    "pushforward_obj",
    "CoarsemonError",
    "Generator", "fixture_space", "instances_for",
    "GrothMorphism", "GrothObject", "biadditive_map", "cocartesian_lift",
    "cocartesian_verify", "constraint_assoc", "constraint_symm", "constraint_unit",
    "exchange_map", "groth_compose", "groth_identity", "mor_tensor", "obj_tensor",
    "projection", "unit_object",
    "action_check", "cyclic_group", "group_check",
    "morphism_check",
    "INTEGERS", "RATIONALS", "Matrix", "integers_mod",
    "Context", "build_report", "replay", "run_suite",
]
