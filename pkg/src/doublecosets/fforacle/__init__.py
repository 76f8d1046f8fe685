"""Finite-field evidence: orbit counts of X(F_q) on flag varieties G(F_q)/P."""

from .field import PrimeField, UnsupportedField, prime_field
from .flags import Budget, BudgetExceeded, DEFAULT_BUDGET, FlagSet, enumerate_flags, expected_flag_count
from .groups import EmbeddingError, MatrixGroupInstance, build_full_group, build_subgroup_instance
from .orbits import Evidence, OrbitReport, count_orbits, judge, orbit_count, stabilization_test
from .properties import PropertyReport, definite_point_orbits, verify_section3_properties
from .spaces import FormedSpace, build_formed_space

__all__ = [
    "Budget", "BudgetExceeded", "DEFAULT_BUDGET", "EmbeddingError", "Evidence", "FlagSet",
    "FormedSpace", "MatrixGroupInstance", "OrbitReport", "PrimeField", "PropertyReport",
    "UnsupportedField", "build_formed_space", "build_full_group", "build_subgroup_instance",
    "count_orbits", "definite_point_orbits", "enumerate_flags", "expected_flag_count", "judge",
    "orbit_count", "prime_field", "stabilization_test", "verify_section3_properties",
]
