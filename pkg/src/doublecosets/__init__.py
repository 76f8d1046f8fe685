"""Finiteness of double coset spaces X\\G/P for maximal rank reductive X and parabolic P."""

from .criterion import analyse, criterion_value, find_witness, verify_table
from .rootsys import RootSystem, Subsystem, build_root_system, weyl_conjugate
from .subgroups import (
    ParabolicSpec,
    SpecError,
    SubgroupSpec,
    Verdict,
    classify_finiteness,
    enumerate_maximal_rank_subgroups,
    parse_group,
    parse_parabolic,
    parse_subgroup,
)

__version__ = "0.1.0"

__all__ = [
    "ParabolicSpec", "RootSystem", "SpecError", "SubgroupSpec", "Subsystem", "Verdict",
    "analyse", "build_root_system", "classify_finiteness", "criterion_value",
    "enumerate_maximal_rank_subgroups", "find_witness", "parse_group", "parse_parabolic",
    "parse_subgroup", "verify_table", "weyl_conjugate",
]
