"""Exact summability exponents for multilinear maps, with finite numerical checks."""

from .errors import BudgetError, DomainError, InapplicableError, ProvenanceWarning
from .exponents import (
    ExponentResult,
    PartitionScenario,
    Theorem,
    best_exponent,
    cor_main_exponent,
    gamma_block,
    inclusion_exponent,
    intro_exponent,
    main1_exponent,
    main2_exponent,
    main3_exponent,
)
from .extrational import INF, ExtRational, conjugate

__all__ = [
    "BudgetError",
    "DomainError",
    "InapplicableError",
    "ProvenanceWarning",
    "ExponentResult",
    "PartitionScenario",
    "Theorem",
    "best_exponent",
    "cor_main_exponent",
    "gamma_block",
    "inclusion_exponent",
    "intro_exponent",
    "main1_exponent",
    "main2_exponent",
    "main3_exponent",
    "INF",
    "ExtRational",
    "conjugate",
]
