"""Characteristic function, property checkers and unanimity decomposition."""

from .game import (
    CheckReport,
    Coalition,
    ValueBreakdown,
    Violation,
    check_monotone,
    check_superadditive,
    coalition,
    coalition_value,
    coalition_values,
    external_player_value,
    from_mask,
    to_mask,
)
from .mobius import (
    GameDecomposition,
    UnanimityTerm,
    evaluate_decomposition,
    external_chain_terms,
    full_decomposition,
    mobius_oracle,
    mobius_transform,
)

__all__ = [
    "CheckReport",
    "Coalition",
    "ValueBreakdown",
    "Violation",
    "check_monotone",
    "check_superadditive",
    "coalition",
    "coalition_value",
    "coalition_values",
    "external_player_value",
    "from_mask",
    "to_mask",
    "GameDecomposition",
    "UnanimityTerm",
    "evaluate_decomposition",
    "external_chain_terms",
    "full_decomposition",
    "mobius_oracle",
    "mobius_transform",
]
