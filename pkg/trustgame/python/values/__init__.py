"""Shapley and Banzhaf values: closed forms, oracles, marginal effects and sweeps."""

from .values import (
    Allocation,
    AllocationKind,
    banzhaf_bruteforce,
    banzhaf_closed_form,
    bruteforce,
    closed_form,
    is_zero_shapley_player,
    shapley_bruteforce,
    shapley_closed_form,
    unanimity_banzhaf_spot_check,
    unanimity_value,
)
from .marginal import (
    EdgeContribution,
    EffectCase,
    MarginalEffectReport,
    marginal_effect,
    marginal_effect_banzhaf,
    marginal_effect_shapley,
    value_attribution,
)
from .sweep import SweepTable, sweep_edge, weight_grid

__all__ = [
    "Allocation",
    "AllocationKind",
    "banzhaf_bruteforce",
    "banzhaf_closed_form",
    "bruteforce",
    "closed_form",
    "is_zero_shapley_player",
    "shapley_bruteforce",
    "shapley_closed_form",
    "unanimity_banzhaf_spot_check",
    "unanimity_value",
    "EdgeContribution",
    "EffectCase",
    "MarginalEffectReport",
    "marginal_effect",
    "marginal_effect_banzhaf",
    "marginal_effect_shapley",
    "value_attribution",
    "SweepTable",
    "sweep_edge",
    "weight_grid",
]
