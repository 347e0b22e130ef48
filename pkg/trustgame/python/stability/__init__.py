from .core_solver import (
    CoreReport,
    core_allocation,
    core_report,
    is_in_core,
    stability_gap,
    subgame_allocation,
    verify_core_identity,
    verify_total_balancedness,
)

__all__ = [
    "CoreReport",
    "core_allocation",
    "core_report",
    "is_in_core",
    "stability_gap",
    "subgame_allocation",
    "verify_core_identity",
    "verify_total_balancedness",
]
