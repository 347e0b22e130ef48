from __future__ import annotations

import math
import operator
from typing import Iterable, List, Optional

import numpy as np


class TrustGameError(Exception):
    """Base class for every error raised by the trustgame package."""


class GraphFormatError(TrustGameError, ValueError):
    def __init__(self, message: str, *, line: Optional[int] = None, locus: Optional[str] = None):
        self.line = line
        self.locus = locus
        where = []
        if line is not None:
            where.append(f"line {line}")
        if locus:
            where.append(locus)
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class UnknownPlayerError(TrustGameError, ValueError):
    pass


class EdgeNotFoundError(TrustGameError, ValueError):
    pass


class InvalidArgumentError(TrustGameError, ValueError):
    pass


class GuardExceededError(TrustGameError, RuntimeError):
    def __init__(self, operation: str, n: int, max_n: int):
        self.operation = operation
        self.n = n
        self.max_n = max_n
        super().__init__(
            f"{operation}: n={n} exceeds the exhaustive guard max_n={max_n} "
            f"(raise --max-n or TRUSTGAME_MAX_N, or use --sample)"
        )


def weight_problem(weight: float) -> Optional[str]:
    if not isinstance(weight, (int, float)) or isinstance(weight, bool):
        return f"weight is not a number: {weight!r}"
    if math.isnan(weight):
        return "weight is NaN"
    if weight < 0.0 or weight > 1.0:
        return f"weight {weight} outside [0, 1]"
    return None


def validate_player(n: int, player: int) -> int:
    """Player id as a plain int; numpy integers are accepted, bools and floats are not."""
    index = None
    if not isinstance(player, (bool, np.bool_)):
        try:
            index = operator.index(player)
        except TypeError:
            pass
    if index is None or index < 0 or index >= n:
        raise UnknownPlayerError(f"Unknown player id {player!r} (graph has players 0..{n - 1})")
    return index


def validate_members(n: int, members: Iterable[int]) -> List[int]:
    errors = []
    checked = []
    for member in members:
        try:
            checked.append(validate_player(n, member))
        except UnknownPlayerError as e:
            errors.append(str(e))
    if errors:
        raise UnknownPlayerError("Coalition validation failed:\n" + "\n".join(f"  - {e}" for e in errors))
    return checked


def guard(operation: str, n: int, max_n: int) -> None:
    if n > max_n:
        raise GuardExceededError(operation, n, max_n)
