from __future__ import annotations

import json
import math
from typing import Any, Iterable, List, Optional, Sequence

SIGNIFICANT_DIGITS = 12
# magnitudes below this print as 0.0; exact zeros come out of float sums as ~1e-16
ZERO_FLOOR = 1e-12


def canonical_float(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round to ``digits`` significant digits; ``repr`` of the result is the shortest round-trip form."""
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return value
    if abs(value) < ZERO_FLOOR:
        return 0.0
    rounded = float(f"{value:.{digits}g}")
    return 0.0 if rounded == 0.0 else rounded


def canonicalize(obj: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    # numpy scalars expose .item(); bool must stay bool
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict, str)):
        try:
            obj = obj.item()
        except (TypeError, ValueError):
            pass
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return canonical_float(obj, digits)
    if isinstance(obj, dict):
        return {str(k): canonicalize(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonicalize(v, digits) for v in obj]
    if hasattr(obj, "tolist"):
        return canonicalize(obj.tolist(), digits)
    if hasattr(obj, "to_dict"):
        return canonicalize(obj.to_dict(), digits)
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


def dump_json(obj: Any, digits: int = SIGNIFICANT_DIGITS) -> str:
    return json.dumps(canonicalize(obj, digits), indent=2, ensure_ascii=False) + "\n"


def format_float(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    return repr(canonical_float(value, digits))


def dump_tsv(header: Sequence[str], rows: Iterable[Sequence[Any]], digits: int = SIGNIFICANT_DIGITS) -> str:
    lines: List[str] = ["\t".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, bool):
                cells.append("1" if cell else "0")
            elif isinstance(cell, float):
                cells.append(format_float(cell, digits))
            else:
                cells.append(str(cell))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def coalition_key(members: Iterable[int], labels: Optional[Sequence[str]] = None) -> str:
    """Comma-joined members in id order, written as labels when given."""
    ordered = sorted(members)
    return ",".join(str(labels[m]) if labels is not None else str(m) for m in ordered)
