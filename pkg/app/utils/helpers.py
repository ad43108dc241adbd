"""Helper utilities for redmod."""

import json
from pathlib import Path
from typing import Any

from app.exceptions import BadConfig, OrderBudgetExceeded


def ensure_budget(what: str, count: int, budget: int) -> None:
    """Raise OrderBudgetExceeded when an enumeration would exceed the budget."""
    if count > budget:
        raise OrderBudgetExceeded(what, count, budget)


def load_json_file(path: str | Path) -> Any:
    """Read a JSON spec file.

    Raises BadConfig if the file is missing or malformed.
    """
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise BadConfig(f"spec file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise BadConfig(f"spec file {path} is not valid JSON: {e}") from None


def parse_literal(text: str | None) -> Any:
    """Parse a command-line element literal such as ``2`` or ``[[1,1]]``."""
    if text is None:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise BadConfig(f"cannot parse element literal {text!r}") from None


def dump_document(document: Any) -> str:
    """Serialize a report document deterministically."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
