"""Utility functions for redmod."""

from app.utils.helpers import dump_document, ensure_budget, load_json_file, parse_literal

__all__ = ["dump_document", "ensure_budget", "load_json_file", "parse_literal"]
