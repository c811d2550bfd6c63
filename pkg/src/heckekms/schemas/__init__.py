"""JSON schemas for groupoid files and CLI reports."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files(__package__).joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate_json(data, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` when ``data`` does not match."""
    jsonschema.validate(data, load_schema(name))
