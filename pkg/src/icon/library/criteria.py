"""Search criteria: validation and predicate evaluation.

A criteria document maps field names to predicates. A predicate is either a
bare scalar (shorthand for ``{"eq": scalar}``) or a map of operators to
operands; all predicates in one document must hold (conjunction).

Operators: ``eq`` exact match, ``contains`` casefolded substring (or list
membership), ``prefix`` casefolded prefix, ``gte``/``lte`` ordered compare on
numbers or strings. A record whose field is absent matches no predicate.
"""

from __future__ import annotations

from . import schemas
from ..errors import IconError

OPERATORS = ("contains", "eq", "gte", "lte", "prefix")

_SCALARS = (str, int, float, bool)


def _check_operand(field: str, op: str, operand: object) -> None:
    bad = not isinstance(operand, _SCALARS)
    if isinstance(operand, bool) and op != "eq":
        bad = True
    if bad:
        raise IconError(
            "INVALID_QUERY",
            f"operand for {field}.{op} must be a string or number",
        )


def validate_criteria(segment: str, criteria: object) -> dict[str, dict]:
    """Normalize a criteria document, raising INVALID_QUERY on bad shape."""
    schemas.check_segment(segment)
    if not isinstance(criteria, dict) or not criteria:
        raise IconError("INVALID_QUERY", "criteria must be a non-empty object")
    allowed = schemas.INDEXED_FIELDS[segment] | {"key"}
    normalized: dict[str, dict] = {}
    for field, predicate in criteria.items():
        if field not in allowed:
            raise IconError(
                "INVALID_QUERY",
                f"field {field!r} is not searchable in segment {segment}",
                {"allowed": sorted(allowed)},
            )
        if not isinstance(predicate, dict):
            predicate = {"eq": predicate}
        if not predicate:
            raise IconError("INVALID_QUERY", f"empty predicate for field {field!r}")
        for op, operand in predicate.items():
            if op not in OPERATORS:
                raise IconError(
                    "INVALID_QUERY",
                    f"unknown operator {op!r}",
                    {"allowed": list(OPERATORS)},
                )
            _check_operand(field, op, operand)
        normalized[field] = dict(predicate)
    return normalized


def _holds(op: str, value: object, operand: object) -> bool:
    if op == "eq":
        if isinstance(value, bool) != isinstance(operand, bool):
            return False
        return value == operand
    if op == "contains":
        if isinstance(value, list):
            return operand in value
        if isinstance(value, str) and isinstance(operand, str):
            return operand.casefold() in value.casefold()
        return False
    if op == "prefix":
        if isinstance(value, str) and isinstance(operand, str):
            return value.casefold().startswith(operand.casefold())
        return False
    # gte / lte: numbers compare numerically, strings lexicographically.
    numeric = isinstance(value, (int, float)) and isinstance(operand, (int, float))
    textual = isinstance(value, str) and isinstance(operand, str)
    if not (numeric or textual):
        return False
    return value >= operand if op == "gte" else value <= operand


def matches(fields: dict, normalized: dict[str, dict]) -> bool:
    """True when the record's fields satisfy every predicate."""
    for field, predicate in normalized.items():
        if field not in fields or fields[field] is None:
            return False
        for op, operand in predicate.items():
            if not _holds(op, fields[field], operand):
                return False
    return True
