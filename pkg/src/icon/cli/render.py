"""Client-side presentation: stable sorting, grouping with counts, tables.

present() is pure row shuffling over already-fetched data; rendering to an
aligned table or JSON happens afterwards and separately.
"""

from __future__ import annotations

import json

from ..errors import IconError


def _field(row: dict, name: str) -> object:
    if name not in row:
        raise IconError("UNKNOWN_FIELD", f"row has no field {name!r}", {"field": name})
    return row[name]


def present(
    rows: list[dict],
    sort_key: str | None = None,
    group_key: str | None = None,
    descending: bool = False,
    tie_key: str | None = None,
) -> dict:
    """Sort and group rows client-side.

    The sort is stable; when tie_key is given, equal sort values fall back
    to it ascending. Returns {"rows", "groups", "total"} where groups is
    None without group_key, else a list of {"key", "count", "rows"} whose
    counts sum to the row total.
    """
    ordered = list(rows)
    if sort_key is not None:
        for row in ordered:
            _field(row, sort_key)
            if tie_key is not None:
                _field(row, tie_key)
        if tie_key is not None:
            ordered.sort(key=lambda row: row[tie_key])
        ordered.sort(key=lambda row: row[sort_key], reverse=descending)

    groups = None
    if group_key is not None:
        buckets: dict[object, list[dict]] = {}
        for row in ordered:
            buckets.setdefault(_field(row, group_key), []).append(row)
        groups = [
            {"key": key, "count": len(members), "rows": members}
            for key, members in sorted(buckets.items(), key=lambda kv: str(kv[0]))
        ]
    return {"rows": ordered, "groups": groups, "total": len(rows)}


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.3f}"
    if isinstance(value, (list, dict)):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def format_table(rows: list[dict], columns: list[str] | None = None) -> str:
    """Aligned text table over the given columns (default: first row's keys)."""
    if not rows:
        return "(no rows)"
    columns = columns or list(rows[0].keys())
    grid = [columns] + [[_cell(row.get(col)) for col in columns] for row in rows]
    widths = [max(len(line[i]) for line in grid) for i in range(len(columns))]
    lines = []
    for n, line in enumerate(grid):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(columns))))
    return "\n".join(lines)


def format_presented(
    result: dict, columns: list[str] | None = None, group_label: str = "group"
) -> str:
    """Render a present() result: one table, or one table per group with counts."""
    if result["groups"] is None:
        return format_table(result["rows"], columns)
    parts = []
    for group in result["groups"]:
        parts.append(f"{group_label}={group['key']} ({group['count']})")
        parts.append(format_table(group["rows"], columns))
    parts.append(f"total: {result['total']}")
    return "\n".join(parts)
