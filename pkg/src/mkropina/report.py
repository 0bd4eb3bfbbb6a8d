"""Deterministic report emission: CSV and JSON with 17-significant-digit floats.

The CSV column set and order are fixed; absent methods emit empty fields.
JSON mirrors the row field names.  Floats are always rendered with
``format(x, '.17g')`` so identical inputs produce byte-identical reports and
parsing the JSON back recovers the exact doubles.
"""

from __future__ import annotations

import json

from .errors import MKropinaError
from .scenario import ReportRow, VerifyReport

CSV_COLUMNS = (
    "flag_id",
    "admissible",
    "K_general",
    "K_thm31",
    "K_natred",
    "K_biinv",
    "g_YY",
    "g_UU",
    "g_UY",
    "eqn_n",
    "max_residual",
)


def _fmt_float(value: float | None) -> str:
    if value is None:
        return ""
    if value == 0.0:
        value = 0.0  # normalize negative zero
    return format(value, ".17g")


def _json_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    return json.dumps(value)


def _row_fields(row: ReportRow):
    yield "flag_id", row.flag_id
    yield "admissible", row.admissible
    for name in CSV_COLUMNS[2:]:
        yield name, getattr(row, name)


def emit_report(rows: list[ReportRow], fmt: str = "csv") -> str:
    """Serialize report rows; row order is preserved."""
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for row in rows:
            cells = [row.flag_id, "true" if row.admissible else "false"]
            cells += [_fmt_float(getattr(row, name)) for name in CSV_COLUMNS[2:]]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        row_texts = []
        for row in rows:
            parts = [
                f"{json.dumps(name)}: {_json_scalar(value)}"
                for name, value in _row_fields(row)
            ]
            row_texts.append("  {" + ", ".join(parts) + "}")
        if not row_texts:
            return "[]\n"
        return "[\n" + ",\n".join(row_texts) + "\n]\n"
    raise MKropinaError(f"unknown report format {fmt!r}")


def rows_from_json(text: str) -> list[ReportRow]:
    """Inverse of ``emit_report(rows, 'json')``."""
    raw = json.loads(text)
    rows = []
    for item in raw:
        kwargs = {"flag_id": item["flag_id"], "admissible": bool(item["admissible"])}
        for name in CSV_COLUMNS[2:]:
            value = item.get(name)
            kwargs[name] = None if value is None else float(value)
        rows.append(ReportRow(**kwargs))
    return rows


def emit_verify(report: VerifyReport, fmt: str = "csv") -> str:
    """Serialize the verify suite: one line per cross-check."""
    if fmt == "csv":
        lines = ["check,max_residual,tolerance,passed,detail"]
        for c in report.checks:
            lines.append(
                ",".join(
                    [
                        c.check,
                        _fmt_float(c.max_residual),
                        _fmt_float(c.tolerance),
                        "true" if c.passed else "false",
                        c.detail.replace(",", ";"),
                    ]
                )
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        items = []
        for c in report.checks:
            parts = [
                f'"check": {json.dumps(c.check)}',
                f'"max_residual": {_fmt_float(c.max_residual)}',
                f'"tolerance": {_fmt_float(c.tolerance)}',
                f'"passed": {"true" if c.passed else "false"}',
                f'"detail": {json.dumps(c.detail)}',
            ]
            items.append("  {" + ", ".join(parts) + "}")
        return "[\n" + ",\n".join(items) + "\n]\n"
    raise MKropinaError(f"unknown report format {fmt!r}")


def emit_check(payload: dict, fmt: str = "json") -> str:
    """Serialize the structural/reductivity check report."""
    if fmt == "json":
        return json.dumps(payload, indent=2, default=str) + "\n"
    if fmt == "csv":
        lines = ["section,check,passed,residual"]
        for section in ("structure", "reductivity"):
            for name, result in payload[section].items():
                if not isinstance(result, dict):
                    continue
                lines.append(
                    ",".join(
                        [
                            section,
                            name,
                            "true" if result["passed"] else "false",
                            _fmt_float(result.get("residual")),
                        ]
                    )
                )
        consistent = payload["reductivity"].get("equivalence_consistent")
        lines.append(
            "reductivity,equivalence_consistent,"
            + ("" if consistent is None else ("true" if consistent else "false"))
            + ","
        )
        return "\n".join(lines) + "\n"
    raise MKropinaError(f"unknown report format {fmt!r}")
