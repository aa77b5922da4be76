"""Machine-readable result records (JSON and CSV).

Records are flat dictionaries; certified interval values appear as
nested ``{"lo": ..., "hi": ...}`` objects in JSON and as ``<key>_lo`` /
``<key>_hi`` column pairs in CSV -- never collapsed to a midpoint.
Floats are rounded to 12 significant digits at emission so that
identical inputs yield byte-identical output and JSON reparses to equal
records.
"""

from __future__ import annotations

import csv as _csv
import io
import json

from .enclosure import Enclosure

SIG_DIGITS = 12

# Documented, stable column sets per record kind.  Kinds without an
# entry fall back to sorted flattened keys.
CSV_COLUMNS = {
    "multiplier-estimate": ["m", "alpha", "prime_limit", "conv_limit",
                            "ratio", "reference", "flag"],
    "norm": ["space", "p", "r", "value", "value_lo", "value_hi"],
    "verify": ["suite", "passed", "detail"],
}


def round_sig(x: float) -> float:
    return float(f"{x:.{SIG_DIGITS}g}")


def normalize_value(v):
    if isinstance(v, Enclosure):
        return {"lo": round_sig(v.lo), "hi": round_sig(v.hi)}
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, float):
        return round_sig(v)
    if isinstance(v, int):
        return v
    if isinstance(v, complex):
        return {"re": round_sig(v.real), "im": round_sig(v.imag)}
    if isinstance(v, dict):
        return {k: normalize_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [normalize_value(x) for x in v]
    return str(v)


def normalize_record(rec: dict) -> dict:
    return {k: normalize_value(v) for k, v in rec.items()}


def _flatten(rec: dict) -> dict:
    flat = {}
    for k, v in rec.items():
        if isinstance(v, dict) and set(v) == {"lo", "hi"}:
            flat[f"{k}_lo"] = v["lo"]
            flat[f"{k}_hi"] = v["hi"]
        elif isinstance(v, dict) and set(v) == {"re", "im"}:
            flat[f"{k}_re"] = v["re"]
            flat[f"{k}_im"] = v["im"]
        elif isinstance(v, (list, tuple)):
            flat[k] = ";".join(str(x) for x in v)
        else:
            flat[k] = v
    return flat


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    if v is None:
        return ""
    return str(v)


def to_json(records: list[dict]) -> str:
    payload = {"records": [normalize_record(r) for r in records]}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_json(text: str) -> list[dict]:
    payload = json.loads(text)
    return payload["records"]


def to_csv(records: list[dict], kind: str | None = None) -> str:
    flats = [_flatten(normalize_record(r)) for r in records]
    if kind in CSV_COLUMNS:
        columns = CSV_COLUMNS[kind]
    else:
        seen = []
        for f in flats:
            for k in f:
                if k not in seen:
                    seen.append(k)
        columns = seen
    out = io.StringIO()
    writer = _csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for f in flats:
        writer.writerow([_format_cell(f.get(c)) for c in columns])
    return out.getvalue()


def emit_report(records: list[dict], format: str, kind: str | None = None) -> str:
    """Render records as 'json' or 'csv' text."""
    if format == "json":
        return to_json(records)
    if format == "csv":
        return to_csv(records, kind=kind)
    raise ValueError(f"unknown report format {format!r}")
