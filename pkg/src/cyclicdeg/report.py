"""Report documents: JSON, CSV and human rendering, plus the result cache.

JSON never carries floats for degrees. A degree is ``{"num": "41", "den": "49"}``
and witness integers are decimal strings. Human tables add a six-digit
decimal approximation marked with "≈".
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "degree_json",
    "degree_from_json",
    "make_document",
    "dump_json",
    "load_schema",
    "validate_document",
    "format_degree",
    "render_human",
    "render_csv",
    "ResultCache",
]


def degree_json(value: Fraction) -> dict[str, str]:
    return {"num": str(value.numerator), "den": str(value.denominator)}


def degree_from_json(obj: dict[str, str]) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def make_document(command: dict, specs: list[str], results: dict, timing: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "specs": specs,
        "results": results,
        "timing": timing,
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_schema() -> dict:
    text = resources.files("cyclicdeg").joinpath("report_schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_document(doc: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not match the schema."""
    import jsonschema

    jsonschema.validate(doc, load_schema())


def format_degree(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator} ≈ {float(value):.6g}"


def _is_degree(obj: Any) -> bool:
    return isinstance(obj, dict) and set(obj) == {"num", "den"}


def _is_row_list(obj: Any) -> bool:
    return isinstance(obj, list) and bool(obj) and isinstance(obj[0], dict) and not _is_degree(obj[0])


def _cell(obj: Any) -> str:
    if _is_degree(obj):
        return format_degree(degree_from_json(obj))
    if isinstance(obj, list) and not obj:
        return "none"
    if isinstance(obj, list) and all(_is_degree(x) for x in obj):
        return "{" + ", ".join(format_degree(degree_from_json(x)) for x in obj) + "}"
    if isinstance(obj, bool):
        return "yes" if obj else "no"
    if obj is None:
        return "-"
    return str(obj)


def _table(rows: list[dict], columns: list[str]) -> list[str]:
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return lines


def _tabular(results: dict) -> tuple[list[dict], list[str]] | None:
    """The row list of a result payload, if it has one."""
    for key in ("rows", "census", "checks"):
        if key in results and isinstance(results[key], list):
            rows = results[key]
            columns: list[str] = []
            for r in rows:
                columns += [c for c in r if c not in columns]
            return rows, columns
    return None


def render_human(doc: dict) -> str:
    lines = []
    if doc["specs"]:
        lines.append("group: " + ", ".join(doc["specs"]))
    results = doc["results"]
    for key, value in results.items():
        if _is_row_list(value):
            continue
        if isinstance(value, dict) and not _is_degree(value):
            lines.append(f"{key}:")
            for k, v in value.items():
                if _is_row_list(v):
                    lines += ["  " + line for line in _table(v, list(v[0]))]
                else:
                    lines.append(f"  {k}: {_cell(v)}")
            continue
        lines.append(f"{key}: {_cell(value)}")
    tab = _tabular(results)
    if tab:
        rows, columns = tab
        lines += _table(rows, columns) if rows else ["(no rows)"]
    for key in ("findings", "terms"):
        if isinstance(results.get(key), list) and results[key]:
            lines.append(f"{key}:")
            lines += ["  " + line for line in _table(results[key], list(results[key][0]))]
    return "\n".join(lines) + "\n"


def _csv_value(obj: Any) -> list[str]:
    if _is_degree(obj):
        return [obj["num"], obj["den"]]
    return [str(obj)]


def render_csv(doc: dict) -> str:
    """One row per table entry; degrees split into numerator and denominator."""
    results = doc["results"]
    spec = ";".join(doc["specs"])
    tab = _tabular(results)
    if tab:
        rows, columns = tab
    else:
        rows = [{k: v for k, v in results.items() if not isinstance(v, (list, dict)) or _is_degree(v)}]
        columns = list(rows[0])
    header = ["spec"]
    for c in columns:
        sample = next((r[c] for r in rows if c in r), None)
        header += [f"{c}_num", f"{c}_den"] if _is_degree(sample) else [c]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        line = [spec]
        for c in columns:
            v = r.get(c)
            if isinstance(v, (list, dict)) and not _is_degree(v):
                v = json.dumps(v, sort_keys=True)
            line += _csv_value(v) if v is not None else [""]
        w.writerow(line)
    return buf.getvalue()


class ResultCache:
    """Derived summaries on disk, keyed by (schema version, canonical spec, kind).

    Entries are written to a temporary file and renamed into place, so
    concurrent writers never expose a partial file. Unreadable entries and
    entries from another schema version are ignored.
    """

    def __init__(self, directory: str | os.PathLike | None):
        self.directory = Path(directory) if directory else None
        self.hits = 0
        self.misses = 0

    def _path(self, key: list) -> Path:
        digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
        assert self.directory is not None
        return self.directory / f"{digest}.json"

    def get(self, spec: str, kind: str) -> Any | None:
        if self.directory is None:
            return None
        key = [SCHEMA_VERSION, spec, kind]
        try:
            entry = json.loads(self._path(key).read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        if entry.get("key") != key:
            return None
        return entry.get("payload")

    def put(self, spec: str, kind: str, payload: Any) -> None:
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        key = [SCHEMA_VERSION, spec, kind]
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"key": key, "payload": payload}, fh, sort_keys=True)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def fetch(self, spec: str, kind: str, compute: Callable[[], Any]) -> Any:
        """Cached payload, computing and storing it on a miss."""
        payload = self.get(spec, kind)
        if payload is not None:
            self.hits += 1
            return payload
        self.misses += 1
        payload = compute()
        self.put(spec, kind, payload)
        return payload
