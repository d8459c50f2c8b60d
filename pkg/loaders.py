"""
loaders.py: catalog file loading shared by the CLI and the tests.

A catalog is one YAML (or JSON) document with top-level lists `wci`,
`fano4` and `covers`. Rationals are written as integers or "p/q" strings.
Every problem is reported as a CatalogError carrying the line and column
of the offending record, so a typo in a 40-entry file is easy to find.
"""
from __future__ import annotations

import dataclasses
import logging
from enum import Enum
from fractions import Fraction
from pathlib import Path

import pandas as pd
import yaml

from catalog import CoverRecord, Fano4Record, WCIFamily
from schemas import CoverSchema, Fano4Schema, WCISchema
from surds import parse_rational, render

log = logging.getLogger(__name__)


class CatalogError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | Path | None = None) -> None:
        self.line, self.column, self.source = line, column, source
        where = ""
        if line is not None:
            where = f"{source or '<catalog>'}:{line}:{column or 1}: "
        super().__init__(f"{where}{message}")


# ---------------------------------------------------------------------------
# Field handling
# ---------------------------------------------------------------------------

SECTIONS = {
    "wci":    WCIFamily,
    "fano4":  Fano4Record,
    "covers": CoverRecord,
}

RATIONAL_FIELDS = {"route_m", "m", "chi_OH", "h3", "hY3"}
INT_LIST_FIELDS = {"weights", "degrees"}
INT_FIELDS      = {"scale", "route_r", "route_s", "r", "d", "picard_rank"}
BOOL_FIELDS     = {"picard_rank_one", "smooth", "branch_general"}


def _rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{value!r} is not exact; write rationals as integers or 'p/q'")
    if isinstance(value, int):
        return Fraction(value)
    return parse_rational(value)


def _int_list(value) -> tuple[int, ...]:
    if not isinstance(value, list) or not value:
        raise ValueError(f"expected a non-empty list of integers, got {value!r}")
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ValueError(f"expected integers, got {value!r}")
    return tuple(value)


def _build(cls, raw: dict):
    if not isinstance(raw, dict):
        raise ValueError(f"expected a mapping, got {type(raw).__name__}")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValueError(f"unknown fields {unknown} for {cls.__name__}")
    kwargs = {}
    for key, value in raw.items():
        if value is None:
            continue
        if key in RATIONAL_FIELDS:
            value = _rational(value)
        elif key in INT_LIST_FIELDS:
            value = _int_list(value)
        elif key in INT_FIELDS and (not isinstance(value, int) or isinstance(value, bool)):
            raise ValueError(f"{key} must be an integer, got {value!r}")
        elif key in BOOL_FIELDS and not isinstance(value, bool):
            raise ValueError(f"{key} must be true or false, got {value!r}")
        kwargs[key] = value
    return cls(**kwargs)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def parse_catalog(text: str, source: str | Path | None = None) -> list:
    """Records in document order: all wci, then fano4, then covers."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise CatalogError(
            f"parse error: {getattr(exc, 'problem', exc)}",
            mark.line + 1 if mark else None, mark.column + 1 if mark else None, source,
        ) from None
    if data is None:
        return []
    if not isinstance(data, dict):
        raise CatalogError("a catalog must be a mapping with keys wci, fano4, covers",
                           1, 1, source)

    positions = {key.value: value for key, value in root.value}
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        node = next(k for k, _ in root.value if k.value == unknown[0])
        raise CatalogError(f"unknown section '{unknown[0]}'",
                           node.start_mark.line + 1, node.start_mark.column + 1, source)

    records = []
    for section, cls in SECTIONS.items():
        items = data.get(section) or []
        node = positions.get(section)
        if not isinstance(items, list):
            raise CatalogError(f"section '{section}' must be a list",
                               node.start_mark.line + 1, node.start_mark.column + 1, source)
        for raw, item_node in zip(items, node.value if node is not None else []):
            mark = item_node.start_mark
            try:
                records.append(_build(cls, raw))
            except (TypeError, ValueError) as exc:
                name = raw.get("name", "?") if isinstance(raw, dict) else "?"
                raise CatalogError(f"{section} record '{name}': {exc}",
                                   mark.line + 1, mark.column + 1, source) from None
    log.debug("Parsed %d records from %s", len(records), source or "<string>")
    return records


def load_catalog(path: str | Path) -> list:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read catalog: {exc.strerror}", source=path) from None
    records = parse_catalog(text, source=path)
    log.info("Loaded %d records from %s", len(records), path)
    return records


# ---------------------------------------------------------------------------
# Staging frames
# ---------------------------------------------------------------------------

def _cell(value):
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, Fraction):
        return render(value)
    if isinstance(value, Enum):
        return value.value
    return value


def catalog_frames(records: list) -> dict[str, pd.DataFrame]:
    """Flatten records into one validated DataFrame per section."""
    schemas = {"wci": WCISchema, "fano4": Fano4Schema, "covers": CoverSchema}
    frames = {}
    for section, cls in SECTIONS.items():
        columns = [f.name for f in dataclasses.fields(cls)]
        rows = [
            {col: _cell(getattr(rec, col)) for col in columns}
            for rec in records if isinstance(rec, cls)
        ]
        df = pd.DataFrame(rows, columns=columns)
        frames[section] = schemas[section].validate(df) if rows else df
    return frames
