"""
db.py
-----
DuckDB store for catalog runs.

Schema
------
Staging tables (flattened catalog records):
    stg_wci        weighted complete intersection families
    stg_fano4      anticanonical threefolds in Fano fourfolds
    stg_covers     cyclic covers of Fano threefolds

Mart tables:
    mart_reports   one row per checked family: invariants, bound, verdict, certificates

Exact rationals are stored as VARCHAR "p/q" strings; nothing is rounded.

Usage
-----
    from db import Database

    db = Database()                        # opens cy3check.db (creates if absent)
    db = Database(":memory:")              # in-memory, useful for tests

    db.write("mart_reports", report_frame(reports))
    db.write("mart_reports", more, "append")
    df = db.query("SELECT name, verdict FROM mart_reports WHERE verdict <> 'Holds'")

    with Database() as db:
        db.write("stg_wci", frames["wci"])
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Literal

import duckdb
import pandas as pd

from config import DB_PATH

log = logging.getLogger(__name__)

# Maps table name → list of (column, duckdb_type) tuples, enforced on every write
TABLE_SCHEMAS: dict[str, list[tuple[str, str]]] = {
    # ------------------------------------------------------------------
    # Staging
    # ------------------------------------------------------------------
    "stg_wci": [
        ("name",            "VARCHAR"),
        ("weights",         "VARCHAR"),   # comma separated
        ("degrees",         "VARCHAR"),
        ("scale",           "INTEGER"),
        ("route",           "VARCHAR"),
        ("route_r",         "INTEGER"),
        ("route_s",         "INTEGER"),
        ("route_m",         "VARCHAR"),
        ("picard_rank_one", "BOOLEAN"),
        ("smooth",          "BOOLEAN"),
        ("notes",           "VARCHAR"),
    ],
    "stg_fano4": [
        ("name",            "VARCHAR"),
        ("r",               "INTEGER"),
        ("m",               "VARCHAR"),
        ("picard_rank_one", "BOOLEAN"),
        ("chi_OH",          "VARCHAR"),
        ("h3",              "VARCHAR"),
        ("route",           "VARCHAR"),
        ("notes",           "VARCHAR"),
    ],
    "stg_covers": [
        ("name",           "VARCHAR"),
        ("r",              "INTEGER"),
        ("d",              "INTEGER"),
        ("hY3",            "VARCHAR"),
        ("picard_rank",    "INTEGER"),
        ("branch_general", "BOOLEAN"),
        ("notes",          "VARCHAR"),
    ],
    # ------------------------------------------------------------------
    # Marts
    # ------------------------------------------------------------------
    "mart_reports": [
        ("name",         "VARCHAR"),
        ("kind",         "VARCHAR"),
        ("scale",        "INTEGER"),
        ("h3",           "VARCHAR"),
        ("c2H",          "VARCHAR"),
        ("chi",          "VARCHAR"),
        ("route",        "VARCHAR"),
        ("bn",           "VARCHAR"),
        ("bn_decimal",   "VARCHAR"),
        ("bound_source", "VARCHAR"),
        ("verdict",      "VARCHAR"),   # Holds | Inconclusive | Fails
        ("epsilon",      "VARCHAR"),
        ("gammaH",       "VARCHAR"),
    ],
}

_PANDAS_TYPES = {
    "VARCHAR": "string",
    "INTEGER": "Int64",
    "BOOLEAN": "boolean",
}


class Database:
    """
    Thin wrapper around a DuckDB connection.

    All writes go through _validate_and_cast() which aligns the DataFrame
    to the declared schema before writing, catching column mismatches early.
    """

    def __init__(self, path: str | Path = DB_PATH) -> None:
        self._path = str(path)
        self._con = duckdb.connect(self._path)
        log.info("Opened DuckDB database at %s", self._path)
        self._initialise_schema()

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    def write(
        self,
        table: str,
        df: pd.DataFrame,
        mode: Literal["replace", "append"] = "replace",
    ) -> None:
        """
        Write a DataFrame to `table`.

        Parameters
        ----------
        table : canonical table name (must exist in TABLE_SCHEMAS)
        df    : data to write; columns are validated against the schema
        mode  : 'replace' empties the table first; 'append' inserts
        """
        if table not in TABLE_SCHEMAS:
            raise ValueError(
                f"Unknown table '{table}'. "
                f"Valid tables: {sorted(TABLE_SCHEMAS)}"
            )
        if mode not in ("replace", "append"):
            raise ValueError(f"Unknown write mode '{mode}'")
        df = self._validate_and_cast(table, df)
        if mode == "replace":
            self._con.execute(f"DELETE FROM {table}")

        self._con.register("_staging", df)
        self._con.execute(f"INSERT INTO {table} SELECT * FROM _staging")
        self._con.unregister("_staging")
        n = self._con.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]
        log.info("Wrote %d rows → %s (%s)", len(df), table, mode)
        log.debug("Table %s now has %d total rows", table, n)

    def read(self, table: str) -> pd.DataFrame:
        if table not in TABLE_SCHEMAS:
            raise ValueError(f"Unknown table '{table}'. Valid tables: {sorted(TABLE_SCHEMAS)}")
        return self._con.execute(f"SELECT * FROM {table}").df()

    def query(self, sql: str) -> pd.DataFrame:
        """Execute arbitrary SQL and return results as a DataFrame."""
        return self._con.execute(sql).df()

    def tables(self) -> list[str]:
        result = self._con.execute(
            "SELECT table_name FROM information_schema.tables "
            "WHERE table_schema = 'main' ORDER BY table_name"
        ).fetchall()
        return [r[0] for r in result]

    def row_counts(self) -> pd.DataFrame:
        rows = []
        for table in self.tables():
            n = self._con.execute(f"SELECT COUNT(*) FROM {table}").fetchone()[0]
            rows.append({"table": table, "rows": n})
        return pd.DataFrame(rows)

    def close(self) -> None:
        self._con.close()
        log.info("Closed DuckDB connection")

    def __enter__(self) -> "Database":
        return self

    def __exit__(self, *_) -> None:
        self.close()

    # ------------------------------------------------------------------
    # Internal helpers
    # ------------------------------------------------------------------

    def _initialise_schema(self) -> None:
        """Create any missing tables as empty shells on first open."""
        for table, cols in TABLE_SCHEMAS.items():
            cols_ddl = ", ".join(f"{col} {dtype}" for col, dtype in cols)
            self._con.execute(f"CREATE TABLE IF NOT EXISTS {table} ({cols_ddl})")
        log.debug("Schema initialised, %d tables", len(TABLE_SCHEMAS))

    def _validate_and_cast(self, table: str, df: pd.DataFrame) -> pd.DataFrame:
        """
        Align df to the declared schema: case-insensitive renames, a
        missing-column check, schema column order, declared dtypes.
        """
        schema_cols = [col for col, _ in TABLE_SCHEMAS[table]]

        lowered = {c.lower(): c for c in df.columns}
        rename_map = {
            lowered[col.lower()]: col
            for col in schema_cols
            if col not in df.columns and col.lower() in lowered
        }
        if rename_map:
            df = df.rename(columns=rename_map)

        missing = set(schema_cols) - set(df.columns)
        if missing:
            raise ValueError(
                f"Table '{table}': missing columns {sorted(missing)}. "
                f"DataFrame has: {sorted(df.columns.tolist())}"
            )

        result = df[schema_cols].copy()
        for col, duck_type in TABLE_SCHEMAS[table]:
            try:
                result[col] = result[col].astype(_PANDAS_TYPES[duck_type])
            except (ValueError, TypeError) as e:
                raise ValueError(f"Table '{table}': column {col} is not {duck_type}: {e}") from None
        return result
