"""
testing/test_db.py
------------------
Unit tests for the DuckDB database layer (db.py).

All tests use in-memory databases so nothing touches the filesystem.
"""
from __future__ import annotations

import pandas as pd
import pytest

from catalog import report_frame, run_catalog
from config import HYPERGEO_CATALOG, PATHOLOGY_CATALOG
from db import TABLE_SCHEMAS, Database
from loaders import catalog_frames, load_catalog


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def db():
    """Fresh in-memory database for each test."""
    with Database(":memory:") as database:
        yield database


@pytest.fixture(scope="module")
def hypergeo_records():
    return load_catalog(HYPERGEO_CATALOG)


@pytest.fixture(scope="module")
def reports_df(hypergeo_records) -> pd.DataFrame:
    reports, _ = run_catalog(hypergeo_records)
    return report_frame(reports)


@pytest.fixture
def sample_cover_df() -> pd.DataFrame:
    return pd.DataFrame({
        "name":           ["P3-double", "Q3-double"],
        "r":              [4,           3],
        "d":              [2,           2],
        "hY3":            ["1",         "2"],
        "picard_rank":    [1,           1],
        "branch_general": [True,        True],
        "notes":          ["",          ""],
    })


# ---------------------------------------------------------------------------
# Connection and initialisation
# ---------------------------------------------------------------------------

class TestDatabaseInit:

    def test_all_tables_created_on_init(self, db):
        assert db.tables() == sorted(TABLE_SCHEMAS)

    def test_tables_are_initially_empty(self, db):
        counts = db.row_counts()
        assert (counts["rows"] == 0).all()


# ---------------------------------------------------------------------------
# Write / read
# ---------------------------------------------------------------------------

class TestWrite:

    def test_write_reports(self, db, reports_df):
        db.write("mart_reports", reports_df)
        result = db.read("mart_reports")
        assert len(result) == 13
        assert set(result["verdict"]) == {"Holds"}

    def test_write_replace_clears_previous_data(self, db, sample_cover_df):
        db.write("stg_covers", sample_cover_df)
        db.write("stg_covers", sample_cover_df.iloc[:1])
        assert len(db.read("stg_covers")) == 1

    def test_write_append_adds_rows(self, db, sample_cover_df):
        db.write("stg_covers", sample_cover_df)
        db.write("stg_covers", sample_cover_df, mode="append")
        assert len(db.read("stg_covers")) == 4

    def test_write_staging_frames(self, db, hypergeo_records):
        frames = catalog_frames(hypergeo_records)
        db.write("stg_wci", frames["wci"])
        result = db.read("stg_wci")
        assert len(result) == 13
        assert result.loc[result["name"] == "X_{4,6}", "route_s"].iloc[0] == 4

    def test_write_raises_on_unknown_table(self, db, sample_cover_df):
        with pytest.raises(ValueError, match="Unknown table"):
            db.write("stg_surfaces", sample_cover_df)

    def test_write_raises_on_unknown_mode(self, db, sample_cover_df):
        with pytest.raises(ValueError, match="Unknown write mode"):
            db.write("stg_covers", sample_cover_df, mode="upsert")

    def test_write_raises_on_missing_columns(self, db):
        with pytest.raises(ValueError, match="missing columns"):
            db.write("stg_covers", pd.DataFrame({"wrong_col": [1, 2]}))

    def test_read_raises_on_unknown_table(self, db):
        with pytest.raises(ValueError, match="Unknown table"):
            db.read("nope")


# ---------------------------------------------------------------------------
# Schema alignment
# ---------------------------------------------------------------------------

class TestSchemaValidation:

    def test_column_names_case_insensitive_match(self, db, sample_cover_df):
        db.write("stg_covers", sample_cover_df.rename(columns={"hY3": "hy3", "name": "NAME"}))
        result = db.read("stg_covers")
        assert "hY3" in result.columns
        assert set(result["name"]) == {"P3-double", "Q3-double"}

    def test_extra_columns_are_silently_dropped(self, db, sample_cover_df):
        df = sample_cover_df.copy()
        df["extra_column"] = "dropped"
        db.write("stg_covers", df)
        assert "extra_column" not in db.read("stg_covers").columns

    def test_rationals_stay_exact(self, db, reports_df):
        db.write("mart_reports", reports_df)
        result = db.query("SELECT epsilon FROM mart_reports WHERE name = 'X_5'")
        assert result["epsilon"].iloc[0] == "7/221"

    def test_uncastable_column(self, db, sample_cover_df):
        df = sample_cover_df.copy()
        df["r"] = ["four", "three"]
        with pytest.raises(ValueError, match="column r is not INTEGER"):
            db.write("stg_covers", df)


# ---------------------------------------------------------------------------
# Queries and introspection
# ---------------------------------------------------------------------------

class TestQuery:

    def test_inconclusive_families(self, db, reports_df):
        db.write("mart_reports", reports_df)
        pathology, _ = run_catalog(load_catalog(PATHOLOGY_CATALOG))
        db.write("mart_reports", report_frame(pathology), mode="append")
        result = db.query("SELECT name, bn FROM mart_reports WHERE verdict <> 'Holds'")
        assert result.to_dict("records") == [{"name": "S1xP1-double", "bn": "7"}]

    def test_row_counts_updates_after_write(self, db, sample_cover_df):
        db.write("stg_covers", sample_cover_df)
        counts = db.row_counts()
        assert counts.loc[counts["table"] == "stg_covers", "rows"].iloc[0] == 2


class TestContextManager:

    def test_context_manager_closes_connection(self, sample_cover_df):
        with Database(":memory:") as db:
            db.write("stg_covers", sample_cover_df)
        with pytest.raises(Exception):
            db.read("stg_covers")
