"""
testing/test_schemas.py
-----------------------
Tests for Pandera schema validation (schemas.py).

These tests verify that:
  - Valid staging and report frames pass
  - Dataframe-level checks reject what the field checks cannot see
"""
from __future__ import annotations

import pandas as pd
import pandera as pa
import pytest

from schemas import CoverSchema, Fano4Schema, ReportSchema, WCISchema


# ---------------------------------------------------------------------------
# Staging schemas
# ---------------------------------------------------------------------------

class TestWCISchema:

    def _valid_df(self):
        return pd.DataFrame({
            "name":    ["X_5",       "X_8"],
            "weights": ["1,1,1,1,1", "1,1,1,1,4"],
            "degrees": ["5",         "8"],
            "scale":   [1,           1],
            "route":   ["Fano4",     "BasepointFreeCor"],
            "route_r": pd.array([5, None], dtype="Int64"),
            "route_s": pd.array([None, None], dtype="Int64"),
            "route_m": ["1",         None],
            "notes":   ["",          "H basepoint free"],
        })

    def test_valid_data_passes(self):
        assert len(WCISchema.validate(self._valid_df())) == 2

    def test_calabi_yau_condition(self):
        df = self._valid_df()
        df.loc[1, "degrees"] = "7"
        with pytest.raises(pa.errors.SchemaError):
            WCISchema.validate(df)

    def test_duplicate_names(self):
        df = self._valid_df()
        df.loc[1, "name"] = "X_5"
        with pytest.raises(pa.errors.SchemaError):
            WCISchema.validate(df)

    def test_unknown_route(self):
        df = self._valid_df()
        df.loc[0, "route"] = "CyclicCover"
        with pytest.raises(pa.errors.SchemaError):
            WCISchema.validate(df)

    def test_malformed_weights(self):
        df = self._valid_df()
        df.loc[0, "weights"] = "1, 1, 1, 1, 1"
        with pytest.raises(pa.errors.SchemaError):
            WCISchema.validate(df)


class TestFano4Schema:

    def test_index_out_of_range(self):
        df = pd.DataFrame({
            "name": ["M"], "r": [6], "m": ["1"], "picard_rank_one": [True],
            "chi_OH": ["5"], "h3": [None], "notes": [""],
        })
        with pytest.raises(pa.errors.SchemaError):
            Fano4Schema.validate(df)

    def test_float_text_is_not_rational(self):
        df = pd.DataFrame({
            "name": ["M"], "r": [3], "m": ["0.5"], "picard_rank_one": [True],
            "chi_OH": ["6"], "h3": [None], "notes": [""],
        })
        with pytest.raises(pa.errors.SchemaError):
            Fano4Schema.validate(df)


class TestCoverSchema:

    def _df(self, r=4, d=2, hY3="1"):
        return pd.DataFrame({
            "name": ["c"], "r": [r], "d": [d], "hY3": [hY3],
            "picard_rank": [1], "branch_general": [True], "notes": [""],
        })

    def test_valid_data_passes(self):
        assert len(CoverSchema.validate(self._df())) == 1

    def test_degree_must_divide_index(self):
        with pytest.raises(pa.errors.SchemaError):
            CoverSchema.validate(self._df(r=4, d=4))

    def test_base_degree_must_be_positive(self):
        with pytest.raises(pa.errors.SchemaError):
            CoverSchema.validate(self._df(hY3="-1"))


# ---------------------------------------------------------------------------
# Report schema
# ---------------------------------------------------------------------------

class TestReportSchema:

    def _row(self, **overrides):
        row = {
            "name": "X_5", "kind": "wci", "scale": 1, "h3": "5", "c2H": "50", "chi": "5",
            "route": "Fano4", "bn": "7/2", "bn_decimal": "3.500000000000",
            "bound_source": "WeakBound", "verdict": "Holds",
            "epsilon": "7/221", "gammaH": "15419/210",
        }
        row.update(overrides)
        return pd.DataFrame([row])

    def test_valid_data_passes(self):
        assert len(ReportSchema.validate(self._row())) == 1

    def test_holds_needs_certificates(self):
        with pytest.raises(pa.errors.SchemaError):
            ReportSchema.validate(self._row(epsilon=None))

    def test_inconclusive_without_certificates(self):
        df = self._row(verdict="Inconclusive", epsilon=None, gammaH=None)
        assert len(ReportSchema.validate(df)) == 1

    def test_unknown_verdict(self):
        with pytest.raises(pa.errors.SchemaError):
            ReportSchema.validate(self._row(verdict="Maybe"))
