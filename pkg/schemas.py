"""
schemas.py
----------
Pandera schema definitions for every DataFrame that flows through
the checker: the flattened catalog records going in and the report
rows coming out. Exact rationals travel as canonical "p/q" strings.

Usage
-----
    from schemas import WCISchema
    df = WCISchema.validate(df)

    @pa.check_output(ReportSchema)
    def report_frame(reports): ...

Schema hierarchy
----------------
    WCISchema       stg_wci, one row per weighted complete intersection
    Fano4Schema     stg_fano4, one row per Fano fourfold record
    CoverSchema     stg_covers, one row per cyclic cover
    ReportSchema    mart_reports, one row per checked family
"""
from __future__ import annotations

from fractions import Fraction

import pandera as pa
from pandera.typing import Series

RATIONAL = r"^-?\d+(/\d+)?$"
INT_LIST = r"^\d+(,\d+)*$"


def _ints(text: str) -> list[int]:
    return [int(x) for x in str(text).split(",")]


# ---------------------------------------------------------------------------
# Catalog staging
# ---------------------------------------------------------------------------

class _RecordSchema(pa.DataFrameModel):
    name:  Series[str]
    notes: Series[str] = pa.Field(nullable=True)

    @pa.dataframe_check
    def unique_names(cls, df):
        """Family names key the reports, so they may not repeat."""
        return not df["name"].duplicated().any()

    class Config:
        coerce = True
        strict = False


class WCISchema(_RecordSchema):
    weights: Series[str] = pa.Field(str_matches=INT_LIST)
    degrees: Series[str] = pa.Field(str_matches=INT_LIST)
    scale:   Series[int] = pa.Field(ge=1)
    route:   Series[str] = pa.Field(isin=[
        "Fano4", "BasepointFreeCor", "BasepointFreeCorVeryAmple2H", "K3Embed", "DelPezzoEmbed",
    ])
    route_r: Series[pa.Int64] = pa.Field(nullable=True, ge=1, le=5)
    route_s: Series[pa.Int64] = pa.Field(nullable=True, ge=1)
    route_m: Series[str]      = pa.Field(nullable=True, str_matches=RATIONAL)

    @pa.dataframe_check
    def calabi_yau_condition(cls, df):
        return df.apply(lambda row: sum(_ints(row["weights"])) == sum(_ints(row["degrees"])),
                        axis=1).all()

    class Config:
        coerce = True
        strict = False


class Fano4Schema(_RecordSchema):
    r:               Series[int] = pa.Field(ge=1, le=5)
    m:               Series[str] = pa.Field(str_matches=RATIONAL)
    picard_rank_one: Series[bool]
    chi_OH:          Series[str] = pa.Field(nullable=True, str_matches=RATIONAL)
    h3:              Series[str] = pa.Field(nullable=True, str_matches=RATIONAL)

    class Config:
        coerce = True
        strict = False


class CoverSchema(_RecordSchema):
    r:              Series[int] = pa.Field(ge=1, le=4)
    d:              Series[int] = pa.Field(ge=2)
    hY3:            Series[str] = pa.Field(str_matches=RATIONAL)
    picard_rank:    Series[int] = pa.Field(ge=1)
    branch_general: Series[bool]

    @pa.dataframe_check
    def degree_divides_index(cls, df):
        """A cyclic cover of degree d needs (d−1) | r."""
        return (df["r"] % (df["d"] - 1) == 0).all()

    @pa.dataframe_check
    def positive_degree(cls, df):
        return df["hY3"].map(lambda q: Fraction(q) > 0).all()

    class Config:
        coerce = True
        strict = False


# ---------------------------------------------------------------------------
# Mart schemas: what comes OUT of a catalog run
# ---------------------------------------------------------------------------

class ReportSchema(pa.DataFrameModel):
    """mart_reports: one row per checked family."""
    name:         Series[str]
    kind:         Series[str] = pa.Field(isin=["wci", "fano4", "cover"])
    scale:        Series[int] = pa.Field(ge=1)
    h3:           Series[str] = pa.Field(nullable=True, str_matches=RATIONAL)
    c2H:          Series[str] = pa.Field(nullable=True, str_matches=RATIONAL)
    chi:          Series[str] = pa.Field(nullable=True, str_matches=RATIONAL)
    route:        Series[str] = pa.Field(nullable=True)
    bn:           Series[str] = pa.Field(nullable=True)
    bn_decimal:   Series[str] = pa.Field(nullable=True)
    bound_source: Series[str] = pa.Field(nullable=True)
    verdict:      Series[str] = pa.Field(isin=["Holds", "Inconclusive", "Fails"])
    epsilon:      Series[str] = pa.Field(nullable=True, str_matches=RATIONAL)
    gammaH:       Series[str] = pa.Field(nullable=True, str_matches=RATIONAL)

    @pa.dataframe_check
    def holds_rows_carry_certificates(cls, df):
        holds = df["verdict"] == "Holds"
        return (df.loc[holds, "epsilon"].notna() & df.loc[holds, "gammaH"].notna()).all()

    class Config:
        coerce = True
        strict = False
