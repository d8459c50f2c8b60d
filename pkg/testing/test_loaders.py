"""
testing/test_loaders.py
-----------------------
Unit tests for catalog parsing and staging frames (loaders.py).
"""
from __future__ import annotations

from fractions import Fraction

import pytest

from catalog import CoverRecord, Fano4Record, Route, WCIFamily
from config import COVERS_CATALOG, FANO4_CATALOG, HYPERGEO_CATALOG, PATHOLOGY_CATALOG
from loaders import CatalogError, catalog_frames, load_catalog, parse_catalog


QUINTIC = (
    "wci:\n"
    "  - name: X_5\n"
    "    weights: [1, 1, 1, 1, 1]\n"
    "    degrees: [5]\n"
)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class TestParseCatalog:

    def test_single_record(self):
        (rec,) = parse_catalog(QUINTIC)
        assert rec == WCIFamily("X_5", (1, 1, 1, 1, 1), (5,))
        assert rec.route is Route.COR

    def test_empty_document(self):
        assert parse_catalog("") == []

    def test_sections_in_fixed_order(self):
        text = (
            "covers:\n"
            "  - {name: c, r: 4, d: 2, hY3: 1}\n"
            "fano4:\n"
            "  - {name: f, r: 3, m: 3, chi_OH: 6}\n"
            + QUINTIC
        )
        kinds = [type(rec) for rec in parse_catalog(text)]
        assert kinds == [WCIFamily, Fano4Record, CoverRecord]

    def test_rational_strings(self):
        (rec,) = parse_catalog("fano4:\n  - {name: f, r: 2, m: '7/2', chi_OH: 8}\n")
        assert rec.m == Fraction(7, 2)

    def test_unknown_field_is_located(self):
        text = QUINTIC + (
            "  - name: b\n"
            "    weights: [1, 1, 1, 1, 1]\n"
            "    degrees: [5]\n"
            "    colour: red\n"
        )
        with pytest.raises(CatalogError, match="unknown fields") as info:
            parse_catalog(text, source="cat.yaml")
        assert (info.value.line, info.value.column) == (5, 5)
        assert str(info.value).startswith("cat.yaml:5:5: wci record 'b'")

    def test_float_is_not_exact(self):
        with pytest.raises(CatalogError, match="is not exact"):
            parse_catalog("fano4:\n  - {name: f, r: 2, m: 0.5, chi_OH: 8}\n")

    def test_integer_field_rejects_bool(self):
        with pytest.raises(CatalogError, match="scale must be an integer"):
            parse_catalog(QUINTIC + "    scale: true\n")

    def test_bool_field_rejects_string(self):
        with pytest.raises(CatalogError, match="must be true or false"):
            parse_catalog(QUINTIC + "    picard_rank_one: 'yes'\n")

    def test_weights_must_be_integers(self):
        text = "wci:\n  - {name: a, weights: [1, 1, x, 1, 1], degrees: [5]}\n"
        with pytest.raises(CatalogError, match="expected integers"):
            parse_catalog(text)

    def test_unknown_section(self):
        with pytest.raises(CatalogError, match="unknown section 'foo'") as info:
            parse_catalog(QUINTIC + "foo: []\n")
        assert info.value.line == 5

    def test_section_must_be_a_list(self):
        with pytest.raises(CatalogError, match="must be a list"):
            parse_catalog("wci: {name: a}\n")

    def test_top_level_must_be_a_mapping(self):
        with pytest.raises(CatalogError, match="must be a mapping"):
            parse_catalog("- a\n- b\n")

    def test_yaml_syntax_error(self):
        with pytest.raises(CatalogError, match="parse error"):
            parse_catalog("wci: [\n")


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

class TestLoadCatalog:

    @pytest.mark.parametrize("path, count", [
        (HYPERGEO_CATALOG, 13),
        (FANO4_CATALOG, 8),
        (COVERS_CATALOG, 12),
        (PATHOLOGY_CATALOG, 1),
    ])
    def test_bundled_catalogs(self, path, count):
        assert len(load_catalog(path)) == count

    def test_missing_file(self, tmp_path):
        with pytest.raises(CatalogError, match="cannot read catalog"):
            load_catalog(tmp_path / "absent.yaml")

    def test_json_is_accepted(self, tmp_path):
        path = tmp_path / "cat.json"
        path.write_text('{"covers": [{"name": "c", "r": 4, "d": 2, "hY3": 1}]}', encoding="utf-8")
        (rec,) = load_catalog(path)
        assert rec == CoverRecord("c", 4, 2, 1)


class TestCatalogFrames:

    def test_hypergeometric_frame(self):
        frames = catalog_frames(load_catalog(HYPERGEO_CATALOG))
        wci = frames["wci"]
        assert len(wci) == 13
        assert wci.loc[0, "weights"] == "1,1,1,1,1"
        assert wci.loc[0, "route"] == "Fano4"
        assert frames["fano4"].empty
        assert frames["covers"].empty

    def test_rationals_are_rendered(self):
        frames = catalog_frames(load_catalog(FANO4_CATALOG))
        row = frames["fano4"].set_index("name").loc["P1xP3"]
        assert row["h3"] == "14"
        assert row["chi_OH"] == "8"
