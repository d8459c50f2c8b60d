"""
testing/test_bnbounds.py
------------------------
Unit tests for the Brill–Noether bounds (bnbounds.py).
"""
from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from bnbounds import (
    BNBound,
    BoundKind,
    BoundSource,
    CurveProfile,
    PathPoint,
    ProfileError,
    Special,
    best_upper,
    bn_lower,
    bn_upper_classical,
    bn_upper_delpezzo,
    bn_upper_k3,
    check_profile_consistency,
    clifford_bound,
    delpezzo_case_values,
    delpezzo_f,
    gonality_from_castelnuovo_severi,
    grid_path_max,
    omega_k3,
    path_bound,
    psi_dp,
    triangle_points,
    very_general_bound,
    weak_bound,
)
from invariants import CurveClass, SurfaceGeometry, SurfaceKind


def _dp(m) -> SurfaceGeometry:
    return SurfaceGeometry(SurfaceKind.DELPEZZO, m)


def _k3(m) -> SurfaceGeometry:
    return SurfaceGeometry(SurfaceKind.K3, m)


# ---------------------------------------------------------------------------
# Classical bounds
# ---------------------------------------------------------------------------

class TestClassicalBounds:

    def test_weak(self):
        assert weak_bound(5).value == Fraction(7, 2)
        assert weak_bound(5).source is BoundSource.WEAK

    def test_clifford(self):
        assert clifford_bound(13, 2).value == 6
        assert clifford_bound(13, 5).value == 6
        assert clifford_bound(6, 1).value == 3

    def test_clifford_needs_genus_four(self):
        with pytest.raises(ValueError, match="g ≥ 4"):
            clifford_bound(3, 1)

    def test_very_general(self):
        assert very_general_bound(4).value == Fraction(9, 4)

    def test_best_upper_ignores_lower_bounds(self):
        bounds = [weak_bound(12), BNBound(1, BoundSource.GONALITY_LOWER, BoundKind.LOWER),
                  clifford_bound(13, 2)]
        assert best_upper(bounds).value == 6

    def test_best_upper_needs_an_upper_bound(self):
        with pytest.raises(ValueError, match="No upper bound"):
            best_upper([BNBound(1, BoundSource.GONALITY_LOWER, BoundKind.LOWER)])

    def test_castelnuovo_severi_gonality(self):
        # genus-13 double cover of a genus-4 curve
        assert gonality_from_castelnuovo_severi(13, 4) == 4


class TestCurveProfile:

    def test_derived_clifford(self):
        assert CurveProfile(g=5, special=Special.HYPERELLIPTIC).derived_clifford_lb() == 0
        assert CurveProfile(g=5, gonality=3).derived_clifford_lb() == 1
        assert CurveProfile(g=6, special="PlanarOdd", planar_degree=5).derived_clifford_lb() == 1
        assert CurveProfile(g=9, gonality=4).derived_clifford_lb() == 2
        assert CurveProfile(g=9).derived_clifford_lb() is None

    def test_planar_degree_must_be_odd(self):
        with pytest.raises(ProfileError, match="odd degree"):
            CurveProfile(g=3, special=Special.PLANAR_ODD, planar_degree=4)

    def test_planar_genus_must_match(self):
        with pytest.raises(ProfileError, match="has genus 6"):
            CurveProfile(g=5, special=Special.PLANAR_ODD, planar_degree=5)

    def test_hyperelliptic_gonality_conflict(self):
        with pytest.raises(ProfileError):
            CurveProfile(g=5, gonality=3, special=Special.HYPERELLIPTIC)

    def test_double_cover_needs_base_genus(self):
        with pytest.raises(ProfileError, match="cover_genus"):
            CurveProfile(g=13, special=Special.DOUBLE_COVER_OF)

    def test_hyperelliptic_exact(self):
        exact = [b for b in bn_lower(CurveProfile(g=13, special=Special.HYPERELLIPTIC))
                 if b.kind is BoundKind.EXACT]
        assert [b.value for b in exact] == [7]

    def test_planar_quintic_exact(self):
        bounds = bn_lower(CurveProfile(g=6, special=Special.PLANAR_ODD, planar_degree=5))
        assert bounds[-1].value == 3
        assert bounds[-1].source is BoundSource.PLANAR_EXACT

    def test_section_lower_bound(self):
        bounds = bn_lower(CurveProfile(g=6), chi_OH=5)
        assert [(b.value, b.kind) for b in bounds] == [(3, BoundKind.LOWER)]

    def test_classical_upper_bounds(self):
        values = [b.value for b in bn_upper_classical(CurveProfile(g=9, gonality=4,
                                                                   very_general=True))]
        assert values == [5, 4, Fraction(9, 4) + 1 + Fraction(1, 9)]

    def test_consistent_profiles_pass(self):
        check_profile_consistency(CurveProfile(g=13, special=Special.HYPERELLIPTIC))
        check_profile_consistency(CurveProfile(g=6, special=Special.PLANAR_ODD, planar_degree=5))

    def test_bielliptic_needs_genus_four(self):
        with pytest.raises(ProfileError, match="g ≥ 4"):
            check_profile_consistency(CurveProfile(g=3, special=Special.BIELLIPTIC))


# ---------------------------------------------------------------------------
# Score functions
# ---------------------------------------------------------------------------

class TestScores:

    def test_psi_cases(self):
        assert psi_dp(1, 2, 1) == 2
        assert psi_dp(-1, 2, 1) == 2
        assert psi_dp(-3, 4, 1) == Fraction(3, 2)
        assert psi_dp(-1, 0, 1) == 0

    def test_psi_undefined(self):
        with pytest.raises(ValueError, match="undefined"):
            psi_dp(1, 0, 1)
        with pytest.raises(ValueError, match="y ≥ 0"):
            psi_dp(0, -1, 1)

    def test_spike_beats_neighbouring_cells(self):
        spike = psi_dp(-2, 2, 1)
        assert psi_dp(Fraction(-201, 100), 2, 1) < spike
        assert psi_dp(Fraction(-199, 100), 2, 1) < spike

    def test_omega(self):
        assert omega_k3(0, 2, 2) == sympy.sqrt(2)
        assert omega_k3(3, 0, 2) == 3


# ---------------------------------------------------------------------------
# Curves on del Pezzo and K3 surfaces
# ---------------------------------------------------------------------------

class TestDelPezzo:

    def test_bound_values(self):
        assert bn_upper_delpezzo(3, 1).value == 3
        assert bn_upper_delpezzo(3, 3).value == 4
        assert bn_upper_delpezzo(5, 1).value == 5

    def test_even_s_rejected(self):
        with pytest.raises(ValueError, match="odd s"):
            bn_upper_delpezzo(4, 1)

    def test_triangle(self):
        p, q = triangle_points(CurveClass(3, _dp(1)), 1, 3)
        assert p == PathPoint(Fraction(-3, 2), 3)
        assert q == PathPoint(Fraction(1, 2), 1)

    @pytest.mark.parametrize("s", [3, 5, 7, 9])
    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_case_three_at_top_matches_case_one(self, s, m):
        n = (s + 1) // 2
        assert s * m * delpezzo_f(s, m, n) == 1 + Fraction(s * s - 1, 8) * m

    def test_case_values(self):
        cases = delpezzo_case_values(3, 1)
        assert cases == {"P1=Q": [2], "ray": [3], "OQ": [2]}

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_optimiser_matches_closed_form(self, m):
        value, path = path_bound(CurveClass(3, _dp(m)))
        assert value == bn_upper_delpezzo(3, m).value
        assert path[0] == PathPoint(0, 0)

    @pytest.mark.parametrize("s", [3, 5, 7, 9])
    @pytest.mark.parametrize("m", range(1, 7))
    def test_grid_matches_closed_form(self, s, m):
        curve = CurveClass(s, _dp(m))
        p, q = triangle_points(curve, 1, curve.g - 1)
        closed = float(bn_upper_delpezzo(s, m).value)
        assert grid_path_max(p, q, m) == pytest.approx(closed, abs=1e-9)

    def test_three_segment_grid_stays_below(self):
        curve = CurveClass(3, _dp(1))
        p, q = triangle_points(curve, 1, curve.g - 1)
        assert grid_path_max(p, q, 1, segments=3) <= 3 + 1e-9

    def test_grid_rejects_four_segments(self):
        p, q = triangle_points(CurveClass(3, _dp(1)), 1, 3)
        with pytest.raises(ValueError, match="2 or 3"):
            grid_path_max(p, q, 1, n=4, segments=4)


class TestK3:

    def test_sqrt48(self):
        bound = bn_upper_k3(4, 2)
        assert bound.exact == "sqrt(48)"
        assert bound.decimal() == "6.928203230276"
        assert bound.value < 7

    @pytest.mark.parametrize("m", range(1, 21))
    def test_s_two_is_rational(self, m):
        bound = bn_upper_k3(2, m)
        assert bound.is_rational
        assert bound.value == Fraction(m, 2) + 2

    def test_odd_s_rejected(self):
        with pytest.raises(ValueError, match="even s"):
            bn_upper_k3(3, 2)

    @pytest.mark.parametrize("s, m", [(2, 2), (4, 2), (6, 4)])
    def test_path_through_q_matches_closed_form(self, s, m):
        value, _ = path_bound(CurveClass(s, _k3(m)))
        assert value == bn_upper_k3(s, m).value
