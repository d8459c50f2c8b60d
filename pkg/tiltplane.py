"""
tiltplane.py
------------
Geometry of the (b, w)-half-plane of tilt stability on a polarised surface.

    U = {(b, w) : w > b²/2}

A numerical wall for a class v is the locus where ν_{b,w}(u) = ν_{b,w}(v) for
some other class u. The equation is linear in (b, w), so walls are lines;
for ch0(v) ≠ 0 they all pass through Π(v), for torsion v they are parallel.

Boundary curves
---------------
    Parabola       w = b²/2
    DelPezzoGamma  Γ(b) = b²/2 − γ(b), γ 1-periodic, ½x² − ½x + ¼ on (0, 1), 0 at ℤ
    K3Phi          Φ(b) = b²/2 − φ(b), φ 1-periodic, (1 − x²)/m on [−½, ½] \\ {0}, 0 at ℤ

Γ̄ and Φ̄ include the vertical segments at the integers (drop ¼ and 1/m).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from config import WALL_SEARCH_CAP
from invariants import (
    ChernSurface,
    CurveClass,
    SurfaceGeometry,
    SurfaceKind,
    delta_H,
    projection,
)
from surds import Exact, ceil, floor, normal, sign, sqrt

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class WallGeometryError(ValueError):
    pass


class ProportionalClasses(WallGeometryError):
    pass


class NoIntersection(WallGeometryError):
    pass


class TangentWall(WallGeometryError):
    pass


class WallSearchCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# Points and lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TiltPoint:
    b: Exact
    w: Exact

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", normal(self.b))
        object.__setattr__(self, "w", normal(self.w))

    @property
    def in_region(self) -> bool:
        return in_region(self)


def in_region(point: TiltPoint) -> bool:
    return sign(point.w - point.b * point.b / 2) > 0


def bmt_region_ok(b, w) -> bool:
    """Region of the generalized BMT conjecture: w > ½b² + ½(b−⌊b⌋)(1−b+⌊b⌋)."""
    b, w = Fraction(b), Fraction(w)
    frac = b - math.floor(b)
    return w > b * b / 2 + frac * (1 - frac) / 2


@dataclass(frozen=True)
class WallLine:
    """
    Exact line in the (b, w)-plane: w = slope·b + intercept, or b = vertical_b.

    The canonical anchor is the point at b = 0 (or w = 0 for vertical lines),
    so equal point sets compare equal.
    """
    slope: Fraction | None = None
    intercept: Fraction | None = None
    vertical_b: Fraction | None = None

    def __post_init__(self) -> None:
        if self.vertical_b is None and (self.slope is None or self.intercept is None):
            raise ValueError("Non-vertical WallLine needs slope and intercept")

    @classmethod
    def through(cls, point: TiltPoint, slope) -> "WallLine":
        slope = Fraction(slope)
        return cls(slope=slope, intercept=Fraction(point.w) - slope * Fraction(point.b))

    @classmethod
    def vertical(cls, b) -> "WallLine":
        return cls(vertical_b=Fraction(b))

    @property
    def is_vertical(self) -> bool:
        return self.vertical_b is not None

    @property
    def anchor(self) -> TiltPoint:
        if self.is_vertical:
            return TiltPoint(self.vertical_b, Fraction(0))
        return TiltPoint(Fraction(0), self.intercept)

    def at(self, b):
        if self.is_vertical:
            raise WallGeometryError("Vertical line is not a graph over b")
        return normal(self.slope * b + self.intercept)

    def contains(self, point: TiltPoint) -> bool:
        if self.is_vertical:
            return point.b == self.vertical_b
        return sign(point.w - point.b * self.slope - self.intercept) == 0

    def sort_key(self) -> tuple:
        if self.is_vertical:
            return (1, self.vertical_b, Fraction(0))
        return (0, self.slope, self.intercept)

    def __str__(self) -> str:
        if self.is_vertical:
            return f"b = {self.vertical_b}"
        return f"w = {self.slope}·b + {self.intercept}"


@dataclass(frozen=True)
class SlopeWindow:
    """Half-open b-range [bmin, bmax)."""
    bmin: Fraction
    bmax: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "bmin", Fraction(self.bmin))
        object.__setattr__(self, "bmax", Fraction(self.bmax))
        if not self.bmin < self.bmax:
            raise ValueError(f"Empty window [{self.bmin}, {self.bmax})")


@dataclass(frozen=True)
class DestabilizerCandidate:
    u: ChernSurface
    wall: WallLine


# ---------------------------------------------------------------------------
# Walls
# ---------------------------------------------------------------------------

def wall_equation(v: ChernSurface, u: ChernSurface, geom: SurfaceGeometry
                  ) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients (A, B, C) of the numerical wall A·b + B·w + C = 0."""
    m = geom.m
    a = m * (v.ch2 * u.r - u.ch2 * v.r)
    b = m * (v.r * u.c1H - u.r * v.c1H)
    c = u.ch2 * v.c1H - v.ch2 * u.c1H
    return a, b, c


def wall_through(v: ChernSurface, u: ChernSurface, geom: SurfaceGeometry) -> WallLine:
    """The numerical wall of u against v."""
    a, b, c = wall_equation(v, u, geom)
    if a == 0 and b == 0:
        if c == 0:
            raise ProportionalClasses(
                f"{u.as_tuple()} is numerically proportional to {v.as_tuple()}"
            )
        raise WallGeometryError(
            f"Torsion classes {u.as_tuple()} and {v.as_tuple()} have constant, "
            f"distinct tilt slopes; no wall"
        )
    if b == 0:
        return WallLine.vertical(-c / a)
    return WallLine(slope=-a / b, intercept=-c / b)


# ---------------------------------------------------------------------------
# Boundary curves
# ---------------------------------------------------------------------------

class CurveKind(str, Enum):
    PARABOLA       = "Parabola"
    DELPEZZO_GAMMA = "DelPezzoGamma"
    K3_PHI         = "K3Phi"


def boundary_curve(b, kind: CurveKind, m=1) -> Fraction:
    """Value of the boundary curve at b (the top of the vertical segment at integers)."""
    b, kind, m = Fraction(b), CurveKind(kind), Fraction(m)
    half_sq = b * b / 2
    if kind is CurveKind.PARABOLA:
        return half_sq
    if kind is CurveKind.DELPEZZO_GAMMA:
        x = b - math.floor(b)
        if x == 0:
            return half_sq
        return half_sq - (x * x / 2 - x / 2 + Fraction(1, 4))
    x = b - math.floor(b + Fraction(1, 2))
    if x == 0:
        return half_sq
    return half_sq - (1 - x * x) / m


def boundary_gap(kind: CurveKind, m=1) -> Fraction:
    """Length of the vertical segment of the boundary curve at each integer."""
    kind = CurveKind(kind)
    if kind is CurveKind.PARABOLA:
        return Fraction(0)
    if kind is CurveKind.DELPEZZO_GAMMA:
        return Fraction(1, 4)
    return 1 / Fraction(m)


def curve_kind_for(surface: SurfaceGeometry) -> CurveKind:
    if surface.kind is SurfaceKind.DELPEZZO:
        return CurveKind.DELPEZZO_GAMMA
    if surface.kind is SurfaceKind.K3:
        return CurveKind.K3_PHI
    return CurveKind.PARABOLA


@dataclass(frozen=True)
class _Piece:
    """Open interval (left, right) on which line − curve = qa·x² + qb·x + qc."""
    left: Fraction
    right: Fraction
    qa: Fraction
    qb: Fraction
    qc: Fraction

    def value(self, x) -> Exact:
        return normal(x * x * self.qa + x * self.qb + self.qc)

    def positive_part(self) -> tuple[Exact, Exact] | None:
        """Sub-interval of (left, right) where the difference is > 0 (concave, so one interval)."""
        lo, hi = self.left, self.right
        if self.qa == 0:
            if self.qb == 0:
                return (lo, hi) if self.qc > 0 else None
            root = -self.qc / self.qb
            if self.qb > 0:
                lo = max(lo, root)
            else:
                hi = min(hi, root)
        else:
            disc = self.qb * self.qb - 4 * self.qa * self.qc
            if disc <= 0:
                return None
            r1 = normal((sqrt(disc) + self.qb) / (-2 * self.qa))
            r2 = normal((self.qb - sqrt(disc)) / (-2 * self.qa))
            r1, r2 = (r1, r2) if r1 < r2 else (r2, r1)
            lo = r1 if r1 > lo else lo
            hi = r2 if r2 < hi else hi
        return (lo, hi) if lo < hi else None

    def touches_zero(self) -> bool:
        """Does the difference vanish somewhere on the closed piece?"""
        lo, hi = sign(self.value(self.left)), sign(self.value(self.right))
        if lo * hi <= 0:
            return True
        if self.qa == 0:
            return False
        vertex = -self.qb / (2 * self.qa)
        if self.left < vertex < self.right:
            return sign(self.value(vertex)) * lo <= 0
        return False


def _pieces(slope: Fraction, intercept: Fraction, kind: CurveKind, m: Fraction,
            lo: int, hi: int) -> Iterator[tuple[str, object]]:
    """Walk the boundary curve left to right as alternating pieces and breakpoints."""
    if kind is CurveKind.DELPEZZO_GAMMA:
        for n in range(lo, hi + 1):
            yield "spike", Fraction(n)
            # Γ(x) = (n + ½)x − n²/2 − n/2 − ¼ on (n, n+1)
            yield "piece", _Piece(
                Fraction(n), Fraction(n + 1), Fraction(0),
                slope - n - Fraction(1, 2),
                intercept + Fraction(n * n + n, 2) + Fraction(1, 4),
            )
        yield "spike", Fraction(hi + 1)
        return
    for n in range(lo, hi + 1):
        # Φ(x) = x²/2 − (1 − (x−n)²)/m on (n − ½, n + ½)
        qa = -Fraction(1, 2) - 1 / m
        qb = slope + 2 * n / m
        qc = intercept + (1 - n * n) / m
        yield "point", Fraction(2 * n - 1, 2)
        yield "piece", _Piece(Fraction(2 * n - 1, 2), Fraction(n), qa, qb, qc)
        yield "spike", Fraction(n)
        yield "piece", _Piece(Fraction(n), Fraction(2 * n + 1, 2), qa, qb, qc)
    yield "point", Fraction(2 * hi + 1, 2)


def _components(line: WallLine, kind: CurveKind, m: Fraction) -> tuple[list[tuple[Exact, Exact]], bool]:
    """Maximal open b-intervals where the line lies strictly above the curve, and a touch flag."""
    k, c = line.slope, line.intercept
    if kind is CurveKind.PARABOLA:
        disc = k * k + 2 * c
        if disc <= 0:
            return [], disc == 0
        root = sqrt(disc)
        return [(normal(k - root), normal(k + root))], True

    gap = boundary_gap(kind, m)
    disc = k * k + 2 * (c + gap)
    if disc < 0:
        return [], False
    root = sqrt(disc)
    lo, hi = floor(k - root) - 1, ceil(k + root) + 1

    comps: list[tuple[Exact, Exact]] = []
    open_start: Exact | None = None
    open_end: Exact | None = None
    touched = False
    pending_point: tuple[Fraction, bool] | None = None

    for tag, item in _pieces(k, c, kind, m, lo, hi):
        if tag in ("spike", "point"):
            p = item
            value = k * p + c
            top = boundary_curve(p, kind, m)
            if tag == "spike" and top - gap <= value <= top:
                touched = True
            pending_point = (p, value > top)
            continue
        piece: _Piece = item
        touched = touched or piece.touches_zero()
        part = piece.positive_part()
        p, above = pending_point if pending_point else (None, False)
        bridges = (
            part is not None and open_end is not None and above
            and open_end == p and part[0] == p
        )
        if bridges:
            open_end = part[1]
        else:
            if open_start is not None:
                comps.append((open_start, open_end))
            open_start, open_end = (part if part is not None else (None, None))
        if part is not None and part[1] < piece.right:
            comps.append((open_start, open_end))
            open_start = open_end = None
    if open_start is not None:
        comps.append((open_start, open_end))
    return comps, touched


def wall_endpoints(line: WallLine, kind: CurveKind, m=1, near=None) -> tuple[TiltPoint, TiltPoint]:
    """
    Left and right intersection points of a line with a boundary curve.

    When the line is above the curve on several intervals (separated by
    vertical segments), the one containing `near` is used; `near` defaults
    to the b-coordinate where the line rises highest above the parabola.
    """
    kind, m = CurveKind(kind), Fraction(m)
    if line.is_vertical:
        raise WallGeometryError(f"Vertical line {line} meets the boundary curve once")
    comps, touched = _components(line, kind, m)
    if not comps:
        if touched:
            raise TangentWall(f"{line} touches the {kind.value} curve without crossing it")
        raise NoIntersection(f"{line} lies below the {kind.value} curve")
    target = line.slope if near is None else Fraction(near)
    chosen = [cp for cp in comps if cp[0] < target < cp[1]]
    if not chosen:
        if len(comps) != 1:
            raise WallGeometryError(
                f"{line} crosses the {kind.value} curve on {len(comps)} intervals; "
                f"pass near= to pick one"
            )
        chosen = comps
    left, right = chosen[0]
    return TiltPoint(left, line.at(left)), TiltPoint(right, line.at(right))


# ---------------------------------------------------------------------------
# Slope bounds for pushforwards of curve sheaves
# ---------------------------------------------------------------------------

def _check_parity(curve: CurveClass) -> None:
    s, kind = curve.s, curve.surface.kind
    if kind is SurfaceKind.DELPEZZO:
        if s % 2 == 0 or s < 3:
            raise ValueError(f"Del Pezzo slope bounds need odd s ≥ 3, got s={s}")
    elif kind is SurfaceKind.K3:
        if s % 2:
            raise ValueError(f"K3 slope bounds need even s, got s={s}")
    else:
        raise ValueError(f"No pushforward slope bounds on {kind.value} surfaces")


def slope_bounds_pushforward(curve: CurveClass, t) -> tuple[Fraction, Fraction]:
    """(max ν⁺_BN, min ν⁻_BN) of HN factors of ι_*E with t(E) = t."""
    _check_parity(curve)
    s, t = curve.s, Fraction(t)
    if curve.surface.kind is SurfaceKind.DELPEZZO:
        return (-Fraction(3 * s + 1, 4) + Fraction(2 * s, s - 1) * t,
                -Fraction(s + 1, 4))
    return 2 * t - Fraction(3 * s, 4), -Fraction(s, 4)


def extremal_line(curve: CurveClass, t) -> WallLine:
    """Line through the extremal boundary point with slope t − s/2."""
    _check_parity(curve)
    s = curve.s
    if curve.surface.kind is SurfaceKind.DELPEZZO:
        point = TiltPoint(Fraction(-s - 1, 2), Fraction((s + 1) ** 2, 8))
    else:
        point = TiltPoint(Fraction(-s, 2), Fraction(s * s, 8))
    return WallLine.through(point, Fraction(t) - Fraction(s, 2))


def slope_bounds_from_endpoints(curve: CurveClass, t) -> tuple[Fraction, Fraction]:
    """The same pair recomputed as w/b at the endpoints of the extremal line."""
    line = extremal_line(curve, t)
    left, right = wall_endpoints(line, curve_kind_for(curve.surface), curve.surface.m)
    return normal(right.w / right.b), normal(left.w / left.b)


def mu_gap_ok(mu1, mu2, s) -> bool:
    return Fraction(mu1) - Fraction(mu2) <= s


# ---------------------------------------------------------------------------
# Destabilizer enumeration
# ---------------------------------------------------------------------------

def is_destabilizer(v: ChernSurface, u: ChernSurface, window: SlopeWindow,
                    geom: SurfaceGeometry) -> WallLine | None:
    """
    The wall of u if u passes every numerical filter for v, else None.

    Filters: Δ_H(u) ≥ 0, Δ_H(v−u) ≥ 0, Δ_H(u) ≤ Δ_H(v); the wall is a
    non-vertical line meeting U over the window; 0 < c1H^b(u) < c1H^b(v)
    along the whole segment of the wall inside U.
    """
    rest = v - u
    dv = delta_H(v, geom)
    du = delta_H(u, geom)
    if du < 0 or du > dv or delta_H(rest, geom) < 0:
        return None
    a, b, c = wall_equation(v, u, geom)
    if b == 0:
        return None
    slope, intercept = -a / b, -c / b
    segment = _segment_in_window(slope, intercept, window.bmin, window.bmax)
    if segment is None:
        return None
    left, right = segment
    m = geom.m
    for c0, c_slope in ((u.c1H, u.r * m), (rest.c1H, rest.r * m)):
        at_left = _c1_sign(c0, c_slope, left)
        at_right = _c1_sign(c0, c_slope, right)
        if at_left < 0 or at_right < 0 or (at_left == 0 and at_right == 0):
            return None
    return WallLine(slope=slope, intercept=intercept)


@lru_cache(maxsize=65536)
def _segment_in_window(slope: Fraction, intercept: Fraction, bmin: Fraction, bmax: Fraction
                       ) -> tuple[Exact, Exact] | None:
    """Chord of w = slope·b + intercept above the parabola, if it meets [bmin, bmax)."""
    disc = slope * slope + 2 * intercept
    if disc <= 0:
        return None
    root = sqrt(disc)
    left, right = normal(slope - root), normal(slope + root)
    if not (left < bmax and right > bmin):
        return None
    return left, right


def _c1_sign(c0: Fraction, c_slope: Fraction, b: Exact) -> int:
    """Sign of c1^b = c0 − c_slope·b."""
    if c_slope == 0:
        return (c0 > 0) - (c0 < 0)
    q = c0 / c_slope
    if b == q:
        return 0
    return 1 if bool(b < q) == (c_slope > 0) else -1


def _lattice(lo, hi, step: Fraction) -> Iterator[Fraction]:
    """Lattice points of step·ℤ in [lo, hi]."""
    start = math.ceil(Fraction(lo) / step)
    stop = math.floor(Fraction(hi) / step)
    for i in range(start, stop + 1):
        yield i * step


def _witness_key(u: ChernSurface) -> tuple:
    return (abs(u.r), abs(u.c1H), abs(u.ch2), u.r, u.c1H, u.ch2)


def _search_box(v: ChernSurface, window: SlopeWindow, geom: SurfaceGeometry, r: int
                ) -> Iterator[ChernSurface]:
    m, dv = geom.m, delta_H(v, geom)
    ends = (window.bmin, window.bmax)
    a_lo = min(b * r * m for b in ends)
    a_hi = max(v.c1H - b * (v.r - r) * m for b in ends)
    for a in _lattice(a_lo, a_hi, geom.c1_lattice_step):
        if r != 0:
            lo, hi = (a * a - dv) / (2 * r * m), a * a / (2 * r * m)
            lo, hi = min(lo, hi), max(lo, hi)
        else:
            if a <= 0:
                continue
            bound = v.ch2 - (v.c1H - a) ** 2 / (2 * v.r * m)
            if v.r > 0:
                lo, hi = bound, max(v.ch2, Fraction(0))
            else:
                lo, hi = min(v.ch2, Fraction(0)), bound
        for ch2 in _lattice(lo, hi, geom.ch2_lattice_step):
            yield ChernSurface(r, a, ch2)


def enumerate_walls(v: ChernSurface, window: SlopeWindow | None, geom: SurfaceGeometry,
                    cap: int | None = None, strict_cap: bool = True
                    ) -> list[DestabilizerCandidate]:
    """
    Every numerical wall for v meeting the window, one minimal witness each.

    Ranks |ch0(u)| ≤ cap are searched. If the outermost rank shell still holds
    a candidate the search may be truncated, which raises
    WallSearchCapExceeded unless strict_cap is False.
    """
    if window is None:
        raise ValueError("enumerate_walls needs a finite b-window")
    if delta_H(v, geom) < 0:
        raise ValueError(f"Δ_H{v.as_tuple()} < 0; no semistable objects of this class")
    cap = WALL_SEARCH_CAP if cap is None else cap

    best: dict[WallLine, ChernSurface] = {}
    shell_hit = False
    for r in range(-cap, cap + 1):
        if r == 0 and v.r == 0:
            continue
        for u in _search_box(v, window, geom, r):
            wall = is_destabilizer(v, u, window, geom)
            if wall is None:
                continue
            if abs(r) == cap:
                shell_hit = True
            current = best.get(wall)
            if current is None or _witness_key(u) < _witness_key(current):
                best[wall] = u
    log.debug("enumerate_walls %s: %d walls (cap %d)", v.as_tuple(), len(best), cap)
    if shell_hit and strict_cap:
        raise WallSearchCapExceeded(
            f"Candidates for {v.as_tuple()} reach |ch0| = {cap}; raise CY3CHECK_CAP"
        )
    walls = sorted(best, key=WallLine.sort_key)
    if v.r != 0:
        pi = TiltPoint(*projection(v, geom))
        assert all(w.contains(pi) for w in walls), "wall misses Π(v)"
    return [DestabilizerCandidate(u=best[w], wall=w) for w in walls]


def brute_force_walls(v: ChernSurface, window: SlopeWindow, geom: SurfaceGeometry,
                      rank_max: int = 10, c1_max=10, ch2_max=25
                      ) -> list[DestabilizerCandidate]:
    """Scan the plain lattice box |r| ≤ rank_max, |c1H| ≤ c1_max, |ch2| ≤ ch2_max."""
    best: dict[WallLine, ChernSurface] = {}
    c1_values = list(_lattice(-c1_max, c1_max, geom.c1_lattice_step))
    ch2_values = list(_lattice(-ch2_max, ch2_max, geom.ch2_lattice_step))
    for r in range(-rank_max, rank_max + 1):
        for a in c1_values:
            for ch2 in ch2_values:
                u = ChernSurface(r, a, ch2)
                wall = is_destabilizer(v, u, window, geom)
                if wall is None:
                    continue
                current = best.get(wall)
                if current is None or _witness_key(u) < _witness_key(current):
                    best[wall] = u
    return [DestabilizerCandidate(u=best[w], wall=w) for w in sorted(best, key=WallLine.sort_key)]
