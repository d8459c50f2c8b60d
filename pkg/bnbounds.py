"""
bnbounds.py
-----------
Upper and lower bounds on the Brill–Noether number bn_C of an integral curve,
the lim-sup of h⁰(E)/rk(E) over stable sheaves E on C of slope tending to g−1.

Classical bounds (weak, Clifford, very general) and the lower-bound lemmas
work from a `CurveProfile`. The wall-crossing bounds for curves on del Pezzo
and K3 surfaces bound h⁰ of a pushforward ι_*E by summing a score function
along convex paths O → P₁ → … → P whose vertices stay in the triangle OQP
cut out by the HN slope bounds.

Usage
-----
    from bnbounds import bn_upper_delpezzo, bn_upper_k3

    bn_upper_delpezzo(3, 1).value      # Fraction(3)
    bn_upper_k3(4, 2).exact            # 'sqrt(48)'
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from config import GRID_N, GRID_N_THREE_SEGMENT
from invariants import CurveClass, SurfaceGeometry, SurfaceKind, genus
from surds import Exact, decimal, normal, render, sqrt

log = logging.getLogger(__name__)


class ProfileError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Bound values
# ---------------------------------------------------------------------------

class BoundSource(str, Enum):
    WEAK                = "WeakBound"
    CLIFFORD            = "CliffordBound"
    VERY_GENERAL        = "VeryGeneral"
    DELPEZZO_WALL       = "DelPezzoWall"
    K3_WALL             = "K3Wall"
    GONALITY_LOWER      = "GonalityLower"
    HYPERELLIPTIC_EXACT = "HyperellipticExact"
    PLANAR_EXACT        = "PlanarExact"
    BIELLIPTIC_EXACT    = "BiellipticExact"
    SECTION_LOWER       = "SectionLower"


class BoundKind(str, Enum):
    UPPER = "Upper"
    LOWER = "Lower"
    EXACT = "Exact"


@dataclass(frozen=True)
class BNBound:
    """A bound on bn_C; `value` is a Fraction unless it is genuinely irrational."""
    value: Exact
    source: BoundSource
    kind: BoundKind = BoundKind.UPPER

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", normal(self.value))
        object.__setattr__(self, "source", BoundSource(self.source))
        object.__setattr__(self, "kind", BoundKind(self.kind))

    @property
    def is_rational(self) -> bool:
        return isinstance(self.value, Fraction)

    @property
    def exact(self) -> str:
        return render(self.value)

    def decimal(self, digits: int | None = None) -> str:
        return decimal(self.value) if digits is None else decimal(self.value, digits)

    def __str__(self) -> str:
        return f"{self.kind.value} {self.exact} ({self.source.value})"


def best_upper(bounds: list[BNBound]) -> BNBound:
    """Smallest Upper/Exact bound in the list."""
    candidates = [b for b in bounds if b.kind is not BoundKind.LOWER]
    if not candidates:
        raise ValueError("No upper bound available")
    return min(candidates, key=lambda b: (b.value, b.kind is not BoundKind.EXACT))


# ---------------------------------------------------------------------------
# Curve profiles
# ---------------------------------------------------------------------------

class Special(str, Enum):
    HYPERELLIPTIC   = "Hyperelliptic"
    PLANAR_ODD      = "PlanarOdd"
    BIELLIPTIC      = "Bielliptic"
    DOUBLE_COVER_OF = "DoubleCoverOf"


@dataclass(frozen=True)
class CurveProfile:
    """
    What is known about a curve C of arithmetic genus g.

    PlanarOdd needs `planar_degree`, DoubleCoverOf needs `cover_genus`.
    """
    g: int
    gonality: int | None = None
    clifford_lb: int | None = None
    special: Special | None = None
    planar_degree: int | None = None
    cover_genus: int | None = None
    very_general: bool = False

    def __post_init__(self) -> None:
        if self.special is not None:
            object.__setattr__(self, "special", Special(self.special))
        if self.g < 1:
            raise ProfileError(f"Genus must be at least 1, got {self.g}")
        if self.gonality is not None and self.gonality < 2:
            raise ProfileError(f"Gonality must be at least 2, got {self.gonality}")
        if self.special is Special.HYPERELLIPTIC and self.gonality not in (None, 2):
            raise ProfileError(f"Hyperelliptic curve with gonality {self.gonality}")
        if self.special is Special.PLANAR_ODD:
            d = self.planar_degree
            if d is None or d % 2 == 0:
                raise ProfileError(f"PlanarOdd needs an odd degree, got {d}")
            if (d - 1) * (d - 2) // 2 != self.g:
                raise ProfileError(
                    f"Plane curve of degree {d} has genus {(d - 1) * (d - 2) // 2}, not {self.g}"
                )
        if self.special is Special.DOUBLE_COVER_OF and self.cover_genus is None:
            raise ProfileError("DoubleCoverOf needs cover_genus")

    @property
    def is_planar_quintic(self) -> bool:
        return self.special is Special.PLANAR_ODD and self.planar_degree == 5

    def derived_clifford_lb(self) -> int | None:
        """Lower bound on Cliff(C) implied by the profile."""
        if self.special is Special.HYPERELLIPTIC or self.gonality == 2:
            return 0
        if self.gonality == 3 or self.is_planar_quintic:
            return 1
        derived = 2 if self.gonality is not None and self.gonality >= 4 else None
        if self.clifford_lb is None:
            return derived
        return self.clifford_lb if derived is None else max(derived, self.clifford_lb)


# ---------------------------------------------------------------------------
# Classical bounds
# ---------------------------------------------------------------------------

def weak_bound(x) -> BNBound:
    """Ψ_bn(x) ≤ x/2 + 1."""
    return BNBound(Fraction(x) / 2 + 1, BoundSource.WEAK)


def clifford_bound(g: int, cliff: int) -> BNBound:
    if g < 4:
        raise ValueError(f"Clifford bound needs g ≥ 4, got g={g}")
    value = Fraction(g - 1, 2) + 1 - Fraction(min(cliff, 2), 2)
    return BNBound(value, BoundSource.CLIFFORD)


def very_general_bound(g: int) -> BNBound:
    if g < 2:
        raise ValueError(f"Very general bound needs g ≥ 2, got g={g}")
    return BNBound(Fraction(g, 4) + 1 + Fraction(1, g), BoundSource.VERY_GENERAL)


def castelnuovo_severi(g, g1, d1, g2, d2) -> bool:
    """g ≤ g₁d₁ + g₂d₂ + (d₁−1)(d₂−1); False forces a common factorisation."""
    if d1 < 1 or d2 < 1:
        raise ValueError(f"Cover degrees must be positive, got {d1}, {d2}")
    return g <= g1 * d1 + g2 * d2 + (d1 - 1) * (d2 - 1)


def gonality_from_castelnuovo_severi(g: int, g1: int) -> int:
    """
    Lower bound on the gonality of a genus-g double cover of a genus-g₁ curve.

    A degree-γ map to ℙ¹ either factors through the double cover (γ even,
    γ/2 at least the gonality of the base) or satisfies Castelnuovo–Severi.
    """
    base_gonality = 1 if g1 == 0 else 2
    gamma = 2
    while True:
        factors = gamma % 2 == 0 and gamma // 2 >= base_gonality
        if factors or castelnuovo_severi(g, g1, 2, 0, gamma):
            return gamma
        gamma += 1


def bn_lower(profile: CurveProfile, chi_OH=None) -> list[BNBound]:
    """All applicable lower bounds and exact values."""
    g = profile.g
    bounds: list[BNBound] = []
    gonality = 2 if profile.special is Special.HYPERELLIPTIC else profile.gonality
    if gonality is not None:
        bounds.append(BNBound((g - 1) // gonality + 1, BoundSource.GONALITY_LOWER, BoundKind.LOWER))
    if profile.special is Special.HYPERELLIPTIC:
        bounds.append(BNBound((g - 1) // 2 + 1, BoundSource.HYPERELLIPTIC_EXACT, BoundKind.EXACT))
    elif profile.special is Special.PLANAR_ODD:
        d = profile.planar_degree
        bounds.append(BNBound(Fraction(d * d - 1, 8), BoundSource.PLANAR_EXACT, BoundKind.EXACT))
    elif profile.special is Special.BIELLIPTIC:
        if g < 4:
            raise ProfileError(f"Bielliptic formula needs g ≥ 4, got g={g}")
        bounds.append(BNBound(Fraction(g - 1, 2), BoundSource.BIELLIPTIC_EXACT, BoundKind.EXACT))
    if chi_OH is not None:
        bounds.append(BNBound(Fraction(chi_OH) - 2, BoundSource.SECTION_LOWER, BoundKind.LOWER))
    return bounds


def bn_upper_classical(profile: CurveProfile) -> list[BNBound]:
    """Weak bound at x = g−1, plus the Clifford and very-general bounds when they apply."""
    g = profile.g
    bounds = [weak_bound(g - 1)]
    cliff = profile.derived_clifford_lb()
    if cliff is not None and g >= 4:
        bounds.append(clifford_bound(g, cliff))
    if profile.very_general and g >= 2:
        bounds.append(very_general_bound(g))
    return bounds


def check_profile_consistency(profile: CurveProfile, chi_OH=None) -> list[BNBound]:
    """Every Exact value must sit between all Lower and Upper bounds."""
    lower = bn_lower(profile, chi_OH)
    upper = bn_upper_classical(profile)
    exact = [b for b in lower if b.kind is BoundKind.EXACT]
    for e in exact:
        for u in upper:
            if u.value < e.value:
                raise ProfileError(f"g={profile.g}: upper bound {u} is below exact value {e}")
        for lo in lower:
            if lo.kind is BoundKind.LOWER and lo.value > e.value:
                raise ProfileError(f"g={profile.g}: lower bound {lo} exceeds exact value {e}")
    return lower + upper


# ---------------------------------------------------------------------------
# Score functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathPoint:
    """(ch₂, ch₁·H) of a filtration piece."""
    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    def __add__(self, other: "PathPoint") -> "PathPoint":
        return PathPoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "PathPoint") -> "PathPoint":
        return PathPoint(self.x - other.x, self.y - other.y)

    def scaled(self, k) -> "PathPoint":
        return PathPoint(k * self.x, k * self.y)


ORIGIN = PathPoint(0, 0)


def psi_dp(x, y, m) -> Fraction:
    """
    Ψ(x, y) on a del Pezzo surface with H² = m:

        ½y + x                                 if x/y > −½
        y/(mn)                                 if x/y = −n/2
        ((2n+1)y + 2x) / ((n²+n)m + 2)         if −(n+1)/2 < x/y < −n/2
    """
    x, y, m = Fraction(x), Fraction(y), Fraction(m)
    if y < 0:
        raise ValueError(f"Ψ needs y ≥ 0, got y={y}")
    if y == 0:
        if x > 0:
            raise ValueError(f"Ψ is undefined at ({x}, 0) with x > 0")
        return Fraction(0)
    if 2 * x > -y:
        return y / 2 + x
    ratio = -2 * x / y
    n = math.floor(ratio)
    if ratio == n:
        return y / (m * n)
    return ((2 * n + 1) * y + 2 * x) / ((n * n + n) * m + 2)


def omega_k3(x, y, m) -> Exact:
    """Ω(x, y) = x/2 + ½√(x² + (2m+4)/m²·y²)."""
    x, y, m = Fraction(x), Fraction(y), Fraction(m)
    return normal(sqrt(x * x + (2 * m + 4) / (m * m) * y * y) / 2 + x / 2)


@dataclass(frozen=True)
class PsiDP:
    m: Fraction


@dataclass(frozen=True)
class OmegaK3:
    m: Fraction


def _cross(a: PathPoint, b: PathPoint) -> Fraction:
    return a.x * b.y - a.y * b.x


def _inside(pt: PathPoint, q: PathPoint, p: PathPoint) -> bool:
    """Closed triangle O, q, p."""
    o = ORIGIN
    d1 = _cross(q - o, pt - o)
    d2 = _cross(p - q, pt - q)
    d3 = _cross(o - p, pt - p)
    has_neg = d1 < 0 or d2 < 0 or d3 < 0
    has_pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (has_neg and has_pos)


def _meet(l1, l2) -> PathPoint | None:
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return PathPoint((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)


def _line_through(u: PathPoint, v: PathPoint) -> tuple[Fraction, Fraction, Fraction]:
    a, b = v.y - u.y, u.x - v.x
    return a, b, a * u.x + b * u.y


def _psi_path(points: list[PathPoint], m) -> Fraction | None:
    total = Fraction(0)
    for start, end in zip(points, points[1:]):
        seg = end - start
        try:
            total += psi_dp(seg.x, seg.y, m)
        except ValueError:
            return None
    return total


def _arrangement_vertices(p: PathPoint, q: PathPoint) -> list[PathPoint]:
    """Vertices of triangle OQP cut by the rays x/y = −n/2 through O and through P."""
    ratios = [abs(v.x) / v.y for v in (p, q, p - q) if v.y > 0]
    n_max = math.ceil(2 * max(ratios, default=Fraction(1))) + 1
    lines = [_line_through(ORIGIN, q), _line_through(q, p), _line_through(ORIGIN, p)]
    for n in range(1, n_max + 1):
        lines.append((Fraction(2), Fraction(n), Fraction(0)))
        lines.append((Fraction(2), Fraction(n), 2 * p.x + n * p.y))
    found = {ORIGIN, q, p}
    for l1, l2 in combinations(lines, 2):
        pt = _meet(l1, l2)
        if pt is not None and _inside(pt, q, p):
            found.add(pt)
    return sorted(found, key=lambda pt: (pt.y, pt.x))


def convex_path_max(p: PathPoint, q: PathPoint, score: PsiDP | OmegaK3
                    ) -> tuple[Exact, list[PathPoint]]:
    """
    Maximal score over paths O → P₁ → P with P₁ in the triangle OQP.

    Ψ is linear on each cell of the arrangement cut by its breakpoint rays and
    upper semicontinuous on the rays, so the maximum sits at a vertex. For Ω
    the triangle inequality gives the closed bound through Q.
    """
    if _cross(q, p) == 0:
        raise ValueError(f"Degenerate triangle O, {q}, {p}")
    if isinstance(score, OmegaK3):
        value = normal(omega_k3(q.x, q.y, score.m) + omega_k3(p.x - q.x, p.y - q.y, score.m))
        return value, [ORIGIN, q, p]

    best: Fraction | None = None
    best_path: list[PathPoint] = []
    for p1 in _arrangement_vertices(p, q):
        path = [ORIGIN, p] if p1 in (ORIGIN, p) else [ORIGIN, p1, p]
        value = _psi_path(path, score.m)
        if value is not None and (best is None or value > best):
            best, best_path = value, path
    if best is None:
        raise ValueError(f"Ψ undefined along every path to {p}")
    log.debug("convex_path_max P=%s Q=%s → %s via %s", p, q, best, best_path)
    return best, best_path


# ---------------------------------------------------------------------------
# Grid oracle
# ---------------------------------------------------------------------------

def _psi_grid(x: np.ndarray, y: np.ndarray, m: Fraction) -> np.ndarray:
    """Ψ on integer arrays; −inf where undefined. Spikes are detected exactly."""
    mp, mq = m.numerator, m.denominator
    out = np.full(x.shape, -np.inf)
    zero = (y == 0) & (x <= 0)
    out[zero] = 0.0
    pos = y > 0
    first = pos & (2 * x > -y)
    out[first] = y[first] / 2 + x[first]
    rest = pos & ~first
    ys = np.where(rest, y, 1)
    n = np.where(rest, (-2 * x) // ys, 1)
    spike = rest & (-2 * x == n * ys)
    out[spike] = y[spike] * mq / (mp * n[spike])
    cell = rest & ~spike
    nc = n[cell]
    out[cell] = ((2 * nc + 1) * y[cell] + 2 * x[cell]) * mq / ((nc * nc + nc) * mp + 2 * mq)
    return out


def _ordered(x1, y1, x2, y2) -> np.ndarray:
    """Slope x/y of the first segment ≥ the second, zero segments exempt."""
    z1 = (x1 == 0) & (y1 == 0)
    z2 = (x2 == 0) & (y2 == 0)
    return z1 | z2 | (x1 * y2 >= x2 * y1)


def grid_path_max(p: PathPoint, q: PathPoint, m, n: int | None = None, segments: int = 2) -> float:
    """
    Brute-force Ψ over convex paths with vertices on the barycentric grid
    {(iQ + jP)/n : i + j ≤ n} of the triangle OQP.
    """
    m = Fraction(m)
    if n is None:
        n = GRID_N if segments == 2 else GRID_N_THREE_SEGMENT
    base = math.lcm(p.x.denominator, p.y.denominator, q.x.denominator, q.y.denominator)
    pbx, pby = int(p.x * base), int(p.y * base)
    qbx, qby = int(q.x * base), int(q.y * base)
    px, py = pbx * n, pby * n
    i, j = np.meshgrid(np.arange(n + 1, dtype=np.int64), np.arange(n + 1, dtype=np.int64))
    keep = (i + j) <= n
    gx = (i[keep] * qbx + j[keep] * pbx).ravel()
    gy = (i[keep] * qby + j[keep] * pby).ravel()
    scale = base * n

    if segments == 2:
        x2, y2 = px - gx, py - gy
        total = _psi_grid(gx, gy, m) + _psi_grid(x2, y2, m)
        total[~_ordered(gx, gy, x2, y2)] = -np.inf
        return float(total.max()) / scale
    if segments != 3:
        raise ValueError(f"Grid oracle supports 2 or 3 segments, got {segments}")

    best = -np.inf
    psi_first = _psi_grid(gx, gy, m)
    for k in range(gx.size):
        x1, y1 = gx[k], gy[k]
        xm, ym = gx - x1, gy - y1
        x3, y3 = px - gx, py - gy
        total = psi_first[k] + _psi_grid(xm, ym, m) + _psi_grid(x3, y3, m)
        x1a, y1a = np.full_like(xm, x1), np.full_like(ym, y1)
        ok = _ordered(x1a, y1a, xm, ym) & _ordered(xm, ym, x3, y3) & _ordered(x1a, y1a, x3, y3)
        total[~ok] = -np.inf
        best = max(best, float(total.max()))
    return best / scale


# ---------------------------------------------------------------------------
# Curves on del Pezzo and K3 surfaces
# ---------------------------------------------------------------------------

def triangle_points(curve: CurveClass, r: int, d) -> tuple[PathPoint, PathPoint]:
    """(P, Q) for ι_*E with rk E = r, deg E = d."""
    s, m, d = curve.s, curve.surface.m, Fraction(d)
    p = PathPoint(d - Fraction(s * s, 2) * r * m, r * s * m)
    if curve.surface.kind is SurfaceKind.DELPEZZO:
        q = PathPoint(d - Fraction((3 * s + 1) * (s - 1), 8) * r * m, Fraction(s - 1, 2) * r * m)
    elif curve.surface.kind is SurfaceKind.K3:
        q = PathPoint(d - Fraction(3 * s * s, 8) * r * m, Fraction(s, 2) * r * m)
    else:
        raise ValueError(f"No triangle for curves on {curve.surface.kind.value} surfaces")
    return p, q


def delpezzo_f(s: int, m, n: int) -> Fraction:
    m = Fraction(m)
    u = 2 * n + s - 1
    return Fraction(s + 1, 4) * (1 - Fraction(s + 1, u)) + (s + 1) / (m * n * u)


def delpezzo_f_increasing(s: int, m) -> bool:
    values = [delpezzo_f(s, m, n) for n in range(2, (s + 1) // 2 + 1)]
    return all(a < b for a, b in zip(values, values[1:]))


def delpezzo_case_values(s: int, m) -> dict[str, list[Fraction]]:
    """Values of the three cases at μ = (s−1)sm/2."""
    m = Fraction(m)
    return {
        "P1=Q": [1 + Fraction(s * s - 1, 8) * m],
        "ray":  [Fraction(s)],
        "OQ":   [s * m * delpezzo_f(s, m, n) for n in range(2, (s + 1) // 2 + 1)],
    }


def _check_odd(s: int) -> None:
    if s < 1 or s % 2 == 0:
        raise ValueError(f"Del Pezzo bound needs odd s ≥ 1, got s={s}")


def bn_upper_delpezzo(s: int, m) -> BNBound:
    """bn_C ≤ max{1 + (s²−1)m/8, s} for C ∈ |sH| on a del Pezzo surface."""
    _check_odd(s)
    m = Fraction(m)
    if not delpezzo_f_increasing(s, m):
        log.warning("f(n) is not increasing on 2 ≤ n ≤ %d for s=%d, m=%s", (s + 1) // 2, s, m)
    return BNBound(max(1 + Fraction(s * s - 1, 8) * m, Fraction(s)), BoundSource.DELPEZZO_WALL)


def bn_upper_k3(s: int, m) -> BNBound:
    """bn_C ≤ (s/8)·√((2m+8)² + (s²−4)m²) for C ∈ |sH| on a K3 surface."""
    if s < 2 or s % 2:
        raise ValueError(f"K3 bound needs even s ≥ 2, got s={s}")
    m = Fraction(m)
    value = normal(sqrt((2 * m + 8) ** 2 + (s * s - 4) * m * m) * Fraction(s, 8))
    return BNBound(value, BoundSource.K3_WALL)


def path_bound(curve: CurveClass, r: int = 1, d=None) -> tuple[Exact, list[PathPoint]]:
    """Optimiser value for ι_*E, by default at slope g−1."""
    surface: SurfaceGeometry = curve.surface
    if d is None:
        d = (genus(curve) - 1) * r
    p, q = triangle_points(curve, r, d)
    score = PsiDP(surface.m) if surface.kind is SurfaceKind.DELPEZZO else OmegaK3(surface.m)
    return convex_path_max(p, q, score)
