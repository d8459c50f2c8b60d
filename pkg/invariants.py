"""
invariants.py
-------------
Exact-rational Chern data on polarised surfaces and Calabi–Yau threefolds.

Only H-degrees are stored: for a class v on a polarised variety (X, H) of
dimension n, ch_i(v)·H^{n−i}. Everything downstream (slopes, discriminants,
tilt slopes, Euler characteristics) is a function of these numbers.

Threefold Euler characteristics and twists assume ch₁ is proportional to H
(the Picard-rank-one situation of the catalog); `ChernThreefold.proportional`
gates the operations that need it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction

log = logging.getLogger(__name__)

Q = Fraction
INFINITY = math.inf


class InvariantViolation(RuntimeError):
    """An internal consistency check between two derivations of the same number failed."""


def _q(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


# ---------------------------------------------------------------------------
# Geometries
# ---------------------------------------------------------------------------

class SurfaceKind(str, Enum):
    DELPEZZO  = "DelPezzo"    # K_S = −H
    K3        = "K3"          # K_S = 0
    CANONICAL = "Canonical"   # K_S = H, e.g. S ∈ |H| on a CY3


@dataclass(frozen=True)
class SurfaceGeometry:
    """
    Polarised surface (S, H) with m = H².

    c1_step / ch2_step override the default lattices, which are
    c1H ∈ m·ℤ under Picard rank one (ℤ otherwise) and ch2 ∈ ½ℤ on del Pezzo
    and canonical surfaces, ch2 ∈ ℤ on K3 surfaces.
    chi_os is only needed for Euler characteristics on canonical surfaces.
    """
    kind: SurfaceKind
    m: Fraction
    picard_rank_one: bool = True
    c1_step: Fraction | None = None
    ch2_step: Fraction | None = None
    chi_os: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SurfaceKind(self.kind))
        object.__setattr__(self, "m", _q(self.m))
        if self.m <= 0:
            raise ValueError(f"H² must be positive, got m={self.m}")
        for name in ("c1_step", "ch2_step", "chi_os"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _q(value))
        for name in ("c1_step", "ch2_step"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

    @property
    def c1_lattice_step(self) -> Fraction:
        if self.c1_step is not None:
            return self.c1_step
        return self.m if self.picard_rank_one else Fraction(1)

    @property
    def ch2_lattice_step(self) -> Fraction:
        if self.ch2_step is not None:
            return self.ch2_step
        return Fraction(1) if self.kind is SurfaceKind.K3 else Fraction(1, 2)

    def on_lattice(self, v: "ChernSurface") -> bool:
        return (v.c1H / self.c1_lattice_step).denominator == 1 and \
               (v.ch2 / self.ch2_lattice_step).denominator == 1


@dataclass(frozen=True)
class ThreefoldGeometry:
    """Calabi–Yau threefold degrees: H³ and c₂(X)·H."""
    name: str
    h3: Fraction
    c2H: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "h3", _q(self.h3))
        object.__setattr__(self, "c2H", _q(self.c2H))
        if self.h3 <= 0:
            raise ValueError(f"{self.name}: H³ must be positive, got {self.h3}")

    @property
    def td2H(self) -> Fraction:
        return self.c2H / 12

    @property
    def chi_OH(self) -> Fraction:
        """χ(𝒪_X(H)) by Riemann–Roch."""
        return cy3_chi(self.h3, self.c2H)


# ---------------------------------------------------------------------------
# Chern data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChernSurface:
    r: int
    c1H: Fraction
    ch2: Fraction

    def __post_init__(self) -> None:
        if isinstance(self.r, Fraction):
            if self.r.denominator != 1:
                raise ValueError(f"ch0 must be an integer, got {self.r}")
            object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "c1H", _q(self.c1H))
        object.__setattr__(self, "ch2", _q(self.ch2))

    def __add__(self, other: "ChernSurface") -> "ChernSurface":
        return ChernSurface(self.r + other.r, self.c1H + other.c1H, self.ch2 + other.ch2)

    def __sub__(self, other: "ChernSurface") -> "ChernSurface":
        return ChernSurface(self.r - other.r, self.c1H - other.c1H, self.ch2 - other.ch2)

    def __neg__(self) -> "ChernSurface":
        return ChernSurface(-self.r, -self.c1H, -self.ch2)

    def scaled(self, k: int) -> "ChernSurface":
        return ChernSurface(k * self.r, k * self.c1H, k * self.ch2)

    def as_tuple(self) -> tuple[int, Fraction, Fraction]:
        return (self.r, self.c1H, self.ch2)


@dataclass(frozen=True)
class ChernThreefold:
    r: Fraction
    c1H2: Fraction
    ch2H: Fraction
    ch3: Fraction
    proportional: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        for name in ("r", "c1H2", "ch2H", "ch3"):
            object.__setattr__(self, name, _q(getattr(self, name)))

    def __add__(self, other: "ChernThreefold") -> "ChernThreefold":
        return ChernThreefold(
            self.r + other.r, self.c1H2 + other.c1H2,
            self.ch2H + other.ch2H, self.ch3 + other.ch3,
            self.proportional and other.proportional,
        )

    def scaled(self, k) -> "ChernThreefold":
        return ChernThreefold(k * self.r, k * self.c1H2, k * self.ch2H, k * self.ch3,
                              self.proportional)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.r, self.c1H2, self.ch2H, self.ch3)


@dataclass(frozen=True)
class CurveClass:
    """Integral curve C ∈ |sH| on a polarised surface."""
    s: int
    surface: SurfaceGeometry

    def __post_init__(self) -> None:
        if self.s < 1:
            raise ValueError(f"Curve multiple s must be positive, got {self.s}")

    @property
    def g(self) -> int:
        return genus(self)


# ---------------------------------------------------------------------------
# Twists, slopes, discriminants
# ---------------------------------------------------------------------------

def twist(v, b, geom):
    """ch^{bH}(v) = exp(−bH)·ch(v), on a surface or a threefold."""
    b = _q(b)
    if isinstance(v, ChernSurface):
        m = geom.m
        return ChernSurface(
            v.r,
            v.c1H - b * v.r * m,
            v.ch2 - b * v.c1H + b * b * v.r * m / 2,
        )
    h = geom.h3
    return ChernThreefold(
        v.r,
        v.c1H2 - b * v.r * h,
        v.ch2H - b * v.c1H2 + b * b * v.r * h / 2,
        v.ch3 - b * v.ch2H + b * b * v.c1H2 / 2 - b ** 3 * v.r * h / 6,
        v.proportional,
    )


def _degree(geom) -> Fraction:
    return geom.m if isinstance(geom, SurfaceGeometry) else geom.h3


def _c1(v) -> Fraction:
    return v.c1H if isinstance(v, ChernSurface) else v.c1H2


def _ch2(v) -> Fraction:
    return v.ch2 if isinstance(v, ChernSurface) else v.ch2H


def mu_H(v, geom):
    """Slope c1-degree / (r·H^n); +∞ for torsion classes."""
    if v.r == 0:
        return INFINITY
    return _c1(v) / (v.r * _degree(geom))


def delta_H(v, geom) -> Fraction:
    return _c1(v) ** 2 - 2 * v.r * _degree(geom) * _ch2(v)


def nu_bw(v: ChernSurface, b, w, geom: SurfaceGeometry):
    """Tilt slope ν_{b,w}; +∞ where the twisted c1-degree vanishes."""
    b, w = _q(b), _q(w)
    denominator = v.c1H - b * v.r * geom.m
    if denominator == 0:
        return INFINITY
    return (v.ch2 - w * v.r * geom.m) / denominator


def nu_bn(v: ChernSurface, geom: SurfaceGeometry):
    """Brill–Noether slope ν_{0,0}."""
    return nu_bw(v, 0, 0, geom)


def projection(v: ChernSurface, geom: SurfaceGeometry) -> tuple[Fraction, Fraction]:
    """Π(v) = (c1H/(r·m), ch2/(r·m)); undefined for torsion classes."""
    if v.r == 0:
        raise ValueError(f"Projection of torsion class {v.as_tuple()} is undefined")
    return v.c1H / (v.r * geom.m), v.ch2 / (v.r * geom.m)


# ---------------------------------------------------------------------------
# Euler characteristics
# ---------------------------------------------------------------------------

def euler_char(v, geom) -> Fraction:
    """χ(v) by Hirzebruch–Riemann–Roch."""
    if isinstance(v, ChernSurface):
        if geom.kind is SurfaceKind.DELPEZZO:
            return v.r + v.c1H / 2 + v.ch2
        if geom.kind is SurfaceKind.K3:
            return 2 * v.r + v.ch2
        if geom.chi_os is None:
            raise ValueError("Euler characteristic on a canonical surface needs chi_os")
        return v.r * geom.chi_os - v.c1H / 2 + v.ch2
    if not v.proportional:
        raise ValueError(
            f"Euler characteristic of {v.as_tuple()} needs ch1 proportional to H"
        )
    return v.ch3 + geom.td2H * (v.c1H2 / geom.h3)


def cy3_chi(h3, c2H) -> Fraction:
    """χ(𝒪_X(H)) = H³/6 + c₂·H/12 on a Calabi–Yau threefold."""
    return _q(h3) / 6 + _q(c2H) / 12


def c2H_from_chi(h3, chi) -> Fraction:
    return 12 * (_q(chi) - _q(h3) / 6)


def fano3_euler_char(k, r: int, hY3) -> Fraction:
    """
    χ(𝒪_Y(kH_Y)) on a Fano threefold of index r, −K_Y = rH_Y.

    Riemann–Roch with χ(𝒪_Y) = 1, which forces c₂(Y)·H_Y = 24/r.
    """
    k, h = _q(k), _q(hY3)
    return (k ** 3 * h / 6 + r * k * k * h / 4
            + (r * r * h * k + Fraction(24, r) * k) / 12 + 1)


def cyclic_cover_chi(r: int, d: int, hY3) -> Fraction:
    """
    χ(𝒪_X(H)) for a degree-d cyclic cover X → Y branched in |d·L|, L = r/(d−1)·H_Y,
    via π_*𝒪_X(H) = ⊕_{i<d} 𝒪_Y(H_Y − i·L).
    """
    if d < 2 or r % (d - 1):
        raise ValueError(f"Cover degree {d} requires (d−1) | r, got r={r}")
    step = r // (d - 1)
    return sum((fano3_euler_char(1 - i * step, r, hY3) for i in range(d)), Fraction(0))


# ---------------------------------------------------------------------------
# Curves on surfaces
# ---------------------------------------------------------------------------

def genus(curve: CurveClass) -> int:
    """Arithmetic genus by adjunction, rejecting non-integral values."""
    s, m = curve.s, curve.surface.m
    kind = curve.surface.kind
    if kind is SurfaceKind.DELPEZZO:
        two_g_minus_two = s * (s - 1) * m
    elif kind is SurfaceKind.K3:
        two_g_minus_two = s * s * m
    else:
        two_g_minus_two = s * (s + 1) * m
    g = two_g_minus_two / 2 + 1
    if g.denominator != 1:
        raise ValueError(
            f"{kind.value} curve s={s}, m={m} has non-integral genus {g}"
        )
    return int(g)


@dataclass(frozen=True)
class Pushforward:
    ch: ChernSurface
    t: Fraction
    nu_bn: Fraction


def pushforward_curve_sheaf(r: int, d, curve: CurveClass) -> Pushforward:
    """ch(ι_*E) for a rank-r degree-d sheaf on C ∈ |sH|, plus t(E) and ν_BN."""
    if r <= 0:
        raise ValueError(f"Sheaf rank on the curve must be positive, got {r}")
    d = _q(d)
    s, m = curve.s, curve.surface.m
    ch = ChernSurface(0, r * s * m, d - Fraction(s * s, 2) * r * m)
    t = d / (r * s * m)
    return Pushforward(ch=ch, t=t, nu_bn=t - Fraction(s, 2))


# ---------------------------------------------------------------------------
# Degree bookkeeping
# ---------------------------------------------------------------------------

def rescale_polarisation(geom: ThreefoldGeometry, k: int) -> ThreefoldGeometry:
    """(X, kH): (kH)³ = k³H³, c₂·(kH) = k·c₂·H."""
    if k < 1:
        raise ValueError(f"Polarisation multiple must be ≥ 1, got {k}")
    if k == 1:
        return geom
    return replace(geom, name=f"{geom.name}@{k}H", h3=k ** 3 * geom.h3, c2H=k * geom.c2H)


def etale_transfer(geom: ThreefoldGeometry, deg: int) -> ThreefoldGeometry:
    """Pull back along an étale cover of degree deg: all H-degrees scale by deg."""
    if deg < 1:
        raise ValueError(f"Étale degree must be ≥ 1, got {deg}")
    if deg == 1:
        return geom
    log.debug("Étale transfer of %s by degree %d", geom.name, deg)
    return replace(geom, name=f"{geom.name}~{deg}", h3=deg * geom.h3, c2H=deg * geom.c2H)
