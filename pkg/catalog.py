"""
catalog.py
----------
Family records and the theorem checkers that turn them into reports.

Three record kinds are checked:
    WCIFamily      Calabi–Yau weighted complete intersections, routed to a
                   fourfold, the basepoint-free corollary, or a K3/del Pezzo
                   embedding
    Fano4Record    anticanonical threefolds in Fano fourfolds of index r
    CoverRecord    degree-d cyclic covers of Fano threefolds of index r

Every checker computes (h3, c2H, χ) at the chosen polarisation, picks the
bound its route allows, compares it exactly against χ(𝒪_X(H)) and, when the
criterion holds, attaches ε- and Γ-certificates.

Usage
-----
    from catalog import run_catalog, report_frame
    from loaders import load_catalog

    reports, errors = run_catalog(load_catalog("catalogs/hypergeo.yaml"))
    print(report_frame(reports).to_string(index=False))
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import combinations

import pandas as pd
import pandera as pa

from bmtchain import (
    EpsilonCert,
    GammaCert,
    Verdict,
    certificate_bound,
    check_main_criterion,
    epsilon_for_surface,
    gamma_cycle,
    validate_certificate,
    validate_gamma,
)
from bnbounds import (
    BNBound,
    BoundKind,
    BoundSource,
    bn_upper_delpezzo,
    bn_upper_k3,
    clifford_bound,
    gonality_from_castelnuovo_severi,
    weak_bound,
)
from invariants import (
    InvariantViolation,
    ThreefoldGeometry,
    c2H_from_chi,
    cy3_chi,
    cyclic_cover_chi,
)
from schemas import ReportSchema
from surds import render

log = logging.getLogger(__name__)


class Route(str, Enum):
    FANO4             = "Fano4"
    COR               = "BasepointFreeCor"
    COR_VERY_AMPLE_2H = "BasepointFreeCorVeryAmple2H"
    K3_EMBED          = "K3Embed"
    DELPEZZO_EMBED    = "DelPezzoEmbed"
    CYCLIC_COVER      = "CyclicCover"


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WCIFamily:
    """
    X_{d₁,…,d_c} ⊂ ℙ(w₀,…,w_n), checked at the polarisation kH.

    route_r / route_m describe the fourfold for the Fano4 route,
    route_s / route_m the surface for the K3/del Pezzo embeddings.
    """
    name: str
    weights: tuple[int, ...]
    degrees: tuple[int, ...]
    scale: int = 1
    route: Route = Route.COR
    route_r: int | None = None
    route_s: int | None = None
    route_m: Fraction | None = None
    picard_rank_one: bool = True
    smooth: bool = True
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        object.__setattr__(self, "route", Route(self.route))
        if self.route_m is not None:
            object.__setattr__(self, "route_m", Fraction(self.route_m))


@dataclass(frozen=True)
class Fano4Record:
    """X ∈ |−K_M| for a Fano fourfold M of index r with H_M⁴ = m."""
    name: str
    r: int
    m: Fraction
    picard_rank_one: bool = True
    chi_OH: Fraction | None = None
    h3: Fraction | None = None
    route: Route | None = None
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", Fraction(self.m))
        for name in ("chi_OH", "h3"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, Fraction(value))
        if self.route is not None:
            object.__setattr__(self, "route", Route(self.route))


@dataclass(frozen=True)
class CoverRecord:
    """Degree-d cyclic cover X → Y of a Fano threefold of index r, branched in |d·r/(d−1)·H_Y|."""
    name: str
    r: int
    d: int
    hY3: Fraction
    picard_rank: int = 1
    branch_general: bool = True
    notes: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "hY3", Fraction(self.hY3))


@dataclass(frozen=True)
class Report:
    name: str
    kind: str
    scale: int
    h3: Fraction | None
    c2H: Fraction | None
    chi: Fraction | None
    route: Route | None
    bn: BNBound | None
    verdict: Verdict
    reason: str = ""
    epsilon_cert: EpsilonCert | None = None
    gamma_cert: GammaCert | None = None
    alternatives: tuple[tuple[str, Verdict], ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS


@dataclass(frozen=True)
class RecordError:
    name: str
    message: str


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

def _e2(values) -> int:
    return sum(a * b for a, b in combinations(values, 2))


def wci_invariants(weights, degrees, k: int = 1) -> tuple[Fraction, Fraction, Fraction]:
    """
    (H³, c₂·H, χ(𝒪(H))) at the polarisation kH.

    With Σw = Σd the total Chern class ∏(1+wH)/∏(1+dH) has
    c₂ = (e₂(w) − e₂(d))·H², and H³ = ∏d/∏w.
    """
    weights, degrees = list(weights), list(degrees)
    if not degrees:
        raise ValueError("A complete intersection needs at least one degree")
    if any(w < 1 for w in weights) or any(d < 1 for d in degrees):
        raise ValueError(f"Weights and degrees must be positive: {weights}, {degrees}")
    if sum(weights) != sum(degrees):
        raise ValueError(
            f"Calabi–Yau condition fails: Σweights={sum(weights)} ≠ Σdegrees={sum(degrees)}"
        )
    if len(weights) - 1 - len(degrees) != 3:
        raise ValueError(
            f"{len(degrees)} equations in ℙ^{len(weights) - 1} do not cut out a threefold"
        )
    if k < 1:
        raise ValueError(f"Polarisation multiple must be ≥ 1, got {k}")
    base = Fraction(math.prod(degrees), math.prod(weights))
    h3 = k ** 3 * base
    c2H = k * (_e2(weights) - _e2(degrees)) * base
    return h3, c2H, cy3_chi(h3, c2H)


# ---------------------------------------------------------------------------
# Checkers
# ---------------------------------------------------------------------------

def check_basepoint_free_cor(h3, c2H, very_ample_2h: bool = False) -> Verdict:
    """c₂·H > 4H³+12, or > 4H³+6 when 2H is very ample; both read as H³/2 + 1 (+½) < χ."""
    h3, c2H = Fraction(h3), Fraction(c2H)
    chi = cy3_chi(h3, c2H)
    if very_ample_2h:
        by_c2 = c2H > 4 * h3 + 6
        by_chi = h3 / 2 + Fraction(1, 2) < chi
    else:
        by_c2 = c2H > 4 * h3 + 12
        by_chi = h3 / 2 + 1 < chi
    if by_c2 != by_chi:
        raise InvariantViolation(
            f"Corollary forms disagree at h3={h3}, c2H={c2H}: {by_c2} vs {by_chi}"
        )
    return Verdict.HOLDS if by_c2 else Verdict.FAILS


def _alternatives(h3, c2H) -> tuple[tuple[str, Verdict], ...]:
    return (
        (Route.COR.value, check_basepoint_free_cor(h3, c2H, False)),
        (Route.COR_VERY_AMPLE_2H.value, check_basepoint_free_cor(h3, c2H, True)),
    )


def _certify(geom: ThreefoldGeometry, bn: BNBound, smooth: bool
             ) -> tuple[EpsilonCert, GammaCert]:
    g = int(geom.h3) + 1
    threshold = geom.chi_OH if smooth else geom.chi_OH - 1
    A = certificate_bound(bn, threshold)
    eps_cert = epsilon_for_surface(A, geom.chi_OH, geom.h3, g, smooth)
    gamma_cert = gamma_cycle(eps_cert.epsilon, geom)
    if not (validate_certificate(eps_cert, g) and validate_gamma(gamma_cert, geom)):
        raise InvariantViolation(f"{geom.name}: certificates fail re-validation")
    return eps_cert, gamma_cert


def _report(name: str, kind: str, scale: int, h3, c2H, route: Route | None,
            bn: BNBound | None, smooth: bool = True, reason: str = "") -> Report:
    """Compare bn against χ and attach certificates when the criterion holds."""
    h3, c2H = Fraction(h3), Fraction(c2H)
    if h3.denominator != 1:
        raise ValueError(f"{name}: H³={h3} is not an integer")
    geom = ThreefoldGeometry(name, h3, c2H)
    chi = geom.chi_OH
    alternatives = _alternatives(h3, c2H)
    if bn is None:
        return Report(name, kind, scale, h3, c2H, chi, route, None,
                      Verdict.INCONCLUSIVE, reason, alternatives=alternatives)
    verdict = check_main_criterion(bn, chi, smooth)
    eps_cert = gamma_cert = None
    if verdict is Verdict.HOLDS:
        eps_cert, gamma_cert = _certify(geom, bn, smooth)
        reason = reason or f"bn ≤ {bn.exact} < χ = {render(chi)}"
    else:
        reason = reason or f"bn ≤ {bn.exact} is not below χ = {render(chi)}"
    return Report(name, kind, scale, h3, c2H, chi, route, bn, verdict, reason,
                  eps_cert, gamma_cert, alternatives)


def _check_genus(name: str, h3: Fraction, surface_genus_minus_one: Fraction) -> None:
    if surface_genus_minus_one != h3:
        raise InvariantViolation(
            f"{name}: curve genus g−1={surface_genus_minus_one} on the embedded surface "
            f"differs from H³={h3}"
        )


def _fano4_bound(r: int, m: Fraction, h3: Fraction, picard_rank_one: bool
                 ) -> tuple[Route, BNBound | None, str]:
    if r >= 4:
        return Route.FANO4, weak_bound(h3), ""
    if r == 3:
        return Route.DELPEZZO_EMBED, bn_upper_delpezzo(3, m), ""
    if picard_rank_one:
        return Route.K3_EMBED, bn_upper_k3(2, m), ""
    return Route.K3_EMBED, None, "index 2 needs Picard rank one (outside the theorem's hypotheses)"


def check_fano4(rec: Fano4Record) -> Report:
    if not 1 <= rec.r <= 5:
        raise ValueError(f"{rec.name}: Fano fourfold index must lie in [1, 5], got {rec.r}")
    if rec.r == 1:
        raise ValueError(f"{rec.name}: index 1 is not covered, need r ≥ 2")
    if rec.chi_OH is None:
        raise ValueError(f"{rec.name}: χ(𝒪_X(H)) is required for Fano fourfold records")
    h3 = rec.h3 if rec.h3 is not None else rec.r * rec.m
    c2H = c2H_from_chi(h3, rec.chi_OH)

    if rec.route in (Route.COR, Route.COR_VERY_AMPLE_2H):
        very_ample = rec.route is Route.COR_VERY_AMPLE_2H
        verdict = check_basepoint_free_cor(h3, c2H, very_ample)
        bn = clifford_bound(int(h3) + 1, 1) if very_ample else weak_bound(h3)
        if verdict is not Verdict.HOLDS:
            return _report(rec.name, "fano4", 1, h3, c2H, rec.route, None,
                           reason=f"{rec.route.value} fails at c2H={render(c2H)}")
        return _report(rec.name, "fano4", 1, h3, c2H, rec.route, bn)

    route, bn, reason = _fano4_bound(rec.r, rec.m, h3, rec.picard_rank_one)
    return _report(rec.name, "fano4", 1, h3, c2H, route, bn, reason=reason)


def check_cyclic_cover(rec: CoverRecord) -> Report:
    """Case analysis for double and cyclic covers; χ from the eigensheaf decomposition."""
    r, d, hY3 = rec.r, rec.d, rec.hY3
    if d < 2 or r < 1 or r % (d - 1):
        raise ValueError(f"{rec.name}: cover degree d={d} needs d ≥ 2 and (d−1) | r={r}")
    chi = cyclic_cover_chi(r, d, hY3)
    h3 = d * hY3
    c2H = c2H_from_chi(h3, chi)

    bn: BNBound | None = None
    reason = ""
    if r == 4 and hY3 == 1:
        bn = weak_bound(h3)
    elif r == 3 and d in (2, 4) and hY3 == 2:
        bn = weak_bound(h3)
    elif r == 2 and d == 2:
        bn = weak_bound(h3)
    elif r == 2 and d == 3:
        _check_genus(rec.name, h3, Fraction(3 * 2, 2) * hY3)
        bn = bn_upper_delpezzo(3, hY3)
    elif r == 1 and d == 2 and hY3 <= 4:
        bn = weak_bound(h3)
        if hY3 == 4:
            reason = "assumes the branch divisor gives a smooth S ∈ |H|"
    elif r == 1 and d == 2 and hY3 == 6 and rec.picard_rank == 10:
        g = int(h3) + 1
        bn = BNBound((g - 1) // 2 + 1, BoundSource.HYPERELLIPTIC_EXACT, BoundKind.EXACT)
        reason = f"C is hyperelliptic of genus {g}: bn = {bn.exact} = χ"
    elif r == 1 and d == 2 and hY3 == 6:
        g = int(h3) + 1
        gonality = gonality_from_castelnuovo_severi(g, 4)
        cliff = 2 if gonality >= 4 else gonality - 2
        bn = clifford_bound(g, cliff)
        log.debug("%s: gonality ≥ %d, Cliff ≥ %d", rec.name, gonality, cliff)
    elif r == 1 and d == 2 and hY3 > 6 and rec.picard_rank == 1:
        _check_genus(rec.name, h3, Fraction(2 * 2, 2) * hY3)
        bn = bn_upper_k3(2, hY3)
    else:
        reason = f"(r={r}, d={d}, H_Y³={render(hY3)}) is outside the case analysis"
    return _report(rec.name, "cover", 1, h3, c2H, Route.CYCLIC_COVER, bn, reason=reason)


def check_wci(family: WCIFamily) -> Report:
    h3, c2H, chi = wci_invariants(family.weights, family.degrees, family.scale)
    name, k = family.name, family.scale
    route = family.route

    if route is Route.FANO4:
        r, m = family.route_r, family.route_m
        if r is None or m is None:
            raise ValueError(f"{name}: Fano4 route needs route_r and route_m")
        if r * m != h3:
            raise InvariantViolation(f"{name}: fourfold gives H³ = r·m = {r * m}, WCI gives {h3}")
        rec = Fano4Record(name, r, m, family.picard_rank_one, chi_OH=chi)
        return replace_scale(check_fano4(rec), "wci", k)

    if route in (Route.COR, Route.COR_VERY_AMPLE_2H):
        very_ample = route is Route.COR_VERY_AMPLE_2H
        if check_basepoint_free_cor(h3, c2H, very_ample) is not Verdict.HOLDS:
            return _report(name, "wci", k, h3, c2H, route, None, family.smooth,
                           reason=f"{route.value} fails at c2H={render(c2H)}")
        bn = clifford_bound(int(h3) + 1, 1) if very_ample else weak_bound(h3)
        return _report(name, "wci", k, h3, c2H, route, bn, family.smooth)

    s, m = family.route_s, family.route_m
    if s is None or m is None:
        raise ValueError(f"{name}: {route.value} route needs route_s and route_m")
    if route is Route.K3_EMBED:
        _check_genus(name, h3, Fraction(s * s, 2) * m)
        bn = bn_upper_k3(s, m)
    else:
        _check_genus(name, h3, Fraction(s * (s - 1), 2) * m)
        bn = bn_upper_delpezzo(s, m)
    return _report(name, "wci", k, h3, c2H, route, bn, family.smooth)


def replace_scale(report: Report, kind: str, scale: int) -> Report:
    return replace(report, kind=kind, scale=scale)


# ---------------------------------------------------------------------------
# Running a catalog
# ---------------------------------------------------------------------------

_CHECKERS = {
    WCIFamily:    check_wci,
    Fano4Record:  check_fano4,
    CoverRecord:  check_cyclic_cover,
}


def run_catalog(records: list, family: str | None = None
                ) -> tuple[list[Report], list[RecordError]]:
    """
    One report per record, in input order. A ValueError from a record is
    collected as a RecordError and the run carries on.
    """
    if family is not None:
        records = [rec for rec in records if rec.name == family]
        if not records:
            raise ValueError(f"Unknown family '{family}'")
    reports: list[Report] = []
    errors: list[RecordError] = []
    for rec in records:
        checker = _CHECKERS.get(type(rec))
        if checker is None:
            raise TypeError(f"Not a catalog record: {type(rec).__name__}")
        try:
            report = checker(rec)
        except ValueError as exc:
            log.warning("%s: %s", rec.name, exc)
            errors.append(RecordError(rec.name, str(exc)))
            continue
        log.info("%-12s  %-28s  %s", rec.name,
                 report.route.value if report.route else "-", report.verdict.value)
        reports.append(report)
    return reports, errors


def _text(value) -> str | None:
    return None if value is None else render(value)


@pa.check_output(ReportSchema)
def report_frame(reports: list[Report]) -> pd.DataFrame:
    """One row per report; exact rationals as 'p/q' strings."""
    rows = []
    for rep in reports:
        rows.append({
            "name":         rep.name,
            "kind":         rep.kind,
            "scale":        rep.scale,
            "h3":           _text(rep.h3),
            "c2H":          _text(rep.c2H),
            "chi":          _text(rep.chi),
            "route":        rep.route.value if rep.route else None,
            "bn":           rep.bn.exact if rep.bn else None,
            "bn_decimal":   rep.bn.decimal() if rep.bn else None,
            "bound_source": rep.bn.source.value if rep.bn else None,
            "verdict":      rep.verdict.value,
            "epsilon":      _text(rep.epsilon_cert.epsilon) if rep.epsilon_cert else None,
            "gammaH":       _text(rep.gamma_cert.gammaH) if rep.gamma_cert else None,
        })
    columns = ["name", "kind", "scale", "h3", "c2H", "chi", "route", "bn", "bn_decimal",
               "bound_source", "verdict", "epsilon", "gammaH"]
    return pd.DataFrame(rows, columns=columns)


def report_records(reports: list[Report]) -> list[dict]:
    """JSON-ready view of each report, certificates included."""
    out = []
    for rep in reports:
        record = {
            "name":    rep.name,
            "kind":    rep.kind,
            "scale":   rep.scale,
            "h3":      _text(rep.h3),
            "c2H":     _text(rep.c2H),
            "chi":     _text(rep.chi),
            "route":   rep.route.value if rep.route else None,
            "bn":      None,
            "verdict": rep.verdict.value,
            "reason":  rep.reason,
            "alternatives": {route: verdict.value for route, verdict in rep.alternatives},
            "epsilon_cert": None,
            "gamma_cert":   None,
        }
        if rep.bn is not None:
            record["bn"] = {
                "exact":   rep.bn.exact,
                "decimal": rep.bn.decimal(),
                "source":  rep.bn.source.value,
                "kind":    rep.bn.kind.value,
            }
        if rep.epsilon_cert is not None:
            c = rep.epsilon_cert
            record["epsilon_cert"] = {
                "A": render(c.A), "chi": render(c.chi), "m": render(c.m),
                "smooth": c.smooth, "n": c.n,
                "delta": render(c.delta), "epsilon": render(c.epsilon),
            }
        if rep.gamma_cert is not None:
            c = rep.gamma_cert
            record["gamma_cert"] = {
                "epsilon": render(c.epsilon), "gamma": render(c.gamma), "gammaH": render(c.gammaH),
            }
        out.append(record)
    return out
