"""
bmtchain.py
-----------
From Brill–Noether bounds to the generalized Bogomolov–Gieseker inequality.

    bn_C < χ(𝒪_S)            (EpsilonCert: curve → surface → BG₃(ε))
    BG₃(ε)                   (GammaCert:   Γ(ε) = γH² − td₂(X))
    Q^Γ_{b,w}(E) ≥ 0         (the inequality the certificates unlock)

Every certificate is plain exact data and can be re-checked on its own with
`validate_certificate` / `validate_gamma`. The algebra that turns BG₃(ε)
into Q^Γ ≥ 0 is audited on seeded random samples by `audit_ch2_chain`.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from bnbounds import BNBound, BoundKind
from config import (
    AUDIT_CHUNK,
    AUDIT_DENOM_MAX,
    AUDIT_RANK_MAX,
    AUDIT_SAMPLES,
    AUDIT_SEED,
    DELTA_RESOLUTION,
    DELTA_RESOLUTION_MAX,
)
from invariants import (
    ChernSurface,
    ChernThreefold,
    InvariantViolation,
    SurfaceGeometry,
    SurfaceKind,
    ThreefoldGeometry,
    delta_H,
    twist,
)
from surds import Exact, ceil, floor, normal, sqrt

log = logging.getLogger(__name__)


class NoCertificate(ValueError):
    pass


class Verdict(str, Enum):
    HOLDS        = "Holds"
    INCONCLUSIVE = "Inconclusive"
    FAILS        = "Fails"


class BGOutcome(str, Enum):
    SATISFIES    = "Satisfies"
    VIOLATES     = "Violates"
    OUT_OF_RANGE = "OutOfRange"


# ---------------------------------------------------------------------------
# f_ε and the BG predicates
# ---------------------------------------------------------------------------

def _check_eps(eps: Fraction) -> None:
    if not 0 < eps < Fraction(1, 3):
        raise ValueError(f"ε must lie in (0, 1/3), got {eps}")


def f_epsilon(x, eps) -> Fraction:
    """Even, piecewise: −x/2 on [0, ε], linear up to 2ε/(1−ε), then x²/2."""
    x, eps = abs(Fraction(x)), Fraction(eps)
    _check_eps(eps)
    if x <= eps:
        return -x / 2
    if x < 2 * eps / (1 - eps):
        return (1 + eps) / (2 * (1 - eps)) * x - eps / (1 - eps)
    return x * x / 2


def _degrees(v, geom):
    """(r, c1-degree, ch2-degree, H^n) for surfaces and threefolds alike."""
    if isinstance(v, ChernSurface):
        return v.r, v.c1H, v.ch2, geom.m
    return v.r, v.c1H2, v.ch2H, geom.h3


def bg_predicate(v, eps, geom, dim: int | None = None) -> BGOutcome:
    """BG_n(ε): for 0 < μ_H ≤ ε, ch₂-degree < −½·ch₁-degree (strict)."""
    eps = Fraction(eps)
    expected = 2 if isinstance(v, ChernSurface) else 3
    if dim is not None and dim != expected:
        raise ValueError(f"Class {v.as_tuple()} lives in dimension {expected}, not {dim}")
    r, c1, ch2, hn = _degrees(v, geom)
    if r <= 0 or not (0 < c1 <= eps * r * hn):
        return BGOutcome.OUT_OF_RANGE
    return BGOutcome.SATISFIES if ch2 < -c1 / 2 else BGOutcome.VIOLATES


def bg_tilde_predicate(v, eps, geom) -> BGOutcome:
    """ch₂-degree/(r·Hⁿ) < f_ε(μ_H) for μ_H > 0."""
    eps = Fraction(eps)
    r, c1, ch2, hn = _degrees(v, geom)
    if r <= 0 or c1 <= 0:
        return BGOutcome.OUT_OF_RANGE
    mu = c1 / (r * hn)
    return BGOutcome.SATISFIES if ch2 / (r * hn) < f_epsilon(mu, eps) else BGOutcome.VIOLATES


# ---------------------------------------------------------------------------
# Q^Γ and Γ(ε)
# ---------------------------------------------------------------------------

def q_form(v: ChernThreefold, b, w, gammaH, geom: ThreefoldGeometry) -> Fraction:
    """Q^Γ_{b,w}(v) with Γ·ch₁^{bH} = Γ·H·(ch₁^{bH}·H²/H³)."""
    if not v.proportional:
        raise ValueError(f"Q^Γ of {v.as_tuple()} needs ch1 proportional to H")
    b, w, gammaH = Fraction(b), Fraction(w), Fraction(gammaH)
    h = geom.h3
    t = twist(v, b, geom)
    return (
        (2 * w - b * b) * (delta_H(v, geom) + 3 * (gammaH / h) * (t.r * h) ** 2)
        + 2 * t.ch2H * (2 * t.ch2H - 3 * gammaH * t.r)
        - 6 * t.c1H2 * (t.ch3 - gammaH * t.c1H2 / h)
    )


def q_bn(r, x, y, z, gammaH, geom: ThreefoldGeometry) -> Fraction:
    """Q^Γ_{0,0} in the coordinates (ch₀, ch₁·H², ch₂·H, ch₃)."""
    return 2 * y * (2 * y - 3 * gammaH * r) - 6 * x * (z - gammaH * x / geom.h3)


@dataclass(frozen=True)
class GammaCert:
    epsilon: Fraction
    gamma: Fraction
    gammaH: Fraction


def gamma_cycle(eps, geom: ThreefoldGeometry) -> GammaCert:
    """Minimal γ ≥ max{4/(H³ε), td₂·H/H³} and Γ·H = γH³ − td₂·H."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"ε must be positive, got {eps}")
    gamma = max(4 / (geom.h3 * eps), geom.td2H / geom.h3)
    return GammaCert(epsilon=eps, gamma=gamma, gammaH=gamma * geom.h3 - geom.td2H)


def validate_gamma(cert: GammaCert, geom: ThreefoldGeometry) -> bool:
    return (
        cert.epsilon > 0
        and cert.gamma >= 4 / (geom.h3 * cert.epsilon)
        and cert.gamma >= geom.td2H / geom.h3
        and cert.gammaH == cert.gamma * geom.h3 - geom.td2H
        and cert.gammaH >= 0
    )


# ---------------------------------------------------------------------------
# Audit of the ch₂ chain
# ---------------------------------------------------------------------------

def chain_hypotheses_hold(r, x, y, z, eps, geom: ThreefoldGeometry) -> bool:
    """x > 0, r ≤ x/(H³ε), x² − 2H³ry ≥ 0, z ≤ r + x/(H³ε) − td₂·ch₁."""
    h, eps = geom.h3, Fraction(eps)
    if x <= 0:
        return False
    return (
        r <= x / (h * eps)
        and x * x - 2 * h * r * y >= 0
        and z <= r + x / (h * eps) - geom.td2H * x / h
    )


@dataclass(frozen=True)
class AuditResult:
    samples: int
    checked: int
    skipped: int
    seed: int
    point_class_q: Fraction
    failures: tuple = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.failures and self.point_class_q == 0


def _draw(rng: np.random.Generator, size: int, h3: Fraction, eps: Fraction, td: Fraction):
    """Rational samples concentrated near the hypothesis boundaries."""
    den = rng.integers(1, AUDIT_DENOM_MAX + 1, size=(size, 3))
    r = rng.integers(-AUDIT_RANK_MAX, AUDIT_RANK_MAX + 1, size=size)
    spread = rng.integers(0, 4 * AUDIT_DENOM_MAX, size=(size, 3))
    signs = rng.choice([-1, 1], size=(size, 2))
    for k in range(size):
        rk = int(r[k])
        x_cap = max(abs(rk), 1) * h3 * eps
        x = x_cap * Fraction(int(spread[k, 0]) + 1, 2 * AUDIT_DENOM_MAX)
        y_cap = x * x / (2 * h3 * max(abs(rk), 1))
        y = y_cap * Fraction(int(signs[k, 0]) * int(spread[k, 1]), 2 * AUDIT_DENOM_MAX)
        y = Fraction(math.floor(y * int(den[k, 1])), int(den[k, 1]))
        z_cap = rk + x / (h3 * eps) - td * x / h3
        z = z_cap - Fraction(int(spread[k, 2]), int(den[k, 2]))
        if signs[k, 1] < 0:
            z = z_cap + Fraction(1, int(den[k, 2]))
        x = Fraction(math.ceil(x * int(den[k, 0])), int(den[k, 0]))
        yield rk, x, y, z


def audit_ch2_chain(samples: int = AUDIT_SAMPLES, eps=Fraction(1, 10),
                    geom: ThreefoldGeometry | None = None, seed: int = AUDIT_SEED,
                    extra_samples: list[tuple] | None = None) -> AuditResult:
    """
    Check Q^{Γ(ε)}_{0,0} ≥ 0 on every sampled (r, x, y, z) meeting the hypotheses.

    Samples are drawn in chunks, each from its own child of a SeedSequence,
    so the result depends only on (samples, seed).
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if geom is None:
        raise ValueError("audit_ch2_chain needs a threefold geometry")
    eps = Fraction(eps)
    cert = gamma_cycle(eps, geom)
    chunks = math.ceil(samples / AUDIT_CHUNK)
    children = np.random.SeedSequence(seed).spawn(chunks)

    checked = skipped = 0
    failures: list[tuple] = []

    def visit(r, x, y, z) -> None:
        nonlocal checked, skipped
        if not chain_hypotheses_hold(r, x, y, z, eps, geom):
            skipped += 1
            return
        checked += 1
        q = q_bn(r, x, y, z, cert.gammaH, geom)
        if q < 0:
            failures.append((r, x, y, z, q))

    for index, child in enumerate(children):
        size = min(AUDIT_CHUNK, samples - index * AUDIT_CHUNK)
        rng = np.random.default_rng(child)
        for sample in _draw(rng, size, geom.h3, eps, geom.td2H):
            visit(*sample)
        log.debug("audit %s chunk %d/%d: %d checked", geom.name, index + 1, chunks, checked)
    for sample in extra_samples or []:
        visit(*(Fraction(c) for c in sample))

    point = q_form(ChernThreefold(0, 0, 0, 1), 0, 0, cert.gammaH, geom)
    result = AuditResult(samples=samples, checked=checked, skipped=skipped, seed=seed,
                         point_class_q=point, failures=tuple(failures))
    log.info("ch2 audit on %s: %d checked, %d skipped, %d failures",
             geom.name, checked, skipped, len(failures))
    return result


def verify_ch2_chain(samples: int, eps, geom: ThreefoldGeometry, seed: int = AUDIT_SEED) -> bool:
    return audit_ch2_chain(samples, eps, geom, seed).passed


# ---------------------------------------------------------------------------
# ε-certificates
# ---------------------------------------------------------------------------

def epsilon_from_delta(delta) -> Fraction:
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError(f"δ must be positive, got {delta}")
    return delta / (2 + 3 * delta)


def delta_from_epsilon(eps) -> Fraction:
    eps = Fraction(eps)
    _check_eps(eps)
    return 2 * eps / (1 - 3 * eps)


@dataclass(frozen=True)
class EpsilonCert:
    A: Fraction
    chi: Fraction
    m: Fraction
    smooth: bool
    n: int | None
    delta: Fraction
    epsilon: Fraction


def _round_down(cap: Exact) -> Fraction:
    """Largest multiple of 1/N not above cap, refining N tenfold while that is 0."""
    cap = normal(cap)
    if isinstance(cap, Fraction):
        return cap
    resolution = DELTA_RESOLUTION
    while resolution <= DELTA_RESOLUTION_MAX:
        delta = Fraction(floor(cap * resolution), resolution)
        if delta > 0:
            return delta
        resolution *= 10
    raise NoCertificate(f"δ cap {cap} is below 1/{DELTA_RESOLUTION_MAX}")


def epsilon_for_surface(A, chi, m, g: int, smooth: bool) -> EpsilonCert:
    """A certificate (n, δ, ε) for bn_C ≤ A on a surface with χ(𝒪_S) = chi, H² = m."""
    A, chi, m = Fraction(A), Fraction(chi), Fraction(m)
    if smooth:
        if not A < chi:
            raise NoCertificate(f"Smooth case needs A < χ, got A={A}, χ={chi}")
        n = 2
        while n * n * (chi - A) <= 1:
            n += 1
        c = (A - chi + Fraction(1, n * n)) / (2 * m)
        lattice_cap = normal(sqrt(Fraction(1, 2)) / (m * n))
        root_cap = normal((sqrt(1 - 8 * c) - 1) / 2)
        delta = _round_down(lattice_cap if lattice_cap < root_cap else root_cap)
    else:
        if not A < chi - 1:
            raise NoCertificate(f"Singular case needs A < χ − 1, got A={A}, χ={chi}")
        if 2 * g - 2 <= 0:
            raise NoCertificate(f"Singular case needs g ≥ 2, got g={g}")
        n = None
        delta = min(2 * (chi - 1 - A) / (3 * m), Fraction(2 * g - 2) / m)
    cert = EpsilonCert(A=A, chi=chi, m=m, smooth=smooth, n=n,
                       delta=delta, epsilon=epsilon_from_delta(delta))
    if not validate_certificate(cert, g):
        raise InvariantViolation(f"Fresh certificate {cert} fails re-validation")
    return cert


def validate_certificate(cert: EpsilonCert, g: int) -> bool:
    """Independent re-check of the recorded conditions."""
    A, chi, m, delta = cert.A, cert.chi, cert.m, cert.delta
    if delta <= 0 or cert.epsilon != delta / (2 + 3 * delta):
        return False
    if cert.smooth:
        n = cert.n
        if n is None or n < 2 or not A < chi - Fraction(1, n * n):
            return False
        if delta * delta > Fraction(1, 2 * m * m * n * n):
            return False
        c = (A - chi + Fraction(1, n * n)) / (2 * m)
        # increasing on [0, δ], so checking the right end suffices
        return c < 0 and delta * delta / 2 + delta / 2 + c <= 0
    if not A < chi - 1 or delta * m > 2 * g - 2:
        return False
    return delta + (A - chi + 1) / m <= -delta / 2


def certificate_bound(bn: BNBound, threshold) -> Fraction:
    """Rational A ≥ bn below threshold: bn itself, or bn rounded up on a refining grid."""
    if bn.is_rational:
        return bn.value
    threshold = Fraction(threshold)
    resolution = DELTA_RESOLUTION
    while resolution <= DELTA_RESOLUTION_MAX:
        A = Fraction(ceil(bn.value * resolution), resolution)
        if A < threshold:
            return A
        resolution *= 10
    raise NoCertificate(f"bn ≤ {bn.exact} is within 1/{DELTA_RESOLUTION_MAX} of {threshold}")


# ---------------------------------------------------------------------------
# Main criterion
# ---------------------------------------------------------------------------

def check_main_criterion(bn: BNBound, chi, smooth: bool = True) -> Verdict:
    """Holds iff bn < χ (smooth) or bn < χ − 1 (singular), exactly."""
    if bn.kind is BoundKind.LOWER:
        raise ValueError(f"A lower bound cannot certify the criterion: {bn}")
    threshold = Fraction(chi) if smooth else Fraction(chi) - 1
    return Verdict.HOLDS if bn.value < threshold else Verdict.INCONCLUSIVE


def surface_geometry_of(geom: ThreefoldGeometry) -> SurfaceGeometry:
    """S ∈ |H| on a Calabi–Yau threefold: canonical surface with H_S² = H³."""
    return SurfaceGeometry(SurfaceKind.CANONICAL, geom.h3, chi_os=geom.chi_OH)
