"""Exact-rational certificates for the monotone stability of one superstep.

Everything here runs in arbitrary-precision rationals: the nonnegativity of
stencil coefficients at the CFL endpoint involves exact zeros that floating
point cannot certify.  The normalized shift variable is x = w/2, where the
scheme's polynomial is applied at I + w T with T the undivided (1, -2, 1)
band; every family's monotone range is then 0 <= x <= 1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .integrators import FAMILIES

ENDPOINT = Fraction(1, 4)


@dataclass(frozen=True)
class RationalPoly:
    """Dense univariate polynomial with exact rational coefficients (low to high)."""

    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPoly) and _trim(self.coeffs) == _trim(other.coeffs)


def _trim(coeffs: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n > 1 and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


@lru_cache(maxsize=None)
def legendre_poly(s: int) -> RationalPoly:
    """P_s from the three-term recurrence s P_s = (2s-1) x P_{s-1} - (s-1) P_{s-2}."""
    if s == 0:
        return RationalPoly((Fraction(1),))
    if s == 1:
        return RationalPoly((Fraction(0), Fraction(1)))
    pm2 = legendre_poly(s - 2).coeffs
    pm1 = legendre_poly(s - 1).coeffs
    out = [Fraction(0)] * (s + 1)
    for k, c in enumerate(pm1):
        out[k + 1] += Fraction(2 * s - 1, s) * c
    for k, c in enumerate(pm2):
        out[k] -= Fraction(s - 1, s) * c
    return RationalPoly(tuple(out))


@lru_cache(maxsize=None)
def gegenbauer32_poly(s: int) -> RationalPoly:
    """C_s^{(3/2)} from s C_s = (2s+1) x C_{s-1} - (s+1) C_{s-2}."""
    if s == 0:
        return RationalPoly((Fraction(1),))
    if s == 1:
        return RationalPoly((Fraction(0), Fraction(3)))
    cm2 = gegenbauer32_poly(s - 2).coeffs
    cm1 = gegenbauer32_poly(s - 1).coeffs
    out = [Fraction(0)] * (s + 1)
    for k, c in enumerate(cm1):
        out[k + 1] += Fraction(2 * s + 1, s) * c
    for k, c in enumerate(cm2):
        out[k] -= Fraction(s + 1, s) * c
    return RationalPoly(tuple(out))


@dataclass(frozen=True)
class BandRational:
    """Symmetric stencil with exact rational coefficients at offsets -m..m."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) % 2 != 1:
            raise ValueError("band must have odd length")
        m = self.halfwidth
        for j in range(1, m + 1):
            if self.coeffs[m + j] != self.coeffs[m - j]:
                raise ValueError("band is not symmetric")

    @property
    def halfwidth(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def coef(self, j: int) -> Fraction:
        m = self.halfwidth
        if abs(j) > m:
            return Fraction(0)
        return self.coeffs[m + j]

    def total(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))


def _band_convolve(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for k, bk in enumerate(b):
            out[i + k] += ai * bk
    return tuple(out)


def stencil_of_poly(q: RationalPoly, w: Fraction) -> BandRational:
    """Exact band of q(I + w T) on the bi-infinite grid, T = (1, -2, 1).

    Evaluated by Horner over band convolutions; bandwidth equals deg(q).
    """
    w = Fraction(w)
    if w < 0:
        raise ValueError(f"shift weight must be non-negative, got {w}")
    x_band = (w, 1 - 2 * w, w)
    coeffs = q.coeffs
    acc: tuple[Fraction, ...] = (coeffs[-1],)
    for c in reversed(coeffs[:-1]):
        acc = _band_convolve(acc, x_band)
        mid = (len(acc) - 1) // 2
        acc = acc[:mid] + (acc[mid] + c,) + acc[mid + 1 :]
    return BandRational(acc)


def rkl1_coefficient_formula(s: int, j: int, x: Fraction) -> Fraction:
    """Alternating sum for the offset-j stencil entry of the first-order
    Legendre scheme: sum_{k=j}^{s} C(s,k) C(s+k,k) x^k C(2k,j+k) (-1)^(j+k).
    """
    if not 0 <= j <= s:
        raise ValueError(f"offset j must lie in [0, s], got j={j}, s={s}")
    x = Fraction(x)
    total = Fraction(0)
    for k in range(j, s + 1):
        term = (
            Fraction(math.comb(s, k) * math.comb(s + k, k) * math.comb(2 * k, j + k))
            * x**k
        )
        total += -term if (j + k) % 2 else term
    return total


def scheme_band(family: str, s: int, x: Fraction) -> BandRational:
    """Exact stencil of one superstep for the linear heat update at the
    normalized shift x = w/2 (so c = dt lambda/4 maps to x = c/(2 c_max) * 1/2).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown scheme family {family!r}")
    x = Fraction(x)
    w = 2 * x
    if family in ("rkl1", "rkl2"):
        band = stencil_of_poly(legendre_poly(s), w)
        scale = Fraction(1)
    else:
        band = stencil_of_poly(gegenbauer32_poly(s), w)
        scale = Fraction(2, (s + 1) * (s + 2))
    if family in ("rkl1", "rkg1"):
        blend = Fraction(1)
    elif family == "rkl2":
        blend = Fraction(s * s + s - 2, 2 * s * (s + 1))
    else:
        blend = Fraction(2 * (s - 1) * (s + 4), 3 * s * (s + 3))
    coeffs = list(blend * scale * c for c in band.coeffs)
    mid = (len(coeffs) - 1) // 2
    coeffs[mid] += 1 - blend
    return BandRational(tuple(coeffs))


@dataclass(frozen=True)
class SampleResult:
    x: Fraction
    min_coefficient: Fraction
    min_offset: int
    coefficient_sum: Fraction


@dataclass
class MonotoneCertificate:
    """Outcome of exact stencil nonnegativity checks for one (family, s)."""

    family: str
    s: int
    samples: list[SampleResult] = field(default_factory=list)
    violations: list[SampleResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        def entry(r: SampleResult) -> dict:
            return {
                "x": str(r.x),
                "min_coefficient": str(r.min_coefficient),
                "min_offset": r.min_offset,
                "coefficient_sum": str(r.coefficient_sum),
            }

        return {
            "family": self.family,
            "s": self.s,
            "ok": self.ok,
            "samples": [entry(r) for r in self.samples],
            "violations": [entry(r) for r in self.violations],
        }


def verify_monotone(family: str, s: int, x_samples) -> MonotoneCertificate:
    """Check every stencil coefficient >= 0 exactly at each sample x.

    A negative coefficient is a counterexample (it would falsify the
    monotonicity theorems inside the range x <= 1/4) and lands in
    ``violations``; coefficient sums are also checked to equal 1 exactly.
    """
    cert = MonotoneCertificate(family=family, s=s)
    for x in x_samples:
        x = Fraction(x)
        band = scheme_band(family, s, x)
        m = band.halfwidth
        min_j = min(range(-m, m + 1), key=lambda j: band.coef(j))
        result = SampleResult(
            x=x,
            min_coefficient=band.coef(min_j),
            min_offset=min_j,
            coefficient_sum=band.total(),
        )
        cert.samples.append(result)
        if result.min_coefficient < 0 or result.coefficient_sum != 1:
            cert.violations.append(result)
    return cert


def pochhammer(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def hyp3f2_terminating(a1: Fraction, a2: Fraction, a3: Fraction,
                       b1: Fraction, b2: Fraction, z: Fraction) -> Fraction:
    """3F2 at z where one upper parameter is a non-positive integer."""
    stops = [int(-a) for a in (a1, a2, a3) if a <= 0 and a.denominator == 1]
    if not stops:
        raise ValueError("series does not terminate")
    n = min(stops)
    total = Fraction(0)
    for k in range(n + 1):
        total += (
            pochhammer(a1, k) * pochhammer(a2, k) * pochhammer(a3, k)
            / (pochhammer(b1, k) * pochhammer(b2, k) * math.factorial(k))
            * z**k
        )
    return total


def hyp2f1_terminating(a1: Fraction, a2: Fraction, b1: Fraction, z: Fraction) -> Fraction:
    stops = [int(-a) for a in (a1, a2) if a <= 0 and a.denominator == 1]
    if not stops:
        raise ValueError("series does not terminate")
    n = min(stops)
    total = Fraction(0)
    for k in range(n + 1):
        total += (
            pochhammer(a1, k) * pochhammer(a2, k)
            / (pochhammer(b1, k) * math.factorial(k))
            * z**k
        )
    return total


def clausen_terminating_check(s: int, j: int, x: Fraction) -> bool:
    """Exact equality of the terminating Clausen pair at argument 4x:

    3F2(j+1/2, j+s+1, j-s; j+1, 2j+1) = [2F1((j+s+1)/2, (j-s)/2; j+1)]^2.

    Both sides terminate only when s - j is even; odd s - j is rejected.
    """
    if not 0 <= j <= s:
        raise ValueError(f"offset j must lie in [0, s], got j={j}, s={s}")
    if (s - j) % 2 != 0:
        raise ValueError("s - j must be even: the 2F1 side is non-terminating otherwise")
    x = Fraction(x)
    z = 4 * x
    lhs = hyp3f2_terminating(
        Fraction(2 * j + 1, 2), Fraction(j + s + 1), Fraction(j - s),
        Fraction(j + 1), Fraction(2 * j + 1), z,
    )
    f21 = hyp2f1_terminating(
        Fraction(j + s + 1, 2), Fraction(j - s, 2), Fraction(j + 1), z
    )
    return lhs == f21 * f21


def gegenbauer_recurrence_check(s_max: int) -> bool:
    """Exact coefficient identity C_s^{(3/2)} = z C_{s-1}^{(3/2)} + (s+1) P_s
    for all 1 <= s <= s_max (the lambda-lowering recurrence at lambda = 3/2).
    """
    for s in range(1, s_max + 1):
        lhs = gegenbauer32_poly(s).coeffs
        prev = gegenbauer32_poly(s - 1).coeffs
        leg = legendre_poly(s).coeffs
        rhs = [Fraction(0)] * (s + 1)
        for k, c in enumerate(prev):
            rhs[k + 1] += c
        for k, c in enumerate(leg):
            rhs[k] += (s + 1) * c
        if _trim(tuple(rhs)) != _trim(lhs):
            return False
    return True
