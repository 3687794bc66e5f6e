"""Frobenius indicial analysis at the origin.

With V ~ -V0/r^2 near r = 0 the radial equation reduces at leading order to
u'' = [l(l+1) - 2mV0] u / r^2, whose power solutions u ~ r^a satisfy

    a(a-1) = l(l+1) - 2mV0,   a_pm = 1/2 +- P,   P = sqrt((l+1/2)^2 - 2mV0).

P controls admissibility of the a_minus branch: square-integrable near the
origin for P < 1, vanishing at the origin only for P < 1/2.  A negative
radicand (imaginary P) is the fall-to-center regime: it is reported as such,
never clamped.  P = 0 is the degenerate root; the second solution picks up a
log factor, which still vanishes at the origin and is square-integrable, so
both minus-flags stay true there.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

from .errors import UnsupportedClassError
from .potentials import OriginClass, REGULAR

REGIME_BOTH_AMBIGUOUS = "both-criteria-ambiguous"
REGIME_L2_ONLY = "L2-ambiguous-only"
REGIME_UNIQUE = "unique"
REGIME_FALL = "fall-to-center"


@dataclass(frozen=True)
class IndicialReport:
    l: int
    two_m_V0: float
    P: float | None  # None marks fall-to-center
    a_plus: float | None
    a_minus: float | None
    plus_l2: bool
    minus_l2: bool
    plus_bc: bool
    minus_bc: bool
    degenerate: bool

    @property
    def fall_to_center(self) -> bool:
        return self.P is None

    @property
    def regime(self) -> str:
        if self.P is None:
            return REGIME_FALL
        if self.P < 0.5:
            return REGIME_BOTH_AMBIGUOUS
        if self.P < 1.0:
            return REGIME_L2_ONLY
        return REGIME_UNIQUE


def solve_indicial(l: int, mass: float, origin: OriginClass) -> IndicialReport:
    """Indicial exponents and admissibility flags for one (l, origin) pair.

    Regular origins are treated as V0 = 0, where the report reduces to the
    familiar a_plus = l+1, a_minus = -l (exactly, not just to rounding).
    Strongly singular origins are rejected; a fall-to-center radicand yields
    a report flagged via P = None rather than an exception.
    """
    if not isinstance(l, int) or l < 0:
        raise ValueError(f"l must be a nonnegative integer, got {l!r}")
    if mass <= 0:
        raise ValueError(f"mass must be positive, got {mass!r}")
    if origin.is_strongly_singular:
        raise UnsupportedClassError(
            "strongly singular origin: r^2 V(r) is unbounded and the indicial "
            "equation does not apply"
        )
    V0 = origin.V0 if not origin.is_regular else 0.0
    two_m_V0 = 2.0 * mass * V0

    if two_m_V0 == 0.0:
        P = l + 0.5  # exact: integer-plus-half is representable
    else:
        radicand = (l + 0.5) ** 2 - two_m_V0
        if radicand < 0.0:
            return IndicialReport(
                l=l, two_m_V0=two_m_V0, P=None, a_plus=None, a_minus=None,
                plus_l2=False, minus_l2=False, plus_bc=False, minus_bc=False,
                degenerate=False,
            )
        P = sqrt(radicand)

    return IndicialReport(
        l=l,
        two_m_V0=two_m_V0,
        P=P,
        a_plus=0.5 + P,
        a_minus=0.5 - P,
        plus_l2=True,
        plus_bc=True,
        minus_l2=P < 1.0,
        minus_bc=P < 0.5,
        degenerate=P == 0.0,
    )


def admissibility_table(l_max: int, mass: float, V0_grid) -> list[IndicialReport]:
    """One report per (l, V0) pair: l ascending, V0 in the given grid order."""
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    V0_list = [float(v) for v in V0_grid]
    reports = []
    for l in range(l_max + 1):
        for V0 in V0_list:
            if V0 == 0.0:
                origin = OriginClass(REGULAR)
            else:
                origin = OriginClass("transitive-singular", V0=V0)
            reports.append(solve_indicial(l, mass, origin))
    return reports
