"""Potential models V(r) and their origin classification.

Models evaluate V strictly at r > 0 and expose their small-r structure in
two ways: ``origin_series`` gives the coefficients (s2, s1, s0) of
V ~ s2/r^2 + s1/r + s0, and ``origin_class`` classifies lim r^2 V(r) as
regular (limit 0), transitive-singular (finite nonzero limit -V0), or
strongly-singular (unbounded).  Sign convention: attractive -|c|/r^2 has
V0 = +|c|; repulsive +|c|/r^2 has V0 = -|c|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ClassificationError, DomainError

REGULAR = "regular"
TRANSITIVE_SINGULAR = "transitive-singular"
STRONGLY_SINGULAR = "strongly-singular"

# Tabulated power-law fits: tolerance on the fitted log-log slope when
# snapping to an integer exponent, and on the rms log-residual before the
# trend is declared ambiguous.
TAB_SLOPE_TOL = 0.05
TAB_RESIDUAL_TOL = 0.1


@dataclass(frozen=True)
class OriginClass:
    """Behaviour of V at the origin, keyed by lim r^2 V(r) = -V0."""

    kind: str
    V0: float = 0.0

    @property
    def is_regular(self) -> bool:
        return self.kind == REGULAR

    @property
    def is_transitive(self) -> bool:
        return self.kind == TRANSITIVE_SINGULAR

    @property
    def is_strongly_singular(self) -> bool:
        return self.kind == STRONGLY_SINGULAR


def _require_finite(name: str, **params: float) -> None:
    for key, val in params.items():
        if not math.isfinite(val):
            raise ValueError(f"{name}: parameter {key}={val!r} must be finite")


class PotentialModel:
    """Base class; concrete models are the frozen dataclasses below."""

    def _raw(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def origin_series(self) -> tuple[float, float, float]:
        """Coefficients (s2, s1, s0) of the small-r expansion s2/r^2 + s1/r + s0."""
        raise NotImplementedError

    def origin_class(self) -> OriginClass:
        s2, _, _ = self.origin_series()
        if s2 == 0.0:
            return OriginClass(REGULAR)
        return OriginClass(TRANSITIVE_SINGULAR, V0=-s2)

    def token(self) -> str:
        """Canonical plain-text spec of this model, re-parseable by the CLI."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def evaluate(self, r):
        """V(r) for scalar or array r > 0.  Raises DomainError on non-finite values."""
        arr = np.asarray(r, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        if arr.size and np.any(arr <= 0.0):
            bad = float(arr[arr <= 0.0][0])
            raise DomainError(self.token(), bad, "potential sampled at r <= 0")
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            out = np.asarray(self._raw(arr), dtype=float)
        finite = np.isfinite(out)
        if not np.all(finite):
            bad = float(arr[~finite][0])
            raise DomainError(self.token(), bad, "non-finite value")
        return float(out[0]) if scalar else out


@dataclass(frozen=True)
class Coulomb(PotentialModel):
    """V = -Z/r.  Z > 0 is attractive."""

    Z: float

    def __post_init__(self):
        _require_finite("Coulomb", Z=self.Z)

    def _raw(self, r):
        return -self.Z / r

    def origin_series(self):
        return (0.0, -self.Z, 0.0)

    def token(self):
        return f"coulomb:Z={self.Z!r}"

    def to_dict(self):
        return {"variant": "coulomb", "Z": self.Z}


@dataclass(frozen=True)
class Harmonic(PotentialModel):
    """V = (1/2) mass omega^2 r^2.

    The oscillator mass is carried by the model itself so that evaluation
    needs no outside context; the CLI wires the problem mass in here.
    """

    omega: float
    mass: float = 1.0

    def __post_init__(self):
        _require_finite("Harmonic", omega=self.omega, mass=self.mass)
        if self.mass <= 0:
            raise ValueError("Harmonic: mass must be positive")

    def _raw(self, r):
        return 0.5 * self.mass * self.omega**2 * r * r

    def origin_series(self):
        return (0.0, 0.0, 0.0)

    def token(self):
        return f"harmonic:omega={self.omega!r},mass={self.mass!r}"

    def to_dict(self):
        return {"variant": "harmonic", "omega": self.omega, "mass": self.mass}


@dataclass(frozen=True)
class InverseSquare(PotentialModel):
    """V = g/r^2 (g < 0 attractive, V0 = -g)."""

    g: float

    def __post_init__(self):
        _require_finite("InverseSquare", g=self.g)

    def _raw(self, r):
        return self.g / (r * r)

    def origin_series(self):
        return (self.g, 0.0, 0.0)

    def token(self):
        return f"invsq:g={self.g!r}"

    def to_dict(self):
        return {"variant": "invsq", "g": self.g}


@dataclass(frozen=True)
class SphericalWell(PotentialModel):
    """V = -depth for r < radius, 0 outside."""

    depth: float
    radius: float

    def __post_init__(self):
        _require_finite("SphericalWell", depth=self.depth, radius=self.radius)
        if self.radius <= 0:
            raise ValueError("SphericalWell: radius must be positive")

    def _raw(self, r):
        return np.where(r < self.radius, -self.depth, 0.0)

    def origin_series(self):
        return (0.0, 0.0, -self.depth)

    def token(self):
        return f"well:depth={self.depth!r},radius={self.radius!r}"

    def to_dict(self):
        return {"variant": "well", "depth": self.depth, "radius": self.radius}


@dataclass(frozen=True)
class PowerLaw(PotentialModel):
    """V = coeff * r^(-p)."""

    coeff: float
    exponent: float

    def __post_init__(self):
        _require_finite("PowerLaw", coeff=self.coeff, exponent=self.exponent)

    def _raw(self, r):
        return self.coeff * r ** (-self.exponent)

    def origin_series(self):
        p = self.exponent
        if self.coeff == 0.0:
            return (0.0, 0.0, 0.0)
        if p == 2.0:
            return (self.coeff, 0.0, 0.0)
        if p == 1.0:
            return (0.0, self.coeff, 0.0)
        if p == 0.0:
            return (0.0, 0.0, self.coeff)
        # Fractional or negative exponents carry no r^-2..r^0 piece that the
        # series representation can hold; the start-off bound in the solver
        # accounts for the remainder explicitly.
        return (0.0, 0.0, 0.0)

    def origin_class(self):
        if self.coeff == 0.0 or self.exponent < 2.0:
            return OriginClass(REGULAR)
        if self.exponent == 2.0:
            return OriginClass(TRANSITIVE_SINGULAR, V0=-self.coeff)
        return OriginClass(STRONGLY_SINGULAR)

    def token(self):
        return f"powerlaw:coeff={self.coeff!r},p={self.exponent!r}"

    def to_dict(self):
        return {"variant": "powerlaw", "coeff": self.coeff, "p": self.exponent}


@dataclass(frozen=True)
class SumPotential(PotentialModel):
    """Pointwise sum of component models."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ValueError("SumPotential: needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))

    def _raw(self, r):
        total = np.zeros_like(r)
        for part in self.parts:
            total = total + part.evaluate(r)
        return total

    def origin_series(self):
        s2 = s1 = s0 = 0.0
        for part in self.parts:
            p2, p1, p0 = part.origin_series()
            s2, s1, s0 = s2 + p2, s1 + p1, s0 + p0
        return (s2, s1, s0)

    def origin_class(self):
        # Any strongly-singular part dominates; otherwise V0 adds up and an
        # exact cancellation of the r^-2 pieces is genuinely regular.
        if any(p.origin_class().is_strongly_singular for p in self.parts):
            return OriginClass(STRONGLY_SINGULAR)
        s2, _, _ = self.origin_series()
        if s2 == 0.0:
            return OriginClass(REGULAR)
        return OriginClass(TRANSITIVE_SINGULAR, V0=-s2)

    def token(self):
        return "+".join(p.token() for p in self.parts)

    def to_dict(self):
        return {"variant": "sum", "parts": [p.to_dict() for p in self.parts]}


def _power_fit(logr: np.ndarray, vals: np.ndarray) -> tuple[float, float, float]:
    """Fit V ~ C r^s over the window; returns (C, s, rms log-residual)."""
    signs = np.sign(vals)
    if np.any(vals == 0.0) or not np.all(signs == signs[0]):
        raise ClassificationError(float("nan"), float("inf"), TAB_RESIDUAL_TOL)
    logv = np.log(np.abs(vals))
    slope, intercept = np.polyfit(logr, logv, 1)
    resid = float(np.sqrt(np.mean((logv - (slope * logr + intercept)) ** 2)))
    return float(signs[0] * math.exp(intercept)), float(slope), resid


@dataclass(frozen=True)
class Tabulated(PotentialModel):
    """Sampled V(r), interpolated linearly in log r.

    Below the first radius the model follows the power law fitted over the
    smallest decade of radii; above the last, the power law fitted over the
    largest decade.  Both fits are also what classification reports.
    """

    radii: tuple
    values: tuple
    source: str = ""

    def __post_init__(self):
        radii = tuple(float(x) for x in self.radii)
        values = tuple(float(x) for x in self.values)
        if len(radii) != len(values):
            raise ValueError("Tabulated: radii and values must have equal length")
        if len(radii) < 2:
            raise ValueError("Tabulated: need at least two samples")
        if radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("Tabulated: radii must be strictly increasing and positive")
        if not all(math.isfinite(v) for v in radii + values):
            raise ValueError("Tabulated: samples must be finite")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_csv(cls, path: str) -> "Tabulated":
        rows = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        return cls(radii=tuple(rows[:, 0]), values=tuple(rows[:, 1]), source=path)

    @cached_property
    def _logr(self):
        return np.log(np.asarray(self.radii))

    @cached_property
    def _vals(self):
        return np.asarray(self.values)

    def _decade(self, head: bool) -> slice:
        r = np.asarray(self.radii)
        if head:
            n = max(3, int(np.sum(r <= r[0] * 10.0)))
            return slice(0, min(n, len(r)))
        n = max(3, int(np.sum(r >= r[-1] / 10.0)))
        return slice(max(0, len(r) - n), len(r))

    @cached_property
    def _head_fit(self):
        sl = self._decade(head=True)
        return _power_fit(self._logr[sl], self._vals[sl])

    @cached_property
    def _tail_fit(self):
        sl = self._decade(head=False)
        return _power_fit(self._logr[sl], self._vals[sl])

    def _raw(self, r):
        out = np.interp(np.log(r), self._logr, self._vals)
        below = r < self.radii[0]
        above = r > self.radii[-1]
        if np.any(below):
            c, s, _ = self._head_fit
            out = np.where(below, c * r**s, out)
        if np.any(above):
            c, s, _ = self._tail_fit
            out = np.where(above, c * r**s, out)
        return out

    def origin_class(self):
        c, s, resid = self._head_fit
        if resid > TAB_RESIDUAL_TOL:
            raise ClassificationError(s, resid, TAB_RESIDUAL_TOL)
        if abs(s + 2.0) <= TAB_SLOPE_TOL:
            # refit the amplitude with the exponent pinned at -2
            sl = self._decade(head=True)
            logv = np.log(np.abs(self._vals[sl]))
            c2 = math.copysign(math.exp(float(np.mean(logv + 2.0 * self._logr[sl]))), c)
            return OriginClass(TRANSITIVE_SINGULAR, V0=-c2)
        if s > -2.0:
            return OriginClass(REGULAR)
        return OriginClass(STRONGLY_SINGULAR)

    def origin_series(self):
        c, s, resid = self._head_fit
        if resid > TAB_RESIDUAL_TOL:
            raise ClassificationError(s, resid, TAB_RESIDUAL_TOL)
        for target, idx in ((-2.0, 0), (-1.0, 1), (0.0, 2)):
            if abs(s - target) <= TAB_SLOPE_TOL:
                sl = self._decade(head=True)
                logv = np.log(np.abs(self._vals[sl]))
                amp = math.copysign(
                    math.exp(float(np.mean(logv - target * self._logr[sl]))), c
                )
                out = [0.0, 0.0, 0.0]
                out[idx] = amp
                return tuple(out)
        return (0.0, 0.0, 0.0)

    def token(self):
        return f"table:{self.source}" if self.source else f"table:<{len(self.radii)} samples>"

    def to_dict(self):
        return {
            "variant": "table",
            "source": self.source,
            "radii": list(self.radii),
            "values": list(self.values),
        }


def evaluate(model: PotentialModel, r):
    """V(r); scalar in, scalar out; array in, array out."""
    return model.evaluate(r)


def origin_class(model: PotentialModel) -> OriginClass:
    return model.origin_class()


def origin_series(model: PotentialModel) -> tuple[float, float, float]:
    return model.origin_series()
