"""Geometric-then-uniform radial grids.

The first ``n_geo`` intervals grow geometrically from r0 (uniform step in
x = ln r); the rest are uniform in r.  The uniform step equals the last
geometric spacing, h = r_s (1 - 1/q), so the junction pair of points is
simultaneously h-spaced in r and (ln q)-spaced in x.  A Numerov sweep can
therefore hand over between the log zone and the linear zone with no
interpolation: the seed pair for one zone is the last computed pair of the
other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq


@dataclass(frozen=True)
class RadialGrid:
    r0: float
    r_max: float
    n_points: int
    n_geo: int = 0  # geometric intervals; 0 picks a default fraction

    def __post_init__(self):
        if not (0.0 < self.r0 < self.r_max):
            raise ValueError(f"need 0 < r0 < r_max, got r0={self.r0!r}, r_max={self.r_max!r}")
        if self.n_points < 200:
            raise ValueError(f"n_points must be >= 200, got {self.n_points}")
        if self.n_geo == 0:
            object.__setattr__(self, "n_geo", min(max(self.n_points // 5, 150), 1200))
        if not (2 <= self.n_geo <= self.n_points - 3):
            raise ValueError(f"n_geo={self.n_geo} out of range for n_points={self.n_points}")

    @cached_property
    def ratio(self) -> float:
        """Geometric ratio q > 1 such that the full grid lands on r_max."""
        r0, rmax, m = self.r0, self.r_max, self.n_geo
        n_uni = self.n_points - 1 - m
        log_cap = math.log(rmax) + 50.0

        def excess(q: float) -> float:
            log_rs = math.log(r0) + m * math.log(q)
            if log_rs > log_cap:
                return 1e300
            rs = math.exp(log_rs)
            return rs * (1.0 + n_uni * (1.0 - 1.0 / q)) - rmax

        lo = 1.0 + 1e-14
        hi = 1.5
        while excess(hi) < 0.0:
            hi = 1.0 + 2.0 * (hi - 1.0)
            if hi > 1e6:  # pragma: no cover - unreachable for valid grids
                raise ValueError("grid ratio solve failed")
        return float(brentq(excess, lo, hi, xtol=1e-15, rtol=8.9e-16))

    @property
    def dx(self) -> float:
        """Log-zone step in x = ln r."""
        return math.log(self.ratio)

    @cached_property
    def r_switch(self) -> float:
        return self.r0 * self.ratio**self.n_geo

    @property
    def h(self) -> float:
        """Uniform-zone step; equals the last geometric spacing."""
        return self.r_switch * (1.0 - 1.0 / self.ratio)

    @cached_property
    def radii(self) -> np.ndarray:
        m = self.n_geo
        i = np.arange(self.n_points)
        r = np.empty(self.n_points)
        r[: m + 1] = self.r0 * np.exp(i[: m + 1] * self.dx)
        r[m + 1 :] = self.r_switch + (i[m + 1 :] - m) * self.h
        return r

    def refined(self) -> "RadialGrid":
        """Standard refinement: double the points, halve r0, extend r_max."""
        return RadialGrid(
            r0=self.r0 / 2.0,
            r_max=self.r_max * 1.5,
            n_points=2 * self.n_points,
            n_geo=2 * self.n_geo,
        )

    def to_dict(self) -> dict:
        return {
            "r0": self.r0,
            "r_max": self.r_max,
            "n_points": self.n_points,
            "n_geo": self.n_geo,
        }
