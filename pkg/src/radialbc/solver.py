"""Bound-state eigensolver for the radial equation u'' = f(r; E) u.

Non-relativistic form:   f = l(l+1)/r^2 + 2m(V - E)
Relativistic form:       f = m^2 + l(l+1)/r^2 - (E - V)^2

The origin boundary condition is an explicit policy.  DirichletOrigin
starts the outward sweep on the a_plus Frobenius branch alone (u(0) = 0);
MixedSAE(theta, L) prescribes, for P < 1/2, the one-parameter admixture

    u ~ cos(theta/2) (r/L)^(1/2+P) - sin(theta/2) (r/L)^(1/2-P),

where theta = 0 is the pure a_plus branch and theta in (0, pi) sweeps the
ratio c2/c1 = -tan(theta/2) L^(2P) over all negative values, which is
exactly the range realized by bound states of a pure inverse-square tail
(whose exact solutions are sqrt(r) K_P(kappa r)).  L2Only is a criterion,
not a prescription: it leaves that one-parameter family open, so as a
start-off it coincides with theta = 0 and exists mainly so comparison
tables can label which levels would be ambiguous under the weaker test.

Numerics: Frobenius series start at r0 > 0, Numerov sweeps over a
geometric-then-uniform grid (log zone integrates v = u/sqrt(r) in
x = ln r, where an inverse-square singularity becomes a constant), node
counting with Sturm bisection, then Brent refinement of the normalized
log-derivative defect at the outermost classical turning point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.optimize import brentq
from scipy.special import gamma as _gamma

from .errors import (
    BracketError,
    FallToCenterError,
    PolicyError,
    RegimeError,
    SolverConvergenceError,
    StartOffError,
    UnsupportedClassError,
)
from .grid import RadialGrid
from .indicial import IndicialReport, solve_indicial
from .numerov import deriv3, sweep
from .potentials import PotentialModel, origin_class, origin_series

EULER_GAMMA = 0.5772156649015329


# --------------------------------------------------------------------------
# boundary policies


@dataclass(frozen=True)
class DirichletOrigin:
    """u(0) = 0: only the a_plus branch is admitted."""


@dataclass(frozen=True)
class L2Only:
    """Square-integrability alone; under-determines the start, so the solver
    uses the a_plus branch unless an admixture is requested via MixedSAE."""


@dataclass(frozen=True)
class MixedSAE:
    """One-parameter origin condition; valid with theta != 0 only for P < 1/2."""

    theta: float
    L: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.theta < math.pi):
            raise ValueError(f"theta must lie in [0, pi), got {self.theta!r}")
        if self.L <= 0:
            raise ValueError(f"length scale L must be positive, got {self.L!r}")


BoundaryPolicy = DirichletOrigin | L2Only | MixedSAE


@dataclass(frozen=True)
class SolverOptions:
    tol_E: float = 1e-9          # absolute, in problem energy units
    tol_match: float = 1e-9      # relative log-derivative defect
    max_iter: int = 200
    overflow_guard: float = 1e150
    efolds: float = 18.0         # required decay integral beyond the turning point
    series_bound: float = 1e-6   # start-off truncation bound at r0
    scan_points: int = 64        # defect sign-scan resolution (KG / SAE searches)
    max_points: int = 200_000


_DEFAULT_OPTIONS = SolverOptions()


# --------------------------------------------------------------------------
# problem statement


@dataclass(frozen=True)
class RadialProblem:
    mass: float
    l: int
    potential: PotentialModel
    policy: BoundaryPolicy = field(default_factory=DirichletOrigin)
    grid: RadialGrid | None = None
    relativistic: bool = False
    energy_window: tuple[float, float] | None = None
    options: SolverOptions = _DEFAULT_OPTIONS

    def __post_init__(self):
        if self.mass <= 0 or not math.isfinite(self.mass):
            raise ValueError(f"mass must be positive and finite, got {self.mass!r}")
        if not isinstance(self.l, int) or self.l < 0:
            raise ValueError(f"l must be a nonnegative integer, got {self.l!r}")
        origin = origin_class(self.potential)
        if origin.is_strongly_singular:
            raise UnsupportedClassError(
                f"potential {self.potential.token()} is strongly singular at the "
                "origin; the solver handles only regular and transitive-singular models"
            )
        if self.energy_window is not None:
            lo, hi = self.energy_window
            if not (lo < hi):
                raise ValueError(f"energy_window must be increasing, got {self.energy_window!r}")

        s2, s1, s0 = origin_series(self.potential)
        if self.relativistic:
            if s2 != 0.0:
                raise UnsupportedClassError(
                    "relativistic mode cannot take an inverse-square potential term: "
                    "(E - V)^2 would produce an r^-4 singularity"
                )
            radicand = (self.l + 0.5) ** 2 - s1 * s1
            if radicand < 0.0:
                raise FallToCenterError(
                    f"relativistic fall-to-center: effective inverse-square strength "
                    f"l(l+1) - s1^2 = {self.l * (self.l + 1) - s1 * s1:.6g} puts "
                    f"(l+1/2)^2 below s1^2 = {s1 * s1:.6g}"
                )
            P = math.sqrt(radicand)
            object.__setattr__(self, "_P", P)
            object.__setattr__(self, "_indicial", None)
        else:
            report = solve_indicial(self.l, self.mass, origin)
            if report.fall_to_center:
                raise FallToCenterError(
                    f"fall-to-center regime: 2mV0 = {report.two_m_V0:.6g} exceeds "
                    f"(l+1/2)^2 = {(self.l + 0.5) ** 2:.6g}; no ground state exists "
                    "without additional input"
                )
            P = report.P
            object.__setattr__(self, "_P", P)
            object.__setattr__(self, "_indicial", report)
        object.__setattr__(self, "_series", (s2, s1, s0))

        if isinstance(self.policy, MixedSAE) and self.policy.theta != 0.0:
            if self.relativistic:
                raise PolicyError("MixedSAE with theta != 0 is not supported in relativistic mode")
            if not (P < 0.5):
                raise PolicyError(
                    f"MixedSAE with theta != 0 requires P < 1/2; this problem has "
                    f"P = {P:.6g}, where the admixed branch violates u(0) = 0"
                    + (" and normalizability" if P >= 1.0 else "")
                )

    @property
    def P(self) -> float:
        return self._P

    @property
    def indicial(self) -> IndicialReport | None:
        return self._indicial

    @property
    def a_plus(self) -> float:
        return 0.5 + self._P

    @property
    def a_minus(self) -> float:
        return 0.5 - self._P


@dataclass(frozen=True, eq=False)
class Level:
    n_r: int
    E: float
    match_defect: float
    node_count: int
    r: np.ndarray
    u: np.ndarray
    grid: RadialGrid
    iterations: int
    history: tuple


@dataclass(frozen=True, eq=False)
class EigenResult:
    levels: tuple
    metadata: dict

    @property
    def wavefunctions(self):
        return tuple(lv.u for lv in self.levels)


# --------------------------------------------------------------------------
# Frobenius start-off


def _series_ABC(problem: RadialProblem, E: float):
    s2, s1, s0 = problem._series
    ll = problem.l * (problem.l + 1)
    m = problem.mass
    if problem.relativistic:
        Et = E - s0
        return ll - s1 * s1, 2.0 * s1 * Et, m * m - Et * Et
    return ll + 2.0 * m * s2, 2.0 * m * s1, 2.0 * m * (s0 - E)


def _b_coeffs(a: float, B: float, C: float):
    # u = r^a (1 + b1 r + b2 r^2) in u'' = [A/r^2 + B/r + C] u
    b1 = B / (2.0 * a) if B != 0.0 else 0.0
    b2 = (B * b1 + C) / (4.0 * a + 2.0)
    return b1, b2


def _f_exact_at(problem: RadialProblem, E: float, r: float) -> float:
    V = problem.potential.evaluate(r)
    ll = problem.l * (problem.l + 1)
    if problem.relativistic:
        return problem.mass**2 + ll / r**2 - (E - V) ** 2
    return ll / r**2 + 2.0 * problem.mass * (V - E)


def _start_bound(problem: RadialProblem, E: float, r0: float, branches) -> float:
    """Size of everything the truncated start-off neglects, relative to 1."""
    _, B, C = _series_ABC(problem, E)
    worst = 0.0
    for a in branches:
        if a == 0.0:
            continue
        b1, b2 = _b_coeffs(a, B, C)
        worst = max(worst, abs(b1) * r0 + abs(b2) * r0 * r0)
    # remainder of f beyond its A/r^2 + B/r + C series, scaled like the
    # correction it would have produced
    A = _series_ABC(problem, E)[0]
    df = abs(_f_exact_at(problem, E, r0) - (A / r0**2 + B / r0 + C))
    return worst + df * r0 * r0


def _check_start(problem: RadialProblem, E: float, r0: float, branches) -> None:
    bound = _start_bound(problem, E, r0, branches)
    limit = problem.options.series_bound
    if not (bound < limit):
        raise StartOffError(
            f"series start-off at r0={r0:.3g} has truncated correction {bound:.3g} "
            f">= {limit:.3g}; use a smaller r0"
        )


def _series_u(problem: RadialProblem, E: float, branch: str, r: np.ndarray) -> np.ndarray:
    """Evaluate the start-off series at (small) radii r."""
    _, B, C = _series_ABC(problem, E)
    a_p, a_m = problem.a_plus, problem.a_minus

    def power(a: float, scale: float = 1.0) -> np.ndarray:
        b1, b2 = _b_coeffs(a, B, C)
        return (r / scale) ** a * (1.0 + b1 * r + b2 * r * r)

    if branch == "plus":
        return power(a_p)
    if branch == "minus":
        if problem._P >= 1.0:
            raise PolicyError(f"minus branch is not square-integrable at P = {problem._P:.6g}")
        if a_m == 0.0:
            raise PolicyError("minus branch at P = 1/2 is logarithmic, not a pure power")
        return power(a_m)
    if branch == "mixed":
        pol = problem.policy
        if not isinstance(pol, MixedSAE):
            raise PolicyError("mixed branch requires a MixedSAE policy")
        if pol.theta == 0.0:
            return power(a_p, pol.L)
        if problem._P == 0.0:
            # degenerate indicial root: the partner solution is logarithmic
            return np.sqrt(r) * (math.cos(pol.theta) + math.sin(pol.theta) * np.log(r / pol.L))
        return math.cos(0.5 * pol.theta) * power(a_p, pol.L) - math.sin(0.5 * pol.theta) * power(
            a_m, pol.L
        )
    raise ValueError(f"unknown branch {branch!r}")


def _series_du(problem: RadialProblem, E: float, branch: str, r: float) -> float:
    _, B, C = _series_ABC(problem, E)

    def dpower(a: float, scale: float = 1.0) -> float:
        b1, b2 = _b_coeffs(a, B, C)
        return (
            r ** (a - 1.0)
            / scale**a
            * (a + (a + 1.0) * b1 * r + (a + 2.0) * b2 * r * r)
        )

    if branch == "plus":
        return dpower(problem.a_plus)
    if branch == "minus":
        return dpower(problem.a_minus)
    if branch == "mixed":
        pol = problem.policy
        if pol.theta == 0.0:
            return dpower(problem.a_plus, pol.L)
        if problem._P == 0.0:
            lg = math.log(r / pol.L)
            return (math.cos(pol.theta) + math.sin(pol.theta) * (lg + 2.0)) / (2.0 * math.sqrt(r))
        return math.cos(0.5 * pol.theta) * dpower(problem.a_plus, pol.L) - math.sin(
            0.5 * pol.theta
        ) * dpower(problem.a_minus, pol.L)
    raise ValueError(f"unknown branch {branch!r}")


def _branch_for_policy(problem: RadialProblem) -> str:
    if isinstance(problem.policy, MixedSAE) and problem.policy.theta != 0.0:
        return "mixed"
    return "plus"


def _branch_exponents(problem: RadialProblem, branch: str):
    if branch == "plus":
        return (problem.a_plus,)
    if branch == "minus":
        return (problem.a_minus,)
    if problem._P == 0.0:
        return (0.5,)
    return (problem.a_plus, problem.a_minus)


def series_start(problem: RadialProblem, E: float, branch: str):
    """Start values (u(r0), u'(r0)) on the requested Frobenius branch.

    The values include the first two subleading corrections; r0 must be
    small enough that the truncated remainder stays below the configured
    bound, otherwise a StartOffError asks for a smaller r0.
    """
    if isinstance(problem.policy, DirichletOrigin) and branch != "plus":
        raise PolicyError(f"DirichletOrigin admits only the plus branch, not {branch!r}")
    grid = problem.grid or _default_grid(problem)
    r0 = grid.r0
    _check_start(problem, E, r0, _branch_exponents(problem, branch))
    u0 = float(_series_u(problem, E, branch, np.array([r0]))[0])
    du0 = _series_du(problem, E, branch, r0)
    return u0, du0


# --------------------------------------------------------------------------
# sweeps


class _Workspace:
    """Per-(problem, grid) arrays shared by every sweep at any E."""

    def __init__(self, problem: RadialProblem, grid: RadialGrid):
        self.problem = problem
        self.grid = grid
        self.r = grid.radii
        self.n = grid.n_points
        self.j = grid.n_geo
        self.dx = grid.dx
        self.h = grid.h
        self.r2 = self.r * self.r
        self.sqrt_r = np.sqrt(self.r)
        self.V = np.asarray(problem.potential.evaluate(self.r), dtype=float)
        ll = problem.l * (problem.l + 1)
        self.cent = ll / self.r2
        if not problem.relativistic:
            self._fbase = self.cent + 2.0 * problem.mass * self.V
        self.n_sweeps = 0

    def f(self, E: float) -> np.ndarray:
        if self.problem.relativistic:
            m = self.problem.mass
            return m * m + self.cent - (E - self.V) ** 2
        return self._fbase - 2.0 * self.problem.mass * E

    def energy_floor(self) -> float:
        """Rigorous lower bound on plus-branch levels.

        Hardy's inequality (-u'' >= u/4r^2 for u(0) = 0) upgrades the
        centrifugal term to (l+1/2)^2, so E >= min_r [V + (l+1/2)^2/(2m r^2)].
        Unlike min(V_eff), this stays finite for every admissible singular
        potential (the bracketed term is P^2/(2m r^2) >= 0 for pure
        inverse-square tails).
        """
        if self.problem.relativistic:
            return -self.problem.mass
        lang = (self.problem.l + 0.5) ** 2 / (2.0 * self.problem.mass)
        return float(np.min(self.V + lang / self.r2))


def _start_vpair(W: _Workspace, E: float):
    problem = W.problem
    branch = _branch_for_policy(problem)
    _check_start(problem, E, W.grid.r0, _branch_exponents(problem, branch))
    rr = W.r[:2]
    u01 = _series_u(problem, E, branch, rr)
    return u01[0] / W.sqrt_r[0], u01[1] / W.sqrt_r[1]


def _sweep_out(W: _Workspace, E: float, stop: int):
    """Outward sweep over [0..stop]; returns (u, ls, nodes) in global indexing."""
    W.n_sweeps += 1
    f = W.f(E)
    n, j = W.n, W.j
    stop = min(stop, n - 1)
    u = np.empty(n)
    ls = np.empty(n)
    v0, v1 = _start_vpair(W, E)
    nodes = 1 if v0 * v1 < 0.0 else 0
    stop_a = min(stop, j)
    g = W.r2[: stop_a + 1] * f[: stop_a + 1] + 0.25
    ca = (W.dx * W.dx / 12.0) * g
    ya, lsa, na = sweep(ca, v0, v1)
    u[: stop_a + 1] = ya * W.sqrt_r[: stop_a + 1]
    ls[: stop_a + 1] = lsa
    nodes += na
    if stop > j:
        base = lsa[j]
        y0 = u[j - 1] * math.exp(lsa[j - 1] - base)
        y1 = u[j]
        cb = (W.h * W.h / 12.0) * f[j - 1 : stop + 1]
        yb, lsb, nb = sweep(cb, y0, y1)
        u[j + 1 : stop + 1] = yb[2:]
        ls[j + 1 : stop + 1] = lsb[2:] + base
        nodes += nb
    return u, ls, nodes


def _sweep_in(W: _Workspace, E: float, stop: int):
    """Inward sweep from r_max down to global index `stop`."""
    W.n_sweeps += 1
    f = W.f(E)
    n, j = W.n, W.j
    if f[-1] <= 0.0 or f[-2] <= 0.0:
        p = W.problem
        if not p.relativistic and E >= 0.0 and W.V[-1] < abs(E):
            hint = "E >= 0 is not a bound-state energy for a decaying potential"
        elif p.relativistic and abs(E) >= p.mass:
            hint = "|E| >= m is not a bound-state energy"
        else:
            hint = "r_max is not inside the classically forbidden tail"
        raise RegimeError(f"inward sweep at E={E:.6g}: f(r_max) <= 0 ({hint})")
    u = np.empty(n)
    ls = np.empty(n)
    # WKB seed pair: the inward-growing (physically decaying) branch
    y0 = 1.0
    step = min(600.0, 0.5 * W.h * (math.sqrt(f[-1]) + math.sqrt(f[-2])))
    y1 = math.exp(step)
    stop_b = max(stop, j - 1)
    cb = (W.h * W.h / 12.0) * f[stop_b:][::-1]
    yb, lsb, _ = sweep(cb, y0, y1)
    u[stop_b:] = yb[::-1]
    ls[stop_b:] = lsb[::-1]
    if stop < j - 1:
        base = ls[j]
        y0 = u[j] / W.sqrt_r[j]
        y1 = u[j - 1] / W.sqrt_r[j - 1] * math.exp(ls[j - 1] - base)
        g = W.r2[stop : j + 1] * f[stop : j + 1] + 0.25
        ca = (W.dx * W.dx / 12.0) * g[::-1]
        ya, lsa, _ = sweep(ca, y0, y1)
        m = j - stop + 1
        u[stop : j - 1] = ya[2:m][::-1] * W.sqrt_r[stop : j - 1]
        ls[stop : j - 1] = lsa[2:m][::-1] + base
    return u, ls


def _count_nodes(W: _Workspace, E: float) -> int:
    _, _, nodes = _sweep_out(W, E, W.n - 1)
    return nodes


def _log_deriv(W: _Workspace, u: np.ndarray, ls: np.ndarray, f: np.ndarray, M: int) -> float:
    if M >= W.j:  # uniform zone: stencil directly in r
        um = u[M - 1] * math.exp(ls[M - 1] - ls[M])
        u0 = u[M]
        up = u[M + 1] * math.exp(ls[M + 1] - ls[M])
        if u0 == 0.0:
            u0 = 1e-300
        du = deriv3(um, u0, up, f[M - 1], f[M], f[M + 1], W.h)
        return du / u0
    # log zone: stencil on v(x) = u/sqrt(r), then u'/u = (v'/v + 1/2)/r
    g = W.r2[M - 1 : M + 2] * f[M - 1 : M + 2] + 0.25
    vm = u[M - 1] / W.sqrt_r[M - 1] * math.exp(ls[M - 1] - ls[M])
    v0 = u[M] / W.sqrt_r[M]
    vp = u[M + 1] / W.sqrt_r[M + 1] * math.exp(ls[M + 1] - ls[M])
    if v0 == 0.0:
        v0 = 1e-300
    dv = deriv3(vm, v0, vp, g[0], g[1], g[2], W.dx)
    return (dv / v0 + 0.5) / W.r[M]


def _defect(W: _Workspace, E: float, M: int) -> float:
    f = W.f(E)
    uo, lso, _ = _sweep_out(W, E, M + 1)
    ui, lsi = _sweep_in(W, E, M - 1)
    L_out = _log_deriv(W, uo, lso, f, M)
    L_in = _log_deriv(W, ui, lsi, f, M)
    return (L_out - L_in) / (abs(L_out) + abs(L_in) + 1e-300)


def _turning_index(W: _Workspace, f: np.ndarray) -> int:
    allowed = np.nonzero(f <= 0.0)[0]
    if allowed.size == 0:
        return W.n // 2
    return int(min(max(allowed[-1], 2), W.n - 3))


def _compose(W: _Workspace, E: float, M: int):
    """Glue the outward and inward sweeps at M, fix sign, normalize."""
    f = W.f(E)
    uo, lso, _ = _sweep_out(W, E, M + 1)
    ui, lsi = _sweep_in(W, E, M - 1)
    n = W.n
    u = np.empty(n)
    with np.errstate(under="ignore"):
        u[: M + 1] = uo[: M + 1] * np.exp(lso[: M + 1] - lso[M])
        inn = ui[M:] * np.exp(lsi[M:] - lsi[M])
    if inn[0] == 0.0:
        raise SolverConvergenceError("inward sweep vanished at the matching point")
    u[M:] = inn * (u[M] / inn[0])
    first = np.nonzero(u[1:])[0]
    if first.size:
        u *= math.copysign(1.0, u[1 + first[0]])
    norm2 = float(np.trapezoid(u * u, W.r))
    if f[-1] > 0.0 and u[-1] != 0.0:
        norm2 += u[-1] ** 2 / (2.0 * math.sqrt(f[-1]))  # analytic exponential tail
    u /= math.sqrt(norm2)
    prod = u[:-1] * u[1:]
    node_count = int(np.sum(prod < 0.0))
    return u, node_count


# --------------------------------------------------------------------------
# level search


def _default_grid(problem: RadialProblem, r_max: float | None = None) -> RadialGrid:
    rm = r_max if r_max is not None else 30.0 / math.sqrt(problem.mass)
    return RadialGrid(r0=1e-7, r_max=rm, n_points=6000, n_geo=900)


def _grow_grid(grid: RadialGrid, r_max_new: float, max_points: int) -> RadialGrid:
    n_uni = grid.n_points - grid.n_geo
    scale = r_max_new / grid.r_max
    n_new = grid.n_geo + int(math.ceil(n_uni * scale))
    n_new = min(max(n_new, grid.n_points), max_points)
    return RadialGrid(r0=grid.r0, r_max=r_max_new, n_points=n_new, n_geo=grid.n_geo)


def _auto_window(W: _Workspace, n_r: int):
    """Energy window with node count <= n_r at the bottom, > n_r at the top."""
    opts = W.problem.options
    if W.problem.relativistic:
        m = W.problem.mass
        return (-m * (1.0 - 1e-12), m * (1.0 - 1e-12))
    floor = W.energy_floor()
    lo = floor - 1.0 - 0.1 * abs(floor)
    for _ in range(8):
        if _count_nodes(W, lo) <= n_r:
            break
        lo = 4.0 * lo - 1.0
    confining = W.f(0.0)[-1] > 0.0
    if confining:
        base = floor
        step = max(1.0, 1e-3 * abs(base))
        hi = base + step
        for _ in range(80):
            if _count_nodes(W, hi) > n_r:
                break
            step *= 2.0
            hi = base + step
        else:
            raise BracketError(f"could not find an upper window edge above level {n_r}")
        return (lo, hi)
    hi = -1e-6
    for _ in range(6):
        if _count_nodes(W, hi) > n_r:
            break
        hi *= 1e-2
    else:
        raise BracketError(
            f"no level with {n_r} nodes below E = {hi:.3g}: the potential appears "
            f"to bind only {_count_nodes(W, hi)} state(s) on this grid",
            counts=(_count_nodes(W, lo), _count_nodes(W, hi)),
        )
    return (lo, hi)


def _bisect_nodes(W: _Workspace, n_r: int, window, history) -> tuple[float, float]:
    opts = W.problem.options
    lo, hi = float(window[0]), float(window[1])
    c_lo = _count_nodes(W, lo)
    c_hi = _count_nodes(W, hi)
    history.append(("window", lo, c_lo))
    history.append(("window", hi, c_hi))
    if not (c_lo <= n_r < c_hi):
        raise BracketError(
            f"window ({lo:.6g}, {hi:.6g}) has node counts ({c_lo}, {c_hi}) and "
            f"cannot bracket the level with {n_r} nodes",
            counts=(c_lo, c_hi),
        )
    for _ in range(opts.max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= max(4.0 * opts.tol_E, 1e-7 * (abs(lo) + abs(hi))):
            break
        c = _count_nodes(W, mid)
        history.append(("bisect", mid, c))
        if c <= n_r:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _refine_defect(W: _Workspace, lo: float, hi: float, history) -> tuple[float, float, int]:
    """Brent refinement of the matching defect inside a node-tight bracket."""
    opts = W.problem.options
    f_mid = W.f(0.5 * (lo + hi))
    M = _turning_index(W, f_mid)
    d_lo = _defect(W, lo, M)
    d_hi = _defect(W, hi, M)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    grow = 0
    while d_lo * d_hi > 0.0 and grow < 8:
        # The defect zero sits a little outside the node bracket (residual
        # finite-domain displacement); widen geometrically around its center.
        half *= 3.0
        lo = mid - half
        hi = mid + half
        d_lo = _defect(W, lo, M)
        d_hi = _defect(W, hi, M)
        grow += 1
    if d_lo == 0.0:
        return lo, 0.0, M
    if d_hi == 0.0:
        return hi, 0.0, M
    if d_lo * d_hi > 0.0:
        raise SolverConvergenceError(
            f"matching defect does not change sign over ({lo:.9g}, {hi:.9g})",
            history=history,
        )
    E = float(
        brentq(
            lambda e: _defect(W, e, M),
            lo,
            hi,
            xtol=max(opts.tol_E * 1e-2, 1e-15),
            rtol=8.9e-16,
            maxiter=opts.max_iter,
        )
    )
    D = _defect(W, E, M)
    history.append(("brent", E, D))
    if abs(D) > opts.tol_match:
        raise SolverConvergenceError(
            f"refined defect {D:.3g} exceeds tol_match {opts.tol_match:.3g}",
            history=history,
        )
    return E, D, M


def _tail_target(W: _Workspace, E: float) -> float | None:
    """New r_max if the tail beyond the turning point is too short, else None."""
    opts = W.problem.options
    f = W.f(E)
    allowed = np.nonzero(f <= 0.0)[0]
    i_t = int(allowed[-1]) if allowed.size else 0
    r_t = W.r[i_t]
    kappa = np.sqrt(np.clip(f[i_t:], 0.0, None))
    efolds = float(np.trapezoid(kappa, W.r[i_t:]))
    if efolds >= opts.efolds and W.grid.r_max >= 3.0 * r_t:
        return None
    return max(3.0 * r_t, 1.5 * W.grid.r_max)


def _solve_standard(problem: RadialProblem, n_r: int) -> Level:
    grid = problem.grid or _default_grid(problem)
    auto_grid = problem.grid is None
    history: list = []
    for _ in range(10):
        W = _Workspace(problem, grid)
        try:
            window = problem.energy_window or _auto_window(W, n_r)
            if W.f(window[0])[-1] <= 0.0:
                raise RegimeError(
                    f"energy window ({window[0]:.6g}, {window[1]:.6g}) lies in the "
                    f"continuum: no decaying tail at r_max = {grid.r_max:.6g} even "
                    "at its lower edge"
                )
            lo, hi = _bisect_nodes(W, n_r, window, history)
        except BracketError as exc:
            # A box that truncates the outer lobes undercounts nodes near the
            # window top; give shallow levels room before giving up.  A count
            # already above n_r at the bottom cannot be cured by more room.
            retryable = exc.counts is not None and exc.counts[1] <= n_r
            if retryable and auto_grid and grid.n_points < problem.options.max_points:
                grid = _grow_grid(grid, 2.0 * grid.r_max, problem.options.max_points)
                history.append(("regrid", grid.r_max, grid.n_points))
                continue
            raise
        if auto_grid:
            # Refine only once the decaying tail is long enough; until then
            # the node bracket marks a finite-domain level displaced from
            # the defect zero.
            target = _tail_target(W, 0.5 * (lo + hi))
            if target is not None:
                grid = _grow_grid(grid, target, problem.options.max_points)
                history.append(("regrid", grid.r_max, grid.n_points))
                continue
        E, D, M = _refine_defect(W, lo, hi, history)
        break
    else:  # pragma: no cover - ten regrids without a stable bracket
        raise SolverConvergenceError(
            "grid growth did not stabilize the level bracket", history=history
        )
    u, node_count = _compose(W, E, M)
    if node_count != n_r:
        raise SolverConvergenceError(
            f"converged state has {node_count} nodes, expected {n_r}", history=history
        )
    return Level(
        n_r=n_r,
        E=E,
        match_defect=D,
        node_count=node_count,
        r=W.r,
        u=u,
        grid=grid,
        iterations=W.n_sweeps,
        history=tuple(history[-40:]),
    )


def _kg_scan_energies(problem: RadialProblem, window) -> np.ndarray:
    """Defect/node scan samples over (-m, m), clustered toward both edges.

    A uniform scan alone can put several near-threshold levels in one cell
    (they accumulate at |E| = m like a Rydberg series), so geometric ladders
    approaching each edge are merged in.
    """
    m = problem.mass
    k = max(problem.options.scan_points, 16)
    lo, hi = window
    uniform = np.linspace(lo, hi, k)
    deltas = np.geomspace(1e-9 * m, 1.9999 * m, 48)
    edges = np.concatenate([m - deltas, -m + deltas])
    es = np.concatenate([uniform, edges, [lo, hi]])
    es = es[(es >= lo) & (es <= hi)]
    return np.unique(es)


def _solve_kg(problem: RadialProblem, n_r: int) -> Level:
    m = problem.mass
    cap = (-m * (1.0 - 1e-12), m * (1.0 - 1e-12))
    if problem.energy_window is not None:
        lo = max(problem.energy_window[0], cap[0])
        hi = min(problem.energy_window[1], cap[1])
        if not lo < hi:
            raise BracketError(f"energy window {problem.energy_window!r} lies outside (-m, m)")
        window = (lo, hi)
    else:
        window = cap
    grid = problem.grid or _default_grid(problem)
    auto_grid = problem.grid is None
    history: list = []
    for _ in range(10):
        W = _Workspace(problem, grid)
        es = _kg_scan_energies(problem, window)
        counts = [_count_nodes(W, e) for e in es]
        bracket = None
        for k in range(1, len(es)):
            if counts[k - 1] <= n_r < counts[k]:
                bracket = (es[k - 1], es[k])
                break
        if bracket is None:
            if auto_grid and grid.n_points < problem.options.max_points and max(counts) <= n_r:
                # undercounting from a truncating box, not absence of the level
                grid = _grow_grid(grid, 2.0 * grid.r_max, problem.options.max_points)
                history.append(("regrid", grid.r_max, grid.n_points))
                continue
            raise BracketError(
                f"no node-count transition through {n_r} over ({window[0]:.6g}, "
                f"{window[1]:.6g}); observed counts {min(counts)}..{max(counts)}",
                counts=(min(counts), max(counts)),
            )
        lo, hi = _bisect_nodes(W, n_r, bracket, history)
        if auto_grid:
            target = _tail_target(W, 0.5 * (lo + hi))
            if target is not None:
                grid = _grow_grid(grid, target, problem.options.max_points)
                history.append(("regrid", grid.r_max, grid.n_points))
                continue
        E, D, M = _refine_defect(W, lo, hi, history)
        break
    else:  # pragma: no cover - ten regrids without a stable bracket
        raise SolverConvergenceError(
            "grid growth did not stabilize the level bracket", history=history
        )
    u, node_count = _compose(W, E, M)
    if node_count != n_r:
        raise SolverConvergenceError(
            f"converged state has {node_count} nodes, expected {n_r}", history=history
        )
    return Level(
        n_r=n_r, E=E, match_defect=D, node_count=node_count, r=W.r, u=u,
        grid=grid, iterations=W.n_sweeps, history=tuple(history[-40:]),
    )


def _sae_grid(problem: RadialProblem, E: float) -> RadialGrid:
    kappa = math.sqrt(-2.0 * problem.mass * E)
    r_max = (0.5 + problem.options.efolds + 7.0) / kappa
    r0 = min(1e-7, 1e-7 / kappa)
    return RadialGrid(r0=r0, r_max=r_max, n_points=4000, n_geo=800)


def _solve_scan(problem: RadialProblem, n_r: int) -> Level:
    """Defect sign-scan search for admixed (MixedSAE, theta != 0) starts.

    Node-counted bisection needs a monotone count, which an admixed start
    does not guarantee, so this path scans the matching defect directly.
    Grids are re-sized per sample (the natural length is 1/kappa), then the
    bracket is refined on one fixed grid.
    """
    opts = problem.options
    pol = problem.policy
    e_scale = 1.0 / (problem.mass * pol.L * pol.L)
    window = problem.energy_window or (-1e6 * e_scale, -1e-6 * e_scale)
    lo, hi = window
    if hi >= 0.0 or lo >= hi:
        raise BracketError(f"scan window ({lo:.3g}, {hi:.3g}) must be negative and increasing")
    decades = math.log10(lo / hi)
    n_scan = max(opts.scan_points, int(8 * decades) + 1)
    es = -np.geomspace(-lo, -hi, n_scan)  # deep to shallow
    history: list = []
    samples = []
    for e in es:
        grid = problem.grid or _sae_grid(problem, float(e))
        W = _Workspace(problem, grid)
        M = _turning_index(W, W.f(float(e)))
        d = _defect(W, float(e), M)
        samples.append((float(e), d))
    found = []
    for k in range(1, len(samples)):
        e_a, d_a = samples[k - 1]
        e_b, d_b = samples[k]
        if d_a == 0.0 or d_a * d_b >= 0.0:
            continue
        e_mid = -math.sqrt(e_a * e_b)
        grid = problem.grid or _sae_grid(problem, e_mid)
        W = _Workspace(problem, grid)
        M = _turning_index(W, W.f(e_mid))
        a, b = e_a, e_b
        d_fa = _defect(W, a, M)
        d_fb = _defect(W, b, M)
        if d_fa * d_fb > 0.0:
            # bracket did not survive the grid change; widen one sample each way
            a = samples[max(0, k - 2)][0]
            b = samples[min(len(samples) - 1, k + 1)][0]
            d_fa = _defect(W, a, M)
            d_fb = _defect(W, b, M)
            if d_fa * d_fb > 0.0:
                continue
        E = float(
            brentq(lambda e: _defect(W, e, M), a, b,
                   xtol=max(opts.tol_E * 1e-2, 1e-15), rtol=8.9e-16, maxiter=opts.max_iter)
        )
        D = _defect(W, E, M)
        if abs(D) > opts.tol_match:
            continue
        history.append(("scan-root", E, D))
        u, node_count = _compose(W, E, M)
        found.append(Level(
            n_r=node_count, E=E, match_defect=D, node_count=node_count, r=W.r, u=u,
            grid=grid, iterations=W.n_sweeps, history=tuple(history[-40:]),
        ))
    for lv in found:
        if lv.n_r == n_r:
            return lv
    raise BracketError(
        f"no level with {n_r} nodes in the scan window ({lo:.3g}, {hi:.3g}); "
        f"defect roots found: {[round(l.E, 6) for l in found]}"
    )


def find_level(problem: RadialProblem, n_r: int) -> Level:
    """Energy and normalized wavefunction of the level with n_r interior nodes."""
    if n_r < 0:
        raise ValueError("n_r must be >= 0")
    if isinstance(problem.policy, MixedSAE) and problem.policy.theta != 0.0:
        return _solve_scan(problem, n_r)
    if problem.relativistic:
        return _solve_kg(problem, n_r)
    return _solve_standard(problem, n_r)


def spectrum(problem: RadialProblem, n_levels: int) -> EigenResult:
    """Levels n_r = 0 .. n_levels-1; missing levels are reported absent.

    The whole operation fails only if the ground level fails.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    levels = []
    absent = {}
    for n_r in range(n_levels):
        try:
            levels.append(find_level(problem, n_r))
        except (BracketError, RegimeError, SolverConvergenceError) as exc:
            if n_r == 0:
                raise
            absent[n_r] = f"{type(exc).__name__}: {exc}"
    energies = [lv.E for lv in levels]
    if any(b <= a for a, b in zip(energies, energies[1:])):
        raise SolverConvergenceError(f"levels not strictly increasing: {energies}")
    meta = {
        "policy": _policy_dict(problem.policy),
        "relativistic": problem.relativistic,
        "mass": problem.mass,
        "l": problem.l,
        "potential": problem.potential.to_dict(),
        "grids": [lv.grid.to_dict() for lv in levels],
        "iterations": [lv.iterations for lv in levels],
        "absent": absent,
    }
    return EigenResult(levels=tuple(levels), metadata=meta)


def _policy_dict(policy: BoundaryPolicy) -> dict:
    if isinstance(policy, DirichletOrigin):
        return {"variant": "dirichlet"}
    if isinstance(policy, L2Only):
        return {"variant": "l2only"}
    return {"variant": "sae", "theta": policy.theta, "L": policy.L}


# --------------------------------------------------------------------------
# inverse-square SAE demonstration and its closed-form cross-check


def sae_bound_state(g: float, l: int, mass: float, theta: float, L: float = 1.0,
                    options: SolverOptions | None = None):
    """The MixedSAE bound state of V = g/r^2, or None for theta = 0.

    theta = 0 restores the pure a_plus start, which for a scale-invariant
    potential admits no bound state at all.  Any theta in (0, pi) breaks the
    scale invariance through L and supports exactly one level.
    """
    from .potentials import InverseSquare

    problem = RadialProblem(
        mass=mass, l=l, potential=InverseSquare(g),
        policy=MixedSAE(theta=theta, L=L),
        options=options or _DEFAULT_OPTIONS,
    )
    if theta == 0.0:
        return None
    try:
        return find_level(problem, 0)
    except BracketError:
        return None


def sae_oracle_kappa(P: float, theta: float, L: float = 1.0) -> float | None:
    """Decay constant from the small-argument expansion of sqrt(r) K_P(kappa r).

    Matching K_P's two leading powers to the prescribed admixture gives
    c2/c1 = -Gamma(1+P) / Gamma(1-P) * (kappa/2)^(-2P) = -tan(theta/2) L^(2P),
    hence kappa = (2/L) [Gamma(1+P) / (Gamma(1-P) tan(theta/2))]^(1/(2P)).
    For the degenerate P = 0 pair, matching against K_0(z) = -ln(z/2) - gamma
    gives kappa = (2/L) exp(cot(theta) - gamma) instead.
    """
    if theta == 0.0:
        return None
    if P == 0.0:
        return (2.0 / L) * math.exp(1.0 / math.tan(theta) - EULER_GAMMA)
    t = math.tan(0.5 * theta)
    return (2.0 / L) * (_gamma(1.0 + P) / (_gamma(1.0 - P) * t)) ** (1.0 / (2.0 * P))


def sae_oracle_energy(P: float, theta: float, mass: float = 1.0, L: float = 1.0) -> float | None:
    kappa = sae_oracle_kappa(P, theta, L)
    if kappa is None:
        return None
    return -kappa * kappa / (2.0 * mass)


def kg_effective(problem: RadialProblem, E: float):
    """Coefficient function Q(r; E) with u'' + Q u = 0 in relativistic mode."""
    if not problem.relativistic:
        raise ValueError("kg_effective applies to relativistic problems only")
    m = problem.mass
    ll = problem.l * (problem.l + 1)
    pot = problem.potential

    def Q(r):
        r = np.asarray(r, dtype=float)
        return (E - pot.evaluate(r)) ** 2 - m * m - ll / (r * r)

    return Q
