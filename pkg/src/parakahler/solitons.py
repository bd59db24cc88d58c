"""Equivariant self-similar solutions of mean curvature flow in D^n.

A profile curve gamma(s) = p tau^q r(s) e^{tau phi(s)} lifts to an
equivariant Lagrangian; the self-similar equation H + lambda F_perp = 0
(with H the un-normalized trace of the second fundamental form, the
convention used throughout this module) reduces to planar systems in
(r, alpha), alpha = theta - phi being the angle of gammadot relative to
gamma:

    definite   (gamma, gammadot same causal type):
        rdot = cosh(alpha),  alphadot = (-n/r + l' r) sinh(alpha),
        phidot = sinh(alpha) / r
    lorentzian (opposite causal types):
        rdot = sinh(alpha),  alphadot = (-n/r + l' r) cosh(alpha),
        phidot = cosh(alpha) / r

with l' = eps * lambda, eps the causal sign of gamma.  Each system conserves

    E(r, alpha) = r^n exp(-l' r^2 / 2) * (sinh alpha | cosh alpha).

The Lorentzian system with l' > 0 has the critical point
(r0, 0) = (sqrt(n/l'), 0); the energy there,

    E0 = (n / l')^(n/2) * exp(-n/2),

separates bounded from unbounded trajectories.  Integration uses an
embedded 4th/5th-order Runge-Kutta pair with the energy drift as an
independent acceptance gate; conservation, not the step estimator, is the
ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .dcore import d_exp_tau, d_grading2
from .dlinalg import apply_J, metric
from .equivariant import ProfileCurve, lift
from .errors import (
    IntegrandSingular,
    InvalidCase,
    InvalidRange,
    NonpositiveRadius,
    StepFailure,
)
from .geometry import (
    SampledImmersion,
    induced_metric,
    jet,
    mean_curvature,
    position_normal_part,
)

CASES = ("definite", "lorentzian")

R_MIN = 1e-6
R_MAX = 1e6
# Both the r -> 0 collapse and the alpha blow-up happen at finite s; past
# alpha ~ 30 the remaining s-interval shrinks under an ulp and no event can
# be localized, so the cap stops integration while s is still resolvable.
ALPHA_MAX = 30.0
DRIFT_TOL = 1e-8


@dataclass(frozen=True)
class SolitonParams:
    n: int
    lambda_prime: float
    case: str

    def __post_init__(self):
        if self.n < 2:
            raise InvalidRange("need n >= 2")
        if self.case not in CASES:
            raise InvalidCase(f"case must be one of {CASES}, got {self.case!r}")


@dataclass(frozen=True)
class SolitonState:
    r: float
    alpha: float
    phi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.alpha, self.phi])


def vector_field(state: SolitonState, params: SolitonParams):
    """(dr/ds, dalpha/ds, dphi/ds) at a state with r > 0."""
    if state.r <= 0.0:
        raise NonpositiveRadius(f"r = {state.r}")
    return tuple(_rhs(state.as_array(), params))


def _rhs(y, params):
    r, a = y[0], y[1]
    coeff = -params.n / r + params.lambda_prime * r
    if params.case == "definite":
        return np.array([math.cosh(a), coeff * math.sinh(a), math.sinh(a) / r])
    return np.array([math.sinh(a), coeff * math.cosh(a), math.cosh(a) / r])


def radial_weight(r: float, params: SolitonParams) -> float:
    """g(r) = r^n exp(-l' r^2 / 2), the radial factor of the first integral."""
    return r ** params.n * math.exp(-params.lambda_prime * r * r / 2.0)


def first_integral(state: SolitonState, params: SolitonParams) -> float:
    """Conserved energy: g(r) sinh(alpha) (definite) or g(r) cosh(alpha)."""
    if state.r <= 0.0:
        raise NonpositiveRadius(f"r = {state.r}")
    g = radial_weight(state.r, params)
    return g * (math.sinh(state.alpha) if params.case == "definite"
                else math.cosh(state.alpha))


def critical_point(params: SolitonParams) -> SolitonState:
    if params.case != "lorentzian" or params.lambda_prime <= 0.0:
        raise InvalidCase("critical point exists only for lorentzian, lambda' > 0")
    return SolitonState(math.sqrt(params.n / params.lambda_prime), 0.0, 0.0)


def energy_threshold(params: SolitonParams) -> float:
    """E0 = (n/l')^(n/2) exp(-n/2), the first integral at the critical point."""
    cp = critical_point(params)
    return first_integral(cp, params)


@dataclass
class Trajectory:
    params: SolitonParams
    s: np.ndarray            # (k,), ascending
    states: np.ndarray       # (k, 3) rows (r, alpha, phi)
    E0: float
    max_E_drift: float
    accepted: bool
    stop_reason: str
    classification: str | None = None
    _branches: tuple = field(default=(), repr=False)

    @property
    def r(self):
        return self.states[:, 0]

    @property
    def alpha(self):
        return self.states[:, 1]

    @property
    def phi(self):
        return self.states[:, 2]

    def sample(self, svals) -> np.ndarray:
        """Dense-output interpolation of (r, alpha, phi) at given s values."""
        svals = np.atleast_1d(np.asarray(svals, dtype=float))
        out = np.empty((svals.size, 3))
        for i, sv in enumerate(svals):
            hit = None
            for direction, sol, t_end in self._branches:
                t = direction * sv
                if -1e-12 <= t <= t_end * (1 + 1e-12):
                    hit = sol(min(max(t, 0.0), t_end))
                    break
            if hit is None:
                raise InvalidRange(f"s = {sv} outside the integrated span")
            out[i] = hit
        return out


def _drift(params, states, E0):
    E = np.array([first_integral(SolitonState(*st), params) for st in states])
    scale = max(abs(E0), radial_weight(states[0, 0], params), 1e-300)
    return float(np.max(np.abs(E - E0))) / scale


def integrate(initial: SolitonState, params: SolitonParams, s_max: float, *,
              rtol: float = 1e-10, atol: float = 1e-12,
              r_min: float = R_MIN, r_max: float = R_MAX,
              alpha_max: float = ALPHA_MAX, drift_tol: float = DRIFT_TOL,
              r_singular: float = 1e-3, direction: int = 1) -> Trajectory:
    """Integrate the reduced system from an initial state.

    Embedded RK45 with adaptive steps; stops at s_max, at r <= r_min,
    r >= r_max, or |alpha| >= alpha_max (past which cosh overflows and the
    trajectory is in its asymptotic blow-up).  Per-step energies are
    recorded; the trajectory is accepted only if the max relative drift is
    below drift_tol.

    An r -> 0 end is reached at a finite parameter value s*; the remaining
    s-interval below r ~ 1e-4 is smaller than an ulp of s*, so the step size
    underflows there before r can reach a tiny r_min.  Underflow with
    r < r_singular is therefore reported as the stop "r_singular"; underflow
    anywhere else raises StepFailure.

    In the definite case with a decaying angle the energy g(r) sinh(alpha)
    pairs an exploding factor with a collapsing one; once |alpha| reaches
    alpha_min ~ atol/drift_tol the product is no longer resolvable in
    doubles and integration stops with "alpha_floor" (the event also needs
    |dalpha/ds| small, so a transversal zero crossing of alpha never
    triggers it).
    """
    if initial.r <= r_min:
        raise InvalidRange(f"initial r = {initial.r} must exceed r_min = {r_min}")

    def rhs(t, y):
        r = y[0] if y[0] > 1e-300 else 1e-300
        a = min(max(y[1], -745.0), 745.0)  # keep cosh/sinh finite in trials
        coeff = -params.n / r + params.lambda_prime * r
        if params.case == "definite":
            return [direction * math.cosh(a), direction * coeff * math.sinh(a),
                    direction * math.sinh(a) / r]
        return [direction * math.sinh(a), direction * coeff * math.cosh(a),
                direction * math.cosh(a) / r]

    def ev_rmin(t, y):
        return y[0] - r_min

    def ev_rmax(t, y):
        return y[0] - r_max

    def ev_alpha(t, y):
        return alpha_max - abs(y[1])

    alpha_min = 1e-5
    events = [ev_rmin, ev_rmax, ev_alpha]
    names = ["r_min", "r_max", "alpha_max"]
    if params.case == "definite" and abs(initial.alpha) > alpha_min:
        def ev_afloor(t, y):
            coeff = -params.n / max(y[0], 1e-300) + params.lambda_prime * y[0]
            da = coeff * math.sinh(min(max(y[1], -745.0), 745.0))
            return abs(y[1]) + abs(da) - alpha_min

        events.append(ev_afloor)
        names.append("alpha_floor")
    for ev in events:
        ev.terminal = True
    sol = solve_ivp(rhs, (0.0, s_max), initial.as_array(),
                    method="RK45", rtol=rtol, atol=atol,
                    events=events, dense_output=True)
    if sol.status == -1:
        if sol.y.size and sol.y[0, -1] < r_singular:
            stop = "r_singular"
        elif sol.y.size and abs(sol.y[1, -1]) > 10.0:
            stop = "alpha_blowup"
        else:
            raise StepFailure(sol.message)
    elif sol.status == 1:
        fired = [name for name, te in zip(names, sol.t_events) if te.size]
        stop = fired[0]
    else:
        stop = "s_max"
    s = direction * sol.t
    states = sol.y.T
    order = np.argsort(s)
    s, states = s[order], states[order]
    E0 = first_integral(initial, params)
    drift = _drift(params, states, E0)
    return Trajectory(params, s, states, E0, drift, drift < drift_tol, stop,
                      _branches=((direction, sol.sol, float(sol.t[-1])),))


def integrate_bidirectional(initial: SolitonState, params: SolitonParams,
                            s_max: float, **kw) -> Trajectory:
    """Integrate forward and backward from s = 0 and merge."""
    fwd = integrate(initial, params, s_max, direction=1, **kw)
    bwd = integrate(initial, params, s_max, direction=-1, **kw)
    s = np.concatenate([bwd.s[:-1], fwd.s])
    states = np.concatenate([bwd.states[:-1], fwd.states])
    drift = max(fwd.max_E_drift, bwd.max_E_drift)
    return Trajectory(params, s, states, fwd.E0, drift,
                      fwd.accepted and bwd.accepted,
                      f"{bwd.stop_reason}/{fwd.stop_reason}",
                      _branches=bwd._branches + fwd._branches)


def classify(traj: Trajectory, tol: float = 1e-9) -> str:
    """Tag a trajectory per the phase-portrait taxonomy.

    Lorentzian with l' > 0 splits on the threshold energy: below it, orbits
    stay on one side of r0 (subcritical inner/outer); at or above it they run
    from r -> 0 to r -> infinity.  Lorentzian l' <= 0 orbits have two r -> 0
    ends; all definite orbits expand (rdot = cosh >= 1).
    """
    p = traj.params
    if p.case == "definite":
        tag = "definite_expanding"
    elif p.lambda_prime <= 0.0:
        tag = "nonpositive_lambda"
    else:
        r0 = math.sqrt(p.n / p.lambda_prime)
        if (np.max(np.abs(traj.r - r0)) < 1e-6 * r0
                and np.max(np.abs(traj.alpha)) < 1e-6):
            tag = "critical_point"
        elif traj.E0 < energy_threshold(p) * (1.0 - 1e-12):
            if np.all(traj.r < r0):
                tag = "subcritical_inner"
            elif np.all(traj.r > r0):
                tag = "subcritical_outer"
            else:
                tag = "unclassified"
        else:
            tag = "supercritical"
    traj.classification = tag
    return tag


# ---------------------------------------------------------------------------
# phi quadrature
# ---------------------------------------------------------------------------

def _log_weight(rho, params):
    return params.n * np.log(rho) - params.lambda_prime * rho * rho / 2.0


def _lorentz_radicand(rho, E, params):
    t = np.exp(_log_weight(rho, params)) / abs(E)
    return (1.0 - t) * (1.0 + t)


def turning_radius(E: float, params: SolitonParams, side: str) -> float:
    """Radius where g(r) = |E| on the requested monotone branch of g.

    side = "below"/"above" refers to the peak radius sqrt(n/l') for l' > 0;
    for l' <= 0, g is increasing and the side is ignored.
    """
    target = math.log(abs(E))

    def f(rho):
        return _log_weight(rho, params) - target

    if params.lambda_prime > 0.0:
        peak = math.sqrt(params.n / params.lambda_prime)
        if f(peak) < 0.0:
            raise IntegrandSingular("|E| exceeds the peak of g; no turning radius")
        if side == "below":
            lo = peak
            while f(lo) > 0.0:
                lo /= 2.0
            return brentq(f, lo, peak, xtol=1e-14)
        hi = peak
        while f(hi) > 0.0:
            hi *= 2.0
        return brentq(f, peak, hi, xtol=1e-14)
    lo, hi = 1e-12, 1.0
    while f(hi) < 0.0:
        hi *= 2.0
    return brentq(f, lo, hi, xtol=1e-14)


def phi_quadrature(r_from: float, r_to: float, E: float,
                   params: SolitonParams, turn_eps: float = 1e-9) -> float:
    """phi(r_to) - phi(r_from) along a monotone-r stretch of a trajectory.

    definite:   dphi/dr = sign(E) / (rho sqrt(g^2/E^2 + 1)); smooth.
    lorentzian: dphi/dr = +-1 / (rho sqrt(1 - g^2/E^2)); phi increases along
    the trajectory regardless of the direction of r, so the result is the
    positive integral over [min r, max r].  A vanishing radicand at an
    endpoint is a turning point and is handled by substituting
    rho = rho_turn -+ u^2, which removes the 1/sqrt singularity; a radicand
    vanishing strictly inside the range raises IntegrandSingular.
    """
    if E == 0.0:
        raise InvalidCase("quadrature needs E != 0")
    if r_from == r_to:
        return 0.0
    lo, hi = min(r_from, r_to), max(r_from, r_to)
    if lo <= 0.0:
        raise NonpositiveRadius(f"r = {lo}")

    if params.case == "definite":
        lE = math.log(abs(E))

        def integ(rho):
            lt = _log_weight(rho, params) - lE
            if lt > 300.0:  # integrand ~ e^{-lt}/rho; avoid exp overflow
                return math.exp(-lt) / rho
            t = math.exp(lt)
            return 1.0 / (rho * math.sqrt(t * t + 1.0))

        val, _ = quad(integ, r_from, r_to, epsabs=1e-12, epsrel=1e-12, limit=200)
        return math.copysign(1.0, E) * val

    if E < 0.0:
        raise InvalidCase("lorentzian energies are positive")

    def integ(rho):
        rad = _lorentz_radicand(rho, E, params)
        return 1.0 / (rho * np.sqrt(np.maximum(rad, 1e-300)))

    rad_lo = _lorentz_radicand(lo, E, params)
    rad_hi = _lorentz_radicand(hi, E, params)
    if params.lambda_prime > 0.0:
        peak = math.sqrt(params.n / params.lambda_prime)
        if lo < peak < hi and _lorentz_radicand(peak, E, params) < -turn_eps:
            raise IntegrandSingular("range spans the forbidden band around the peak")
    interior_bad = min(rad_lo, rad_hi) < -1e-6
    pieces = []
    a, b = lo, hi
    if rad_hi <= turn_eps:
        side = "below" if (params.lambda_prime <= 0.0
                           or hi <= math.sqrt(params.n / params.lambda_prime) * (1 + 1e-9)) else "above"
        rho_t = turning_radius(E, params, side)
        if abs(rho_t - hi) > 1e-6 * max(hi, 1.0) and rad_hi < -turn_eps:
            raise IntegrandSingular(
                f"radicand negative at r = {hi}, turning point at {rho_t}")
        w = min(0.3 * (hi - lo), 0.5 * rho_t)
        pieces.append(_sub_integral(rho_t, w, E, params, upper=True))
        b = rho_t - w
    if rad_lo <= turn_eps:
        side = "above" if (params.lambda_prime > 0.0
                           and lo >= math.sqrt(params.n / params.lambda_prime) * (1 - 1e-9)) else "below"
        rho_t = turning_radius(E, params, side)
        if abs(rho_t - lo) > 1e-6 * max(lo, 1.0) and rad_lo < -turn_eps:
            raise IntegrandSingular(
                f"radicand negative at r = {lo}, turning point at {rho_t}")
        w = min(0.3 * (hi - lo), 0.5 * rho_t)
        pieces.append(_sub_integral(rho_t, w, E, params, upper=False))
        a = rho_t + w
    if interior_bad and not pieces:
        raise IntegrandSingular("radicand negative inside the quadrature range")
    if b > a:
        val, _ = quad(integ, a, b, epsabs=1e-11, epsrel=1e-11, limit=200)
        pieces.append(val)
    return float(sum(pieces))


def _sub_integral(rho_t, w, E, params, upper: bool):
    """Integral of the Lorentzian integrand over the w-slice ending at the
    turning radius, via rho = rho_t -+ u^2."""

    def integ(u):
        rho = rho_t - u * u if upper else rho_t + u * u
        rad = _lorentz_radicand(rho, E, params)
        return 2.0 * u / (rho * np.sqrt(np.maximum(rad, 1e-300)))

    val, _ = quad(integ, 0.0, math.sqrt(w), epsabs=1e-11, epsrel=1e-11, limit=200)
    return val


# ---------------------------------------------------------------------------
# Profile reconstruction and the ambient residual
# ---------------------------------------------------------------------------

def reconstruct_profile(traj: Trajectory, count: int = 201, q: int = 0,
                        p: int = 1, s_lo: float | None = None,
                        s_hi: float | None = None) -> ProfileCurve:
    """gamma(s) = p tau^q r(s) e^{tau phi(s)} on a uniform s-grid.

    With q = 0 the reconstructed curve is spacelike (eps = +1) and the
    trace-convention ambient equation holds with lambda = lambda'.
    """
    s_lo = float(traj.s[0]) if s_lo is None else s_lo
    s_hi = float(traj.s[-1]) if s_hi is None else s_hi

    def fn(svals):
        st = traj.sample(np.asarray(svals, dtype=float).ravel())
        g = st[:, 0, None] * d_exp_tau(st[:, 2])
        if q:
            g = g[..., ::-1]
        g = p * g
        return g.reshape(np.shape(svals) + (2,))

    s = np.linspace(s_lo, s_hi, count)
    return ProfileCurve(s, fn(s), family="soliton", fn=fn)


def hyperbola_solution(params: SolitonParams, branch: str = "spacelike",
                       s_lo: float = -1.0, s_hi: float = 1.0,
                       count: int = 201, p: int = 1) -> ProfileCurve:
    """Constant-(r, alpha) profile through the Lorentzian critical point.

    spacelike: gamma(s) = +-r0 (cosh(s/r0), sinh(s/r0)), <gamma,gamma> = r0^2;
    timelike:  gamma(s) = +-r0 (sinh(s/r0), cosh(s/r0)), <gamma,gamma> = -r0^2.
    Which of the two satisfies the shrinker (lambda > 0) versus expander
    (lambda < 0) ambient equation is decided numerically by ambient_residual.
    """
    cp = critical_point(params)
    r0 = cp.r
    if branch not in ("spacelike", "timelike"):
        raise InvalidCase(f"unknown branch {branch!r}")

    def fn(s):
        s = np.asarray(s, dtype=float)
        g = r0 * d_exp_tau(s / r0)
        if branch == "timelike":
            g = g[..., ::-1]
        return p * g

    s = np.linspace(s_lo, s_hi, count)
    return ProfileCurve(s, fn(s), family="soliton", fn=fn)


def ambient_residual(curve: ProfileCurve, n: int, lam: float,
                     sphere_counts=None, nodes: Sequence | None = None):
    """Per-node grading norm of H_trace + lambda F_perp on the lift.

    H_trace = m * (mean curvature); F_perp is the metric-normal part of the
    position vector.  When nodes is None, a sample of non-degenerate interior
    nodes is used (degenerate ones are skipped).  Returns (nodes, residuals).
    """
    imm = lift(curve, n, sphere_counts)
    if nodes is None:
        nodes = _sample_nodes(imm)
    tested, residuals = [], []
    for node in nodes:
        im = induced_metric(imm, node)
        if im.degenerate:
            continue
        H_tr = imm.m * mean_curvature(imm, node)
        Fp = position_normal_part(imm, node)
        res = H_tr + lam * Fp
        tested.append(node)
        residuals.append(float(np.sqrt(np.sum(d_grading2(res)))))
    return tested, np.array(residuals)


def normal_component_residuals(imm: SampledImmersion, node, lam: float) -> np.ndarray:
    """Components <H_trace + lambda F_perp, J d_iF> of the ambient equation.

    On equivariant lifts only the i = 0 (profile) component is nontrivial;
    the sphere components vanish to discretization order, which is the
    reduction of the ambient system to a scalar equation.
    """
    jt = jet(imm, node)
    H_tr = imm.m * mean_curvature(imm, node)
    Fp = position_normal_part(imm, node)
    res = H_tr + lam * Fp
    return np.array([metric(res, apply_J(jt.first[i])) for i in range(imm.m)])


def _sample_nodes(imm: SampledImmersion, per_axis: int = 3):
    picks = []
    for a in imm.axes:
        lo = 0 if a.periodic else 2
        hi = a.count - 1 if a.periodic else a.count - 3
        idx = np.unique(np.linspace(lo, hi, per_axis).astype(int))
        picks.append(list(idx))
    import itertools as _it
    return list(_it.product(*picks))
