"""Quantitative non-concentration bounds and their verification reports.

The central inequality bounds the spectral mass of a window just below a
point x >= w_min: with an r-net of density eps_net removed, s moment rounds,
tail mass delta_top above x, and degree cap Delta,

    mu[(1-theta) x, x]  <=  (1-theta)^{-2s} (1 - (w_min/x)^{2r})^{s/r}
                            + 2 delta_top Delta^{2(s+2)} + 2 eps_net.

``finite_param_check`` measures the left side on an actual spectrum and
evaluates the right side from an actual net.  ``thm_checker`` wires in the
parameter schedules behind the headline rates (1/log(1/theta) in general, a
power of theta on expanders) and reports the implied constant, never
asserting any absolute constant.  ``interlacing_check`` verifies the
finite-graph eigenvalue-count stability under vertex deletion or row/column
zeroing that the transfer arguments rely on.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import (
    GraphError,
    VertexSet,
    WeightedGraph,
    build_graph,
    delete_vertices,
    is_connected,
    is_r_net,
)
from .nets import NetResult, NotANetError
from .spectral import (
    TOL_EIG,
    Spectrum,
    SpectralInterval,
    eigenvalues,
    mu,
    m_count,
)

__all__ = [
    "FINITE_PARAM_TOL",
    "BoundParams",
    "BoundTerms",
    "BoundReport",
    "HypothesisViolatedError",
    "RSSelection",
    "finite_param_rhs",
    "finite_param_check",
    "select_r_s",
    "thm_checker",
    "InterlacingReport",
    "interlacing_check",
    "expander_net_rem_params",
    "ExpanderSchedule",
    "regular_exp_schedule",
]

FINITE_PARAM_TOL = 1e-8
HYPOTHESIS_REL_TOL = 1e-9


class HypothesisViolatedError(GraphError):
    """A theorem hypothesis failed; the message names which one."""


@dataclass(frozen=True)
class BoundParams:
    """Parameters of the window bound.

    ``delta_top`` is the spectral mass strictly above x, ``eps_net`` the
    density of the removed r-net, ``delta`` the degree cap, and ``w_min`` /
    ``w_max`` the weight range (so ``delta_tilde = delta * w_max / w_min``).
    """

    theta: float
    x: float
    r: int
    s: int
    delta_top: float
    eps_net: float
    delta: int
    w_min: float = 1.0
    w_max: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < 1.0:
            raise GraphError("theta must lie in [0, 1)")
        if self.x < self.w_min:
            raise GraphError("x must be at least w_min")
        if self.r < 1 or self.s < 1:
            raise GraphError("r and s must be positive integers")
        if not 0.0 <= self.delta_top <= 1.0 or not 0.0 <= self.eps_net <= 1.0:
            raise GraphError("delta_top and eps_net are densities in [0, 1]")
        if self.delta < 1 or self.w_min <= 0 or self.w_max < self.w_min:
            raise GraphError("need delta >= 1 and 0 < w_min <= w_max")

    @property
    def delta_tilde(self) -> float:
        return self.delta * self.w_max / self.w_min


@dataclass(frozen=True)
class BoundTerms:
    """Right-hand side of the window bound, term by term.

    ``total`` is the unclamped sum; ``clamped`` trims each term at 1 for
    readable reports (any single term above 1 makes the bound vacuous).
    """

    moment: float
    tail: float
    net: float

    @property
    def total(self) -> float:
        return self.moment + self.tail + self.net

    @property
    def clamped(self) -> tuple[float, float, float]:
        return (min(self.moment, 1.0), min(self.tail, 1.0), min(self.net, 1.0))

    def as_dict(self) -> dict[str, float]:
        return {"moment": self.moment, "tail": self.tail, "net": self.net}


def finite_param_rhs(params: BoundParams) -> BoundTerms:
    """Evaluate the three terms of the window bound in double precision.

    Overflow is tolerated (a term may be inf); the 0 * inf corner when
    delta_top = 0 and the Delta power overflows resolves to 0.
    """
    base = 1.0 - (params.w_min / params.x) ** (2 * params.r)
    if base <= 0.0:
        moment = 0.0
    else:
        moment = (1.0 - params.theta) ** (-2 * params.s) * base ** (
            params.s / params.r
        )
    power = math.pow(params.delta, 2 * (params.s + 2))
    tail = 0.0 if params.delta_top == 0.0 else 2.0 * params.delta_top * power
    net = 2.0 * params.eps_net
    return BoundTerms(moment=moment, tail=tail, net=net)


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one bound verification.

    ``hypotheses`` maps hypothesis names to booleans; ``implied_constant``
    is lhs / rate for theorem variants carrying a rate, else None.
    """

    kind: str
    lhs: float
    rhs: float
    ok: bool
    terms: dict[str, float]
    params: dict[str, float | int | str | bool | None]
    hypotheses: dict[str, bool]
    rate: float | None = None
    implied_constant: float | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "ok": self.ok,
                "terms": self.terms,
                "params": self.params,
                "hypotheses": self.hypotheses,
                "rate": self.rate,
                "implied_constant": self.implied_constant,
            },
            sort_keys=True,
            allow_nan=True,
        )


def finite_param_check(
    g: WeightedGraph,
    x: float,
    theta: float,
    r: int,
    s: int,
    net: NetResult,
    spectrum: Spectrum | None = None,
) -> BoundReport:
    """Measure mu[(1-theta) x, x] and compare with the window bound.

    The net must be a verified r-net for the same radius; its covering
    property is re-checked.  The graph must be connected (the net-removal
    step of the argument assumes it).
    """
    if not is_connected(g):
        raise GraphError("finite_param_check needs a connected graph")
    if net.r != r:
        raise GraphError(f"net radius {net.r} does not match r={r}")
    if not net.verified or not is_r_net(g, net.vertices, r):
        raise NotANetError("finite_param_check needs a verified r-net")
    if spectrum is None:
        spectrum = eigenvalues(g, compute_residual=False)
    delta_top = float(mu(spectrum, SpectralInterval.above(x)))
    params = BoundParams(
        theta=theta,
        x=x,
        r=r,
        s=s,
        delta_top=delta_top,
        eps_net=net.density,
        delta=g.delta,
        w_min=g.w_min,
        w_max=g.w_max,
    )
    terms = finite_param_rhs(params)
    lhs = float(mu(spectrum, SpectralInterval.top_window(x, theta)))
    rhs = terms.total
    ok = lhs <= rhs + FINITE_PARAM_TOL
    return BoundReport(
        kind="finite-param",
        lhs=lhs,
        rhs=rhs,
        ok=ok,
        terms=terms.as_dict(),
        params={
            "x": x,
            "theta": theta,
            "r": r,
            "s": s,
            "delta_top": delta_top,
            "eps_net": net.density,
            "delta": g.delta,
            "w_min": g.w_min,
            "w_max": g.w_max,
            "n": g.n,
            "net_method": net.method,
        },
        hypotheses={
            "x_ge_w_min": x >= g.w_min,
            "theta_in_range": 0.0 <= theta < 1.0,
            "net_verified": True,
        },
    )


@dataclass(frozen=True)
class RSSelection:
    """The (s, r) schedule for a target window width theta."""

    s: int
    r: int
    ok: bool
    reason: str


def select_r_s(theta: float, delta_tilde: float) -> RSSelection:
    """s = floor(1/theta), r = floor(log_{delta_tilde}(s) / 10).

    The schedule is admissible when 0 < theta <= 1/delta_tilde and the
    resulting r is at least 1; otherwise ``ok`` is False and ``reason`` says
    which constraint failed.
    """
    if theta <= 0:
        return RSSelection(0, 0, False, "theta must be positive")
    if delta_tilde <= 1:
        return RSSelection(0, 0, False, "delta_tilde must exceed 1")
    # nudge before floor: 1/theta for decimal theta like 1e-5 lands one ulp
    # below the intended integer
    s = math.floor((1.0 / theta) * (1.0 + 1e-12))
    if s < 1:
        return RSSelection(s, 0, False, "theta > 1 leaves no moment rounds")
    # nudge before floor so exact powers are not lost to rounding
    r = math.floor(math.log(s) / math.log(delta_tilde) / 10.0 + 1e-12)
    if theta > 1.0 / delta_tilde:
        return RSSelection(s, r, False, "theta exceeds 1/delta_tilde")
    if r < 1:
        return RSSelection(s, r, False, "r < 1: theta too large for this delta_tilde")
    return RSSelection(s, r, True, "ok")


def _hyp_leq(lhs: float, rhs: float) -> bool:
    """lhs <= rhs with relative slack, for hypotheses that hold with equality."""
    return lhs <= rhs * (1.0 + HYPOTHESIS_REL_TOL) + 1e-300


def thm_checker(
    g: WeightedGraph,
    variant: str,
    x: float | None = None,
    theta: float | None = None,
    c: float | None = None,
    spectrum: Spectrum | None = None,
) -> BoundReport:
    """Check a non-concentration theorem instance and report the implied constant.

    Variants: ``main`` (rate 1 / log_{delta_tilde}(1/theta)), ``expander``
    (rate theta^{c / (40 ln delta_tilde)}; c is the assumed expansion), and
    ``second-eig`` (the main variant preset at x = lambda_2 and
    theta = 10 / log_{delta_tilde} n).  Hypothesis failures raise
    :class:`HypothesisViolatedError` naming the hypothesis; the implied
    constant is measured, never asserted against any absolute value.
    """
    if g.n < 2:
        raise GraphError("thm_checker needs at least two vertices")
    if spectrum is None:
        spectrum = eigenvalues(g, compute_residual=False)
    dt = g.delta_tilde
    if dt <= 1:
        raise GraphError("thm_checker needs delta_tilde > 1")
    log_dt = math.log(dt)

    if variant == "second-eig":
        x = float(spectrum.values[-2])
        theta = 10.0 / (math.log(g.n) / log_dt)
        variant_kind = "second-eig"
        rate_kind = "main"
    elif variant in ("main", "expander"):
        if x is None or theta is None:
            raise GraphError(f"variant {variant!r} needs explicit x and theta")
        variant_kind = variant
        rate_kind = variant
    else:
        raise GraphError(f"unknown theorem variant {variant!r}")
    if theta <= 0:
        raise GraphError("theta must be positive")

    delta_top = float(mu(spectrum, SpectralInterval.above(x)))
    tail_cap = math.pow(dt, -10.0 / theta)
    hypotheses = {"tail_mass": _hyp_leq(delta_top, tail_cap)}
    if rate_kind == "main":
        size_floor = math.log(1.0 / theta) / log_dt
        hypotheses["graph_size"] = g.n >= size_floor * (1.0 - HYPOTHESIS_REL_TOL)
        log_ratio = math.log(1.0 / theta) / log_dt
        rate = math.inf if log_ratio == 0.0 else 1.0 / log_ratio
    else:
        if c is None or c <= 0:
            raise GraphError("expander variant needs an assumed expansion c > 0")
        size_floor = 2.0 * theta ** (-c / (10.0 * log_dt))
        hypotheses["graph_size"] = g.n >= size_floor * (1.0 - HYPOTHESIS_REL_TOL)
        rate = theta ** (c / (40.0 * log_dt))
    for name, passed in hypotheses.items():
        if not passed:
            raise HypothesisViolatedError(
                f"hypothesis {name!r} violated for variant {variant_kind!r}"
            )

    lhs = float(mu(spectrum, SpectralInterval.top_window(x, theta)))
    selection = select_r_s(theta, dt)
    implied = lhs / rate if rate not in (0.0, math.inf) else 0.0
    return BoundReport(
        kind=f"thm-{variant_kind}",
        lhs=lhs,
        rhs=rate,
        ok=True,
        terms={},
        params={
            "x": x,
            "theta": theta,
            "n": g.n,
            "delta_tilde": dt,
            "c": c,
            "delta_top": delta_top,
            "schedule_s": selection.s,
            "schedule_r": selection.r,
            "schedule_ok": selection.ok,
            "schedule_reason": selection.reason,
        },
        hypotheses=hypotheses,
        rate=rate,
        implied_constant=implied,
    )


# -- interlacing --------------------------------------------------------------


@dataclass(frozen=True)
class InterlacingReport:
    mode: str
    u_size: int
    halfline_dev: int
    halfline_bound: int
    interval_dev: int
    interval_bound: int
    grid_size: int
    ok: bool


def _zero_rows_cols(g: WeightedGraph, u: VertexSet) -> WeightedGraph:
    inside = set(u.ids)
    edges = [
        (a, b, w)
        for a, b, w in g.edges()
        if a not in inside and b not in inside
    ]
    return build_graph(g.n, edges)


def interlacing_check(
    g: WeightedGraph,
    u: VertexSet,
    mode: str = "delete",
    grid: np.ndarray | None = None,
) -> InterlacingReport:
    """Compare eigenvalue counts of G and of G with U removed.

    ``mode="delete"`` removes the vertices; ``mode="zero-rows-cols"`` keeps
    them as isolated vertices.  Counts m(-inf, x] may differ by at most |U|
    at every grid point, and interval counts m[x, y] by at most 2|U|.  The
    default grid takes midpoints between consecutive points of the merged
    spectra, plus one point beyond each extreme, where counting is exact.
    """
    spec_g = eigenvalues(g, compute_residual=False)
    if mode == "delete":
        h, _ = delete_vertices(g, u.ids)
    elif mode == "zero-rows-cols":
        h = _zero_rows_cols(g, u)
    else:
        raise GraphError(f"unknown interlacing mode {mode!r}")
    spec_h = eigenvalues(h, compute_residual=False)
    if grid is None:
        merged = np.unique(np.concatenate([spec_g.values, spec_h.values]))
        # collapse values that agree up to solver error: an eigenvalue shared
        # by G and H analytically comes back as two floats 1e-15 apart, and a
        # midpoint between those would count one but not the other
        if len(merged) > 1:
            gaps = np.diff(merged)
            merged = merged[np.concatenate([[True], gaps > TOL_EIG])]
        if len(merged) == 0:
            grid = np.array([0.0])
        elif len(merged) == 1:
            grid = np.array([merged[0] - 1.0, merged[0] + 1.0])
        else:
            mids = (merged[:-1] + merged[1:]) / 2.0
            grid = np.concatenate([[merged[0] - 1.0], mids, [merged[-1] + 1.0]])
    grid = np.asarray(grid, dtype=np.float64)

    le_g = np.searchsorted(spec_g.values, grid, side="right")
    le_h = np.searchsorted(spec_h.values, grid, side="right")
    lt_g = np.searchsorted(spec_g.values, grid, side="left")
    lt_h = np.searchsorted(spec_h.values, grid, side="left")
    d_le = le_g - le_h
    d_lt = lt_g - lt_h
    halfline_dev = int(np.abs(d_le).max()) if len(grid) else 0

    # interval count m[x, y] = (# <= y) - (# < x); maximize |D_le[j] - D_lt[i]|
    # over i <= j using prefix extrema of D_lt
    run_min = np.minimum.accumulate(d_lt)
    run_max = np.maximum.accumulate(d_lt)
    interval_dev = int(
        max(
            (d_le - run_min).max(initial=0),
            (run_max - d_le).max(initial=0),
        )
    )
    size = len(u)
    return InterlacingReport(
        mode=mode,
        u_size=size,
        halfline_dev=halfline_dev,
        halfline_bound=size,
        interval_dev=interval_dev,
        interval_bound=2 * size,
        grid_size=len(grid),
        ok=halfline_dev <= size and interval_dev <= 2 * size,
    )


# -- expander schedules --------------------------------------------------------


def expander_net_rem_params(rho: float, r: int) -> float:
    """Window width theta with mu[(1-theta) rho, rho] <= net density after
    removing an r-net from a graph of spectral radius rho:
    theta = 1 - (1 - rho^{-2r})^{1/(2r)}."""
    if rho <= 1.0:
        raise GraphError("expander_net_rem_params needs rho > 1")
    if r < 1:
        raise GraphError("r must be >= 1")
    return 1.0 - (1.0 - rho ** (-2.0 * r)) ** (1.0 / (2.0 * r))


@dataclass(frozen=True)
class ExpanderSchedule:
    """The (r, p) schedule for d-regular graphs of spectral radius rho."""

    d: int
    rho: float
    theta: float
    eps: float
    r: int
    p: float
    c: float
    net_density_bound: float
    predicted_exponent: float
    predicted_bound: float


def regular_exp_schedule(
    d: int, rho: float, theta: float, eps: float
) -> ExpanderSchedule:
    """Schedule realizing mu[(1-theta) rho, rho] <~ theta^{log d/log rho - 1 - eps}.

    Takes r = ceil((1-eps) log(1/theta) / (2 log rho)) and Bernoulli rate
    p = theta^{(1-2 eps)(log d/log rho - 1)}; the expansion constant is
    1 + c = d^2 / rho^2.  Requires rho < d (at rho = d the exponent hits 0
    and the statement is empty).
    """
    if d < 3:
        raise GraphError("regular_exp_schedule needs d >= 3")
    if rho <= 1.0:
        raise GraphError("needs rho > 1")
    if rho >= d:
        raise GraphError("needs rho < d: at rho >= d the predicted exponent vanishes")
    if not 0.0 < theta < 1.0:
        raise GraphError("theta must lie in (0, 1)")
    if not 0.0 < eps < 0.5:
        raise GraphError("eps must lie in (0, 1/2)")
    log_ratio = math.log(d) / math.log(rho) - 1.0
    r = max(1, math.ceil((1.0 - eps) * math.log(1.0 / theta) / (2.0 * math.log(rho))))
    p = theta ** ((1.0 - 2.0 * eps) * log_ratio)
    c = d * d / (rho * rho) - 1.0
    growth = (1.0 + c) ** r
    miss = math.exp(growth * math.log1p(-p)) if p < 1.0 else 0.0
    return ExpanderSchedule(
        d=d,
        rho=rho,
        theta=theta,
        eps=eps,
        r=r,
        p=p,
        c=c,
        net_density_bound=miss + p,
        predicted_exponent=log_ratio - eps,
        predicted_bound=theta ** (log_ratio - eps),
    )
