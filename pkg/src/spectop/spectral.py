"""Spectra of weighted adjacency matrices and interval mass queries.

Eigenvalue counting is the measurement side of every inequality in the
package: ``mu`` for normalized counting measure mass, ``trace_power`` for
walk sums, ``lambda1`` for spectral radii of graphs and balls.  Counts near
interval endpoints use the shared tolerance ``TOL_EIG`` so that exact
multiplicities (cycle spectra, hypercubes) land on the intended side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .graphs import (
    GraphError,
    WeightedGraph,
    ball,
    distances,
    induced_subgraph,
    UNREACHABLE,
)

__all__ = [
    "TOL_EIG",
    "DEFAULT_SOLVER_CAP",
    "TRACE_POWER_MAX_K",
    "SolverCapError",
    "Spectrum",
    "SpectralInterval",
    "eigenvalues",
    "lambda1",
    "lambda1_ball",
    "lambda1_balls",
    "m_count",
    "mu",
    "trace_power",
    "spectrum_moment",
    "LocalGlobalReport",
    "local_global_check",
    "spectrum_to_csv",
    "interval_query_json",
]

TOL_EIG = 1e-8
DEFAULT_SOLVER_CAP = 4096
TRACE_POWER_MAX_K = 200
LOCAL_GLOBAL_SLACK_TOL = 1e-6

# dense solves are exact enough for any ball; above this we fall back to Lanczos
_DENSE_LAMBDA1_CAP = 4096


class SolverCapError(GraphError):
    """Graph exceeds the dense-eigensolver size cap."""


@dataclass(frozen=True)
class Spectrum:
    """All eigenvalues of a weighted adjacency matrix, ascending.

    ``residual_bound`` is the largest 2-norm residual ``|A v - lambda v|``
    across the computed eigenpairs, or NaN when the solver was asked to skip
    the residual computation.
    """

    values: np.ndarray
    residual_bound: float

    @property
    def n(self) -> int:
        return len(self.values)

    def norm(self) -> float:
        """Operator norm max |lambda| (0 for the empty spectrum)."""
        if self.n == 0:
            return 0.0
        return float(max(abs(self.values[0]), abs(self.values[-1])))


@dataclass(frozen=True)
class SpectralInterval:
    """An interval with explicit open/closed endpoint flags.

    Infinite endpoints are allowed (use ``math.inf``); an infinite endpoint's
    flag is irrelevant.
    """

    a: float
    b: float
    closed_a: bool = True
    closed_b: bool = True

    @classmethod
    def closed(cls, a: float, b: float) -> "SpectralInterval":
        return cls(a, b, True, True)

    @classmethod
    def open(cls, a: float, b: float) -> "SpectralInterval":
        return cls(a, b, False, False)

    @classmethod
    def above(cls, x: float) -> "SpectralInterval":
        """The open half line (x, inf)."""
        return cls(x, math.inf, False, True)

    @classmethod
    def below(cls, x: float) -> "SpectralInterval":
        """The closed half line (-inf, x]."""
        return cls(-math.inf, x, True, True)

    @classmethod
    def top_window(cls, x: float, theta: float) -> "SpectralInterval":
        """The closed window [(1-theta) x, x]."""
        return cls((1.0 - theta) * x, x, True, True)

    def describe(self) -> str:
        lo = "[" if self.closed_a else "("
        hi = "]" if self.closed_b else ")"
        return f"{lo}{self.a:.17g}, {self.b:.17g}{hi}"


def eigenvalues(
    g: WeightedGraph,
    cap: int = DEFAULT_SOLVER_CAP,
    compute_residual: bool = True,
) -> Spectrum:
    """Full spectrum via a dense symmetric eigensolver.

    Parameters
    ----------
    g : the graph; must satisfy ``g.n <= cap``.
    cap : refuse larger graphs instead of silently grinding.
    compute_residual : verify the eigenpairs and report the worst residual;
        skipping it roughly halves the cost for large graphs.
    """
    if g.n > cap:
        raise SolverCapError(f"n={g.n} exceeds solver cap {cap}")
    if g.n == 0:
        return Spectrum(np.array([], dtype=np.float64), 0.0)
    a = g.dense()
    if compute_residual:
        vals, vecs = scipy.linalg.eigh(a)
        resid = a @ vecs - vecs * vals[np.newaxis, :]
        residual = float(np.sqrt((resid * resid).sum(axis=0)).max())
    else:
        vals = scipy.linalg.eigvalsh(a)
        residual = math.nan
    vals = np.sort(vals)
    return Spectrum(vals, residual)


def lambda1(g: WeightedGraph) -> float:
    """Top eigenvalue of the adjacency matrix.

    Dense solve up to ``_DENSE_LAMBDA1_CAP`` vertices, Lanczos beyond.
    Errors on the empty graph; a graph with no edges has lambda1 = 0.
    """
    if g.n == 0:
        raise GraphError("lambda1 of the empty graph is undefined")
    if g.m == 0:
        return 0.0
    if g.n <= _DENSE_LAMBDA1_CAP:
        return float(scipy.linalg.eigvalsh(g.dense())[-1])
    val = scipy.sparse.linalg.eigsh(
        g.csr, k=1, which="LA", return_eigenvectors=False, tol=1e-12
    )
    return float(val[0])


def lambda1_ball(g: WeightedGraph, v: int, r: int) -> float:
    """Top eigenvalue of the induced subgraph on the radius-``r`` ball at ``v``."""
    sub, _ = ball(g, v, r)
    return lambda1(sub)


def lambda1_balls(g: WeightedGraph, r: int) -> np.ndarray:
    """lambda1 of every radius-``r`` ball, indexed by center.

    Balls that coincide as vertex sets share one solve; on graphs where the
    radius exceeds the diameter this collapses to a single eigensolve.
    """
    out = np.empty(g.n, dtype=np.float64)
    cache: dict[bytes, float] = {}
    for v in range(g.n):
        d = distances(g, v, cutoff=r)
        mask = d != UNREACHABLE
        key = np.packbits(mask).tobytes()
        lam = cache.get(key)
        if lam is None:
            sub, _ = induced_subgraph(g, np.flatnonzero(mask).tolist())
            lam = lambda1(sub)
            cache[key] = lam
        out[v] = lam
    return out


def _kahan_sum(values: Iterable[float]) -> float:
    total = 0.0
    comp = 0.0
    for x in values:
        y = x - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def m_count(spectrum: Spectrum, interval: SpectralInterval, tol: float = TOL_EIG) -> int:
    """Number of eigenvalues in the interval.

    Eigenvalues within ``tol`` of a closed endpoint count as inside; within
    ``tol`` of an open endpoint they count as outside.
    """
    ev = spectrum.values
    if len(ev) == 0:
        return 0
    if interval.a == -math.inf:
        lo = 0
    elif interval.closed_a:
        lo = int(np.searchsorted(ev, interval.a - tol, side="left"))
    else:
        lo = int(np.searchsorted(ev, interval.a + tol, side="right"))
    if interval.b == math.inf:
        hi = len(ev)
    elif interval.closed_b:
        hi = int(np.searchsorted(ev, interval.b + tol, side="right"))
    else:
        hi = int(np.searchsorted(ev, interval.b - tol, side="left"))
    return max(0, hi - lo)


def mu(spectrum: Spectrum, interval: SpectralInterval, tol: float = TOL_EIG) -> Fraction:
    """Normalized counting measure of the interval, as an exact rational."""
    if spectrum.n == 0:
        raise GraphError("mu of the empty spectrum is undefined")
    return Fraction(m_count(spectrum, interval, tol), spectrum.n)


def trace_power(g: WeightedGraph, k: int) -> float:
    """trace(A^k) for even k, by k sparse matvecs against every basis vector.

    The diagonal of A^k is accumulated with compensated summation in
    ascending vertex order.  The eigenvalue route sum(lambda_i^k) is the
    cross-check (see :func:`spectrum_moment`); the two agree to relative
    1e-8 on the corpora this package verifies.
    """
    if k % 2 != 0 or k < 0:
        raise GraphError("trace_power requires even k >= 0")
    if k > TRACE_POWER_MAX_K:
        raise GraphError(f"trace_power capped at k = {TRACE_POWER_MAX_K}")
    if g.n == 0:
        return 0.0
    if k == 0:
        return float(g.n)
    a = g.csr
    x = np.eye(g.n, dtype=np.float64)
    for _ in range(k):
        x = a @ x
    return _kahan_sum(float(x[i, i]) for i in range(g.n))


def spectrum_moment(spectrum: Spectrum, k: int) -> float:
    """sum(lambda_i^k) with compensated summation, ascending eigenvalue order."""
    return _kahan_sum(float(v) ** k for v in spectrum.values)


@dataclass(frozen=True)
class LocalGlobalReport:
    r: int
    lhs: float
    rhs: float
    slack: float
    ok: bool


def local_global_check(g: WeightedGraph, r: int) -> LocalGlobalReport:
    """Check trace(A^{2r}) <= sum_v lambda1(B(v, r))^{2r}.

    ``slack = rhs - lhs`` must be >= -1e-6 * rhs (the inequality is exact
    mathematics; the tolerance only absorbs floating-point error).
    """
    if r < 1:
        raise GraphError("local_global_check needs r >= 1")
    lhs = trace_power(g, 2 * r)
    lams = lambda1_balls(g, r)
    rhs = _kahan_sum(float(x) ** (2 * r) for x in lams)
    slack = rhs - lhs
    ok = slack >= -LOCAL_GLOBAL_SLACK_TOL * abs(rhs)
    return LocalGlobalReport(r, lhs, rhs, slack, ok)


# -- exports -----------------------------------------------------------------


def spectrum_to_csv(spectrum: Spectrum, path: str) -> None:
    """CSV with header ``index,eigenvalue``, ascending, 17 significant digits."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("index,eigenvalue\n")
        for i, v in enumerate(spectrum.values):
            fh.write(f"{i},{format(float(v), '.17g')}\n")


def interval_query_json(
    spectrum: Spectrum, interval: SpectralInterval, tol: float = TOL_EIG
) -> dict:
    """The flat record {a, b, closed_a, closed_b, count, mu}."""
    count = m_count(spectrum, interval, tol)
    return {
        "a": interval.a,
        "b": interval.b,
        "closed_a": interval.closed_a,
        "closed_b": interval.closed_b,
        "count": count,
        "mu": count / spectrum.n if spectrum.n else None,
    }
