"""r-net selection and the spectral-radius drop it buys.

Two net constructions are provided.  ``greedy_tree_net`` walks a BFS spanning
tree, repeatedly cutting the branch hanging at distance r above the deepest
remaining vertex; it guarantees size at most ceil(n / (r+1)).  No vertex of a
cut branch is further than r from the emitted branch root, because the deepest
vertex was a witness for the whole branch.  ``random_expander_net`` takes a
Bernoulli(p) sample plus everything the sample misses by more than r; on
c-expanders the miss term decays doubly exponentially in r.

``net_removal_drop_check`` verifies the inequality that makes nets useful:
deleting an r-net W from G drops the spectral radius to
lambda1(G - W)^{2r} <= lambda1(G)^{2r} - w_min^{2r}.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graphs import (
    DisconnectedGraphError,
    GraphError,
    VertexSet,
    WeightedGraph,
    delete_vertices,
    distances,
    is_connected,
    is_r_net,
    UNREACHABLE,
)
from .spectral import lambda1, lambda1_ball

__all__ = [
    "NetResult",
    "NotANetError",
    "DropReport",
    "greedy_tree_net",
    "random_expander_net",
    "separated_subset_greedy",
    "high_radius_set",
    "net_removal_drop_check",
]

DROP_CHECK_TOL = 1e-8
HIGH_RADIUS_TOL = 1e-10


class NotANetError(GraphError):
    """A set claimed to be an r-net fails the covering property."""


@dataclass(frozen=True)
class NetResult:
    """An r-net candidate, its provenance, and its verification status."""

    method: str
    r: int
    vertices: VertexSet
    density: float
    verified: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "method": self.method,
                "r": self.r,
                "vertices": list(self.vertices.ids),
                "density": self.density,
                "verified": self.verified,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str, n: int) -> "NetResult":
        obj = json.loads(text)
        return cls(
            method=obj["method"],
            r=int(obj["r"]),
            vertices=VertexSet.of(obj["vertices"], n),
            density=float(obj["density"]),
            verified=bool(obj["verified"]),
        )


def _finish(g: WeightedGraph, method: str, r: int, members: list[int]) -> NetResult:
    vs = VertexSet.of(members, g.n)
    verified = is_r_net(g, vs, r)
    return NetResult(method, r, vs, vs.density, verified)


def greedy_tree_net(
    g: WeightedGraph, r: int, priority: np.ndarray | None = None
) -> NetResult:
    """r-net of size at most ceil(n / (r+1)) via spanning-tree surgery.

    Build a BFS spanning tree rooted at the minimum-priority vertex (vertex 0
    by default).  Repeatedly take the deepest remaining vertex v: if its depth
    exceeds r, emit its ancestor u at distance exactly r and delete the whole
    branch rooted at u (at least r+1 vertices, all within r of u); otherwise
    the root covers everything left, so emit the root -- unless the remaining
    vertices are already within r of the net built so far -- and stop.

    ``priority`` reorders all tie-breaks (root choice, BFS order, deepest-
    vertex ties); passing per-vertex random labels makes the construction
    independent of vertex ids.
    """
    if r < 0:
        raise GraphError("net radius must be nonnegative")
    n = g.n
    if n == 0:
        return _finish(g, "greedy-tree", r, [])
    if not is_connected(g):
        raise DisconnectedGraphError("greedy_tree_net needs a connected graph")
    if priority is None:
        rank = list(range(n))
    else:
        if len(priority) != n:
            raise GraphError("priority must have one entry per vertex")
        order = sorted(range(n), key=lambda v: (priority[v], v))
        rank = [0] * n
        for i, v in enumerate(order):
            rank[v] = i
    root = min(range(n), key=lambda v: rank[v])

    parent = [-1] * n
    depth = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    depth[root] = 0
    q: deque[int] = deque([root])
    while q:
        u = q.popleft()
        for v, _ in sorted(g.adj[u], key=lambda e: rank[e[0]]):
            if depth[v] == UNREACHABLE:
                depth[v] = depth[u] + 1
                parent[v] = u
                children[u].append(v)
                q.append(v)

    alive = [True] * n
    by_depth = sorted(range(n), key=lambda v: (-depth[v], rank[v]))
    net: list[int] = []
    cursor = 0
    while True:
        while cursor < n and not alive[by_depth[cursor]]:
            cursor += 1
        if cursor >= n:
            break
        v = by_depth[cursor]
        if depth[v] <= r:
            if _any_alive_uncovered(g, alive, net, r):
                net.append(root)
            break
        u = v
        for _ in range(r):
            u = parent[u]
        net.append(u)
        stack = [u]
        alive[u] = False
        while stack:
            a = stack.pop()
            for b in children[a]:
                if alive[b]:
                    alive[b] = False
                    stack.append(b)
    return _finish(g, "greedy-tree", r, net)


def _any_alive_uncovered(
    g: WeightedGraph, alive: list[bool], net: list[int], r: int
) -> bool:
    if not net:
        return True
    d = distances(g, net, cutoff=r)
    return any(alive[v] and d[v] == UNREACHABLE for v in range(g.n))


def random_expander_net(
    g: WeightedGraph, r: int, p: float, seed: int
) -> NetResult:
    """Bernoulli(p) sample W0, plus every vertex at distance > r from W0.

    The union is an r-net unconditionally.  On a c-expander the second part
    has expected density at most (1-p)^{(1+c)^r}, so the expected net density
    is at most (1-p)^{(1+c)^r} + p.
    """
    if r < 0:
        raise GraphError("net radius must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise GraphError("sampling probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    u = rng.random(g.n)
    w0 = np.flatnonzero(u < p).tolist()
    if w0:
        d = distances(g, w0, cutoff=r)
        far = np.flatnonzero(d == UNREACHABLE).tolist()
    else:
        far = list(range(g.n))
    return _finish(g, "expander-random", r, w0 + far)


def separated_subset_greedy(g: WeightedGraph, u: VertexSet, s: int) -> VertexSet:
    """Maximal s-separated subset of ``u``, greedy by ascending vertex id.

    Every vertex of ``u`` ends up within distance < s of the output (else it
    would have been taken), which is the maximality the density argument
    needs.
    """
    if s < 0:
        raise GraphError("separation must be nonnegative")
    if s <= 1:
        return u
    chosen: list[int] = []
    # distance from the chosen set so far; refreshed incrementally per pick
    best = np.full(g.n, np.iinfo(np.int64).max, dtype=np.int64)
    for v in u.ids:
        if best[v] >= s:
            chosen.append(v)
            d = distances(g, v, cutoff=s - 1)
            reached = d != UNREACHABLE
            np.minimum(best, np.where(reached, d, best), out=best)
    return VertexSet.of(chosen, g.n)


def high_radius_set(g: WeightedGraph, x: float, s: int) -> VertexSet:
    """Vertices whose radius-(s+1) ball has top eigenvalue exceeding ``x``.

    The comparison is strict with slack ``HIGH_RADIUS_TOL``: values within
    the slack of ``x`` count as not exceeding.
    """
    if s < 0:
        raise GraphError("s must be nonnegative")
    members = [
        v for v in range(g.n) if lambda1_ball(g, v, s + 1) > x + HIGH_RADIUS_TOL
    ]
    return VertexSet.of(members, g.n)


@dataclass(frozen=True)
class DropReport:
    r: int
    net_size: int
    lam1_g: float
    lam1_h: float
    lhs: float
    rhs: float
    ok: bool


def net_removal_drop_check(g: WeightedGraph, w: NetResult, r: int) -> DropReport:
    """Verify lambda1(G - W)^{2r} <= lambda1(G)^{2r} - w_min^{2r}.

    ``w`` must be a verified r-net with matching radius; the covering
    property is re-checked here rather than trusted.  Vertices of W are
    deleted outright (the row-zeroing picture gives the same top eigenvalue,
    up to extra zero eigenvalues).
    """
    if r < 1:
        raise GraphError("drop check needs r >= 1")
    if r != w.r:
        raise GraphError(f"net was built for r={w.r}, check asked for r={r}")
    if not is_r_net(g, w.vertices, r):
        raise NotANetError("claimed net does not cover the graph within r")
    lam_g = lambda1(g)
    h, _ = delete_vertices(g, w.vertices)
    lam_h = lambda1(h) if h.n > 0 else 0.0
    lhs = lam_h ** (2 * r)
    rhs = lam_g ** (2 * r) - g.w_min ** (2 * r)
    return DropReport(
        r=r,
        net_size=len(w.vertices),
        lam1_g=lam_g,
        lam1_h=lam_h,
        lhs=lhs,
        rhs=rhs,
        ok=lhs <= rhs + DROP_CHECK_TOL,
    )
