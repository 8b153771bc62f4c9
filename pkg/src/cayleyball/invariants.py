"""The four virtually-free invariants and their auxiliary constants.

Everything is measured on the vertices of a padded ball (see
``cayleyball.ball``).  Values are reported as doubled integers so that
half-integer Gromov-product quantities stay exact; distance-valued constants
are simply doubled.  Every result carries an explicit bound direction:

* ``exact`` -- exhaustive tuple space, no geodesic cap bound, and the value
  is a finite-window statistic of the ball itself;
* ``lower`` -- random sampling, a binding cap, or a quantity whose true
  supremum ranges over objects that can leave any finite ball (detour
  constant, mesh over arbitrary triangles, quasi-convexity over an infinite
  subgroup).

Nothing sampled or capped is ever labeled exact.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .ball import DistanceMatrix
from .geodesics import (
    enumerate_geodesics,
    geodesic_through,
    interval,
    max_avoidance,
    max_avoidance_block,
    most_avoiding_geodesic,
)


class InternalCheckError(RuntimeError):
    """A mathematically guaranteed relation failed; indicates a bug."""


# ---------------------------------------------------------------------------
# sampling plans and results

@dataclass(frozen=True)
class SamplingPlan:
    """Deterministic description of which tuples and geodesics are examined.

    ``geodesic_cap`` bounds the number of geodesics enumerated per side where
    explicit enumeration is needed (bigons, mesh); ``None`` means unlimited.
    """

    mode: str = "exhaustive"
    count: int | None = None
    seed: int | None = None
    geodesic_cap: int | None = 64

    def __post_init__(self):
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.mode == "random" and (self.count is None or self.seed is None):
            raise ValueError("random plans need a count and a seed")
        if self.geodesic_cap is not None and self.geodesic_cap < 1:
            raise ValueError("geodesic cap must be at least 1 or None")

    @classmethod
    def exhaustive(cls, geodesic_cap=64):
        return cls(mode="exhaustive", geodesic_cap=geodesic_cap)

    @classmethod
    def random(cls, count, seed, geodesic_cap=64):
        return cls(mode="random", count=count, seed=seed, geodesic_cap=geodesic_cap)

    def ordered_tuples(self, n, arity):
        """Ordered tuples with repetition from ``range(n)``."""
        if self.mode == "exhaustive":
            return itertools.product(range(n), repeat=arity)
        rng = random.Random(self.seed)
        return [tuple(rng.randrange(n) for _ in range(arity)) for _ in range(self.count)]

    def unordered_tuples(self, n, arity):
        """Sorted tuples; exhaustive mode enumerates distinct combinations."""
        if self.mode == "exhaustive":
            return itertools.combinations(range(n), arity)
        rng = random.Random(self.seed)
        return [
            tuple(sorted(rng.randrange(n) for _ in range(arity)))
            for _ in range(self.count)
        ]

    def describe(self):
        out = {"mode": self.mode, "geodesic_cap": self.geodesic_cap}
        if self.mode == "random":
            out["count"] = self.count
            out["seed"] = self.seed
        return out


@dataclass
class InvariantResult:
    """A measured constant with bound direction, sampling record and witness.

    ``value_doubled`` holds twice the half-integer value, so it is always an
    exact integer; ``value`` is the human-readable half.
    """

    name: str
    value_doubled: int
    bound: str
    plan: dict
    witness: dict
    r_in: int
    r_out: int
    extra: dict = field(default_factory=dict)

    @property
    def value(self):
        return self.value_doubled / 2

    def to_dict(self):
        return {
            "invariant": self.name,
            "value_doubled": int(self.value_doubled),
            "value": self.value,
            "bound": self.bound,
            "sampling": self.plan,
            "witness": self.witness,
            "r_in": self.r_in,
            "r_out": self.r_out,
            "extra": self.extra,
        }


class _Extremum:
    """Running maximum with a lexicographic key tie-break (deterministic
    regardless of evaluation order)."""

    __slots__ = ("value", "key", "data")

    def __init__(self):
        self.value = None
        self.key = None
        self.data = None

    def offer(self, value, key, data=None):
        if self.value is None or value > self.value or (value == self.value and key < self.key):
            self.value = value
            self.key = key
            self.data = data


def _result(name, ball, value, bound, plan, witness, extra=None):
    return InvariantResult(
        name=name,
        value_doubled=int(value),
        bound=bound,
        plan=plan.describe() if isinstance(plan, SamplingPlan) else dict(plan),
        witness=witness,
        r_in=ball.r_in,
        r_out=ball.r_out,
        extra=extra or {},
    )


def _words(ball, indices):
    return [ball.word(i) for i in indices]


# ---------------------------------------------------------------------------
# Gromov products and the four-point condition

def doubled_gromov_product(dist: DistanceMatrix, x, y, p) -> int:
    """2 * (x|y)_p = d(p,x) + d(p,y) - d(x,y), an exact integer."""
    D = dist.inner
    return int(D[p, x]) + int(D[p, y]) - int(D[x, y])


def _gromov_matrix(dist, p):
    D = dist.inner.astype(np.int32)
    dp = D[p]
    return dp[:, None] + dp[None, :] - D


def four_point_delta(dist: DistanceMatrix, plan: SamplingPlan) -> InvariantResult:
    """Worst defect of the four-point inequality over sampled quadruples:

        max over (x0, x1, x2, p) of  min{(x0|x1)_p, (x1|x2)_p} - (x0|x2)_p

    floored at zero, in doubled units.
    """
    ball = dist.ball
    n = ball.inner_count
    best = _Extremum()
    if plan.mode == "exhaustive":
        for p in range(n):
            G = _gromov_matrix(dist, p)
            for x1 in range(n):
                M = np.minimum.outer(G[:, x1], G[x1, :]) - G
                m = int(M.max())
                if best.value is None or m > best.value:
                    flat = int(M.argmax())
                    best.offer(m, (p, x1, flat // n, flat % n))
    else:
        for x0, x1, x2, p in plan.ordered_tuples(n, 4):
            g01 = doubled_gromov_product(dist, x0, x1, p)
            g12 = doubled_gromov_product(dist, x1, x2, p)
            g02 = doubled_gromov_product(dist, x0, x2, p)
            best.offer(min(g01, g12) - g02, (p, x1, x0, x2))
    value = max(0, best.value or 0)
    p, x1, x0, x2 = best.key if best.key is not None else (0, 0, 0, 0)
    witness = {
        "x0": ball.word(x0),
        "x1": ball.word(x1),
        "x2": ball.word(x2),
        "basepoint": ball.word(p),
        "defect_doubled": int(value),
    }
    bound = "exact" if plan.mode == "exhaustive" else "lower"
    return _result("four_point_delta", ball, value, bound, plan, witness)


# ---------------------------------------------------------------------------
# chain defect: the all-lengths Gromov inequality via bottleneck paths

def _widest_values(G, source):
    """Max-min path values from ``source`` in a dense complete graph."""
    n = G.shape[0]
    width = G[source].copy()
    width[source] = np.iinfo(np.int32).max
    done = np.zeros(n, dtype=bool)
    parent = np.full(n, source)
    parent[source] = -1
    for _ in range(n):
        cand = np.where(done, np.iinfo(np.int32).min, width)
        u = int(cand.argmax())
        done[u] = True
        relax = np.minimum(width[u], G[u])
        upd = relax > width
        width = np.where(upd, relax, width)
        parent = np.where(upd, u, parent)
    width[source] = G[source, source]
    return width, parent

def _widest_path(G, x, y):
    """A chain from x to y maximizing its minimum consecutive weight."""
    if x == y:
        return [x, y]
    _, parent = _widest_values(G, x)
    path = [y]
    while path[-1] != x:
        path.append(int(parent[path[-1]]))
    return list(reversed(path))


def _bottleneck_defect(G):
    """Exact chain defect for one basepoint: max over pairs of the widest-path
    value minus the direct Gromov product."""
    n = G.shape[0]
    best = _Extremum()
    best.offer(0, (0, 0))
    for x in range(n):
        width, _ = _widest_values(G, x)
        diff = width - G[x]
        diff[x] = 0
        m = int(diff.max())
        if best.value is None or m > best.value:
            best.offer(m, (x, int(diff.argmax())))
    x, y = best.key
    return max(0, best.value), _widest_path(G, x, y)


def _bruteforce_defect(G, maxlen):
    """Literal enumeration of every chain with at most ``maxlen`` steps."""
    n = G.shape[0]
    best = _Extremum()
    best.offer(0, (0, 0), (0, 0))
    for x in range(n):
        Gx = G[x]
        for y in range(n):
            direct = int(G[x, y])
            Gy = G[:, y]
            if maxlen >= 2:
                vals = np.minimum(Gx, Gy)
                z = int(vals.argmax())
                best.offer(int(vals[z]) - direct, (x, y, z), (x, z, y))
            for m in range(3, maxlen + 1):
                for prefix in itertools.product(range(n), repeat=m - 2):
                    pv = int(Gx[prefix[0]])
                    for a, b in zip(prefix, prefix[1:]):
                        pv = min(pv, int(G[a, b]))
                    vals = np.minimum(pv, np.minimum(G[prefix[-1]], Gy))
                    z = int(vals.argmax())
                    best.offer(int(vals[z]) - direct, (x, y) + prefix + (z,), (x,) + prefix + (z, y))
    return max(0, best.value), list(best.data)


def chain_defect(dist: DistanceMatrix, basepoint=None, method="bottleneck", maxlen=4) -> InvariantResult:
    """Least defect making the chain inequality hold for chains of every
    length through inner-ball vertices, at a fixed basepoint (or maximized
    over all inner basepoints when ``basepoint`` is None).

    ``bottleneck`` computes the supremum over all chain lengths exactly via
    maximum-bottleneck paths; ``bruteforce`` enumerates chains of at most
    ``maxlen`` steps as an independent oracle (a lower bound).
    """
    if method not in ("bottleneck", "bruteforce"):
        raise ValueError(f"unknown chain method {method!r}")
    ball = dist.ball
    basepoints = range(ball.inner_count) if basepoint is None else [int(basepoint)]
    best = _Extremum()
    for p in basepoints:
        G = _gromov_matrix(dist, p)
        if method == "bottleneck":
            value, chain = _bottleneck_defect(G)
        else:
            value, chain = _bruteforce_defect(G, maxlen)
        best.offer(value, (p,), chain)
    p = best.key[0]
    witness = {
        "basepoint": ball.word(p),
        "chain": _words(ball, best.data),
        "defect_doubled": int(best.value),
    }
    extra = {"method": method, "basepoint_mode": "all_inner" if basepoint is None else "fixed"}
    if method == "bruteforce":
        extra["maxlen"] = maxlen
    bound = "exact" if method == "bottleneck" else "lower"
    return _result("chain_defect", ball, best.value, bound, SamplingPlan.exhaustive(), witness, extra)


# ---------------------------------------------------------------------------
# polygon thinness constants

class _PolygonScan:
    """Exhaustive worst-case polygon thinness over every inner corner tuple.

    For a probe point p, the worst thinness of an (n+1)-gon whose last side
    has endpoints (a, b) with p on some last-side geodesic decomposes into a
    bottleneck chain problem: each non-last side contributes the maximal
    avoidance w_p(u, v) = max over geodesics u->v of d(p, image), and the
    polygon value is the max over corner chains of the minimum contribution.
    Exact n-step max-min matrix powers of w_p then cover every corner tuple
    at once, which is what makes exhaustive mode affordable.
    """

    def __init__(self, ball, dist):
        self.ball = ball
        self.dist = dist
        self.results = {}
        self.n_max = 0
        rows = dist.ensure_mid_rows()
        ni = ball.inner_count
        WP = np.empty((ball.mid_count, ni, ni), dtype=np.int16)
        for u in range(ni):
            for v in range(u, ni):
                vals = max_avoidance_block(ball, dist, u, v, rows)
                WP[:, u, v] = vals
                WP[:, v, u] = vals
        self.WP = WP
        self.D = dist.inner.astype(np.int16)

    def ensure(self, n_max):
        if n_max <= self.n_max:
            return
        ball, dist = self.ball, self.dist
        ni = ball.inner_count
        rows = dist.ensure_mid_rows()
        best = {}
        for n in range(1, n_max + 1):
            best[n] = _Extremum()
            best[n].offer(0, (0, 0, 0))
        for p in range(ball.mid_count):
            W = self.WP[p]
            dap = rows[p, :ni]
            mask = (dap[:, None].astype(np.int16) + dap[None, :]) == self.D
            B = W
            for n in range(1, n_max + 1):
                if n > 1:
                    B = np.minimum(B[:, :, None], W[None, :, :]).max(axis=1)
                vals = np.where(mask, B, np.int16(-1))
                m = int(vals.max())
                cur = best[n]
                if cur.value is None or m > cur.value:
                    flat = int(vals.argmax())
                    cur.offer(m, (p, flat // ni, flat % ni))
        for n in range(1, n_max + 1):
            self.results[n] = best[n]
        self.n_max = n_max

    def witness(self, n):
        """Reconstruct the extremal polygon for gon size n+1."""
        ext = self.results[n]
        p, a, b = ext.key
        W = self.WP[p].astype(np.int32)
        powers = [W]
        for _ in range(n - 1):
            powers.append(np.minimum(powers[-1][:, :, None], W[None, :, :]).max(axis=1))
        # corner chain b = y_0, ..., y_n = a maximizing the minimum avoidance
        chain = [a]
        for k in range(n, 1, -1):
            target = int(powers[k - 1][b, chain[0]])
            for z in range(W.shape[0]):
                if min(int(powers[k - 2][b, z]), int(W[z, chain[0]])) == target:
                    chain.insert(0, z)
                    break
        chain.insert(0, b)
        sides = [
            most_avoiding_geodesic(self.ball, self.dist, u, v, p)
            for u, v in zip(chain, chain[1:])
        ]
        last = geodesic_through(self.ball, self.dist, a, b, via=p)
        return {
            "corners": _words(self.ball, chain),
            "far_point": self.ball.word(p),
            "sides": [_words(self.ball, s.vertices) for s in sides],
            "last_side": _words(self.ball, last.vertices),
            "thinness": int(ext.value),
        }


def _polygon_scan(ball, dist) -> _PolygonScan:
    scan = getattr(dist, "_pscan", None)
    if scan is None:
        scan = dist._pscan = _PolygonScan(ball, dist)
    return scan


def polygon_tuple_value(ball, dist, corners):
    """Exact worst thinness over all geodesic realizations of one corner tuple."""
    a, b = corners[-1], corners[0]
    best = _Extremum()
    for p in interval(dist, a, b).vertices:
        val = min(
            max_avoidance(ball, dist, u, v, p)
            for u, v in zip(corners, corners[1:])
        )
        best.offer(val, (p,))
    return best.value, best.key[0]


def _polygon_tuple_witness(ball, dist, corners, p, value):
    sides = [
        most_avoiding_geodesic(ball, dist, u, v, p)
        for u, v in zip(corners, corners[1:])
    ]
    last = geodesic_through(ball, dist, corners[-1], corners[0], via=p)
    return {
        "corners": _words(ball, corners),
        "far_point": ball.word(p),
        "sides": [_words(ball, s.vertices) for s in sides],
        "last_side": _words(ball, last.vertices),
        "thinness": int(value),
    }


def polygon_delta(ball, dist, n, plan: SamplingPlan, method="auto") -> InvariantResult:
    """Worst vertex-level thinness over sampled geodesic (n+1)-gons.

    ``method='scan'`` (the exhaustive default) covers every corner tuple and
    every geodesic choice; ``'tuples'`` evaluates sampled corner tuples, each
    exactly over all geodesic choices; ``'interval'`` is the cheap lower-bound
    mode that replaces each side image by the full geodesic interval.
    """
    if n < 1:
        raise ValueError("polygon size parameter must be at least 1")
    if n + 1 > ball.inner_count:
        raise ValueError(
            f"a {n + 1}-gon needs {n + 1} corners but the inner ball has only "
            f"{ball.inner_count} vertices"
        )
    if method == "auto":
        method = "scan" if plan.mode == "exhaustive" else "tuples"
    if method == "scan":
        if plan.mode != "exhaustive":
            raise ValueError("the scan method is only meaningful for exhaustive plans")
        scan = _polygon_scan(ball, dist)
        scan.ensure(n)
        ext = scan.results[n]
        return _result(
            "polygon_delta", ball, 2 * ext.value, "exact", plan, scan.witness(n), {"n": n, "method": method}
        )

    best = _Extremum()
    best.offer(0, tuple([0] * (n + 1)), 0)
    if method == "tuples":
        for corners in plan.ordered_tuples(ball.inner_count, n + 1):
            value, p = polygon_tuple_value(ball, dist, corners)
            best.offer(value, tuple(corners), p)
        witness = _polygon_tuple_witness(ball, dist, list(best.key), best.data, best.value)
    elif method == "interval":
        for corners in plan.ordered_tuples(ball.inner_count, n + 1):
            Z = sorted(
                set(
                    w
                    for u, v in zip(corners, corners[1:])
                    for w in interval(dist, u, v).vertices
                )
            )
            iv = interval(dist, corners[-1], corners[0])
            value = max(dist.d_to_set(p, Z) for p in iv.vertices)
            best.offer(value, tuple(corners))
        witness = {"corners": _words(ball, best.key), "thinness": int(best.value)}
    else:
        raise ValueError(f"unknown polygon method {method!r}")
    value = 2 * best.value
    return InvariantResult(
        name="polygon_delta",
        value_doubled=value,
        bound="lower",
        plan=plan.describe(),
        witness=witness,
        r_in=ball.r_in,
        r_out=ball.r_out,
        extra={"n": n, "method": method},
    )


def rips_delta(ball, dist, plan: SamplingPlan) -> InvariantResult:
    """Worst thinness over sampled geodesic triangles (3-gons)."""
    res = polygon_delta(ball, dist, 2, plan)
    res.name = "rips_delta"
    return res


# ---------------------------------------------------------------------------
# bigons: asynchronous and synchronous fellow-traveling constants

def bigon_constants(ball, dist, plan: SamplingPlan):
    """(async, sync) fellow-traveler constants over sampled coterminal
    geodesic pairs.

    async is the worst one-sided Hausdorff distance from one geodesic into a
    coterminal one; sync is the worst distance between same-parameter
    vertices.  Every evaluated pair is checked against sync <= 2 * async.
    """
    n = ball.inner_count
    best_async = _Extremum()
    best_sync = _Extremum()
    best_async.offer(0, (0, 0, 0, 0), None)
    best_sync.offer(0, (0, 0, 0, 0), None)
    capped = False
    for x, y in plan.unordered_tuples(n, 2):
        if x == y:
            continue
        paths, truncated = enumerate_geodesics(ball, dist, x, y, cap=plan.geodesic_cap)
        capped = capped or truncated
        if len(paths) < 2:
            continue
        iv = np.asarray(interval(dist, x, y).vertices, dtype=np.int64)
        pos = {int(w): k for k, w in enumerate(iv)}
        block = np.stack([dist.row(w)[iv] for w in iv])
        local = [np.asarray([pos[w] for w in path.vertices]) for path in paths]
        for i, j in itertools.permutations(range(len(paths)), 2):
            sub = block[np.ix_(local[i], local[j])]
            a_val = int(sub.min(axis=1).max())
            s_val = int(block[local[i], local[j]].max())
            if s_val > 2 * a_val:
                raise InternalCheckError(
                    f"fellow-traveler bound violated for pair ({ball.word(x)}, {ball.word(y)})"
                )
            data = (paths[i], paths[j])
            best_async.offer(a_val, (x, y, i, j), data)
            best_sync.offer(s_val, (x, y, i, j), data)
    bound = "exact" if plan.mode == "exhaustive" and not capped else "lower"

    def bigon_witness(ext):
        x, y, _, _ = ext.key
        out = {"start": ball.word(x), "end": ball.word(y), "distance": int(ext.value)}
        if ext.data is not None:
            out["geodesic"] = _words(ball, ext.data[0].vertices)
            out["coterminal"] = _words(ball, ext.data[1].vertices)
        return out

    extra = {"capped": capped}
    res_async = _result(
        "bigon_async", ball, 2 * best_async.value, bound, plan, bigon_witness(best_async), extra
    )
    res_sync = _result(
        "bigon_sync", ball, 2 * best_sync.value, bound, plan, bigon_witness(best_sync), extra
    )
    return res_async, res_sync


# ---------------------------------------------------------------------------
# detour constant: how far an adversarial coterminal path can stay away

def _avoidance_levels(ball, rp, queries):
    """For probe distances rp, resolve g = max r such that each query pair is
    connected in the subgraph on { w : rp[w] >= r }; descending union sweep
    replaced by ascending connectivity checks, dropping pairs as they split.
    """
    out = {q: 0 for q in queries}
    active = list(queries)
    graph = ball.csr()
    r = 1
    while active:
        keep = np.flatnonzero(rp >= r)
        if keep.size == 0:
            break
        pos = np.full(ball.n_vertices, -1, dtype=np.int64)
        pos[keep] = np.arange(keep.size)
        sub = graph[keep][:, keep]
        _, labels = connected_components(sub, directed=False)
        nxt = []
        for x, y in active:
            px, py = pos[x], pos[y]
            if px >= 0 and py >= 0 and labels[px] == labels[py]:
                out[(x, y)] = r
                nxt.append((x, y))
        active = nxt
        r += 1
    return out


def masked_path(ball, rp, r, x, y):
    """Shortest path from x to y using only vertices with rp >= r."""
    allowed = rp >= r
    if not (allowed[x] and allowed[y]):
        raise ValueError("endpoints excluded by the mask")
    prev = {x: None}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            return list(reversed(path))
        for v, _ in ball.adj[u]:
            if allowed[v] and v not in prev:
                prev[v] = u
                queue.append(v)
    raise ValueError("mask disconnects the endpoints")


def detour_for_pair(ball, dist, x, y):
    """Worst distance from a geodesic vertex of (x, y) to the image of an
    adversarial coterminal path inside the padded ball.

    Returns ``(value, probe_vertex)``.
    """
    x, y = int(x), int(y)
    best = _Extremum()
    for p in interval(dist, x, y).vertices:
        rp = dist.row(p)
        g = _avoidance_levels(ball, rp, [(x, y)])[(x, y)]
        best.offer(g, (p,))
    return best.value, best.key[0]


def detour_epsilon(ball, dist, plan: SamplingPlan) -> InvariantResult:
    """Detour constant over sampled inner pairs; always a lower bound, since
    paths in the full group may leave any finite ball."""
    n = ball.inner_count
    queries_by_probe: dict[int, list] = {}
    for x, y in plan.unordered_tuples(n, 2):
        if x == y:
            continue
        for p in interval(dist, x, y).vertices:
            queries_by_probe.setdefault(int(p), []).append((x, y))
    best = _Extremum()
    best.offer(0, (0, 0, 0))
    for p in sorted(queries_by_probe):
        rp = dist.row(p)
        resolved = _avoidance_levels(ball, rp, queries_by_probe[p])
        for (x, y), g in resolved.items():
            best.offer(g, (x, y, p))
    x, y, p = best.key
    witness = {
        "start": ball.word(x),
        "end": ball.word(y),
        "geodesic_point": ball.word(p),
        "avoidance": int(best.value),
    }
    if best.value > 0 or x != y:
        path = masked_path(ball, dist.row(p), best.value, x, y)
        witness["adversarial_path"] = _words(ball, path)
    return _result("detour_epsilon", ball, 2 * best.value, "lower", plan, witness)


# ---------------------------------------------------------------------------
# mesh

def _adversarial_side(ball, dist, x, y):
    cache = getattr(dist, "_adversarial_cache", None)
    if cache is None:
        cache = dist._adversarial_cache = {}
    key = (min(x, y), max(x, y))
    path = cache.get(key)
    if path is None:
        value, p = detour_for_pair(ball, dist, key[0], key[1])
        path = tuple(masked_path(ball, dist.row(p), value, key[0], key[1]))
        cache[key] = path
    return path if path[0] == x else tuple(reversed(path))


def mesh_estimate(ball, dist, plan: SamplingPlan, mode="geodesic") -> InvariantResult:
    """Worst per-triangle mesh over sampled corner triples.

    Per triangle the mesh is the least possible diameter of one point per
    side, maximized over (capped) geodesic side choices; ``adversarial`` mode
    additionally offers each side's maximal-detour path.  Always reported as
    a lower bound: the true mesh ranges over arbitrary triangles.
    """
    if mode not in ("geodesic", "adversarial"):
        raise ValueError(f"unknown mesh mode {mode!r}")
    n = ball.inner_count
    best = _Extremum()
    best.offer(0, (0, 0, 0), None)
    capped = False
    for a, b, c in plan.unordered_tuples(n, 3):
        if a == b or b == c or a == c:
            continue
        side_pairs = [(a, b), (b, c), (c, a)]
        side_choices = []
        for u, v in side_pairs:
            paths, truncated = enumerate_geodesics(ball, dist, u, v, cap=plan.geodesic_cap)
            capped = capped or truncated
            choices = [p.vertices for p in paths]
            if mode == "adversarial":
                adv = _adversarial_side(ball, dist, u, v)
                if adv not in choices:
                    choices.append(adv)
            side_choices.append(choices)
        supports = [sorted(set(w for ch in side for w in ch)) for side in side_choices]
        pos = [{w: k for k, w in enumerate(s)} for s in supports]
        I0, I1, I2 = (np.asarray(s, dtype=np.int64) for s in supports)
        D01 = np.stack([dist.row(w)[I1] for w in I0])
        D12 = np.stack([dist.row(w)[I2] for w in I1])
        D02 = np.stack([dist.row(w)[I2] for w in I0])
        T = np.maximum(np.maximum(D01[:, :, None], D12[None, :, :]), D02[:, None, :])
        locals_ = [
            [np.asarray([pos[i][w] for w in ch]) for ch in side_choices[i]]
            for i in range(3)
        ]
        for i0, i1, i2 in itertools.product(*(range(len(s)) for s in side_choices)):
            block = T[np.ix_(locals_[0][i0], locals_[1][i1], locals_[2][i2])]
            value = int(block.min())
            key = (a, b, c, i0, i1, i2)
            if best.value is None or value > best.value or (value == best.value and key < best.key):
                flat = int(block.argmin())
                s1, s2 = block.shape[1], block.shape[2]
                pts = (
                    side_choices[0][i0][flat // (s1 * s2)],
                    side_choices[1][i1][(flat // s2) % s1],
                    side_choices[2][i2][flat % s2],
                )
                best.offer(value, key, (side_choices[0][i0], side_choices[1][i1], side_choices[2][i2], pts))
    witness = {"corners": _words(ball, best.key[:3]), "mesh": int(best.value)}
    if best.data is not None:
        s0, s1, s2, pts = best.data
        witness["sides"] = [_words(ball, s) for s in (s0, s1, s2)]
        witness["points"] = _words(ball, pts)
    extra = {"mode": mode, "capped": capped}
    return _result("mesh_estimate", ball, 2 * best.value, "lower", plan, witness, extra)


# ---------------------------------------------------------------------------
# quasi-convexity of a finitely generated subgroup

def enumerate_subgroup(ball, subgroup_gens):
    """Closure of the identity under subgroup generator words inside the ball.

    Returns ``(sorted vertex indices, M)`` where M is the largest word-metric
    length of a subgroup generator.
    """
    if ball.spec is None:
        raise ValueError("subgroup enumeration needs a ball with a group spec")
    if not subgroup_gens:
        raise ValueError("subgroup generator list is empty")
    spec = ball.spec
    letters = []
    for w in subgroup_gens:
        e = spec.parse_word(w)
        for candidate in (e, spec.invert(e)):
            if candidate not in ball.index:
                raise ValueError(
                    f"subgroup generator {w!r} leaves the radius-{ball.r_out} ball"
                )
            letters.append(candidate)
    M = max(int(ball.dist0[ball.index[e]]) for e in letters)
    seen = {0}
    queue = deque([0])
    while queue:
        h = queue.popleft()
        eh = ball.elements[h]
        for b in letters:
            idx = ball.index.get(spec.multiply(eh, b))
            if idx is not None and idx not in seen:
                seen.add(idx)
                queue.append(idx)
    return sorted(seen), M


def subgroup_quasiconvexity(ball, dist, subgroup_gens, detour_result=None) -> InvariantResult:
    """Quasi-convexity constant of the subgroup generated by the given words:
    the farthest a geodesic between inner subgroup elements strays from the
    subgroup's trace in the ball.  Reports M (largest generator length) and,
    when a detour result is supplied, whether q <= epsilon + M.
    """
    H, M = enumerate_subgroup(ball, subgroup_gens)
    H_arr = np.asarray(H, dtype=np.int64)
    H_inner = [h for h in H if h < ball.inner_count]
    best = _Extremum()
    best.offer(0, (0, 0, 0), 0)
    for h, h2 in itertools.combinations_with_replacement(H_inner, 2):
        for p in interval(dist, h, h2).vertices:
            row = dist.row(p)[H_arr]
            k = int(row.argmin())
            best.offer(int(row[k]), (h, h2, p), H[k])
    witness = {
        "h": ball.word(best.key[0]),
        "h2": ball.word(best.key[1]),
        "geodesic_point": ball.word(best.key[2]),
        "nearest_subgroup_element": ball.word(best.data),
        "distance": int(best.value),
    }
    extra = {
        "M": int(M),
        "subgroup_generators": list(subgroup_gens),
        "subgroup_vertices_in_ball": len(H),
        "subgroup_vertices_in_inner_ball": len(H_inner),
    }
    if detour_result is not None:
        eps_doubled = int(detour_result.value_doubled)
        extra["epsilon_doubled"] = eps_doubled
        extra["q_le_epsilon_plus_M"] = bool(2 * best.value <= eps_doubled + 2 * M)
    return _result(
        "subgroup_quasiconvexity", ball, 2 * best.value, "lower",
        SamplingPlan.exhaustive(), witness, extra,
    )


# ---------------------------------------------------------------------------
# hyperbolic-plane demo value

def h2_center_distance(radius_euclidean: float) -> float:
    """Poincare-disk distance from the origin to a point at the given
    euclidean radius: |ln((1 - r) / (1 + r))|.

    Diverges as r -> 1, which is what makes near-boundary polygon sides
    escape every fixed neighborhood of the center.
    """
    r = float(radius_euclidean)
    if not 0.0 <= r < 1.0:
        raise ValueError(f"euclidean radius must lie in [0, 1), got {r}")
    return abs(math.log((1.0 - r) / (1.0 + r)))
