"""Finite metric spaces with exact distances, Gromov products and the
hyperbolicity lemmas that rest on them.

Distances are stored as an integer matrix together with a common
denominator, so every derived quantity stays an exact rational.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from .errors import NoGeodesic, PathTooLong, SampleSizeZero
from .report import CheckReport
from .words import format_word, free_reduce, inverse, letters_of_rank, reduced_words


class FiniteMetricSpace:
    def __init__(self, labels: Sequence[Hashable], dist, denom: int = 1,
                 adjacency: Sequence[Sequence[int]] | None = None, name: str = "space"):
        self.labels = list(labels)
        self.index = {p: i for i, p in enumerate(self.labels)}
        self.D = np.asarray(dist, dtype=np.int64)
        self.denom = denom
        self.adjacency = [sorted(a) for a in adjacency] if adjacency is not None else None
        self.name = name
        n = len(self.labels)
        if self.D.shape != (n, n):
            raise ValueError("distance matrix shape does not match point count")
        self._next_hop = None
        self._geo = None

    def __len__(self) -> int:
        return len(self.labels)

    def idx(self, p) -> int:
        """Index of a point given by label, or by index when it is an int."""
        if p in self.index:
            return self.index[p]
        if isinstance(p, (int, np.integer)) and 0 <= p < len(self.labels):
            return int(p)
        raise KeyError(p)

    def dist(self, p, q) -> Fraction:
        return Fraction(int(self.D[self.idx(p), self.idx(q)]), self.denom)

    def check_metric(self) -> bool:
        """Symmetry, zero diagonal and the triangle inequality, exhaustively."""
        D = self.D
        if not (D == D.T).all() or (np.diag(D) != 0).any() or (D < 0).any():
            return False
        for k in range(len(self)):
            if (D > D[:, k : k + 1] + D[k : k + 1, :]).any():
                return False
        return True

    # -- geodesics ----------------------------------------------------------

    def next_hops(self) -> np.ndarray:
        """NH[i, j] = first neighbour of i (by index) on a geodesic to j, or -1."""
        if self._next_hop is None:
            if self.adjacency is None:
                raise NoGeodesic("space has no adjacency structure")
            n, D = len(self), self.D
            nh = np.full((n, n), -1, dtype=np.int64)
            for i in range(n):
                row = nh[i]
                for nb in self.adjacency[i]:
                    ok = (row < 0) & (D[i, nb] + D[nb] == D[i]) & (D[i, nb] > 0)
                    row[ok] = nb
            self._next_hop = nh
        return self._next_hop

    def geodesic(self, p, q) -> "GeodesicSegment":
        """Deterministic geodesic; for i > j it is the reversal of the one from j to i."""
        i, j = self.idx(p), self.idx(q)
        if i > j:
            g = self.geodesic(j, i)
            return GeodesicSegment(i, j, tuple(reversed(g.trace)))
        nh = self.next_hops()
        trace = [i]
        cur = i
        while cur != j:
            cur = int(nh[cur, j])
            if cur < 0:
                raise NoGeodesic(f"no geodesic from {self.labels[i]} to {self.labels[j]}")
            trace.append(cur)
        return GeodesicSegment(i, j, tuple(trace))

    def geodesic_table(self) -> np.ndarray:
        """G[i, j, t] = point at step t of geodesic(i, j); -1 past the end."""
        if self._geo is None:
            n = len(self)
            nh = self.next_hops()
            steps = [np.tile(np.arange(n)[:, None], (1, n))]
            cols = np.tile(np.arange(n)[None, :], (n, 1))
            while True:
                cur = steps[-1]
                live = (cur >= 0) & (cur != cols)
                if not live.any():
                    break
                nxt = np.full_like(cur, -1)
                nxt[live] = nh[cur[live], cols[live]]
                if (nxt[live] < 0).any():
                    raise NoGeodesic("graph distances are not realised by paths")
                steps.append(nxt)
            G = np.stack(steps, axis=2)
            lengths = (G >= 0).sum(axis=2) - 1
            iu, ju = np.nonzero(np.arange(n)[:, None] > np.arange(n)[None, :])
            for i, j in zip(iu, ju):
                L = lengths[j, i]
                G[i, j, : L + 1] = G[j, i, L::-1]
                G[i, j, L + 1 :] = -1
            self._geo = G
        return self._geo


@dataclass(frozen=True)
class GeodesicSegment:
    start: int
    end: int
    trace: tuple[int, ...]

    def is_valid(self, S: FiniteMetricSpace) -> bool:
        t = self.trace
        if not t or t[0] != self.start or t[-1] != self.end:
            return False
        return sum(int(S.D[a, b]) for a, b in zip(t, t[1:])) == int(S.D[self.start, self.end])


# -- builders ----------------------------------------------------------------


def graph_space(n: int, edges: Sequence[tuple[int, int]], labels=None, name="graph") -> FiniteMetricSpace:
    """Path metric of a connected graph with unit edges (BFS from every vertex)."""
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    D = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        D[s, s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if D[s, v] < 0:
                    D[s, v] = D[s, u] + 1
                    dq.append(v)
    if (D < 0).any():
        raise ValueError("graph is not connected")
    return FiniteMetricSpace(labels if labels is not None else list(range(n)), D, 1,
                             [list(a) for a in adj], name)


def edge_list_space(lines: Sequence[str], name="edges") -> FiniteMetricSpace:
    """Parse ``u v`` lines (blank lines and ``#`` comments ignored)."""
    labels: dict[str, int] = {}
    edges = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {raw!r}")
        ids = [labels.setdefault(p, len(labels)) for p in parts]
        edges.append(tuple(ids))
    return graph_space(len(labels), edges, list(labels), name)


def tree_ball(radius: int, rank: int = 2) -> FiniteMetricSpace:
    """Ball of the given radius in the Cayley tree of the free group; labels are words."""
    words = [w for r in range(radius + 1) for w in reduced_words(rank, r)]
    index = {w: i for i, w in enumerate(words)}
    edges = []
    for w, i in index.items():
        for g in letters_of_rank(rank):
            u = free_reduce(w + (g,))
            if u in index and index[u] > i:
                edges.append((i, index[u]))
    n = len(words)
    D = np.zeros((n, n), dtype=np.int64)
    for i, u in enumerate(words):
        ui = inverse(u)
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = len(free_reduce(ui + words[j]))
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return FiniteMetricSpace([format_word(w) or "e" for w in words], D, 1, adj, f"tree:{radius}")


def cycle_space(n: int) -> FiniteMetricSpace:
    return graph_space(n, [(i, (i + 1) % n) for i in range(n)], name=f"cycle:{n}")


def builtin_space(spec: str) -> FiniteMetricSpace:
    """``builtin:tree:R`` or ``builtin:cycle:N``."""
    parts = spec.split(":")
    if len(parts) == 3 and parts[0] == "builtin":
        if parts[1] == "tree":
            return tree_ball(int(parts[2]))
        if parts[1] == "cycle":
            return cycle_space(int(parts[2]))
    raise ValueError(f"unknown builtin space {spec!r}")


# -- Gromov products and four-point delta ----------------------------------


def gromov_product(S: FiniteMetricSpace, x, y, w) -> Fraction:
    i, j, k = S.idx(x), S.idx(y), S.idx(w)
    D = S.D
    return Fraction(int(D[i, k] + D[j, k] - D[i, j]), 2 * S.denom)


@dataclass(frozen=True)
class DeltaEstimate:
    delta: Fraction
    witnesses: tuple | None
    mode: str
    sample_count: int | None = None
    seed: int | None = None


def _defects(s1, s2, s3):
    hi = np.maximum(np.maximum(s1, s2), s3)
    lo = np.minimum(np.minimum(s1, s2), s3)
    return hi - (s1 + s2 + s3 - hi - lo)


def _sorted_triples(lo: int, n: int) -> np.ndarray:
    """All (y, z, w) with lo <= y <= z <= w < n, in lexicographic order."""
    parts = []
    for y in range(lo, n):
        zi, wi = np.triu_indices(n - y)
        parts.append(np.stack([np.full(len(zi), y), zi + y, wi + y], axis=1))
    return np.concatenate(parts).astype(np.int64)


def _scan_x(D: np.ndarray, x: int, chunk: int) -> tuple[int, tuple[int, int, int, int] | None]:
    """Max doubled defect over sorted quadruples x <= y <= z <= w.

    The defect is invariant under permuting the four points, so sorted
    quadruples cover everything.
    """
    n = D.shape[0]
    best, wit = -1, None
    ys = list(range(x, n))
    start = 0
    while start < len(ys):
        # group y values so that each batch holds about ``chunk`` triples
        stop, size = start, 0
        while stop < len(ys) and (size == 0 or size + (n - ys[stop]) ** 2 // 2 <= chunk):
            size += (n - ys[stop]) * (n - ys[stop] + 1) // 2
            stop += 1
        parts = []
        for y in ys[start:stop]:
            zi, wi = np.triu_indices(n - y)
            parts.append(np.stack([np.full(len(zi), y), zi + y, wi + y]))
        y, z, w = np.concatenate(parts, axis=1)
        d = _defects(D[x, y] + D[z, w], D[x, z] + D[y, w], D[x, w] + D[y, z])
        k = int(d.argmax())
        v = int(d[k])
        if v > best:
            best, wit = v, (x, int(y[k]), int(z[k]), int(w[k]))
        start = stop
    return best, wit


def four_point_delta(S: FiniteMetricSpace, mode: str = "exhaustive", samples: int = 0,
                     seed: int = 0, threads: int | None = None) -> DeltaEstimate:
    """Smallest delta with (x|y)_w >= min((x|z)_w, (y|z)_w) - delta on the scanned quadruples.

    Equivalently half the gap between the largest and middle of the three
    pair sums |xy|+|zw|, |xz|+|yw|, |xw|+|yz|.  Ties between quadruples of
    equal defect go to the lexicographically smallest index quadruple.
    """
    n = len(S)
    D = S.D
    if mode == "exhaustive":
        if n < 4:
            return DeltaEstimate(Fraction(0), None, "exhaustive")
        if threads is None:
            threads = int(os.environ.get("GT_THREADS", "1") or 1)
        chunk = 2_000_000
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                results = list(ex.map(lambda x: _scan_x(D, x, chunk), range(n)))
        else:
            results = [_scan_x(D, x, chunk) for x in range(n)]
        best = max(r[0] for r in results)
        wit = min(r[1] for r in results if r[0] == best)
        return DeltaEstimate(Fraction(best, 2 * S.denom),
                             tuple(S.labels[i] for i in wit), "exhaustive")
    if mode == "sampled":
        if samples <= 0:
            raise SampleSizeZero("sampled mode needs a positive sample count")
        rng = np.random.default_rng(seed)
        q = rng.integers(0, n, size=(samples, 4))
        x, y, z, w = q.T
        d = _defects(D[x, y] + D[z, w], D[x, z] + D[y, w], D[x, w] + D[y, z])
        best = int(d.max())
        cands = q[d == best]
        wit = min(map(tuple, cands.tolist()))
        return DeltaEstimate(Fraction(best, 2 * S.denom), tuple(S.labels[i] for i in wit),
                             "sampled", samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


# -- tripods -------------------------------------------------------------------


@dataclass(frozen=True)
class Tripod:
    arm_lengths: tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class TripodPoint:
    leg: int  # 0, 1, 2 for the legs ending at x, y, z
    r: Fraction  # distance from the centre


def tripod_map(S: FiniteMetricSpace, x, y, z) -> Tripod:
    i, j, k = S.idx(x), S.idx(y), S.idx(z)
    for a, b in ((i, j), (j, k), (k, i)):
        S.geodesic(a, b)  # raises NoGeodesic when unrealised
    return Tripod((gromov_product(S, j, k, i), gromov_product(S, i, k, j),
                   gromov_product(S, i, j, k)))


def tripod_image(tri: Tripod, side: tuple[int, int], t: Fraction) -> TripodPoint:
    """Image of the point at distance t from the first corner of ``side``.

    ``side`` names corners by leg number, e.g. (0, 1) for the side [x, y].
    """
    u, v = side
    a = tri.arm_lengths[u]
    if t <= a:
        return TripodPoint(u, a - t)
    return TripodPoint(v, t - a)


def tripod_distance(p: TripodPoint, q: TripodPoint) -> Fraction:
    return abs(p.r - q.r) if p.leg == q.leg else p.r + q.r


def triangle_points(S: FiniteMetricSpace, x, y, z):
    """Yield (point, side, t) for every trace point of the three sides."""
    corners = (S.idx(x), S.idx(y), S.idx(z))
    for side in ((0, 1), (1, 2), (2, 0)):
        seg = S.geodesic(corners[side[0]], corners[side[1]])
        for p in seg.trace:
            yield p, side, S.dist(seg.start, p)


def check_tripod(S: FiniteMetricSpace, delta, x, y, z) -> CheckReport:
    """|pq| - 4 delta <= |phi(p) phi(q)| <= |pq| on one triangle."""
    delta = Fraction(delta)
    tri = tripod_map(S, x, y, z)
    pts = [(p, tripod_image(tri, side, t)) for p, side, t in triangle_points(S, x, y, z)]
    worst, bad, n = None, 0, 0
    for a in range(len(pts)):
        for b in range(a, len(pts)):
            p, fp = pts[a]
            q, fq = pts[b]
            d = S.dist(p, q)
            td = tripod_distance(fp, fq)
            slack = min(d - td, td - (d - 4 * delta))
            worst = slack if worst is None else min(worst, slack)
            n += 1
            bad += slack < 0
    return CheckReport("tripod", bad == 0, True, worst, n, bad, {"arms": tri.arm_lengths})


def scan_tripod_band(S: FiniteMetricSpace, delta) -> CheckReport:
    """Tripod band over every triangle of S, vectorised over vertex triples.

    Geodesics are canonical (reversal-consistent), so each unordered triple
    determines one triangle and permuting its corners permutes the legs.
    Along a single side the map is an isometry exactly when the trace is
    geodesic, so same-side pairs are replaced by a check of every trace.
    """
    delta = Fraction(delta)
    D, G, n = S.D, S.geodesic_table(), len(S)
    lengths_all = (G >= 0).sum(axis=2) - 1
    steps = G.shape[2]
    walked = np.zeros((n, n), dtype=np.int64)
    for t in range(steps - 1):
        a, b = G[:, :, t], G[:, :, t + 1]
        live = b >= 0
        walked[live] += D[a[live], b[live]]
    traces_ok = bool((walked == D).all())

    X, Y, Z = (a.ravel() for a in np.meshgrid(np.arange(n), np.arange(n), np.arange(n),
                                              indexing="ij"))
    keep = (X <= Y) & (Y <= Z)
    corners = (X[keep], Y[keep], Z[keep])
    X, Y, Z = corners
    arms2 = (D[X, Y] + D[X, Z] - D[Y, Z], D[X, Y] + D[Y, Z] - D[X, Z], D[X, Z] + D[Y, Z] - D[X, Y])
    sides = ((0, 1), (1, 2), (2, 0))
    lengths = [lengths_all[corners[u], corners[v]] for u, v in sides]
    upper = lower = np.iinfo(np.int64).min
    checked = 0
    for s1, s2 in ((0, 1), (0, 2), (1, 2)):
        u1, v1 = sides[s1]
        u2, v2 = sides[s2]
        for t1 in range(steps):
            idx1 = np.nonzero(lengths[s1] >= t1)[0]
            if len(idx1) == 0:
                break
            c1 = corners[u1][idx1]
            p = G[c1, corners[v1][idx1], t1]
            pos1, a1 = 2 * D[c1, p], arms2[u1][idx1]
            leg1, r1 = np.where(pos1 <= a1, u1, v1), np.abs(a1 - pos1)
            len2 = lengths[s2][idx1]
            for t2 in range(steps):
                sub = np.nonzero(len2 >= t2)[0]
                if len(sub) == 0:
                    break
                j = idx1[sub]
                c2 = corners[u2][j]
                q = G[c2, corners[v2][j], t2]
                pos2, a2 = 2 * D[c2, q], arms2[u2][j]
                leg2, r2 = np.where(pos2 <= a2, u2, v2), np.abs(a2 - pos2)
                td = np.where(leg1[sub] == leg2, np.abs(r1[sub] - r2), r1[sub] + r2)
                d2 = 2 * D[p[sub], q]
                upper = max(upper, int((td - d2).max()))
                lower = max(lower, int((d2 - td).max()))
                checked += len(sub)
    tol = 4 * delta
    up = Fraction(upper, 2 * S.denom)
    lo = Fraction(lower, 2 * S.denom)
    ok = traces_ok and up <= 0 and lo <= tol
    return CheckReport("tripod-band", ok, True, min(-up, tol - lo), checked, 0 if ok else 1,
                       {"max_expansion": up, "max_contraction": lo, "traces_geodesic": traces_ok})


# -- projections and the chain / neighbourhood lemmas ----------------------------


def project_to_geodesic(S: FiniteMetricSpace, x, seg: GeodesicSegment) -> int:
    """First trace point (from the start) at minimal distance from x."""
    i = S.idx(x)
    best, arg = None, None
    for p in seg.trace:
        d = int(S.D[i, p])
        if best is None or d < best:
            best, arg = d, p
    return arg


def check_projection_lemma(S: FiniteMetricSpace, delta, x, seg: GeodesicSegment) -> CheckReport:
    """(x|q)_p <= 4 delta and |xq| >= |xp| + |pq| - 8 delta for all trace points q."""
    delta = Fraction(delta)
    i = S.idx(x)
    p = project_to_geodesic(S, i, seg)
    worst, bad = None, 0
    max_prod = Fraction(0)
    for q in seg.trace:
        prod = gromov_product(S, i, q, p)
        max_prod = max(max_prod, prod)
        s = min(4 * delta - prod, S.dist(i, q) - (S.dist(i, p) + S.dist(p, q) - 8 * delta))
        worst = s if worst is None else min(worst, s)
        bad += s < 0
    return CheckReport("projection", bad == 0, True, worst, len(seg.trace), bad,
                       {"projection": S.labels[p], "max_product": max_prod})


def scan_projection_lemma(S: FiniteMetricSpace, delta) -> CheckReport:
    """Projection lemma for every point and every canonical geodesic of S.

    Both inequalities of the lemma reduce to 2 (x|q)_p <= 8 delta.
    """
    delta = Fraction(delta)
    D, G, n = S.D, S.geodesic_table(), len(S)
    rows = np.arange(n)
    worst, checked = None, 0
    for i in range(n):
        for j in range(n):
            trace = G[i, j][G[i, j] >= 0]
            dx = D[:, trace]
            p = trace[dx.argmin(axis=1)]  # first minimiser, i.e. nearest the start
            prod2 = D[rows, p][:, None] + D[p][:, trace] - dx
            m = int(prod2.max())
            worst = m if worst is None else max(worst, m)
            checked += prod2.size
    prod = Fraction(worst, 2 * S.denom)
    ok = prod <= 4 * delta
    return CheckReport("projection", ok, True, 4 * delta - prod, checked, 0 if ok else 1,
                       {"max_product": prod})


def _chain_hypotheses(S, delta, x, y, p, q) -> bool:
    """The four printed hypotheses (without the separation |pq| > 9 delta)."""
    D = S.D
    return bool(gromov_product(S, x, q, p) <= 4 * delta and gromov_product(S, y, p, q) <= 4 * delta
                and D[x, p] <= D[x, q] and D[y, q] <= D[y, p])


def check_chain_lemma(S: FiniteMetricSpace, delta, x, y, p, q) -> CheckReport:
    """|xy| >= |xp| + |pq| + |qy| - 14 delta.

    Besides the four printed hypotheses this needs |pq| > 9 delta: with
    p = q and x = y the other four hold trivially while the conclusion
    fails.  Quadruples missing only the separation are reported with
    ``status = "separation unmet"`` and their slack, but not counted as
    violations.
    """
    delta = Fraction(delta)
    x, y, p, q = (S.idx(v) for v in (x, y, p, q))
    if not _chain_hypotheses(S, delta, x, y, p, q):
        return CheckReport("chain", True, False, None, 0, 0, {"status": "hypotheses unmet"})
    slack = S.dist(x, y) - (S.dist(x, p) + S.dist(p, q) + S.dist(q, y) - 14 * delta)
    if S.dist(p, q) <= 9 * delta:
        return CheckReport("chain", True, False, slack, 0, 0, {"status": "separation unmet"})
    return CheckReport("chain", slack >= 0, True, slack, 1, int(slack < 0))


def scan_chain_lemma(S: FiniteMetricSpace, delta) -> CheckReport:
    """Chain lemma over all quadruples meeting its hypotheses.

    The statement is invariant under (x, p) <-> (y, q), so p <= q suffices.
    ``printed_counterexamples`` counts failures among quadruples that meet
    the four printed hypotheses but have |pq| <= 9 delta.
    """
    delta = Fraction(delta)
    D, n = S.D, len(S)
    # 2 (x|q)_p <= 8 delta, compared in integers
    lim_num, lim_den = 8 * delta.numerator * S.denom, delta.denominator
    worst, printed_worst, checked, printed_bad = None, None, 0, 0
    sep_num, sep_den = 9 * delta.numerator * S.denom, delta.denominator
    tol_num = 14 * delta.numerator * S.denom
    for p in range(n):
        for q in range(p, n):
            xs = np.nonzero((D[:, p] + D[p, q] - D[:, q]) * lim_den <= lim_num)[0]
            xs = xs[D[xs, p] <= D[xs, q]]
            ys = np.nonzero((D[:, q] + D[p, q] - D[:, p]) * lim_den <= lim_num)[0]
            ys = ys[D[ys, q] <= D[ys, p]]
            if len(xs) == 0 or len(ys) == 0:
                continue
            val = D[np.ix_(xs, ys)] - D[xs, p][:, None] - D[p, q] - D[ys, q][None, :]
            m = int(val.min())
            printed_worst = m if printed_worst is None else min(printed_worst, m)
            if D[p, q] * sep_den <= sep_num:
                printed_bad += int((val * lim_den < -tol_num).sum()) * (1 if p == q else 2)
                continue
            worst = m if worst is None else min(worst, m)
            checked += val.size
    printed = None if printed_worst is None else Fraction(printed_worst, S.denom) + 14 * delta
    extra = {"printed_counterexamples": printed_bad, "printed_worst_slack": printed}
    if worst is None:
        return CheckReport("chain", True, False, None, 0, 0, {"status": "hypotheses unmet", **extra})
    slack = Fraction(worst, S.denom) + 14 * delta
    return CheckReport("chain", slack >= 0, True, slack, checked, int(slack < 0), extra)


def check_neighborhood_lemma(S: FiniteMetricSpace, delta, seg: GeodesicSegment,
                             path: Sequence, ell) -> CheckReport:
    """Every point of a path of length <= |xy| + ell lies within ell/2 + 8 delta of [x, y]."""
    delta, ell = Fraction(delta), Fraction(ell)
    pts = [S.idx(v) for v in path]
    if not pts or pts[0] != seg.start or pts[-1] != seg.end:
        raise ValueError("path endpoints must match the segment endpoints")
    length = sum((S.dist(a, b) for a, b in zip(pts, pts[1:])), Fraction(0))
    if length > S.dist(seg.start, seg.end) + ell:
        raise PathTooLong(f"path length {length} exceeds |xy| + {ell}")
    dev = max(min(S.dist(v, t) for t in seg.trace) for v in pts)
    bound = ell / 2 + 8 * delta
    return CheckReport("neighborhood", dev <= bound, True, bound - dev, len(pts),
                       int(dev > bound), {"deviation": dev, "bound": bound})


def scan_neighborhood_lemma(S: FiniteMetricSpace, delta) -> CheckReport:
    """Neighbourhood lemma for every path made of two geodesics x -> w -> y.

    Such a path has length |xy| + 2 (x|y)_w, so ell is taken to be exactly
    that excess.
    """
    delta = Fraction(delta)
    D, G, n = S.D, S.geodesic_table(), len(S)
    worst, checked = None, 0
    bound_extra = 8 * delta
    for x in range(n):
        for y in range(x, n):
            trace = G[x, y][G[x, y] >= 0]
            dist_to_seg = D[:, trace].min(axis=1)  # for every vertex
            ell = D[x, :] + D[:, y] - D[x, y]  # excess length per waypoint w
            legs = np.concatenate([G[x, :, :], G[:, y, :]], axis=1)  # (w, points)
            dev = np.where(legs >= 0, dist_to_seg[np.maximum(legs, 0)], 0).max(axis=1)
            s = int((ell - 2 * dev).min())  # 2 (ell/2 - dev)
            worst = s if worst is None else min(worst, s)
            checked += n
    slack = Fraction(worst, 2 * S.denom) + bound_extra
    return CheckReport("neighborhood", slack >= 0, True, slack, checked, int(slack < 0))
