"""Graphs, sparsity patterns, edge colorings and locality predicates."""
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from sparselog.errors import DimensionMismatchError, InvalidPartitionError

KAPPA_FIT_TOL = 0.5  # RMS residual (natural-log units) above which no decay rate is reported


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are stored as ``(tail, head)`` with ``tail < head``; that is also
    the orientation used wherever a direction is needed.
    """

    n: int
    edges: tuple

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside [0, {self.n})")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def from_edges(cls, n, edges):
        return cls(int(n), tuple(edges))

    @classmethod
    def ring(cls, n):
        if n < 3:
            raise ValueError("a ring needs at least 3 vertices")
        return cls(n, tuple((j, (j + 1) % n) for j in range(n)))

    @classmethod
    def path(cls, n):
        return cls(n, tuple((j, j + 1) for j in range(n - 1)))

    @classmethod
    def complete(cls, n):
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def star(cls, leaves):
        return cls(leaves + 1, tuple((0, j) for j in range(1, leaves + 1)))

    @classmethod
    def from_pattern(cls, pattern):
        """Graph whose edges are the off-diagonal entries of a (symmetrized) pattern."""
        mask = pattern.mask | pattern.mask.T
        i, j = np.nonzero(np.triu(mask, 1))
        return cls(pattern.n, tuple(zip(i.tolist(), j.tolist())))

    @classmethod
    def from_matrix(cls, m, tol=0.0):
        return cls.from_pattern(SparsityPattern.from_matrix(m, tol))

    @property
    def m(self):
        return len(self.edges)

    def neighbors(self):
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self):
        deg = np.zeros(self.n, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self):
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    @cached_property
    def edge_set(self):
        return frozenset(self.edges)

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in self.edge_set

    def to_text(self):
        lines = [f"{self.n} {self.m}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text):
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise ValueError("graph text must start with a line 'n m'")
        n, m = int(rows[0][0]), int(rows[0][1])
        if len(rows) - 1 != m:
            raise ValueError(f"header announces {m} edges but {len(rows) - 1} follow")
        return cls(n, tuple((int(r[0]), int(r[1])) for r in rows[1:]))


def max_degree(g):
    return int(g.degrees().max()) if g.n else 0


def bfs_distances(g, source, adj=None):
    """Distances from ``source``; -1 marks unreachable vertices."""
    adj = adj if adj is not None else g.neighbors()
    dist = np.full(g.n, -1, dtype=int)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def graph_distance(g, v, w):
    """Shortest-path length, or ``None`` if ``w`` is unreachable from ``v``."""
    for x in (v, w):
        if not 0 <= x < g.n:
            raise IndexError(f"vertex {x} outside [0, {g.n})")
    d = int(bfs_distances(g, v)[w])
    return None if d < 0 else d


def distance_matrix(g):
    """All-pairs distances with -1 for unreachable pairs."""
    adj = g.neighbors()
    return np.array([bfs_distances(g, s, adj) for s in range(g.n)], dtype=int).reshape(g.n, g.n)


@dataclass(frozen=True)
class SparsityPattern:
    n: int
    mask: np.ndarray

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        if mask.shape != (self.n, self.n):
            raise ValueError(f"mask shape {mask.shape} does not match n = {self.n}")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_matrix(cls, m, tol=0.0):
        m = np.asarray(m)
        return cls(m.shape[0], np.abs(m) > tol)

    @classmethod
    def of_graph(cls, g):
        return cls(g.n, g.adjacency() > 0)

    @classmethod
    def identity(cls, n):
        return cls(n, np.eye(n, dtype=bool))

    def __or__(self, other):
        return SparsityPattern(self.n, self.mask | other.mask)

    def __matmul__(self, other):
        return boolean_product(self, other)

    def __le__(self, other):
        return bool(np.all(~self.mask | other.mask))

    def __eq__(self, other):
        return isinstance(other, SparsityPattern) and self.n == other.n and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((self.n, self.mask.tobytes()))

    @property
    def nnz(self):
        return int(self.mask.sum())

    def coordinates(self):
        i, j = np.nonzero(self.mask)
        return list(zip(i.tolist(), j.tolist()))

    def to_text(self):
        return "".join(f"{i} {j}\n" for i, j in self.coordinates())


def boolean_product(p, q):
    prod = p.mask.astype(np.int64) @ q.mask.astype(np.int64)
    return SparsityPattern(p.n, prod > 0)


def pattern_power(p, k):
    """Boolean k-th power: (v, w) set iff a walk of exactly k steps joins them."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = SparsityPattern.identity(p.n)
    base = p
    while k:
        if k & 1:
            result = boolean_product(result, base)
        base = boolean_product(base, base)
        k >>= 1
    return result


def reach_pattern(p, k):
    """Union of boolean powers 0..k."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    step = p | SparsityPattern.identity(p.n)
    return pattern_power(step, k)


@dataclass(frozen=True)
class EdgeColoring:
    classes: tuple

    @property
    def m(self):
        return len(self.classes)

    def color_of(self):
        return {e: c for c, cls in enumerate(self.classes) for e in cls}


def is_bipartite(g):
    side = np.full(g.n, -1, dtype=int)
    adj = g.neighbors()
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if side[w] < 0:
                    side[w] = 1 - side[v]
                    queue.append(w)
                elif side[w] == side[v]:
                    return False
    return True


class _Palette:
    """Partial edge coloring with per-vertex color -> neighbor lookup."""

    def __init__(self, n, ncolors):
        self.ncolors = ncolors
        self.at = [dict() for _ in range(n)]
        self.color = {}

    def set(self, u, v, c):
        self.unset(u, v)
        if c in self.at[u] or c in self.at[v]:
            raise RuntimeError(f"color {c} already used at edge ({u}, {v})")
        self.color[(min(u, v), max(u, v))] = c
        self.at[u][c] = v
        self.at[v][c] = u

    def unset(self, u, v):
        c = self.color.pop((min(u, v), max(u, v)), None)
        if c is not None:
            del self.at[u][c]
            del self.at[v][c]

    def get(self, u, v):
        return self.color.get((min(u, v), max(u, v)))

    def is_free(self, v, c):
        return c not in self.at[v]

    def free(self, v):
        for c in range(self.ncolors):
            if c not in self.at[v]:
                return c
        raise RuntimeError(f"no free color at vertex {v}")

    def flip_path(self, start, a, b):
        """Swap colors a and b along the alternating path leaving ``start`` on color a."""
        path = []
        v, c = start, a
        while c in self.at[v]:
            w = self.at[v][c]
            path.append((v, w))
            v, c = w, (b if c == a else a)
        for x, y in path:
            self.unset(x, y)
        for idx, (x, y) in enumerate(path):
            self.set(x, y, b if idx % 2 == 0 else a)


def _color_bipartite(g, delta):
    pal = _Palette(g.n, max(delta, 1))
    for u, v in g.edges:
        a = pal.free(u)
        if not pal.is_free(v, a):
            b = pal.free(v)
            # the a/b path from v cannot end at u in a bipartite graph
            pal.flip_path(v, a, b)
        pal.set(u, v, a)
    return pal


def _color_misra_gries(g, delta):
    pal = _Palette(g.n, delta + 1)
    adj = g.neighbors()
    for x, f0 in g.edges:
        fan = [f0]
        in_fan = {f0}
        while True:
            last = fan[-1]
            nxt = None
            for u in adj[x]:
                if u in in_fan:
                    continue
                cu = pal.get(x, u)
                if cu is not None and pal.is_free(last, cu):
                    nxt = u
                    break
            if nxt is None:
                break
            fan.append(nxt)
            in_fan.add(nxt)
        c = pal.free(x)
        d = pal.free(fan[-1])
        if c != d:
            pal.flip_path(x, d, c)
        # after the flip, some prefix of the fan ends at a vertex where d is free
        w_idx = None
        for i, w in enumerate(fan):
            prefix_ok = all(
                pal.get(x, fan[j]) is not None and pal.is_free(fan[j - 1], pal.get(x, fan[j]))
                for j in range(1, i + 1)
            )
            if not prefix_ok:
                break
            if pal.is_free(w, d):
                w_idx = i
                break
        if w_idx is None:
            raise RuntimeError("Misra-Gries fan rotation failed")
        shifted = [pal.get(x, fan[j + 1]) for j in range(w_idx)] + [d]
        for j in range(1, w_idx + 1):
            pal.unset(x, fan[j])
        for j in range(w_idx + 1):
            pal.set(x, fan[j], shifted[j])
    return pal


def edge_color(g):
    """Proper edge coloring with at most ``max_degree(g) + 1`` classes.

    Bipartite graphs get exactly ``max_degree`` classes (alternating-path
    recoloring); other graphs use the Misra-Gries fan construction.
    """
    delta = max_degree(g)
    if g.m == 0:
        return EdgeColoring(classes=())
    pal = _color_bipartite(g, delta) if is_bipartite(g) else _color_misra_gries(g, delta)
    buckets = {}
    for e, c in pal.color.items():
        buckets.setdefault(c, []).append(e)
    classes = tuple(tuple(sorted(buckets[c])) for c in sorted(buckets))
    return EdgeColoring(classes=classes)


def is_proper_coloring(g, coloring):
    seen = [e for cls in coloring.classes for e in cls]
    if sorted(seen) != list(g.edges) or len(seen) != len(set(seen)):
        return False
    for cls in coloring.classes:
        touched = [v for e in cls for v in e]
        if len(touched) != len(set(touched)):
            return False
    return True


@dataclass(frozen=True)
class LocalityReport:
    """Outcome of a locality check plus the entry-magnitude decay profile.

    ``profile`` maps graph distance to the largest ``|entry|`` over pairs at
    that distance; ``kappa`` is the fitted rate in ``max|entry| ~ exp(-kappa d)``,
    reported only when the log-linear fit residual is below ``KAPPA_FIT_TOL``.
    """

    predicate: str
    holds: bool
    tol: float
    profile: dict = field(default_factory=dict)
    unreachable_max: float = 0.0
    kappa: float = None
    fit_residual: float = None
    worst_violation: float = 0.0

    def to_dict(self):
        return {
            "predicate": self.predicate,
            "holds": self.holds,
            "tol": self.tol,
            "profile": {str(d): v for d, v in self.profile.items()},
            "unreachable_max": self.unreachable_max,
            "kappa": self.kappa,
            "fit_residual": self.fit_residual,
            "worst_violation": self.worst_violation,
        }


def decay_profile(m, g, dist=None):
    """Max ``|entry|`` per realized graph distance, and over unreachable pairs."""
    a = np.abs(np.asarray(m))
    dist = distance_matrix(g) if dist is None else dist
    profile = {}
    for d in np.unique(dist[dist >= 0]):
        profile[int(d)] = float(a[dist == d].max())
    unreachable = dist < 0
    return profile, float(a[unreachable].max()) if unreachable.any() else 0.0


def fit_decay_rate(profile):
    """Least-squares fit of log(max|entry|) against distance d >= 1."""
    pts = [(d, v) for d, v in sorted(profile.items()) if d >= 1 and v > 0.0]
    if len(pts) < 2:
        return None, None
    d = np.array([p[0] for p in pts], dtype=float)
    y = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(d, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * d + intercept)) ** 2)))
    return float(-slope), resid


def _report(predicate, holds, tol, m, g, worst, dist=None):
    profile, unreachable = decay_profile(m, g, dist)
    kappa, resid = fit_decay_rate(profile)
    if resid is None or resid >= KAPPA_FIT_TOL:
        kappa = None
    return LocalityReport(
        predicate=predicate,
        holds=bool(holds),
        tol=float(tol),
        profile=profile,
        unreachable_max=unreachable,
        kappa=kappa,
        fit_residual=resid,
        worst_violation=float(worst),
    )


def _check_dims(m, g):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape != (g.n, g.n):
        raise DimensionMismatchError(f"matrix shape {m.shape} does not match graph order {g.n}")
    return m


def offgraph_mask(g):
    """True at off-diagonal positions that are not edges of ``g``."""
    mask = ~(g.adjacency() > 0)
    np.fill_diagonal(mask, False)
    return mask


def check_z_local(m, g, tol=0.0):
    """Off-diagonal entries off the edge set must be at most ``tol`` in magnitude."""
    m = _check_dims(m, g)
    off = np.abs(m)[offgraph_mask(g)]
    worst = float(off.max()) if off.size else 0.0
    holds = worst <= tol
    return holds, _report("Z", holds, tol, m, g, worst)


def check_h_local(h, g, tol=0.0):
    """Hermitian, norm at most pi, and supported on the edges of ``g``."""
    h = _check_dims(h, g)
    z_ok, report = check_z_local(h, g, tol)
    herm = float(np.linalg.norm(h - h.conj().T, 2))
    holds = z_ok and herm <= max(tol, 1e-10) and np.linalg.norm(h, 2) <= np.pi + max(tol, 1e-12)
    return holds, replace(report, predicate="H", holds=bool(holds))


def check_c_local(m, g, partition, vertex_of=None, tol=0.0):
    """Block-diagonal over ``partition`` with each block on one vertex or one edge.

    ``vertex_of`` maps a basis index to its graph vertex (identity by default).
    """
    m = np.asarray(m)
    dim = m.shape[0]
    vertex_of = vertex_of or (lambda i: i)
    label = np.full(dim, -1, dtype=int)
    for b, block in enumerate(partition):
        for i in block:
            if not 0 <= i < dim:
                raise InvalidPartitionError(f"basis index {i} outside [0, {dim})")
            if label[i] >= 0:
                raise InvalidPartitionError(f"basis index {i} appears in two blocks")
            label[i] = b
    if (label < 0).any():
        raise InvalidPartitionError(f"basis indices {np.flatnonzero(label < 0).tolist()} not covered")
    cross = label[:, None] != label[None, :]
    if cross.any() and np.abs(m[cross]).max() > tol:
        return False
    for block in partition:
        verts = {vertex_of(i) for i in block}
        if len(verts) > 2:
            return False
        if len(verts) == 2 and not g.has_edge(*verts):
            return False
    return True
