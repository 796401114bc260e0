"""Symmetric Lie-Trotter product for exp(itA) over edge-color classes.

Each color class C_j is a matching, so ``h_j = sum_{e in C_j} (|e+><e-| + h.c.)``
is a direct sum of 2x2 flips and ``exp(i delta h_j)`` is a layer of disjoint
two-level rotations. One step is the palindrome

    U_delta = (F_1 F_2 ... F_m)(F_m ... F_1),    F_j = exp(i delta h_j),

which approximates ``exp(2 i delta A)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from sparselog import graphcore, kernels, opalg
from sparselog.errors import InvalidColoringError

STEP_SLACK = 1e-9


def color_hamiltonians(g, coloring):
    if not graphcore.is_proper_coloring(g, coloring):
        raise InvalidColoringError("coloring is not a proper edge coloring of the graph")
    hs = []
    for cls in coloring.classes:
        h = np.zeros((g.n, g.n), dtype=np.complex128)
        for u, v in cls:
            h[u, v] = h[v, u] = 1.0
        hs.append(h)
    return hs


def matching_pairs(h, tol=1e-12):
    """Pairs (tail, head) of a matching Hamiltonian; raises if ``h`` is not one."""
    h = np.asarray(h)
    a = np.abs(h) > tol
    if np.any(np.diag(a)):
        raise InvalidColoringError("matching Hamiltonian must have zero diagonal")
    if np.any(a.sum(axis=1) > 1):
        raise InvalidColoringError("edge terms share a vertex and do not commute")
    i, j = np.nonzero(np.triu(a, 1))
    if not (np.allclose(h[i, j], 1.0, atol=tol) and np.allclose(h[j, i], 1.0, atol=tol)):
        raise InvalidColoringError("matching Hamiltonian entries must be 1 on each edge")
    if a.sum() != 2 * len(i):
        raise InvalidColoringError("matching Hamiltonian must be symmetric")
    return i.astype(np.intp), j.astype(np.intp)


def factor_exponential(h, delta):
    """``exp(i delta h)`` in closed form, block by block."""
    tails, heads = matching_pairs(h)
    n = np.asarray(h).shape[0]
    f = np.eye(n, dtype=np.complex128)
    kernels.apply_pair_rotations(f, tails, heads, math.cos(delta), 1j * math.sin(delta))
    return f


def matching_partition(g, cls):
    """Basis partition induced by a matching: its pairs plus singletons."""
    matched = {v for e in cls for v in e}
    return [list(e) for e in cls] + [[v] for v in range(g.n) if v not in matched]


@dataclass(frozen=True)
class TrotterPlan:
    graph: graphcore.Graph
    coloring: graphcore.EdgeColoring
    t: float
    delta: float
    steps: int
    residual_delta: float  # half-width of the closing step covering |t| - 2 delta steps
    lam: float

    @property
    def m(self):
        return self.coloring.m

    @property
    def direction(self):
        return -1 if self.t < 0 else 1

    def step_deltas(self, include_residual=True):
        out = [self.delta] * self.steps
        if include_residual and self.residual_delta > 0:
            out.append(self.residual_delta)
        return out

    def factors(self, include_residual=True):
        """Factor descriptors in application order."""
        order = list(range(self.m)) + list(reversed(range(self.m)))
        out = []
        for step, d in enumerate(self.step_deltas(include_residual)):
            for j in order:
                out.append({"step": step, "class": j, "delta": d, "direction": self.direction})
        return out

    def factor_count(self, include_residual=True):
        return 2 * self.m * len(self.step_deltas(include_residual))

    def to_json(self):
        return {
            "schema": 1,
            "n": self.graph.n,
            "t": self.t,
            "delta": self.delta,
            "steps": self.steps,
            "residual_delta": self.residual_delta,
            "m": self.m,
            "lambda": self.lam,
            "classes": [[list(e) for e in cls] for cls in self.coloring.classes],
            "factors": self.factors(),
        }


def make_plan(g, t, delta, coloring=None):
    if delta <= 0:
        raise ValueError("step size delta must be positive")
    coloring = coloring or graphcore.edge_color(g)
    steps = int(math.floor(abs(t) / (2.0 * delta) + STEP_SLACK))
    residual = 0.5 * (abs(t) - 2.0 * delta * steps)
    if residual < STEP_SLACK * delta:
        residual = 0.0
    hs = color_hamiltonians(g, coloring)
    lam = max((opalg.operator_norm(h) for h in hs), default=0.0)
    return TrotterPlan(graph=g, coloring=coloring, t=float(t), delta=float(delta), steps=steps,
                       residual_delta=residual, lam=lam)


def trotter_product(plan, include_residual=True):
    """Accumulate the factor sequence; the residual step makes the target exactly exp(itA)."""
    n = plan.graph.n
    out = np.eye(n, dtype=np.complex128)
    pairs = [
        (np.array([e[0] for e in cls], dtype=np.intp), np.array([e[1] for e in cls], dtype=np.intp))
        for cls in plan.coloring.classes
    ]
    order = list(range(plan.m)) + list(reversed(range(plan.m)))
    sign = plan.direction
    for d in plan.step_deltas(include_residual):
        c, s = math.cos(d), 1j * sign * math.sin(d)
        for j in order:
            kernels.apply_pair_rotations(out, pairs[j][0], pairs[j][1], c, s)
    return out


@dataclass(frozen=True)
class TrotterError:
    measured: float  # with the closing residual step
    measured_truncated: float  # floor(|t|/2delta) steps only, against exp(itA)
    bound_first: float  # m * Lambda * delta
    bound_second: float  # m * Lambda^3 * |t| * delta^2
    factor_count: int
    unitarity_defect: float

    def to_dict(self):
        return dict(self.__dict__)


def trotter_error(plan):
    exact = opalg.hermitian_exp(plan.graph.adjacency(), plan.t)
    full = trotter_product(plan, include_residual=True)
    trunc = trotter_product(plan, include_residual=False)
    return TrotterError(
        measured=opalg.operator_norm(full - exact),
        measured_truncated=opalg.operator_norm(trunc - exact),
        bound_first=plan.m * plan.lam * plan.delta,
        bound_second=plan.m * plan.lam ** 3 * abs(plan.t) * plan.delta ** 2,
        factor_count=plan.factor_count(),
        unitarity_defect=opalg.unitary_defect(full),
    )
