"""Widest eigenvalue-free arc on the unit circle and the phase that centers it on 1."""
from dataclasses import dataclass

import numpy as np

from sparselog.opalg import TWO_PI, as_matrix, wrap_phase

DEDUP_TOL = 1e-10
TIE_TOL = 1e-9


@dataclass(frozen=True)
class SpectralGap:
    """Empty arc from ``start`` to ``end`` (``end`` may exceed 2pi on wrap-around).

    ``zeta`` is the global phase that moves the arc midpoint onto angle 0.
    """

    start: float
    end: float
    zeta: float

    @property
    def width(self):
        return self.end - self.start

    @property
    def midpoint(self):
        return 0.5 * (self.start + self.end)

    def to_dict(self):
        return {"start": self.start, "end": self.end, "width": self.width, "zeta": self.zeta}


def dedup_phases(phases, tol=DEDUP_TOL):
    """Sorted, circularly deduplicated phases in [0, 2pi)."""
    p = np.sort(wrap_phase(phases))
    if p.size == 0:
        return p
    keep = [p[0]]
    for x in p[1:]:
        if x - keep[-1] >= tol:
            keep.append(x)
    # a cluster straddling 2pi belongs to the first phase
    while len(keep) > 1 and keep[0] + TWO_PI - keep[-1] < tol:
        keep.pop()
    return np.array(keep)


def find_gap(phases):
    """Widest empty arc between consecutive eigenphases, wrap-around included.

    Ties within ``TIE_TOL`` go to the arc with the smallest start phase.
    """
    p = dedup_phases(phases)
    if p.size == 0:
        raise ValueError("find_gap needs at least one phase")
    starts = p
    ends = np.append(p[1:], p[0] + TWO_PI)
    widths = ends - starts
    best = widths.max()
    i = int(np.flatnonzero(widths >= best - TIE_TOL)[0])
    alpha, beta = float(starts[i]), float(ends[i])
    zeta = float(wrap_phase(TWO_PI - 0.5 * (alpha + beta)))
    return SpectralGap(start=alpha, end=beta, zeta=zeta)


def center_unitary(u, gap):
    """``exp(i zeta) u``: the gap midpoint lands on phase 0."""
    return np.exp(1j * gap.zeta) * as_matrix(u)


def circular_distance(a, b):
    d = np.abs(wrap_phase(np.asarray(a) - np.asarray(b)))
    return np.minimum(d, TWO_PI - d)
