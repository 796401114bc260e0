"""Concrete unitaries: coined walk on a ring, quantum Fourier transform, random gapped unitaries."""
import math
from dataclasses import dataclass, field

import numpy as np

from sparselog import graphcore, logseries, opalg, specgap

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
# the coin whose walk spectrum is exactly walk_spectrum_formula for every n
SYMMETRIC_COIN = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / math.sqrt(2.0)


def translation(n):
    """Unit shift ``T|j> = |j+1 mod n>``."""
    t = np.zeros((n, n))
    t[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return t


@dataclass(frozen=True)
class CoinedWalk:
    """Hadamard walk on a ring of ``n`` sites, basis index ``coin * n + position``."""

    n: int
    U: np.ndarray
    graph: graphcore.Graph

    def vertex_of(self, index):
        return index % self.n

    @property
    def dim(self):
        return 2 * self.n


def walk_graph(n):
    """Basis-state graph of the walk: states at circularly adjacent positions are joined."""
    edges = []
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            if (a - b) % n in (1, n - 1):
                edges.append((a, b))
    return graphcore.Graph(2 * n, tuple(edges))


def build_coined_walk(n, coin=HADAMARD):
    """``(|0><0| (x) T + |1><1| (x) T^H)(coin (x) I)`` as a dense 2n x 2n matrix."""
    if n < 3:
        raise ValueError("the ring needs at least 3 sites")
    t = translation(n)
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    shift = np.kron(p0, t) + np.kron(p1, t.T)
    u = shift @ np.kron(np.asarray(coin, dtype=np.complex128), np.eye(n))
    return CoinedWalk(n=n, U=u, graph=walk_graph(n))


def walk_spectrum_formula(n, k, sign):
    """Closed-form eigenvalue ``(cos x +- i sqrt(1 + sin^2 x)) / sqrt(2)``, ``x = 2 pi k / n``.

    This is the spectrum of the walk with ``SYMMETRIC_COIN``. The Hadamard
    walk has determinant -1 per momentum block, so its spectrum is this set
    rotated by a quarter turn (``+-i`` times it when 4 divides n).
    """
    if not 0 <= k < n:
        raise ValueError(f"momentum index {k} outside [0, {n})")
    x = 2.0 * math.pi * k / n
    s = 1.0 if sign > 0 else -1.0
    return complex(math.cos(x), s * math.sqrt(1.0 + math.sin(x) ** 2)) / math.sqrt(2.0)


def walk_formula_phases(n):
    lam = [walk_spectrum_formula(n, k, s) for k in range(n) for s in (1, -1)]
    return np.sort(opalg.wrap_phase(np.angle(lam)))


def walk_gap_check(n):
    gap = specgap.find_gap(walk_formula_phases(n))
    if gap.width < math.pi / 2 - 1e-9:
        raise AssertionError(f"walk on {n} sites has gap {gap.width:.12f} < pi/2")
    return gap


@dataclass(frozen=True)
class FourierOp:
    n: int
    Q: np.ndarray
    _logs: dict = field(default_factory=dict, repr=False, compare=False)

    def log_series(self, eps):
        """Cached ``(F, series)`` with ``exp(iF) ~ exp(i zeta) Q``."""
        if eps not in self._logs:
            self._logs[eps] = logseries.build_log_series(self.Q, eps)
        return self._logs[eps]


def build_fourier_op(n):
    if n < 2:
        raise ValueError("dimension must be at least 2")
    j = np.arange(n)
    q = np.exp(2j * np.pi * np.outer(j, j) / n) / math.sqrt(n)
    return FourierOp(n=n, Q=q)


def fractional_fourier(op, alpha, eps):
    """``Q^alpha = exp(i alpha (F - zeta))`` on the gap-centered branch.

    F is built at accuracy ``eps / 4``, so ``alpha = 1`` reproduces Q within eps.
    """
    F, series = op.log_series(eps / 4.0)
    return np.exp(-1j * alpha * series.zeta) * opalg.hermitian_exp(F, alpha)


def haar_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_gapped_unitary(n, gap, seed):
    """Haar eigenvectors with phases uniform on [gap/2, 2pi - gap/2].

    Uses numpy's PCG64 generator seeded with ``seed``, so output is
    reproducible across runs and platforms.
    """
    if not 0.0 < gap < 2.0 * math.pi:
        raise ValueError("gap must lie in (0, 2pi)")
    rng = np.random.default_rng(seed)
    v = haar_unitary(n, rng)
    phases = rng.uniform(gap / 2.0, 2.0 * math.pi - gap / 2.0, size=n)
    return (v * np.exp(1j * phases)) @ v.conj().T
