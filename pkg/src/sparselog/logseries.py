"""Sparse approximate logarithm of a gapped unitary.

Pipeline: find the widest spectral gap, rotate it onto phase 0, pick the
smallest truncation order whose certified coefficient tail is below the
target accuracy, and sum the smoothed-sawtooth series

    J_K = sum_{|j| <= K} chi_hat(j) c_j W^j,    W = exp(i zeta) U.

``J_K`` only involves powers of ``U`` up to ``K``, so its sparsity pattern is
contained in the K-step reach pattern of ``U``.
"""
from dataclasses import dataclass

import numpy as np

from sparselog import graphcore, mollifier, opalg, specgap
from sparselog.errors import GapInfeasibleError, NotUnitaryError, TailNotCertifiableError

GAMMA_FRACTION = 0.45
GAP_THRESHOLD = 1e-3
KMAX_START = 64
KMAX_BUDGET = 1 << 14
ROUNDOFF_PER_TERM = 1e-12


class ContainmentError(AssertionError):
    """J has weight outside the reach pattern of U: a bug, not a math failure."""


@dataclass(frozen=True)
class TruncationChoice:
    K: int
    tail: float
    layer: mollifier.FourierLayer
    guideline: float  # 1 / (eps * gap), the first-order scaling guideline

    @property
    def gamma(self):
        return self.layer.gamma


@dataclass(frozen=True)
class LogSeries:
    K: int
    coefficients: np.ndarray  # d_j for j = 0..K; negative j are conjugates
    gamma: float
    zeta: float
    gap: specgap.SpectralGap
    tail_bound: float
    kmax: int
    guideline: float
    unitary_defect: float
    err_unitary: float
    err_vs_oracle: float = None
    tail_remainder: float = 0.0  # extrapolated part of tail_bound beyond kmax (heuristic envelope)

    def certificate(self, n, containment_ok=None):
        return {
            "schema": 1,
            "n": int(n),
            "gap": self.gap.width,
            "zeta": self.zeta,
            "gamma": self.gamma,
            "K": self.K,
            "tail_bound": self.tail_bound,
            "tail_remainder": self.tail_remainder,
            "tail_remainder_heuristic": True,
            "kmax": self.kmax,
            "unitary_defect": self.unitary_defect,
            "err_vs_oracle": self.err_vs_oracle,
            "err_unitary": self.err_unitary,
            "containment_ok": containment_ok,
        }


def truncation_order(gap, eps, gamma_fraction=GAMMA_FRACTION, kmax=None):
    """Smallest K whose certified tail is at most ``eps``.

    Tables start at ``kmax`` (or a size that reaches the decay regime) and
    are doubled until certifiable or ``KMAX_BUDGET`` is exceeded.
    """
    if gap <= 0 or eps <= 0:
        raise ValueError("gap and eps must be positive")
    if gap < GAP_THRESHOLD:
        raise GapInfeasibleError(gap, GAP_THRESHOLD)
    gamma = gamma_fraction * gap
    if kmax is None:
        size = max(KMAX_START, 2 * mollifier.decay_onset_k(gamma))
        budget = KMAX_BUDGET
    else:
        size = budget = int(kmax)
    while True:
        layer = mollifier.build_layer(gamma, size)
        if size >= mollifier.decay_onset_k(gamma):
            tails = layer.tail_bounds()
            ok = np.flatnonzero(tails <= eps)
            if ok.size:
                K = int(ok[0])
                return TruncationChoice(K=K, tail=float(tails[K]), layer=layer, guideline=1.0 / (eps * gap))
        if size * 2 > budget:
            raise TailNotCertifiableError(
                f"no truncation order below kmax = {size} certifies eps = {eps:g}; enlarge kmax",
                kmax=size,
            )
        size *= 2


def series_sum(w, coefficients):
    """``sum_{|j| <= K} d_j w^j`` with ``d_{-j} = conj(d_j)``; Hermitian by construction."""
    n = w.shape[0]
    out = coefficients[0].real * np.eye(n, dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    for d in coefficients[1:]:
        power = power @ w
        term = d * power
        out += term + term.conj().T
    return out


def build_log_series(u, eps, gamma_fraction=GAMMA_FRACTION, kmax=None, with_oracle=False):
    """Return ``(J, series)`` with ``exp(iJ) ~ exp(i zeta) u`` to within ``eps``."""
    u = opalg.as_matrix(u)
    n = u.shape[0]
    defect = opalg.unitary_defect(u)
    if defect > opalg.UNITARY_TOL:
        raise NotUnitaryError(defect, opalg.UNITARY_TOL)
    eig = opalg.unitary_eigensystem(u)
    gap = specgap.find_gap(eig.phases)
    choice = truncation_order(gap.width, eps, gamma_fraction, kmax)
    layer = choice.layer
    coeffs = np.array([mollifier.smoothed_coeff(layer, j) for j in range(choice.K + 1)])

    w = specgap.center_unitary(u, gap)
    J = series_sum(w, coeffs)
    v = np.exp(-1j * gap.zeta) * opalg.hermitian_exp(J)
    err_unitary = opalg.operator_norm(u - v)
    err_oracle = None
    if with_oracle:
        err_oracle = opalg.operator_norm(opalg.oracle_log(u, gap.zeta) - J)
    series = LogSeries(
        K=choice.K,
        coefficients=coeffs,
        gamma=layer.gamma,
        zeta=gap.zeta,
        gap=gap,
        tail_bound=choice.tail,
        kmax=layer.kmax,
        guideline=choice.guideline,
        unitary_defect=defect,
        err_unitary=err_unitary,
        err_vs_oracle=err_oracle,
        tail_remainder=layer.remainder(),
    )
    return J, series


def approximate_unitary(J, series):
    """``exp(-i zeta) exp(iJ)``, the sparse-logarithm approximation of the input."""
    return np.exp(-1j * series.zeta) * opalg.hermitian_exp(J)


def containment_threshold(n, K):
    return n * K * ROUNDOFF_PER_TERM


def sparsity_report(series, J, g, strict=True):
    """Check J lives inside the K-step reach pattern of ``g`` and profile its decay."""
    J = np.asarray(J)
    n = J.shape[0]
    reach = graphcore.reach_pattern(graphcore.SparsityPattern.of_graph(g), series.K)
    outside = np.abs(J)[~reach.mask]
    worst = float(outside.max()) if outside.size else 0.0
    tol = containment_threshold(n, series.K)
    holds = worst <= tol
    if strict and not holds:
        raise ContainmentError(f"|J| = {worst:.3e} outside the reach-{series.K} pattern (allowed {tol:.1e})")
    return graphcore._report(f"reach-{series.K}", holds, tol, J, g, worst)
