"""Smoothed sawtooth: bump kernel, its Fourier transform and series coefficients.

The kernel is the standard mollifier ``C exp(-1/(1 - (y/gamma)^2))`` on
``(-gamma, gamma)``, normalized to unit mass, so its transform
``chi_hat(w) = int chi(y) exp(-i w y) dy`` equals 1 at ``w = 0`` and the
smoothed sawtooth ``g = f * chi`` has Fourier coefficients
``d_k = chi_hat(k) c_k`` with ``c_k`` those of ``f(theta) = theta`` on [0, 2pi).
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from sparselog.errors import SparselogError, TailNotCertifiableError

GL_ORDER = 20
QUAD_TOL = 1e-13
MAX_PANELS = 1 << 15
# chi_hat(w) * w^3 is decreasing past this frequency; below it the
# power-law extrapolation of the tail is not trustworthy
DECAY_ONSET = 20.0
TAIL_POWER = 4


class QuadratureError(SparselogError):
    pass


@lru_cache(maxsize=None)
def _gl_panels(panels):
    """Composite Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(GL_ORDER)
    edges = np.linspace(-1.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _raw_bump(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


@lru_cache(maxsize=None)
def _unit_mass():
    nodes, weights = _gl_panels(64)
    return float(weights @ _raw_bump(nodes))


def _unit_transform(omega):
    """Transform of the unit-width bump at frequencies ``omega`` (array).

    Panels are doubled until successive estimates agree to ``QUAD_TOL``.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    mass = _unit_mass()
    top = float(np.max(np.abs(omega))) if omega.size else 0.0
    panels = max(4, 1 << int(math.ceil(math.log2(max(top / 8.0, 1.0)))))
    prev = None
    while panels <= MAX_PANELS:
        nodes, weights = _gl_panels(panels)
        wf = weights * _raw_bump(nodes) / mass
        cur = np.cos(np.outer(omega, nodes)) @ wf
        if prev is not None and np.max(np.abs(cur - prev)) < QUAD_TOL:
            imag = np.sin(np.outer(omega, nodes)) @ wf
            if np.max(np.abs(imag), initial=0.0) > 1e-12:
                raise QuadratureError("bump transform has a non-negligible imaginary part")
            return cur
        prev = cur
        panels *= 2
    raise QuadratureError(f"bump transform did not converge up to |w| = {top:g}")


@dataclass(frozen=True)
class BumpKernel:
    gamma: float

    def __post_init__(self):
        if not 0.0 < self.gamma < math.pi:
            raise ValueError(f"gamma must lie in (0, pi), got {self.gamma}")

    @property
    def normalization(self):
        """Constant C with ``chi(y) = C exp(-1/(1 - (y/gamma)^2))``."""
        return 1.0 / (self.gamma * _unit_mass())


def bump_eval(kernel, y):
    y = np.asarray(y, dtype=float)
    val = _raw_bump(y / kernel.gamma) * kernel.normalization
    return float(val) if val.ndim == 0 else val


def bump_transform(kernel, omega):
    """``chi_hat_gamma(omega)``, evaluated via the dilation ``chi_hat_1(gamma omega)``."""
    scalar = np.ndim(omega) == 0
    val = _unit_transform(kernel.gamma * np.asarray(omega, dtype=float))
    return float(val[0]) if scalar else val


def sawtooth_coeff(k):
    """Fourier coefficient of theta -> theta on [0, 2pi): pi at 0, i/k elsewhere."""
    k = int(k)
    if k == 0:
        return complex(math.pi, 0.0)
    return complex(0.0, 1.0 / k)


@dataclass(frozen=True)
class FourierLayer:
    """Coefficient tables for ``0 <= k <= kmax``; negative k follow by symmetry."""

    gamma: float
    kmax: int
    chi_hat: np.ndarray
    quad_tol: float = QUAD_TOL
    _tails: np.ndarray = field(repr=False, default=None)

    @property
    def kernel(self):
        return BumpKernel(self.gamma)

    def ks(self):
        return np.arange(-self.kmax, self.kmax + 1)

    def chi_hat_at(self, k):
        return float(self.chi_hat[abs(int(k))])

    def d_abs(self):
        """|d_k| for k = 0..kmax."""
        k = np.arange(self.kmax + 1)
        out = np.abs(self.chi_hat) / np.maximum(k, 1)
        out[0] = math.pi
        return out

    def remainder(self):
        """Extrapolated sum of |d_j| over |j| > kmax.

        Envelope ``E / j^4`` with E the largest ``|d_j| j^4`` over the last
        eighth of the table; heuristic, valid once the transform is in its
        superpolynomial decay regime.
        """
        lo = max(1, self.kmax - max(1, self.kmax // 8))
        j = np.arange(lo, self.kmax + 1)
        env = float(np.max(self.d_abs()[lo:] * j.astype(float) ** TAIL_POWER))
        return 2.0 * env / ((TAIL_POWER - 1) * float(self.kmax) ** (TAIL_POWER - 1))

    def tail_bounds(self):
        """``tail_bound(K)`` for every K in [0, kmax)."""
        return self._tails


def build_layer(gamma, kmax):
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    kernel = BumpKernel(gamma)
    chi = bump_transform(kernel, np.arange(kmax + 1, dtype=float))
    layer = FourierLayer(gamma=float(gamma), kmax=int(kmax), chi_hat=chi)
    d = layer.d_abs()
    # suffix[K] = sum_{K < j <= kmax} |d_j|
    suffix = np.concatenate([np.cumsum(d[::-1])[::-1][1:], [0.0]])
    tails = 2.0 * suffix[:-1] + layer.remainder()
    object.__setattr__(layer, "_tails", tails)
    return layer


def decay_onset_k(gamma):
    return int(math.ceil(DECAY_ONSET / gamma))


def smoothed_coeff(layer, k):
    k = int(k)
    if abs(k) > layer.kmax:
        raise IndexError(f"|k| = {abs(k)} exceeds table size {layer.kmax}")
    return layer.chi_hat[abs(k)] * sawtooth_coeff(k)


def tail_bound(layer, K):
    """Certified bound on ``sum_{|j| > K} |d_j|``."""
    K = int(K)
    if not 0 <= K < layer.kmax:
        raise ValueError(f"K must lie in [0, {layer.kmax}), got {K}")
    if layer.kmax < decay_onset_k(layer.gamma):
        raise TailNotCertifiableError(
            f"kmax = {layer.kmax} does not reach the decay regime (needs >= {decay_onset_k(layer.gamma)})",
            kmax=layer.kmax,
        )
    return float(layer._tails[K])


def smoothed_sawtooth_eval(layer, theta, K):
    """Partial Fourier sum of the smoothed sawtooth, ``sum_{|j| <= K} d_j e^{i j theta}``."""
    K = int(K)
    if K > layer.kmax:
        raise IndexError(f"K = {K} exceeds table size {layer.kmax}")
    theta = np.asarray(theta, dtype=float)
    j = np.arange(1, K + 1)
    coef = layer.chi_hat[1:K + 1] / j
    val = math.pi - 2.0 * np.sin(np.multiply.outer(theta, j)) @ coef
    return float(val) if val.ndim == 0 else val


def direct_convolution(kernel, theta):
    """Reference ``(f * chi)(theta)`` by adaptive quadrature in y.

    Independent of the Fourier tables; the sawtooth jump is passed to the
    integrator as a breakpoint.
    """
    g = kernel.gamma
    two_pi = 2.0 * math.pi

    def integrand(y):
        return math.fmod(math.fmod(theta - y, two_pi) + two_pi, two_pi) * float(bump_eval(kernel, y))

    cuts = [y for y in (theta, theta - two_pi, theta + two_pi) if -g < y < g]
    edges = [-g] + sorted(cuts) + [g]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate.quad(integrand, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    return total


def coeffs_table(layer):
    """Rows ``(k, re c_k, im c_k, chi_hat_k, re d_k, im d_k)`` for |k| <= kmax."""
    rows = []
    for k in layer.ks():
        c = sawtooth_coeff(k)
        d = smoothed_coeff(layer, k)
        rows.append((int(k), c.real, c.imag, layer.chi_hat_at(k), d.real, d.imag))
    return rows
