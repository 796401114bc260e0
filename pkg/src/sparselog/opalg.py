"""Dense complex operator algebra.

Matrices are plain ``numpy`` complex arrays. The eigensolver for unitary
matrices is our own: Householder reduction to Hessenberg form followed by
single-shift QR iteration (see ``kernels``). Since unitary matrices are
normal, the Schur factor is diagonal up to roundoff and the eigenvectors
come out of a short back-substitution.
"""
from dataclasses import dataclass

import numpy as np

from sparselog import kernels
from sparselog.errors import BranchCutError, NotHermitianError, NotUnitaryError

TWO_PI = 2.0 * np.pi
UNITARY_TOL = 1e-8
HERMITIAN_TOL = 1e-10
CLUSTER_TOL = 1e-8


def as_matrix(m):
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def operator_norm(m):
    """Spectral norm (largest singular value)."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def unitary_defect(u):
    """``||u^H u - I||`` in the spectral norm."""
    u = np.asarray(u, dtype=np.complex128)
    return operator_norm(u.conj().T @ u - np.eye(u.shape[0]))


def hermitian_defect(h):
    h = np.asarray(h, dtype=np.complex128)
    return operator_norm(h - h.conj().T)


def wrap_phase(x):
    """Map angles into [0, 2pi), guarding against rounding up to 2pi."""
    p = np.mod(np.asarray(x, dtype=float), TWO_PI)
    return np.where(p >= TWO_PI, 0.0, p)


def hessenberg(a):
    """Householder reduction ``a = q h q^H`` with ``h`` upper Hessenberg."""
    h = as_matrix(a).copy()
    n = h.shape[0]
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = h[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def schur(a, max_sweeps=None):
    """Complex Schur decomposition ``a = z t z^H`` by shifted QR iteration."""
    h, z = hessenberg(a)
    n = h.shape[0]
    if max_sweeps is None:
        max_sweeps = 30 * max(n, 1)
    h = np.ascontiguousarray(h)
    z = np.ascontiguousarray(z)
    kernels.hessenberg_qr(h, z, max_sweeps)
    return np.triu(h), z


def _phase_clusters(phases, tol):
    """Group sorted phases whose circular spacing is below ``tol``."""
    n = len(phases)
    if n == 0:
        return []
    groups = [[0]]
    for j in range(1, n):
        if phases[j] - phases[j - 1] < tol:
            groups[-1].append(j)
        else:
            groups.append([j])
    if len(groups) > 1 and phases[0] + TWO_PI - phases[-1] < tol:
        groups[0] = groups.pop() + groups[0]
    return groups


@dataclass(frozen=True)
class UnitaryEigensystem:
    """Eigenphases in [0, 2pi) (ascending) with eigenvector columns."""

    phases: np.ndarray
    vectors: np.ndarray
    residual: float

    @property
    def eigenvalues(self):
        return np.exp(1j * self.phases)

    def reconstruct(self):
        v = self.vectors
        return (v * self.eigenvalues) @ v.conj().T

    def function(self, values):
        """Matrix with the same eigenvectors and the given eigenvalues."""
        v = self.vectors
        return (v * np.asarray(values)) @ v.conj().T


def unitary_eigensystem(u, tol=UNITARY_TOL):
    u = as_matrix(u)
    n = u.shape[0]
    defect = unitary_defect(u)
    if defect > tol:
        raise NotUnitaryError(defect, tol)
    t, z = schur(u)
    lam = np.diag(t).copy()

    # eigenvectors of the triangular factor; couplings inside a
    # near-degenerate cluster are dropped, the cluster is re-orthonormalized below
    x = np.eye(n, dtype=np.complex128)
    for j in range(n):
        for i in range(j - 1, -1, -1):
            diff = lam[i] - lam[j]
            if abs(diff) < CLUSTER_TOL:
                continue
            x[i, j] = -(t[i, i + 1:j + 1] @ x[i + 1:j + 1, j]) / diff
    vecs = z @ x
    vecs /= np.linalg.norm(vecs, axis=0)

    phases = wrap_phase(np.angle(lam))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    vecs = vecs[:, order]
    for group in _phase_clusters(phases, CLUSTER_TOL):
        if len(group) > 1:
            qmat, _ = np.linalg.qr(vecs[:, group])
            vecs[:, group] = qmat
    residual = 0.0
    if n:
        residual = float(np.max(np.linalg.norm(u @ vecs - vecs * np.exp(1j * phases), axis=0)))
    return UnitaryEigensystem(phases=phases, vectors=vecs, residual=residual)


def hermitian_exp(h, scale=1.0, tol=HERMITIAN_TOL):
    """``exp(i * scale * h)`` for Hermitian ``h``."""
    h = as_matrix(h)
    defect = hermitian_defect(h)
    if defect > tol:
        raise NotHermitianError(defect, tol)
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(1j * scale * w)) @ v.conj().T


def oracle_log(u, zeta=0.0, branch_tol=1e-8):
    """Dense effective Hamiltonian of ``exp(i zeta) u`` with phases in [0, 2pi).

    A logarithm of ``u`` itself is ``H - zeta * I``.
    """
    w = np.exp(1j * zeta) * as_matrix(u)
    eig = unitary_eigensystem(w)
    near_cut = np.minimum(eig.phases, TWO_PI - eig.phases)
    if near_cut.size and near_cut.min() < branch_tol:
        raise BranchCutError(
            f"eigenphase within {near_cut.min():.2e} of the branch cut; the gap is not centered"
        )
    h = eig.function(eig.phases)
    return 0.5 * (h + h.conj().T)
