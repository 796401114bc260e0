import os

import numpy as np
import pytest

from sparselog import _pykernels, kernels, opalg
from tests.conftest import random_unitary


@pytest.mark.skipif(bool(os.environ.get("SPARSELOG_PURE_PYTHON")), reason="fallback forced by environment")
def test_compiled_backend_is_built():
    # the package ships a Cython core; the fallback exists for environments without a compiler
    assert "cython" in kernels.backends()
    assert kernels.BACKEND in {"cython", "python"}


@pytest.mark.parametrize("n", [1, 2, 3, 7, 24])
def test_backends_agree_on_qr_iteration(rng, n):
    a = random_unitary(n, rng) if n > 1 else np.array([[np.exp(0.3j)]])
    h0, z0 = opalg.hessenberg(a)
    results = {}
    for name, mod in kernels.backends().items():
        h, z = np.ascontiguousarray(h0.copy()), np.ascontiguousarray(z0.copy())
        sweeps = mod.hessenberg_qr(h, z, 30 * n)
        results[name] = (h, z, sweeps)
    ref = results["python"]
    for h, z, sweeps in results.values():
        assert sweeps == ref[2]
        np.testing.assert_allclose(h, ref[0], atol=1e-12)
        np.testing.assert_allclose(z, ref[1], atol=1e-12)


def test_schur_reconstructs_general_matrix(backend, rng):
    a = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    t, z = opalg.schur(a)
    assert np.allclose(np.tril(t, -1), 0)
    np.testing.assert_allclose(z @ t @ z.conj().T, a, atol=1e-11)
    assert opalg.unitary_defect(z) < 1e-12


def test_qr_iteration_reports_nonconvergence():
    h, z = opalg.hessenberg(random_unitary(8, np.random.default_rng(1)))
    with pytest.raises(kernels.ConvergenceError):
        kernels.hessenberg_qr(np.ascontiguousarray(h), np.ascontiguousarray(z), 0)


def test_pair_rotations_match_between_backends(rng):
    m0 = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    tails = np.array([0, 2], dtype=np.intp)
    heads = np.array([1, 5], dtype=np.intp)
    outs = []
    for mod in kernels.backends().values():
        m = np.ascontiguousarray(m0.copy())
        mod.apply_pair_rotations(m, tails, heads, np.cos(0.4), 1j * np.sin(0.4))
        outs.append(m)
    for m in outs:
        np.testing.assert_allclose(m, outs[0], atol=1e-15)
    # untouched rows
    np.testing.assert_array_equal(outs[0][[3, 4]], m0[[3, 4]])


def test_pure_python_pair_rotation_is_a_block_rotation():
    m = np.eye(2, dtype=complex)
    _pykernels.apply_pair_rotations(m, np.array([0]), np.array([1]), 0.0, 1j)
    np.testing.assert_allclose(m, [[0, 1j], [1j, 0]])
