import numpy as np
import pytest

from sparselog import kernels, models


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def walk20():
    return models.build_coined_walk(20)


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run a test once per importable kernel backend."""
    mod = kernels.backends()[request.param]
    monkeypatch.setattr(kernels, "hessenberg_qr", mod.hessenberg_qr)
    monkeypatch.setattr(kernels, "apply_pair_rotations", mod.apply_pair_rotations)
    return request.param


def random_unitary(n, rng):
    return models.haar_unitary(n, rng)


def random_hermitian(n, rng, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (a + a.conj().T)


def pytest_terminal_summary(terminalreporter):
    import sys

    results = {}
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance"):
            results.update(getattr(mod, "RESULTS", {}))
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
