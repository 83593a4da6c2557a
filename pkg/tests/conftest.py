import numpy as np
import pytest

from spdplus import oracle

_ACCEPTANCE = []


def random_pd(gen, n, cond=1e3, complex_field=False):
    return oracle.random_pd(gen, n, cond, complex_field)


def random_psd_singular(gen, n, rank, complex_field=False):
    """Hermitian PSD matrix of the given rank (< n)."""
    Q = oracle.random_unitary(gen, n, complex_field)
    d = np.zeros(n)
    d[:rank] = np.exp(gen.uniform(-1.0, 1.0, rank))
    gen.shuffle(d)
    M = (Q * d) @ Q.conj().T
    return (M + M.conj().T) / 2


@pytest.fixture
def gen():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
