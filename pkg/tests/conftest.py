import numpy as np
import pytest

_ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_signal(rng, L, unit=True):
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    return x / np.linalg.norm(x) if unit else x


def brute_ambiguity(g, gamma):
    """Direct double sum <g, S_(k,l) gamma>."""
    L = len(g)
    A = np.zeros((L, L), dtype=complex)
    for k in range(L):
        for l in range(L):
            s = 0j
            for t in range(L):
                s += np.conj(g[t]) * gamma[(t - k) % L] * np.exp(2j * np.pi * l * t / L)
            A[k, l] = s
    return A
