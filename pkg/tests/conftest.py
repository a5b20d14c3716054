import numpy as np
import pytest


def stable_generator(rng, size, radius=(0.6, 0.98)):
    """Real diagonalizable generator with a known spectrum.

    Built as ``P B P^-1`` with ``B`` block diagonal (2x2 rotation-scalings and
    real scalars), so the eigenvalues are known without calling an
    eigensolver.
    """
    blocks, eigs = [], []
    k = 0
    while k < size:
        r = rng.uniform(*radius)
        if size - k >= 2 and rng.random() < 0.6:
            phi = rng.uniform(0.2, 2.8)
            c, s = r * np.cos(phi), r * np.sin(phi)
            blocks.append(np.array([[c, -s], [s, c]]))
            eigs += [r * np.exp(1j * phi), r * np.exp(-1j * phi)]
            k += 2
        else:
            sign = 1 if rng.random() < 0.7 else -1
            blocks.append(np.array([[sign * r]]))
            eigs.append(complex(sign * r))
            k += 1
    B = np.zeros((size, size))
    i = 0
    for b in blocks:
        B[i:i + len(b), i:i + len(b)] = b
        i += len(b)
    P = rng.standard_normal((size, size)) + 2 * np.eye(size)
    return P @ B @ np.linalg.inv(P), np.array(eigs)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_stable():
    return stable_generator


_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(label, passed, detail)``."""

    def record(label, passed, detail):
        _ACCEPTANCE.append((label, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
