import numpy as np
import pytest

from subspacefit import DataSet


def random_data(rng, m, d, complex_=True):
    x = rng.normal(size=(m, d))
    if complex_:
        x = x + 1j * rng.normal(size=(m, d))
    return DataSet(x)


def random_frames(rng, count, d, r, complex_=True):
    """``count`` random orthonormal d x r frames, via numpy QR (oracle side)."""
    g = rng.normal(size=(count, d, r))
    if complex_:
        g = g + 1j * rng.normal(size=(count, d, r))
    q, _ = np.linalg.qr(g)
    return q


def frame_costs(data, frames):
    """Least-squares cost of ``data`` against each frame, computed directly."""
    f = data.vectors
    coef = np.einsum("kdr,md->kmr", frames.conj(), f)
    return data.energy - np.sum(np.abs(coef) ** 2, axis=(1, 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Log one pass/fail line per acceptance criterion; printed in the terminal summary."""

    def _record(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
