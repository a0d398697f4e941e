import time
from contextlib import contextmanager

import numpy as np
import pytest

from chandet.channels import KrausChannel


def random_channel(d, n_ops, rng):
    """Kraus operators sliced from a Haar-ish random isometry C^d -> C^(n d)."""
    g = rng.normal(size=(n_ops * d, d)) + 1j * rng.normal(size=(n_ops * d, d))
    q, _ = np.linalg.qr(g)
    return KrausChannel(d, tuple(q[k * d : (k + 1) * d] for k in range(n_ops)))


def random_state(d, rng, rank=None):
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_hermitian(d, rng):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


class AcceptanceLog:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self, lines):
        self.lines = lines

    @contextmanager
    def criterion(self, n, label):
        info = {}
        start = time.perf_counter()
        try:
            yield info
        except BaseException as exc:
            line = f"FAIL criterion {n}: {label} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
            self.lines.append(line)
            print(line)
            raise
        detail = f" {info['detail']}" if "detail" in info else ""
        line = f"PASS criterion {n}: {label}{detail} [{time.perf_counter() - start:.2f}s]"
        self.lines.append(line)
        print(line)


@pytest.fixture
def acceptance(request):
    return AcceptanceLog(request.config.stash.setdefault(_ACCEPTANCE, []))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
