"""Shared random-object helpers and the acceptance-line reporter."""

import numpy as np

from openmap import (
    FixedCorrelationParameters,
    FixedMeanParameters,
    DensityMatrix,
)

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_unitary(rng, n):
    """Haar-distributed unitary via QR with phase fixing."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(rng, n, scale=1.0):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (z + z.conj().T) / 2.0


def random_density(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    p = z @ z.conj().T
    return DensityMatrix(n, p / np.trace(p))


def random_mean_params(rng, dims):
    """Fixed means at every (mu, nu >= 1) index, uniform in (-1, 1)."""
    n, m = dims
    table = {}
    for mu in range(n * n):
        for nu in range(1, m * m):
            table[(mu, nu)] = rng.uniform(-1.0, 1.0)
    return FixedMeanParameters(dims, table)


def random_corr_params(rng, dims):
    n, m = dims
    gamma = rng.uniform(-0.5, 0.5, size=(n * n - 1, m * m - 1))
    return FixedCorrelationParameters(dims, random_density(rng, m), gamma)
