"""Shared builders for the test suite."""

import numpy as np
import pytest

import bandspec as bs


@pytest.fixture
def bilateral():
    return bs.Filtration(bs.BILATERAL)


@pytest.fixture
def unilateral():
    return bs.Filtration(bs.UNILATERAL)


@pytest.fixture
def free_jacobi():
    """Bilateral Laurent operator with a_{+-1} = 1 (symbol 2 cos x)."""
    return bs.laurent_operator([1.0, 0.0, 1.0])


def free_jacobi_eigs(m):
    """Closed-form eigenvalues of the m x m free Jacobi matrix."""
    return np.sort(2.0 * np.cos(np.arange(1, m + 1) * np.pi / (m + 1)))


def random_banded_spec(rng, K, index_mode=bs.BILATERAL):
    """Random symmetric constant-diagonal banded operator."""
    coeffs = rng.uniform(-1.0, 1.0, K + 1)
    full = np.concatenate([coeffs[:0:-1], coeffs])
    return bs.laurent_operator(full)


def dense_from_entries(spec, idx):
    """Brute-force dense window straight from entry(); independent of the
    compression module's diagonal fill."""
    idx = np.asarray(idx)
    m = np.zeros((idx.size, idx.size))
    for r in range(idx.size):
        for c in range(idx.size):
            m[r, c] = bs.entry(spec, int(idx[r]), int(idx[c]))
    return m
