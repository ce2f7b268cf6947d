"""All-eigenvalue solvers for real symmetric matrices.

The pipeline is Householder reduction to tridiagonal form followed by
implicit-shift QL iteration with Wilkinson shifts (eigenvalues only, no
vectors). Sturm-sequence counting provides a fast path for interval
counts. ``symmetric_eigenvalues`` additionally exploits block and band
structure when the input has it: disconnected sparsity patterns are
split into independent subproblems, and banded matrices are reduced by
Givens chasing instead of dense reflections.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DomainError, SymmetryError

_SYM_RTOL = 1e-12
_QL_TOL = 1e-12
_QL_MAX_SWEEPS = 50


@dataclass(frozen=True)
class TridiagonalForm:
    """Symmetric tridiagonal matrix: diagonal d (length m), off-diagonal e
    (length m-1)."""

    d: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        e = np.asarray(self.e, dtype=float)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e)
        if d.ndim != 1 or e.ndim != 1 or e.shape[0] != max(d.shape[0] - 1, 0):
            raise DomainError("tridiagonal form needs d of length m and e of length m-1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise DomainError("tridiagonal entries must be finite")

    @property
    def dim(self):
        return self.d.shape[0]


@dataclass(frozen=True)
class EigenvalueList:
    """Eigenvalues sorted ascending, multiplicity by repetition."""

    values: np.ndarray
    dim: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape[0] != self.dim:
            raise DomainError("eigenvalue list length must equal dim")
        if v.shape[0] > 1 and np.any(np.diff(v) < 0):
            raise DomainError("eigenvalue list must be sorted ascending")


def _check_symmetric(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("expected a square matrix")
    scale = np.max(np.abs(m)) if m.size else 0.0
    if m.size and np.max(np.abs(m - m.T)) > _SYM_RTOL * max(1.0, scale):
        raise SymmetryError("matrix is not symmetric within 1e-12 relative")
    return m


def householder_tridiagonalize(m):
    """Reduce a symmetric dense matrix to tridiagonal form.

    Classic Householder similarity reduction, eigenvalues preserved.
    Raises SymmetryError if the input is not symmetric to 1e-12 relative.
    """
    a = _check_symmetric(m).copy()
    n = a.shape[0]
    if n == 0:
        raise DomainError("empty matrix")
    d = np.empty(n)
    e = np.empty(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1:, k]
        sigma = np.linalg.norm(x)
        if sigma == 0.0:
            e[k] = 0.0
            continue
        alpha = -np.copysign(sigma, x[0]) if x[0] != 0.0 else -sigma
        u = x.copy()
        u[0] -= alpha
        h = 0.5 * (u @ u)
        if h == 0.0:
            e[k] = alpha
            continue
        block = a[k + 1:, k + 1:]
        v = block @ u / h
        w = v - (u @ v / (2.0 * h)) * u
        block -= np.outer(w, u)
        block -= np.outer(u, w)
        e[k] = alpha
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    d[:] = np.diagonal(a)
    return TridiagonalForm(d, e)


def tridiagonal_eigenvalues(t, tol=_QL_TOL):
    """All eigenvalues of a symmetric tridiagonal matrix by implicit QL.

    tol is the relative deflation threshold: |e[i]| <= tol*(|d[i]|+|d[i+1]|)
    splits the problem. Deterministic; sorted ascending.
    """
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    n = t.dim
    d = t.d.copy()
    work = np.zeros(n)
    if n > 1:
        work[: n - 1] = t.e
    status = _kernels.ql_implicit(d, work, tol, _QL_MAX_SWEEPS)
    if status != 0:
        raise ConvergenceError(
            f"QL iteration failed to converge for eigenvalue {status} "
            f"after {_QL_MAX_SWEEPS} sweeps"
        )
    d.sort()
    return EigenvalueList(d, n)


def _bandwidth(a):
    """Largest |i-j| with a[i, j] != 0 (0 for diagonal matrices)."""
    n = a.shape[0]
    for k in range(n - 1, 0, -1):
        if np.any(np.diagonal(a, k)):
            return k
    return 0


def _split_components(a):
    """Connected components of the off-diagonal nonzero graph, as index lists."""
    n = a.shape[0]
    rows, cols = np.nonzero(a)
    adj = [[] for _ in range(n)]
    for r, c in zip(rows.tolist(), cols.tolist()):
        if r != c:
            adj[r].append(c)
    seen = np.zeros(n, dtype=bool)
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(comp)
    return comps


def symmetric_eigenvalues(m):
    """All eigenvalues of a symmetric dense matrix, sorted ascending.

    Composition of Householder reduction and QL iteration. Two structure
    fast paths, both exact similarity-preserving: a matrix whose nonzero
    graph is disconnected is solved per connected component, and a banded
    matrix is Givens-reduced to tridiagonal in O(n^2 * bandwidth).
    """
    a = _check_symmetric(m)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    if n == 0:
        raise DomainError("empty matrix")
    if n > 8 and np.count_nonzero(a) <= 4 * n:
        comps = _split_components(a)
        if len(comps) > 1:
            vals = np.empty(n)
            pos = 0
            for comp in comps:
                idx = np.asarray(comp)
                sub = a[np.ix_(idx, idx)]
                ev = symmetric_eigenvalues(sub)
                vals[pos: pos + idx.shape[0]] = ev.values
                pos += idx.shape[0]
            vals.sort()
            return EigenvalueList(vals, n)
    b = _bandwidth(a)
    if b <= 1:
        e = np.diagonal(a, 1).copy() if n > 1 else np.empty(0)
        return tridiagonal_eigenvalues(TridiagonalForm(np.diagonal(a).copy(), e))
    if n >= 64 and b <= n // 3:
        work = np.ascontiguousarray(a)  # private copy made above; mutated in place
        _kernels.band_reduce(work, b)
        d = np.diagonal(work).copy()
        e = np.diagonal(work, 1).copy()
        return tridiagonal_eigenvalues(TridiagonalForm(d, e))
    return tridiagonal_eigenvalues(householder_tridiagonalize(a))


def sturm_count(t, a, b):
    """Number of eigenvalues of t in the half-open interval (a, b].

    Sturm-sequence sign counts (LDL^T inertia) at both endpoints; O(m).
    """
    if a >= b:
        raise DomainError("need a < b")
    hi = _kernels.sturm_count_leq(t.d, t.e, b)
    lo = _kernels.sturm_count_leq(t.d, t.e, a)
    return int(hi - lo)


def trace_norm(m):
    """Trace norm (sum of singular values) of a square matrix.

    Computed as sum of sqrt of the eigenvalues of m^T m.
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("expected a square matrix")
    if a.shape[0] == 0:
        return 0.0
    gram = a.T @ a
    ev = symmetric_eigenvalues(0.5 * (gram + gram.T))
    vals = np.clip(ev.values, 0.0, None)
    # eigenvalues of m^T m at roundoff level are squared-noise artifacts;
    # without this floor their square roots pollute the sum
    floor = a.shape[0] * np.finfo(float).eps * (vals[-1] if vals.size else 0.0)
    vals[vals < floor] = 0.0
    return float(np.sum(np.sqrt(vals)))
