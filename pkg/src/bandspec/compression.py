"""Finite compressions and filtration-relative invariants.

A filtration fixes the nested subspaces the operator is cut to; this module
builds the compressed matrices and computes the degree of an operator, the
computable upper bound for its decomposition norm, the Hilbert-Schmidt size
of the corner the cut tears off, and the trace defects that control how far
compression is from being multiplicative.
"""

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import eigensolver
from .errors import ConfigError, DomainError, SymmetryError, UnsupportedOperatorError
from .operators import BILATERAL, UNILATERAL, OperatorSpec, PermutationOperator

DEFAULT_RANK_TOL = 1e-10
DEFAULT_DEGREE_WINDOW = 64


@dataclass(frozen=True)
class Filtration:
    """Nested basis cuts: H_n spanned by e_1..e_n (unilateral) or
    e_{-n}..e_n (bilateral)."""

    mode: str

    def __post_init__(self):
        if self.mode not in (UNILATERAL, BILATERAL):
            raise ConfigError(f"unknown filtration mode {self.mode!r}")

    def dim(self, n: int) -> int:
        self._check(n)
        return n if self.mode == UNILATERAL else 2 * n + 1

    def basis_range(self, n: int):
        """Inclusive index interval (lo, hi) of the n-th subspace."""
        self._check(n)
        return (1, n) if self.mode == UNILATERAL else (-n, n)

    def indices(self, n: int) -> np.ndarray:
        lo, hi = self.basis_range(n)
        return np.arange(lo, hi + 1)

    def _check(self, n):
        if n < 1:
            raise DomainError("filtration step n must be >= 1")


@dataclass(frozen=True)
class CompressedMatrix:
    """The n-th compression, stored tridiagonally when the band allows it."""

    n: int
    dim: int
    d: Optional[np.ndarray] = None
    e: Optional[np.ndarray] = None
    dense: Optional[np.ndarray] = None

    @property
    def is_tridiagonal(self) -> bool:
        return self.d is not None

    def to_dense(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        m = np.diag(self.d).astype(float)
        if self.dim > 1:
            m += np.diag(self.e, 1) + np.diag(self.e, -1)
        return m

    def to_csv(self, path):
        """Dense storage: row-major rows. Tridiagonal: columns d, e
        (the e column is one row shorter and left empty on the last row)."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            if self.is_tridiagonal:
                w.writerow(["d", "e"])
                for i in range(self.dim):
                    ei = format(self.e[i], ".17g") if i < self.dim - 1 else ""
                    w.writerow([format(self.d[i], ".17g"), ei])
            else:
                for row in self.dense:
                    w.writerow([format(v, ".17g") for v in row])


def _require_banded(spec, what):
    if isinstance(spec, PermutationOperator) or spec.band_half_width is None:
        raise UnsupportedOperatorError(
            f"{what} requires a band-limited operator; the permutation "
            "reflection has unbounded degree"
        )


def _check_mode(spec, filt):
    if spec.index_mode != filt.mode:
        raise ConfigError(
            f"operator is {spec.index_mode} but the filtration is {filt.mode}"
        )


def _dense_window(spec: OperatorSpec, idx: np.ndarray) -> np.ndarray:
    """Dense matrix of the spec restricted to an arbitrary index window."""
    dim = idx.shape[0]
    m = np.zeros((dim, dim))
    K = spec.band_half_width
    fn = spec.diag_fn
    for k in range(-K, K + 1):
        if k >= 0:
            rows = np.arange(k, dim)
            cols = rows - k
        else:
            cols = np.arange(-k, dim)
            rows = cols + k
        if rows.size == 0:
            continue
        m[rows, cols] = [fn(k, int(i)) for i in idx[cols]]
    return m


def compress(spec, filt: Filtration, n: int) -> CompressedMatrix:
    """The n-th compression P_n A | H_n.

    Tridiagonal storage when the band half-width is <= 1; dense otherwise
    (always dense for the permutation reflection).
    """
    _check_mode(spec, filt)
    dim = filt.dim(n)
    if isinstance(spec, PermutationOperator):
        m = np.zeros((dim, dim))
        for j in range(1, dim + 1):
            i = spec.perm.pi(j)
            if i <= dim:
                m[i - 1, j - 1] = 1.0
        return CompressedMatrix(n=n, dim=dim, dense=m)
    if not spec.symmetric:
        raise SymmetryError("compressions are defined for symmetric specs only")
    idx = filt.indices(n)
    if spec.band_half_width <= 1:
        d = np.fromiter((spec.diag_fn(0, int(i)) for i in idx), dtype=float, count=dim)
        if spec.band_half_width == 1 and dim > 1:
            e = np.fromiter(
                (spec.diag_fn(1, int(i)) for i in idx[:-1]), dtype=float, count=dim - 1
            )
        else:
            e = np.zeros(max(dim - 1, 0))
        return CompressedMatrix(n=n, dim=dim, d=d, e=e)
    return CompressedMatrix(n=n, dim=dim, dense=_dense_window(spec, idx))


def degree_estimate(spec, filt: Filtration, n_max: int = DEFAULT_DEGREE_WINDOW,
                    rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """sup_n rank(P_n A - A P_n), evaluated exactly over n <= n_max.

    For banded operators the commutator is supported within K of the cut,
    so restricting to the basis_range(n_max + K) window loses nothing, and
    the rank is eventually constant in n. Numerical rank counts singular
    values above rank_tol relative to the largest.
    """
    _require_banded(spec, "degree estimation")
    _check_mode(spec, filt)
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if rank_tol <= 0.0:
        raise DomainError("rank_tol must be positive")
    K = spec.band_half_width
    idx = filt.indices(n_max + K)
    a = _dense_window(spec, idx)
    best = 0
    for n in range(1, n_max + 1):
        lo, hi = filt.basis_range(n)
        mask = ((idx >= lo) & (idx <= hi)).astype(float)
        comm = a * (mask[:, None] - mask[None, :])
        sv = np.linalg.svd(comm, compute_uv=False)
        if sv.size and sv[0] > 0.0:
            best = max(best, int(np.sum(sv > rank_tol * sv[0])))
    return best


def dfnorm_bound(spec) -> float:
    """Diagonal upper bound sum_k (1 + sqrt(2|k|)) d_k for the decomposition
    norm of a bilateral banded operator."""
    _require_banded(spec, "the decomposition-norm bound")
    if spec.index_mode != BILATERAL:
        raise UnsupportedOperatorError(
            "the diagonal bound is proved for the bilateral filtration"
        )
    K = spec.band_half_width
    return float(
        sum((1.0 + np.sqrt(2.0 * abs(k))) * spec.diag_sup[k] for k in range(-K, K + 1))
    )


def commutator_hs_norm(spec, filt: Filtration, n: int) -> float:
    """Hilbert-Schmidt norm of (1 - P_n) A P_n.

    For a banded operator only the <= K rows directly past each cut carry
    nonzeros, so the block is enumerated exactly.
    """
    _require_banded(spec, "the commutator Hilbert-Schmidt norm")
    _check_mode(spec, filt)
    lo, hi = filt.basis_range(n)
    K = spec.band_half_width
    total = 0.0
    for r in range(hi + 1, hi + K + 1):
        for c in range(max(lo, r - K), hi + 1):
            total += spec.diag_fn(r - c, c) ** 2
    if filt.mode == BILATERAL:
        for r in range(lo - K, lo):
            for c in range(lo, min(hi, r + K) + 1):
                total += spec.diag_fn(r - c, c) ** 2
    return float(np.sqrt(total))


def _core_slice(idx: np.ndarray, filt: Filtration, n: int):
    lo, hi = filt.basis_range(n)
    pos = np.nonzero((idx >= lo) & (idx <= hi))[0]
    return slice(int(pos[0]), int(pos[-1]) + 1)


def trace_state_defect(spec_a, spec_b, filt: Filtration, n: int) -> float:
    """|trace(P_n AB P_n) - trace(P_n BA P_n)| / dim H_n.

    The products are realized on the window basis_range(n + K_A + K_B),
    which makes every product entry over H_n exact.
    """
    _require_banded(spec_a, "the trace-state defect")
    _require_banded(spec_b, "the trace-state defect")
    _check_mode(spec_a, filt)
    _check_mode(spec_b, filt)
    pad = spec_a.band_half_width + spec_b.band_half_width
    idx = filt.indices(n + pad)
    aw = _dense_window(spec_a, idx)
    bw = _dense_window(spec_b, idx)
    core = _core_slice(idx, filt, n)
    t_ab = float(np.einsum("ij,ji->", aw[core, :], bw[:, core]))
    t_ba = float(np.einsum("ij,ji->", bw[core, :], aw[:, core]))
    return abs(t_ab - t_ba) / filt.dim(n)


def product_compression_defect(specs, filt: Filtration, n: int) -> float:
    """Trace norm of P_n A_1..A_p P_n - (P_n A_1 P_n)..(P_n A_p P_n).

    The true product is realized on a window padded by the total band
    width; the trace norm goes through the eigensolver on Delta^T Delta.
    """
    specs = list(specs)
    if len(specs) == 0:
        raise DomainError("need at least one operator")
    for s in specs:
        _require_banded(s, "the product compression defect")
        _check_mode(s, filt)
    pad = sum(s.band_half_width for s in specs)
    idx = filt.indices(n + pad)
    mats = [_dense_window(s, idx) for s in specs]
    full = mats[0]
    for m in mats[1:]:
        full = full @ m
    core = _core_slice(idx, filt, n)
    compressed = mats[0][core, core]
    for m in mats[1:]:
        compressed = compressed @ m[core, core]
    delta = full[core, core] - compressed
    return eigensolver.trace_norm(delta)
