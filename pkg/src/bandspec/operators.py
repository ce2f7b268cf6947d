"""Band-limited self-adjoint operator specifications and constructors.

An operator is described by its band half-width K and a per-diagonal entry
function; concrete builders cover constant-diagonal Laurent matrices (from
explicit coefficients or a 2*pi-periodic symbol), the tridiagonal family
with diagonal v(sin(n*theta)), and the involution-permutation reflection
used to exhibit a proper essential-spectrum inclusion.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, SymmetryError, UnsupportedOperatorError

UNILATERAL = "unilateral"
BILATERAL = "bilateral"

_EVEN_RTOL = 1e-9
_POTENTIAL_GRID = 10_000


@dataclass(frozen=True)
class OperatorSpec:
    """Banded operator: entry a_{i+k, i} = diag_fn(k, i) for |k| <= K.

    diag_sup maps each diagonal offset k to a finite upper bound on
    sup_i |diag_fn(k, i)|. ``symmetric`` records whether the constructor
    guarantees entry(i, j) == entry(j, i); single-diagonal building
    blocks with k != 0 are not symmetric.
    """

    index_mode: str
    band_half_width: int
    diag_fn: Callable[[int, int], float]
    diag_sup: Mapping[int, float]
    symmetric: bool = True

    def __post_init__(self):
        if self.index_mode not in (UNILATERAL, BILATERAL):
            raise DomainError(f"unknown index mode {self.index_mode!r}")
        if self.band_half_width < 0:
            raise DomainError("band half-width must be nonnegative")
        for k, s in self.diag_sup.items():
            if not math.isfinite(s) or s < 0.0:
                raise DomainError(f"diagonal sup for k={k} must be finite and >= 0")


@dataclass(frozen=True)
class SymbolSpec:
    """Real 2*pi-periodic symbol with a quadrature resolution."""

    f: Callable[[float], float]
    quadrature_points: int = 4096

    def __post_init__(self):
        if self.quadrature_points < 2:
            raise DomainError("need at least 2 quadrature points")

    def sample(self):
        """Values of f on the uniform periodic grid over [-pi, pi)."""
        n = self.quadrature_points
        x = -np.pi + 2.0 * np.pi * np.arange(n) / n
        try:
            fx = np.asarray(self.f(x), dtype=float)
            if fx.shape != x.shape:
                raise TypeError
        except TypeError:
            fx = np.fromiter((float(self.f(v)) for v in x), dtype=float, count=n)
        if not np.all(np.isfinite(fx)):
            raise DomainError("symbol must be bounded on [-pi, pi]")
        return x, fx


@dataclass(frozen=True)
class PermutationSpec:
    """Order-two permutation of the naturals from the f(k) = k^2 + 1 pairing.

    Multiples of 4 map to k^2 + 1; the remaining evens are matched to the
    remaining odds by the order-preserving bijection of their increasing
    enumerations. Values are computed in closed form with exact integer
    arithmetic, so pi(k) is correct for every k >= 1 even when it exceeds
    ``limit`` (the range the spec was requested for).
    """

    limit: int

    def pi(self, k: int) -> int:
        if k < 1:
            raise DomainError("permutation is defined on the naturals (k >= 1)")
        if k % 2 == 0:
            if k % 4 == 0:
                return k * k + 1
            return _odd_rest((k + 2) // 4)
        r = math.isqrt(k - 1)
        if r >= 4 and r % 4 == 0 and r * r + 1 == k:
            return r
        return 4 * ((k + 1) // 2 - _squares_upto(k)) - 2

    def escape_count(self, n: int) -> int:
        """#{k <= n : pi(k) > n} -- the zero-column count of the n-th cut."""
        if n < 1:
            raise DomainError("n must be >= 1")
        return sum(1 for k in range(1, n + 1) if self.pi(k) > n)


def _squares_upto(x: int) -> int:
    """Count of odds of the form (4j)^2 + 1 that are <= x."""
    if x < 17:
        return 0
    return math.isqrt(x - 1) // 4


def _odd_rest(i: int) -> int:
    """The i-th odd number not of the form (4j)^2 + 1."""
    y = 2 * i - 1
    while True:
        y2 = 2 * (i + _squares_upto(y)) - 1
        if y2 == y:
            return y
        y = y2


@dataclass(frozen=True)
class PermutationOperator:
    """Reflection A e_k = e_{pi(k)} on the unilateral basis.

    Not band-limited: entries sit arbitrarily far from the diagonal, so
    degree-based operations reject it.
    """

    perm: PermutationSpec
    index_mode: str = field(default=UNILATERAL, init=False)
    band_half_width: Optional[int] = field(default=None, init=False)
    symmetric: bool = field(default=True, init=False)


def entry(spec, i: int, j: int) -> float:
    """Matrix entry a_{ij} of an operator spec.

    Zero outside the band; raises DomainError for indices invalid in the
    spec's index mode (unilateral indices start at 1).
    """
    if spec.index_mode == UNILATERAL and (i < 1 or j < 1):
        raise DomainError("unilateral indices start at 1")
    if isinstance(spec, PermutationOperator):
        return 1.0 if spec.perm.pi(j) == i else 0.0
    k = i - j
    if abs(k) > spec.band_half_width:
        return 0.0
    return float(spec.diag_fn(k, j))


def fourier_coefficients(sym: SymbolSpec, K: int) -> np.ndarray:
    """Fourier coefficients a_k = (1/2pi) int f(x) e^{-ikx} dx for |k| <= K.

    Composite trapezoid on the uniform periodic grid (spectrally accurate
    for smooth periodic f). Only even real symbols are supported, so the
    result is real with a_{-k} = a_k; the returned array has length 2K+1
    ordered k = -K..K.
    """
    if K < 0:
        raise DomainError("K must be nonnegative")
    n = sym.quadrature_points
    if n < 2 * K + 2:
        raise DomainError(f"need at least {2 * K + 2} quadrature points for band {K}")
    x, fx = sym.sample()
    mirrored = fx[(-np.arange(n)) % n]
    scale = max(1.0, float(np.max(np.abs(fx))))
    if np.max(np.abs(fx - mirrored)) > _EVEN_RTOL * scale:
        raise UnsupportedOperatorError(
            "symbol is not even; the resulting Laurent matrix would not be real symmetric"
        )
    coeffs = np.empty(2 * K + 1)
    for k in range(K + 1):
        a_k = float(np.mean(fx * np.cos(k * x)))
        coeffs[K + k] = a_k
        coeffs[K - k] = a_k
    return coeffs


def laurent_operator(coeffs) -> OperatorSpec:
    """Constant-diagonal (Laurent) operator from coefficients a_{-K}..a_K.

    Compressions relative to the bilateral filtration are the finite
    symmetric Toeplitz matrices with entries a_{i-j}.
    """
    a = np.asarray(coeffs, dtype=float)
    if a.ndim != 1 or a.shape[0] % 2 != 1:
        raise DomainError("coefficients must have odd length, ordered k = -K..K")
    K = a.shape[0] // 2
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a[::-1])) > 1e-12 * scale:
        raise SymmetryError("coefficients must satisfy a_{-k} = a_k")
    table = {k: float(a[K + k]) for k in range(-K, K + 1)}

    def diag(k, i, _table=table):
        return _table[k]

    sups = {k: abs(v) for k, v in table.items()}
    return OperatorSpec(BILATERAL, K, diag, sups)


def banded_operator(diagonals, index_mode=BILATERAL, sups=None, symmetric=None) -> OperatorSpec:
    """General banded spec from a map {offset k: constant or callable i -> a_{i+k,i}}.

    Callable diagonals need an explicit entry in ``sups``. Symmetry is
    inferred for constant diagonals (a_{-k} == a_k) and must be declared
    for callable ones.
    """
    if not diagonals:
        raise DomainError("need at least one diagonal")
    table = dict(diagonals)
    K = max(abs(k) for k in table)
    sups = dict(sups or {})
    has_callable = False
    for k, v in table.items():
        if callable(v):
            if k not in sups:
                raise DomainError(f"callable diagonal k={k} needs an explicit sup bound")
            has_callable = True
        else:
            table[k] = float(v)
            sups.setdefault(k, abs(float(v)))
    if symmetric is None:
        if has_callable:
            raise DomainError("symmetry must be declared when diagonals are callables")
        sym = all(
            k == 0 or (-k in table and table[k] == table[-k]) for k in table
        )
    else:
        sym = symmetric
    full_sups = {k: sups.get(k, 0.0) for k in range(-K, K + 1)}

    def diag(k, i, _table=table):
        v = _table.get(k, 0.0)
        return float(v(i)) if callable(v) else v

    return OperatorSpec(index_mode, K, diag, full_sups, symmetric=sym)


def diagonal_part(spec: OperatorSpec, k: int) -> OperatorSpec:
    """Single-diagonal building block D_k of a banded spec (symmetric only
    when k == 0)."""
    if abs(k) > spec.band_half_width:
        raise DomainError(f"offset {k} outside band +-{spec.band_half_width}")

    def diag(kk, i, _k=k, _fn=spec.diag_fn):
        return float(_fn(_k, i)) if kk == _k else 0.0

    sups = {kk: (spec.diag_sup[k] if kk == k else 0.0) for kk in range(-abs(k), abs(k) + 1)}
    return OperatorSpec(spec.index_mode, abs(k), diag, sups, symmetric=(k == 0))


def almost_mathieu_operator(v: Callable[[float], float], theta: float) -> OperatorSpec:
    """Bilateral tridiagonal operator with off-diagonals 1 and diagonal
    d_n = v(sin(n*theta)).

    The sup of the diagonal is estimated as max |v| over a 10^4-point grid
    on [-1, 1]; it enters only norm bounds, as an upper estimate.
    """
    grid = np.linspace(-1.0, 1.0, _POTENTIAL_GRID)
    try:
        vals = np.asarray(v(grid), dtype=float)
        if vals.shape != grid.shape:
            raise TypeError
    except TypeError:
        vals = np.fromiter((float(v(g)) for g in grid), dtype=float, count=grid.size)
    if not np.all(np.isfinite(vals)):
        raise DomainError("potential must be bounded on [-1, 1]")
    d0 = float(np.max(np.abs(vals)))

    def diag(k, i, _v=v, _theta=theta):
        if k == 0:
            return float(_v(math.sin(i * _theta)))
        return 1.0

    return OperatorSpec(BILATERAL, 1, diag, {-1: 1.0, 0: d0, 1: 1.0})


def appendix_permutation(limit: int) -> PermutationSpec:
    """The order-two permutation whose induced reflection has essential
    spectrum {-1, +1} while 0 is an essential point of its compressions."""
    if limit < 16:
        raise DomainError("limit must be >= 16 to exhibit the pairing structure")
    return PermutationSpec(limit)


def permutation_operator(perm: PermutationSpec) -> PermutationOperator:
    """Reflection induced by an involution: entry(i, j) = [i == pi(j)]."""
    probe = min(perm.limit, 64)
    for k in range(1, probe + 1):
        if perm.pi(perm.pi(k)) != k:
            raise DomainError(f"permutation is not an involution at k={k}")
    return PermutationOperator(perm)


# Named potentials available to config files; arbitrary callables are
# library-API only.
def make_potential(text: str) -> Callable[[float], float]:
    """Parse a potential registry entry: zero | linear:c | cosine:c | step:a,b."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "zero":
        return lambda x: 0.0
    if name == "linear":
        c = float(arg)
        return lambda x, _c=c: _c * x
    if name == "cosine":
        c = float(arg)
        return lambda x, _c=c: _c * math.cos(x)
    if name == "step":
        lo_s, _, hi_s = arg.partition(",")
        lo, hi = float(lo_s), float(hi_s)
        return lambda x, _lo=lo, _hi=hi: _lo if x < 0.0 else _hi
    raise DomainError(f"unknown potential {text!r}")
