"""Eigenvalue ladders and their spectral summaries.

The objects here turn sequences of compression spectra into the quantities
the theory is about: empirical measures and their moments, interval counts
and densities, membership in the limit set of compression eigenvalues, the
essential/transient classification, and interval estimates of the essential
spectrum. All limit statements are necessarily evaluated through finite
surrogates; reports carry the full ladder so callers can extend it.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .compression import Filtration, compress
from .eigensolver import (
    EigenvalueList,
    TridiagonalForm,
    symmetric_eigenvalues,
    tridiagonal_eigenvalues,
)
from .errors import DomainError

ESSENTIAL = "essential"
TRANSIENT = "transient"
INDETERMINATE = "indeterminate"
NOT_IN_LAMBDA = "not-in-lambda"

DEFAULT_SCHEDULE = (64, 128, 256, 512, 1024, 2048)


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniform probability measure on the eigenvalues of one compression."""

    eigs: EigenvalueList

    @property
    def weight(self) -> float:
        return 1.0 / self.eigs.dim


@dataclass(frozen=True)
class LadderStep:
    n: int
    dim: int
    eigs: EigenvalueList


@dataclass(frozen=True)
class EigLadder:
    """Compression spectra along an increasing schedule of cuts."""

    steps: Tuple[LadderStep, ...]

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise DomainError("ladder must have at least one step")
        ns = [s.n for s in steps]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise DomainError("ladder steps must be strictly increasing in n")
        for s in steps:
            if s.eigs.dim != s.dim:
                raise DomainError(f"step n={s.n}: dim does not match eigenvalue count")

    @property
    def dims(self):
        return [s.dim for s in self.steps]

    def spectral_diameter(self) -> float:
        lo = min(float(s.eigs.values[0]) for s in self.steps)
        hi = max(float(s.eigs.values[-1]) for s in self.steps)
        return hi - lo

    def spectral_radius(self) -> float:
        return max(
            max(abs(float(s.eigs.values[0])), abs(float(s.eigs.values[-1])))
            for s in self.steps
        )


def eigenvalues_of(cm) -> EigenvalueList:
    """Eigenvalues of a compressed matrix via the storage-appropriate solver."""
    if cm.is_tridiagonal:
        return tridiagonal_eigenvalues(TridiagonalForm(cm.d, cm.e))
    return symmetric_eigenvalues(cm.dense)


def run_ladder(spec, filt: Filtration, schedule=DEFAULT_SCHEDULE, workers: int = 1) -> EigLadder:
    """Compress and solve at every n in the schedule.

    Steps are independent; with workers > 1 they run on a thread pool (the
    QL and reduction kernels release the GIL). Results are assembled in
    schedule order regardless of completion order.
    """
    ns = list(schedule)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("schedule must be strictly increasing")

    def solve(n):
        cm = compress(spec, filt, n)
        return LadderStep(n=n, dim=cm.dim, eigs=eigenvalues_of(cm))

    if workers > 1 and len(ns) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            steps = tuple(pool.map(solve, ns))
    else:
        steps = tuple(solve(n) for n in ns)
    return EigLadder(steps)


def counting(eigs: EigenvalueList, interval) -> int:
    """Number of eigenvalues in the open interval (a, b), with multiplicity."""
    a, b = interval
    if not a < b:
        raise DomainError("interval must have a < b")
    v = eigs.values
    return int(np.searchsorted(v, b, side="left") - np.searchsorted(v, a, side="right"))


def density(eigs: EigenvalueList, interval, dim: int) -> float:
    """counting / dim, in [0, 1]."""
    return counting(eigs, interval) / dim


def _apply(u, values: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(u(values), dtype=float)
        if out.shape == values.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.fromiter((float(u(v)) for v in values), dtype=float, count=values.size)


def integrate(mu: EmpiricalMeasure, u) -> float:
    """int u dmu = weight * sum u(lambda_i)."""
    return float(mu.weight * np.sum(_apply(u, mu.eigs.values)))


def szego_reference(sym, u) -> float:
    """(1/2pi) int u(f(x)) dx by trapezoid quadrature on the symbol's grid."""
    _, fx = sym.sample()
    return float(np.mean(_apply(u, fx)))


def weak_star_gap(ladder: EigLadder, ref: float, u) -> np.ndarray:
    """Per-step |int u dmu_n - ref|."""
    return np.array(
        [abs(integrate(EmpiricalMeasure(s.eigs), u) - ref) for s in ladder.steps]
    )


def membership_tolerance(ladder: EigLadder) -> float:
    """Default tolerance resolving 'lim lambda_n = lambda' on a finite ladder:
    4 * spectral diameter / dim of the smallest tail step (floored so that
    zero-diameter spectra still admit exact matches)."""
    tail = ladder.steps[len(ladder.steps) // 2:]
    return max(4.0 * ladder.spectral_diameter() / tail[0].dim, 1e-12)


def lambda_membership(ladder: EigLadder, lam: float, tol: Optional[float] = None) -> bool:
    """Finite surrogate for membership in the set of eigenvalue limits:
    every tail-half step must have an eigenvalue within tol of lam."""
    if tol is None:
        tol = membership_tolerance(ladder)
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    tail = ladder.steps[len(ladder.steps) // 2:]
    for s in tail:
        v = s.eigs.values
        pos = np.searchsorted(v, lam)
        best = np.inf
        if pos < v.size:
            best = min(best, abs(float(v[pos]) - lam))
        if pos > 0:
            best = min(best, abs(float(v[pos - 1]) - lam))
        if best > tol:
            return False
    return True


@dataclass(frozen=True)
class Thresholds:
    """Finite-ladder surrogates for 'counts stay bounded' vs 'counts blow up'.

    A point is read as essential when its window counts keep growing by at
    least growth_factor per doubling over the last tail_steps steps and end
    above both the bounded cap (the maximum count seen over the first half
    of the ladder) and the absolute evidence floor min_final_count; trend
    reading on a handful of eigenvalues is noise. A point is transient when
    no step ever exceeded the cap. Points matching neither pattern stay
    indeterminate rather than being silently binned.
    """

    growth_factor: float = 1.5
    min_final_count: int = 8
    tail_steps: int = 3


@dataclass(frozen=True)
class ClassificationReport:
    """Per-grid-point labels with the counting-function evidence behind them."""

    grid: np.ndarray
    labels: List[str]
    counts: np.ndarray  # shape (grid, steps)
    densities: np.ndarray  # shape (grid, steps)
    steps: List[Tuple[int, int]]  # (n, dim) per ladder step
    eps: float
    thresholds: Thresholds = field(default_factory=Thresholds)

    def label_at(self, lam: float) -> str:
        i = int(np.argmin(np.abs(self.grid - lam)))
        return self.labels[i]

    def to_json_dict(self):
        return {
            "eps": self.eps,
            "thresholds": {
                "growth_factor": self.thresholds.growth_factor,
                "min_final_count": self.thresholds.min_final_count,
                "tail_steps": self.thresholds.tail_steps,
            },
            "steps": [{"n": n, "dim": d} for n, d in self.steps],
            "grid": [float(v) for v in self.grid],
            "labels": list(self.labels),
            "counts": self.counts.astype(int).tolist(),
            "densities": self.densities.tolist(),
        }


def _label_point(counts: np.ndarray, th: Thresholds) -> str:
    L = counts.size
    first_half = counts[: (L + 1) // 2]
    cap = int(np.max(first_half))
    tail = counts[-min(th.tail_steps, L - 1):]
    grew = all(
        tail[i + 1] >= th.growth_factor * tail[i] for i in range(tail.size - 1)
    )
    if grew and tail[-1] > cap and tail[-1] >= max(th.min_final_count, 1):
        return ESSENTIAL
    if np.max(counts) <= cap and np.any(counts > 0):
        return TRANSIENT
    if np.all(tail == 0):
        return NOT_IN_LAMBDA
    return INDETERMINATE


def classify(ladder: EigLadder, grid, eps: float,
             thresholds: Optional[Thresholds] = None) -> ClassificationReport:
    """Label each grid point essential / transient / indeterminate /
    not-in-lambda from the window counts N_n((lam - eps, lam + eps)).

    Needs at least 4 ladder steps spanning an 8x growth in dimension, so
    the bounded-vs-growing dichotomy has an axis to read trends on.
    """
    th = thresholds or Thresholds()
    steps = ladder.steps
    if len(steps) < 4 or steps[-1].n < 8 * steps[0].n:
        raise DomainError(
            "classification needs >= 4 ladder steps spanning >= 8x growth in n"
        )
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    grid = np.asarray(grid, dtype=float)
    counts = np.empty((grid.size, len(steps)), dtype=np.int64)
    for gi, lam in enumerate(grid):
        win = (lam - eps, lam + eps)
        for si, s in enumerate(steps):
            counts[gi, si] = counting(s.eigs, win)
    dims = np.array([s.dim for s in steps], dtype=float)
    densities = counts / dims[None, :]
    labels = [_label_point(counts[gi], th) for gi in range(grid.size)]
    return ClassificationReport(
        grid=grid,
        labels=labels,
        counts=counts,
        densities=densities,
        steps=[(s.n, s.dim) for s in steps],
        eps=eps,
        thresholds=th,
    )


@dataclass(frozen=True)
class SpectrumEstimate:
    """Disjoint closed intervals approximating the essential points."""

    intervals: List[Tuple[float, float]]
    h: float
    eps: float
    report: ClassificationReport

    def to_json_dict(self):
        return {
            "h": self.h,
            "eps": self.eps,
            "intervals": [[float(a), float(b)] for a, b in self.intervals],
            "classification": self.report.to_json_dict(),
        }


def spectrum_estimate(ladder: EigLadder, h: Optional[float] = None,
                      eps: Optional[float] = None,
                      thresholds: Optional[Thresholds] = None) -> SpectrumEstimate:
    """Sweep a grid over the eigenvalue range, classify every point, and
    merge the essential ones into maximal intervals.

    Defaults: eps = 0.05 * spectral diameter of the ladder, h = eps / 2.
    For operators in the decomposition algebra these intervals estimate
    the essential spectrum.
    """
    diam = ladder.spectral_diameter()
    if eps is None:
        eps = 0.05 * diam if diam > 0.0 else 1e-3
    if h is None:
        h = eps / 2.0
    if h <= 0.0 or eps <= 0.0:
        raise DomainError("h and eps must be positive")
    radius = ladder.spectral_radius()
    if radius == 0.0:
        grid = np.array([0.0])
    else:
        grid = np.arange(-radius, radius + h / 2.0, h)
    report = classify(ladder, grid, eps, thresholds)
    intervals = []
    start = None
    for i, lab in enumerate(report.labels):
        if lab == ESSENTIAL and start is None:
            start = i
        if lab != ESSENTIAL and start is not None:
            intervals.append((float(grid[start]), float(grid[i - 1])))
            start = None
    if start is not None:
        intervals.append((float(grid[start]), float(grid[-1])))
    return SpectrumEstimate(intervals=intervals, h=h, eps=eps, report=report)


@dataclass(frozen=True)
class ContainmentReport:
    ok: bool
    violations: List[Tuple[float, str]]
    samples: int


def containment_check(ladder: EigLadder, known_spectrum, tol: float) -> ContainmentReport:
    """Check that sampled points of a known spectrum are reproduced: each
    sample must pass lambda_membership and be classified essential with
    window radius tol. Reports the violating points."""
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    samples = []
    for lo, hi in known_spectrum:
        if hi < lo:
            raise DomainError("spectrum intervals must have lo <= hi")
        if hi == lo:
            samples.append(lo)
        else:
            count = min(64, max(2, int(np.ceil((hi - lo) / tol)) + 1))
            samples.extend(np.linspace(lo, hi, count).tolist())
    grid = np.asarray(samples, dtype=float)
    report = classify(ladder, grid, eps=tol)
    violations = []
    for lam, lab in zip(grid, report.labels):
        if not lambda_membership(ladder, float(lam), tol):
            violations.append((float(lam), "no nearby eigenvalue in the ladder tail"))
        elif lab != ESSENTIAL:
            violations.append((float(lam), f"classified {lab}"))
    return ContainmentReport(ok=not violations, violations=violations, samples=grid.size)


def report_to_csv_rows(report: ClassificationReport):
    """Stable CSV layout: lambda, label, then one count column and one
    density column per ladder step in ascending n."""
    header = ["lambda", "label"]
    for n, _ in report.steps:
        header.append(f"count_n{n}")
    for n, _ in report.steps:
        header.append(f"density_n{n}")
    rows = [header]
    for gi in range(report.grid.size):
        row = [format(float(report.grid[gi]), ".17g"), report.labels[gi]]
        row.extend(str(int(c)) for c in report.counts[gi])
        row.extend(format(float(d), ".17g") for d in report.densities[gi])
        rows.append(row)
    return rows


def report_to_json(report: ClassificationReport) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True)
