import numpy as np
import pytest

import bandspec as bs

from conftest import free_jacobi_eigs


@pytest.fixture(scope="module")
def fj_ladder():
    spec = bs.laurent_operator([1.0, 0.0, 1.0])
    filt = bs.Filtration(bs.BILATERAL)
    return bs.run_ladder(spec, filt, (64, 128, 256, 512, 1024), workers=4)


# ------------------------------------------------------------------ counting


def test_counting_free_jacobi_whole_band():
    eigs = bs.EigenvalueList(free_jacobi_eigs(10), 10)
    assert bs.counting(eigs, (-3.0, 3.0)) == 10
    assert bs.counting(eigs, (5.0, 6.0)) == 0


def test_counting_appendix_zero_multiplicity(unilateral):
    perm = bs.appendix_permutation(256)
    op = bs.permutation_operator(perm)
    for n in (32, 100, 200):
        ev = bs.eigenvalues_of(bs.compress(op, unilateral, n))
        assert bs.counting(ev, (-0.5, 0.5)) == perm.escape_count(n)


def test_counting_additive_on_disjoint_intervals(fj_ladder):
    rng = np.random.default_rng(47)
    for step in fj_ladder.steps:
        for _ in range(10):
            a, mid, b = np.sort(rng.uniform(-3, 3, 3))
            whole = bs.counting(step.eigs, (a, b))
            left = bs.counting(step.eigs, (a, mid))
            right = bs.counting(step.eigs, (mid, b))
            at_mid = bs.counting(step.eigs, (np.nextafter(mid, a), np.nextafter(mid, b)))
            assert left + right + at_mid == whole


def test_counting_equals_sturm_on_tridiagonal_steps(fj_ladder):
    spec = bs.laurent_operator([1.0, 0.0, 1.0])
    filt = bs.Filtration(bs.BILATERAL)
    rng = np.random.default_rng(43)
    for step in fj_ladder.steps:
        cm = bs.compress(spec, filt, step.n)
        t = bs.TridiagonalForm(cm.d, cm.e)
        for _ in range(5):
            a, b = np.sort(rng.uniform(-3, 3, 2))
            if b - a < 1e-6:
                continue
            if np.min(np.abs(step.eigs.values - a)) < 1e-6:
                continue
            if np.min(np.abs(step.eigs.values - b)) < 1e-6:
                continue
            assert bs.sturm_count(t, a, b) == bs.counting(step.eigs, (a, b))


# ------------------------------------------------------------------- density


def test_density_extremes(fj_ladder):
    step = fj_ladder.steps[-1]
    assert bs.density(step.eigs, (-10.0, 10.0), step.dim) == 1.0
    assert bs.density(step.eigs, (5.0, 9.0), step.dim) == 0.0


def test_density_appendix_lower_bound(unilateral):
    perm = bs.appendix_permutation(1024)
    op = bs.permutation_operator(perm)
    for n in (128, 512, 1024):
        ev = bs.eigenvalues_of(bs.compress(op, unilateral, n))
        d = bs.density(ev, (-0.5, 0.5), n)
        assert d >= 0.25 * (1.0 - n ** -0.5)


# ----------------------------------------------------------------- integrate


def test_integrate_total_mass(fj_ladder):
    for step in fj_ladder.steps:
        assert bs.integrate(bs.EmpiricalMeasure(step.eigs), lambda x: np.ones_like(x)) == 1.0


def test_integrate_odd_moment_vanishes(fj_ladder):
    for step in fj_ladder.steps:
        assert abs(bs.integrate(bs.EmpiricalMeasure(step.eigs), lambda x: x)) < 1e-12


def test_integrate_second_moment_closed_form():
    # oracle: sum_k cos^2(k pi/(m+1)) = (m-1)/2, so the moment is 2 - 2/m
    m = 101
    vals = free_jacobi_eigs(m)
    oracle = np.sum(np.cos(np.arange(1, m + 1) * np.pi / (m + 1)) ** 2)
    assert oracle == pytest.approx((m - 1) / 2.0, abs=1e-10)
    mu = bs.EmpiricalMeasure(bs.EigenvalueList(vals, m))
    assert bs.integrate(mu, lambda x: x * x) == pytest.approx(2.0 - 2.0 / m, abs=1e-12)


# ------------------------------------------------------------ szego_reference


def test_szego_reference_values():
    sym = bs.SymbolSpec(lambda x: 2.0 * np.cos(x))
    assert bs.szego_reference(sym, lambda x: np.ones_like(x)) == 1.0
    assert abs(bs.szego_reference(sym, lambda x: x)) < 1e-14
    assert bs.szego_reference(sym, lambda x: x * x) == pytest.approx(2.0, abs=1e-12)


# ------------------------------------------------------------- weak_star_gap


def test_weak_star_gap_constant_function(fj_ladder):
    sym = bs.SymbolSpec(lambda x: 2.0 * np.cos(x))
    ref = bs.szego_reference(sym, lambda x: np.ones_like(x))
    gaps = bs.weak_star_gap(fj_ladder, ref, lambda x: np.ones_like(x))
    assert np.array_equal(gaps, np.zeros(len(fj_ladder.steps)))


def test_weak_star_gap_second_moment_shrinks(fj_ladder):
    sym = bs.SymbolSpec(lambda x: 2.0 * np.cos(x))
    u = lambda x: x * x
    gaps = bs.weak_star_gap(fj_ladder, bs.szego_reference(sym, u), u)
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] <= 0.01
    # oracle: the exact gap is 2/m at dimension m
    dims = np.array(fj_ladder.dims, dtype=float)
    assert np.allclose(gaps, 2.0 / dims, atol=1e-10)


def test_weak_star_gap_constant_symbol():
    spec = bs.laurent_operator([3.25])
    ladder = bs.run_ladder(spec, bs.Filtration(bs.BILATERAL), (8, 16, 32, 64))
    for u in (lambda x: x, lambda x: x ** 3, lambda x: np.abs(x)):
        ref = bs.szego_reference(bs.SymbolSpec(lambda x: 3.25 * np.ones_like(x)), u)
        assert np.array_equal(bs.weak_star_gap(ladder, ref, u), np.zeros(4))


# --------------------------------------------------------- lambda_membership


def test_membership_free_jacobi_zero(fj_ladder):
    # bilateral compressions have odd dimension, so 0 is an exact eigenvalue
    assert bs.lambda_membership(fj_ladder, 0.0)


def test_membership_outside_gershgorin_bound(fj_ladder):
    # Gershgorin oracle: every eigenvalue of every compression lies in
    # [-2, 2], so 3 is at distance >= 1 from every spectrum
    for step in fj_ladder.steps:
        assert np.max(np.abs(step.eigs.values)) <= 2.0 + 1e-12
    assert not bs.lambda_membership(fj_ladder, 3.0)


def test_membership_constant_symbol():
    ladder = bs.run_ladder(bs.laurent_operator([1.5]), bs.Filtration(bs.BILATERAL),
                           (8, 16, 32, 64))
    assert bs.lambda_membership(ladder, 1.5)
    assert not bs.lambda_membership(ladder, 1.6, tol=0.01)


# ------------------------------------------------------------------ classify


def test_classify_needs_enough_ladder(fj_ladder):
    short = bs.EigLadder(fj_ladder.steps[:3])
    with pytest.raises(bs.DomainError):
        bs.classify(short, [0.0], eps=0.1)


def test_classify_free_jacobi_zero_essential(fj_ladder):
    # brute-force oracle: window counts grow like the dimension times the
    # arcsine weight of the window, so they roughly double per step
    counts = [bs.counting(s.eigs, (-0.2, 0.2)) for s in fj_ladder.steps]
    ratios = [b / a for a, b in zip(counts, counts[1:])]
    assert min(ratios) > 1.5
    rep = bs.classify(fj_ladder, [0.0], eps=0.2)
    assert rep.labels == [bs.ESSENTIAL]


def test_classify_point_off_spectrum(fj_ladder):
    rep = bs.classify(fj_ladder, [3.0], eps=0.2)
    assert rep.labels == [bs.NOT_IN_LAMBDA]


def test_classify_appendix_zero_essential_despite_spectrum(unilateral):
    op = bs.permutation_operator(bs.appendix_permutation(1024))
    ladder = bs.run_ladder(op, unilateral, (128, 256, 512, 1024), workers=2)
    rep = bs.classify(ladder, [-1.0, 0.0, 1.0], eps=0.5)
    assert rep.labels == [bs.ESSENTIAL, bs.ESSENTIAL, bs.ESSENTIAL]


def test_classify_gap_point_bounded_counts():
    # steep two-valued symbol: the midpoint of the gap sees a bounded,
    # occasionally nonzero eigenvalue count -> transient or indeterminate,
    # and the density tends to zero
    f = lambda x: np.where(np.abs(x) <= np.pi / 2, 1.0, -1.0)
    sym = bs.SymbolSpec(f, quadrature_points=8192)
    spec = bs.laurent_operator(bs.fourier_coefficients(sym, 64))
    ladder = bs.run_ladder(spec, bs.Filtration(bs.BILATERAL), (64, 128, 256, 512),
                           workers=4)
    rep = bs.classify(ladder, [0.0], eps=0.1)
    assert rep.labels[0] in (bs.TRANSIENT, bs.INDETERMINATE)
    assert rep.densities[0, -1] <= 0.01


def test_classification_report_serialization(fj_ladder, tmp_path):
    rep = bs.classify(fj_ladder, [0.0, 1.0, 3.0], eps=0.2)
    d = rep.to_json_dict()
    assert d["labels"] == rep.labels
    assert len(d["counts"]) == 3
    rows = bs.analysis.report_to_csv_rows(rep)
    assert rows[0][:2] == ["lambda", "label"]
    assert len(rows) == 4


# ----------------------------------------------------------- spectrum_estimate


def test_spectrum_estimate_free_jacobi(fj_ladder):
    est = bs.spectrum_estimate(fj_ladder)
    assert len(est.intervals) == 1
    lo, hi = est.intervals[0]
    # Hausdorff distance to the exact spectrum [-2, 2]
    assert max(abs(lo + 2.0), abs(hi - 2.0)) <= 0.1


def test_spectrum_estimate_constant_symbol():
    c = 5.0
    ladder = bs.run_ladder(bs.laurent_operator([c]), bs.Filtration(bs.BILATERAL),
                           (8, 16, 32, 64))
    est = bs.spectrum_estimate(ladder)
    assert len(est.intervals) == 1
    lo, hi = est.intervals[0]
    assert abs(lo - c) <= est.eps + est.h
    assert abs(hi - c) <= est.eps + est.h


def test_spectrum_estimate_two_intervals():
    f = lambda x: np.where(np.abs(x) <= np.pi / 2, 1.0, -1.0)
    sym = bs.SymbolSpec(f, quadrature_points=8192)
    coeffs = bs.fourier_coefficients(sym, 64)
    spec = bs.laurent_operator(coeffs)
    ladder = bs.run_ladder(spec, bs.Filtration(bs.BILATERAL), (64, 128, 256, 512),
                           workers=4)
    est = bs.spectrum_estimate(ladder)
    assert len(est.intervals) == 2
    # oracle: pushforward support of the truncated symbol, read from a fine
    # sample of its values; the two bulk bands sit around -1 and +1
    xs = -np.pi + 2.0 * np.pi * np.arange(2 ** 16) / 2 ** 16
    vals = np.zeros_like(xs)
    K = 64
    for k in range(-K, K + 1):
        vals += coeffs[K + k] * np.cos(k * xs)
    hist, edges = np.histogram(vals, bins=400, range=(-1.25, 1.25), density=True)
    support = edges[:-1][hist > 0.05]
    gap_at = int(np.argmax(np.diff(support)))
    bands = [(support[0], support[gap_at]), (support[gap_at + 1], support[-1])]
    tol = est.eps + est.h + 0.02
    for (glo, ghi), (blo, bhi) in zip(est.intervals, bands):
        assert abs(glo - blo) <= tol
        assert abs(ghi - bhi) <= tol


# ----------------------------------------------------------- containment_check


def test_containment_free_jacobi(fj_ladder):
    rep = bs.containment_check(fj_ladder, [(-2.0, 2.0)], tol=0.1)
    assert rep.ok
    assert rep.violations == []


def test_containment_constant():
    ladder = bs.run_ladder(bs.laurent_operator([2.5]), bs.Filtration(bs.BILATERAL),
                           (8, 16, 32, 64))
    rep = bs.containment_check(ladder, [(2.5, 2.5)], tol=0.05)
    assert rep.ok


def test_containment_appendix_proper_inclusion(unilateral):
    # known essential spectrum of the reflection is {-1, +1}: both must be
    # reproduced; additionally 0 is classified essential even though it is
    # not spectral, witnessing the proper inclusion
    op = bs.permutation_operator(bs.appendix_permutation(1024))
    ladder = bs.run_ladder(op, unilateral, (128, 256, 512, 1024), workers=2)
    rep = bs.containment_check(ladder, [(-1.0, -1.0), (1.0, 1.0)], tol=0.25)
    assert rep.ok
    extra = bs.classify(ladder, [0.0], eps=0.25)
    assert extra.labels == [bs.ESSENTIAL]


def test_containment_two_band_symbol():
    # two-band case of the containment surrogate: the pushforward support
    # of the steep truncated step has two bands; every sampled band point
    # must be reproduced and none may come back not-in-lambda
    f = lambda x: np.where(np.abs(x) <= np.pi / 2, 1.0, -1.0)
    sym = bs.SymbolSpec(f, quadrature_points=8192)
    coeffs = bs.fourier_coefficients(sym, 64)
    spec = bs.laurent_operator(coeffs)
    ladder = bs.run_ladder(spec, bs.Filtration(bs.BILATERAL), (64, 128, 256, 512),
                           workers=4)
    xs = -np.pi + 2.0 * np.pi * np.arange(2 ** 16) / 2 ** 16
    vals = np.zeros_like(xs)
    for k in range(-64, 65):
        vals += coeffs[64 + k] * np.cos(k * xs)
    hist, edges = np.histogram(vals, bins=400, range=(-1.25, 1.25), density=True)
    supp = edges[:-1][hist > 0.05]
    g = int(np.argmax(np.diff(supp)))
    bands = [(float(supp[0]), float(supp[g])), (float(supp[g + 1]), float(supp[-1]))]
    rep = bs.containment_check(ladder, bands, tol=0.1)
    assert rep.ok, rep.violations
    grid = np.concatenate([np.linspace(*bands[0], 9), np.linspace(*bands[1], 9)])
    crep = bs.classify(ladder, grid, eps=0.1)
    assert bs.NOT_IN_LAMBDA not in crep.labels


def test_containment_known_spectrum_sample_labels(fj_ladder):
    # monotone containment surrogate: no sample of the true spectrum may be
    # labeled not-in-lambda at the largest ladder
    rep = bs.classify(fj_ladder, np.linspace(-2, 2, 21), eps=0.2)
    assert bs.NOT_IN_LAMBDA not in rep.labels
    assert all(lab == bs.ESSENTIAL for lab in rep.labels)


# ------------------------------------------------------------------- ladders


def test_run_ladder_thread_count_invariant(free_jacobi):
    filt = bs.Filtration(bs.BILATERAL)
    seq = bs.run_ladder(free_jacobi, filt, (16, 32, 64, 128), workers=1)
    par = bs.run_ladder(free_jacobi, filt, (16, 32, 64, 128), workers=4)
    for a, b in zip(seq.steps, par.steps):
        assert np.array_equal(a.eigs.values, b.eigs.values)


def test_ladder_validation():
    eigs = bs.EigenvalueList(np.array([0.0]), 1)
    with pytest.raises(bs.DomainError):
        bs.EigLadder((bs.LadderStep(2, 1, eigs), bs.LadderStep(1, 1, eigs)))
    with pytest.raises(bs.DomainError):
        bs.run_ladder(bs.laurent_operator([1.0]), bs.Filtration(bs.BILATERAL), (4, 4))
