"""Compiled kernels for the sequential eigenvalue iterations.

Everything here is numba-jitted with ``nogil=True`` so ladder steps can run
on a thread pool. Kernels mutate their array arguments; callers pass copies.
"""

import math

from numba import njit


@njit(cache=True, nogil=True)
def ql_implicit(d, e, tol, max_sweeps):
    """Implicit-shift QL with Wilkinson shift, eigenvalues only.

    d has length n and holds the diagonal; on exit it holds the (unsorted)
    eigenvalues. e has length n and holds the subdiagonal in e[0..n-2];
    e[n-1] is workspace. Deflation: |e[i]| <= tol*(|d[i]|+|d[i+1]|).

    Returns 0 on success, or l+1 if eigenvalue l failed to converge
    within max_sweeps sweeps.
    """
    n = d.shape[0]
    if n <= 1:
        return 0
    e[n - 1] = 0.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                return l + 1
            # Wilkinson shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated; recover and rescan
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if not underflow:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return 0


@njit(cache=True, nogil=True)
def sturm_count_leq(d, e, x):
    """Number of eigenvalues <= x of the symmetric tridiagonal (d, e).

    Counts nonpositive pivots of the LDL^T factorization of T - x*I.
    Zero pivots are replaced by -1e-300, which preserves the inertia
    count (the standard safeguard).
    """
    n = d.shape[0]
    count = 0
    t = d[0] - x
    if t < 0.0:
        count += 1
    elif t == 0.0:
        count += 1
        t = -1e-300
    for i in range(1, n):
        t = d[i] - x - (e[i - 1] * e[i - 1]) / t
        if t < 0.0:
            count += 1
        elif t == 0.0:
            count += 1
            t = -1e-300
    return count


@njit(cache=True, nogil=True)
def band_reduce(a, b):
    """Reduce a symmetric banded matrix to tridiagonal form in place.

    a is dense (n, n) storage with half-bandwidth b (entries with
    |i-j| > b are zero). Rutishauser-Schwarz Givens elimination: the
    outermost diagonal is removed column by column, each elimination
    chasing its bulge down the band at stride equal to the current
    bandwidth. Work is O(n^2 * b); only O(b)-wide windows are touched
    per rotation.
    """
    n = a.shape[0]
    for bw in range(b, 1, -1):
        for j in range(0, n - bw):
            r = j + bw
            col = j
            while r < n:
                tgt = a[r, col]
                p = r - 1
                if tgt == 0.0:
                    break
                piv = a[p, col]
                rad = math.hypot(piv, tgt)
                c = piv / rad
                s = -tgt / rad
                lo = col if col < p - bw else p - bw
                if lo < 0:
                    lo = 0
                hi = r + bw
                if hi > n - 1:
                    hi = n - 1
                for k in range(lo, hi + 1):
                    xp = a[p, k]
                    xq = a[r, k]
                    a[p, k] = c * xp - s * xq
                    a[r, k] = s * xp + c * xq
                for k in range(lo, hi + 1):
                    xp = a[k, p]
                    xq = a[k, r]
                    a[k, p] = c * xp - s * xq
                    a[k, r] = s * xp + c * xq
                a[r, col] = 0.0
                a[col, r] = 0.0
                col = p
                r = r + bw
