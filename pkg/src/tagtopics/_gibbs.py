"""Collapsed Gibbs sweep kernel.

Compiled with numba when available; the uncompiled function is the fallback
and computes byte-identical results, only slower. The sweep is strictly
sequential over token positions, so results are deterministic given the
per-sweep uniform draws handed in by the caller.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


@njit(cache=True)
def run_sweep(z, doc_of, word_of, n_dt, n_tw, n_t, word_prior, prior_total,
              alpha, u):
    """One full sweep: for each token position i, remove the token from the
    counts, weight every topic by

        (n_dt[d, t] + alpha) * (n_tw[w, t] + B[w, t]) / (n_t[t] + Bsum[t])

    and reassign by inverse transform on u[i]. Counts are updated in place."""
    k = n_t.shape[0]
    weights = np.empty(k, dtype=np.float64)
    for i in range(z.shape[0]):
        d = doc_of[i]
        w = word_of[i]
        t = z[i]
        n_dt[d, t] -= 1
        n_tw[w, t] -= 1
        n_t[t] -= 1
        total = 0.0
        for tt in range(k):
            wt = ((n_dt[d, tt] + alpha)
                  * (n_tw[w, tt] + word_prior[w, tt])
                  / (n_t[tt] + prior_total[tt]))
            weights[tt] = wt
            total += wt
        if not total > 0.0:  # catches zero and NaN
            raise AssertionError("degenerate sampling weight normalizer")
        r = u[i] * total
        new_t = k - 1
        acc = 0.0
        for tt in range(k):
            acc += weights[tt]
            if r < acc:
                new_t = tt
                break
        z[i] = new_t
        n_dt[d, new_t] += 1
        n_tw[w, new_t] += 1
        n_t[new_t] += 1
