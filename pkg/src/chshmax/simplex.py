"""Batched derivative-free simplex descent (Nelder-Mead).

Runs many independent low-dimensional minimizations in lockstep so that
every iteration issues at most three vectorized objective calls for the
whole batch instead of one call per simplex.  Used to refine the best
rotation-grid candidates, where the objective is cheap per point but
Python call overhead dominates scalar loops.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SimplexOptions:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    diameter_tol: float = 1e-9
    max_iter: int = 500


def nelder_mead_batch(
    func,
    starts: np.ndarray,
    step: float,
    options: SimplexOptions = SimplexOptions(),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimize ``func`` from each start in lockstep.

    func maps an (m, n) stack of points to (m,) values; starts is (k, n).
    Each simplex stops once its vertex spread (inf-norm radius around the
    best vertex) drops below ``diameter_tol`` or after ``max_iter``
    iterations.  Returns (best_points (k, n), best_values (k,), iterations).
    """
    starts = np.asarray(starts, dtype=float)
    k, n = starts.shape
    opt = options

    sim = np.repeat(starts[:, None, :], n + 1, axis=1)
    for i in range(n):
        sim[:, i + 1, i] += step
    fs = np.asarray(func(sim.reshape(-1, n)), dtype=float).reshape(k, n + 1)

    active = np.ones(k, dtype=bool)
    iterations = np.zeros(k, dtype=int)

    for _ in range(opt.max_iter):
        order = np.argsort(fs, axis=1, kind="stable")
        sim = np.take_along_axis(sim, order[:, :, None], axis=1)
        fs = np.take_along_axis(fs, order, axis=1)

        spread = np.abs(sim - sim[:, :1, :]).max(axis=(1, 2))
        active &= spread >= opt.diameter_tol
        if not active.any():
            break
        idx = np.flatnonzero(active)
        iterations[idx] += 1

        centroid = sim[idx, :n, :].mean(axis=1)
        worst = sim[idx, n, :]
        f_best = fs[idx, 0]
        f_second = fs[idx, n - 1]
        f_worst = fs[idx, n]

        xr = centroid + opt.reflection * (centroid - worst)
        fr = func(xr)

        accept_x = xr.copy()
        accept_f = fr.copy()
        expand = fr < f_best
        contract_out = (fr >= f_second) & (fr < f_worst)
        contract_in = fr >= f_worst

        trial_mask = expand | contract_out | contract_in
        if trial_mask.any():
            t = np.flatnonzero(trial_mask)
            coef = np.where(
                expand[t],
                opt.expansion,
                np.where(contract_out[t], opt.contraction, -opt.contraction),
            )
            xt = centroid[t] + coef[:, None] * (centroid[t] - worst[t])
            ft = func(xt)
            # expansion: keep the better of reflected/expanded
            better = ft < accept_f[t]
            take = expand[t] & better
            # outside contraction succeeds if not worse than the reflection
            take |= contract_out[t] & (ft <= accept_f[t])
            # inside contraction succeeds if it beats the current worst
            take |= contract_in[t] & (ft < f_worst[t])
            accept_x[t[take]] = xt[take]
            accept_f[t[take]] = ft[take]
            failed = (contract_out[t] | contract_in[t]) & ~take
            shrink_rows = t[failed]
        else:
            shrink_rows = np.empty(0, dtype=int)

        replace = np.ones(len(idx), dtype=bool)
        replace[shrink_rows] = False
        rows = idx[replace]
        sim[rows, n, :] = accept_x[replace]
        fs[rows, n] = accept_f[replace]

        if len(shrink_rows):
            rows = idx[shrink_rows]
            best = sim[rows, :1, :]
            sim[rows, 1:, :] = best + opt.shrink * (sim[rows, 1:, :] - best)
            fs[rows, 1:] = func(sim[rows, 1:, :].reshape(-1, n)).reshape(-1, n)

    order = np.argsort(fs, axis=1, kind="stable")
    sim = np.take_along_axis(sim, order[:, :, None], axis=1)
    fs = np.take_along_axis(fs, order, axis=1)
    return sim[:, 0, :], fs[:, 0], iterations
