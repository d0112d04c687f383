"""Shared oracles and fixtures-in-code for the test suite.

Everything here is deliberately independent of the production code paths it
checks: the KKT oracle solves the Newton system densely, the feasibility
grid enumerates (sigma, alpha) pairs by brute force, and random iterates are
built from explicit null-space / row-space perturbations.
"""

from __future__ import annotations

import numpy as np

from optlp.model import Iterate, neighborhood_distance
from optlp.solver import generate_synthetic


def dense_kkt_direction(a, x, s, sigma):
    """Solve the full (m + 2n) Newton system with a dense LU factorization.

        [ A   0    0 ] [dx]   [ 0                   ]
        [ 0   A^T  I ] [dy] = [ 0                   ]
        [ S   0    X ] [ds]   [ x o s - sigma mu e  ]
    """
    m, n = a.shape
    mu = float(x @ s) / n
    kkt = np.zeros((m + 2 * n, m + 2 * n))
    kkt[:m, :n] = a
    kkt[m:m + n, n:n + m] = a.T
    kkt[m:m + n, n + m:] = np.eye(n)
    kkt[m + n:, :n] = np.diag(s)
    kkt[m + n:, n + m:] = np.diag(x)
    rhs = np.concatenate([np.zeros(m + n), x * s - sigma * mu])
    sol = np.linalg.solve(kkt, rhs)
    return sol[:n], sol[n:n + m], sol[n + m:]


def random_interior_iterate(lp, start, rng, spread=0.5, theta=0.99):
    """A strictly feasible iterate inside the theta-neighborhood.

    Perturbs the centered start along exact null-space (primal) and
    row-space (dual) directions, shrinking until the point is acceptable,
    so feasibility holds to machine precision by construction.
    """
    q, _ = np.linalg.qr(lp.a.T, mode="complete")
    nullbasis = q[:, lp.m:]
    for _ in range(60):
        u = spread * rng.normal(size=lp.n - lp.m) / np.sqrt(lp.n - lp.m)
        w = spread * rng.normal(size=lp.m) / np.sqrt(lp.m)
        x = start.x + nullbasis @ u
        s = start.s + lp.a.T @ w
        y = start.y - w
        if np.min(x) > 1e-3 and np.min(s) > 1e-3:
            mu = float(x @ s) / lp.n
            if neighborhood_distance(x, s) <= theta * mu:
                return Iterate(x, y, s)
        spread *= 0.7
    raise RuntimeError("could not build a random interior iterate")


def synthetic_family(count, rng_seed=20240, n_max=64):
    """A deterministic batch of (lp, start) pairs of varied shapes."""
    rng = np.random.default_rng(rng_seed)
    problems = []
    for i in range(count):
        n = int(rng.integers(6, n_max + 1))
        m = int(rng.integers(2, max(3, n // 2)))
        problems.append(generate_synthetic(n, m, seed=int(rng.integers(0, 2**31))))
    return problems


def step_grid_best(sp, grid=200):
    """Brute-force best predicted gap over a (sigma, alpha) feasibility grid.

    Evaluates f directly from the quartic coefficients; returns the smallest
    predicted mu among feasible grid points, or None if none is feasible.
    """
    sigmas = np.arange(1, grid + 1) / (grid + 1.0)
    alphas = np.arange(1, grid + 1) / (grid + 1.0)
    best = None
    for sig in sigmas:
        h = (((sp.a4 * sig - sp.a3) * sig + sp.a2) * sig - sp.a1) * sig + sp.a0
        fvals = h - (sp.theta * sp.mu * sig / alphas) ** 2
        ok = fvals <= 0.0
        if ok.any():
            predicted = sp.mu * (1.0 - alphas[ok] * (1.0 - sig))
            cand = float(predicted.min())
            if best is None or cand < best:
                best = cand
    return best
