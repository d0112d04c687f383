"""Per-iteration factorization and the sigma-parameterized Newton direction.

The Newton system solved implicitly here is

    [ A   0    0 ] [dx]   [ 0             ]
    [ 0   A^T  I ] [dy] = [ 0             ]
    [ S   0    X ] [ds]   [ x o s - sigma mu e ]

with the update convention (x,y,s) <- (x - alpha dx, y - alpha dy, s - alpha ds).
Rather than forming the inverses of the reduced systems directly, the
directions come from two QR factorizations of scaled bases, which stays
accurate as components of x and s approach zero:

    Q1 R1 = D^-1 Ahat      (Ahat an orthonormal null-space basis of A)
    Q2 R2 = D A^T          (D = diag(sqrt(x_i / s_i)))

dx splits as p_x - sigma q_x and ds as p_s - sigma q_s, where p/q vectors are
projections of sqrt(x o s) and mu / sqrt(x o s) onto the two (mutually
orthogonal, jointly complete) column spaces, rescaled by D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedError, InvalidInputError
from .linalg import qr_thin, solve_upper_triangular
from .model import Iterate, StandardLp

# Beyond this ratio of x_i/s_i (either way) the scaled factorizations are
# numerically meaningless; fail loudly instead of returning garbage.
MAX_SCALING_RATIO = 1e16


@dataclass(frozen=True)
class FactorCache:
    """QR products of one iterate's scaled bases.

    q1 (n x (n-m)) spans the scaled null space of A, q2 (n x m) the scaled
    row space; together they form a square orthogonal matrix. r2 is kept to
    recover the dual direction by back-substitution. d holds sqrt(x_i/s_i).
    """

    q1: np.ndarray
    q2: np.ndarray
    d: np.ndarray
    r2: np.ndarray


@dataclass(frozen=True)
class DirectionDecomposition:
    """sigma-independent pieces of the Newton direction.

    dx(sigma) = p_x - sigma q_x, ds(sigma) = p_s - sigma q_s,
    dy(sigma) = -(y_p - sigma y_q).
    """

    p_x: np.ndarray
    q_x: np.ndarray
    p_s: np.ndarray
    q_s: np.ndarray
    y_p: np.ndarray
    y_q: np.ndarray


@dataclass(frozen=True)
class StepPolynomials:
    """Coefficients of the step-feasibility quartic at one iterate.

    With p = p_x o p_s, q = q_x o p_s + p_x o q_s, r = q_x o q_s:

        || p - sigma q + sigma^2 r ||^2
            = a4 s^4 - a3 s^3 + a2 s^2 - a1 s + a0   (s = sigma)

    theta and mu are frozen alongside so the feasibility function
    f(sigma, alpha) is self-contained.
    """

    a0: float
    a1: float
    a2: float
    a3: float
    a4: float
    theta: float
    mu: float
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray


def build_factors(lp: StandardLp, it: Iterate, nullbasis: np.ndarray) -> FactorCache:
    """Factor the scaled null-space and row-space bases at an iterate."""
    x, s = it.x, it.s
    ratio = x / s
    bad = np.where((ratio > MAX_SCALING_RATIO) | (ratio < 1.0 / MAX_SCALING_RATIO))[0]
    if bad.size:
        i = int(bad[0])
        raise IllConditionedError(
            f"x[{i}]/s[{i}] = {ratio[i]:.3e} exceeds the factorization range", index=i
        )
    d = np.sqrt(ratio)
    f1 = qr_thin(nullbasis / d[:, None])
    f2 = qr_thin(lp.a.T * d[:, None])
    if not (np.isfinite(f1.q).all() and np.isfinite(f2.q).all()):
        raise IllConditionedError("scaled QR factors are not finite", index=-1)
    return FactorCache(q1=f1.q, q2=f2.q, d=d, r2=f2.r)


def decompose(cache: FactorCache, it: Iterate) -> DirectionDecomposition:
    """Split the Newton direction into its sigma-independent components."""
    d = cache.d
    v = np.sqrt(it.x * it.s)  # sqrt(x o s)
    w = it.mu / v  # mu (x o s)^{-1/2}

    def proj(qmat, vec):
        return qmat @ (qmat.T @ vec)

    p_x = d * proj(cache.q1, v)
    q_x = d * proj(cache.q1, w)
    p_s = proj(cache.q2, v) / d
    q_s = proj(cache.q2, w) / d
    y_p = solve_upper_triangular(cache.r2, cache.q2.T @ v)
    y_q = solve_upper_triangular(cache.r2, cache.q2.T @ w)
    return DirectionDecomposition(p_x=p_x, q_x=q_x, p_s=p_s, q_s=q_s, y_p=y_p, y_q=y_q)


def assemble_direction(
    dec: DirectionDecomposition, sigma: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(dx, dy, ds) for a concrete centering parameter sigma in [0, 1]."""
    if not 0.0 <= sigma <= 1.0:
        raise InvalidInputError(f"sigma must be in [0,1], got {sigma}")
    dx = dec.p_x - sigma * dec.q_x
    ds = dec.p_s - sigma * dec.q_s
    dy = -(dec.y_p - sigma * dec.y_q)
    return dx, dy, ds


def step_polynomials(dec: DirectionDecomposition, theta: float, mu: float) -> StepPolynomials:
    """Quartic coefficients of ||dx(sigma) o ds(sigma)||^2."""
    p = dec.p_x * dec.p_s
    q = dec.q_x * dec.p_s + dec.p_x * dec.q_s
    r = dec.q_x * dec.q_s
    return StepPolynomials(
        a0=float(p @ p),
        a1=2.0 * float(q @ p),
        a2=2.0 * float(p @ r) + float(q @ q),
        a3=2.0 * float(q @ r),
        a4=float(r @ r),
        theta=theta,
        mu=mu,
        p=p,
        q=q,
        r=r,
    )
