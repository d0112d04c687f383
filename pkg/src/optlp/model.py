"""Problem and iterate representations, feasibility residuals, duality gap
and the central-path neighborhood test."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import as_matrix, rank_reveal


def _as_vector(v, name: str) -> np.ndarray:
    a = np.ascontiguousarray(v, dtype=float)
    if a.ndim != 1:
        raise InvalidInputError(f"{name} must be a 1-d vector, got ndim={a.ndim}")
    if not np.isfinite(a).all():
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


class StandardLp:
    """A linear program in standard equality form:

        minimize c.x  subject to  A x = b, x >= 0

    Construction coerces A to full row rank: numerically dependent rows are
    dropped (with a warning) together with their right-hand sides. Requires
    m < n after the reduction.
    """

    def __init__(self, a, b, c, name: str = ""):
        a = as_matrix(a)
        b = _as_vector(b, "b")
        c = _as_vector(c, "c")
        m, n = a.shape
        if b.shape[0] != m:
            raise InvalidInputError(f"b has length {b.shape[0]}, expected {m}")
        if c.shape[0] != n:
            raise InvalidInputError(f"c has length {c.shape[0]}, expected {n}")
        rank, kept = rank_reveal(a)
        if rank < m:
            warnings.warn(
                f"constraint matrix of {name or 'LP'} has rank {rank} < {m}; "
                f"dropping {m - rank} dependent row(s)",
                stacklevel=2,
            )
            a = np.ascontiguousarray(a[kept])
            b = b[kept]
            m = rank
        if m >= n:
            raise InvalidInputError(
                f"standard form needs fewer independent rows than columns, got {m}x{n}"
            )
        self.a = a
        self.b = b
        self.c = c
        self.name = name

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    def objective(self, x) -> float:
        return float(self.c @ np.asarray(x, dtype=float))

    def __repr__(self) -> str:
        return f"StandardLp(name={self.name!r}, m={self.m}, n={self.n})"


class Iterate:
    """A strictly positive primal-dual point (x, y, s) with its cached gap.

    ``mu`` is fixed at construction as x.s/n; all updates go through new
    constructions so the cache can never drift from the vectors.
    """

    __slots__ = ("x", "y", "s", "mu")

    def __init__(self, x, y, s):
        x = _as_vector(x, "x")
        y = _as_vector(y, "y")
        s = _as_vector(s, "s")
        if x.shape[0] != s.shape[0]:
            raise InvalidInputError("x and s must have equal length")
        if x.shape[0] == 0:
            raise InvalidInputError("empty iterate")
        if np.min(x) <= 0.0:
            raise InvalidInputError("x must be strictly positive")
        if np.min(s) <= 0.0:
            raise InvalidInputError("s must be strictly positive")
        self.x = x
        self.y = y
        self.s = s
        self.mu = duality_gap(x, s)

    @classmethod
    def terminal(cls, x, y, s) -> "Iterate":
        """Build a point that is allowed to touch the boundary (x, s >= 0).

        Only the solver's exact-termination path uses this; everything else
        must construct iterates through ``__init__``.
        """
        it = cls.__new__(cls)
        it.x = _as_vector(x, "x")
        it.y = _as_vector(y, "y")
        it.s = _as_vector(s, "s")
        if np.min(it.x) < 0.0 or np.min(it.s) < 0.0:
            raise InvalidInputError("terminal point must be nonnegative")
        it.mu = float(it.x @ it.s) / it.x.shape[0]
        return it

    def __repr__(self) -> str:
        return f"Iterate(n={self.x.shape[0]}, mu={self.mu:.3e})"


@dataclass
class SolverConfig:
    """Tunable parameters of a solve.

    theta is the central-path neighborhood radius (0.99 suits the optimal
    step selection; the short-step baseline wants 0.4).
    """

    theta: float = 0.99
    tol: float = 1e-8
    max_iter: int = 200
    safeguard_backtracks: int = 30
    a0_zero_rel_tol: float = 1e-12

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise InvalidInputError(f"theta must be in (0,1), got {self.theta}")
        if self.tol <= 0.0:
            raise InvalidInputError("tol must be positive")
        if self.max_iter <= 0:
            raise InvalidInputError("max_iter must be positive")
        if self.safeguard_backtracks <= 0:
            raise InvalidInputError("safeguard_backtracks must be positive")
        if self.a0_zero_rel_tol <= 0.0:
            raise InvalidInputError("a0_zero_rel_tol must be positive")


def duality_gap(x, s) -> float:
    """x.s / n, the average complementarity product."""
    x = _as_vector(x, "x")
    s = _as_vector(s, "s")
    if x.shape[0] != s.shape[0]:
        raise InvalidInputError("x and s must have equal length")
    if x.shape[0] == 0:
        raise InvalidInputError("empty vectors")
    return float(x @ s) / x.shape[0]


def neighborhood_distance(x, s) -> float:
    """|| x o s - mu e ||_2 for strictly positive x, s.

    Membership in the neighborhood is distance <= theta * mu.
    """
    x = _as_vector(x, "x")
    s = _as_vector(s, "s")
    if x.shape[0] != s.shape[0]:
        raise InvalidInputError("x and s must have equal length")
    if x.shape[0] == 0 or np.min(x) <= 0.0 or np.min(s) <= 0.0:
        raise InvalidInputError("x and s must be strictly positive")
    mu = float(x @ s) / x.shape[0]
    return float(np.linalg.norm(x * s - mu))


def residuals(lp: StandardLp, it: Iterate) -> tuple[float, float]:
    """Scaled primal and dual feasibility residuals.

    primal = ||A x - b|| / (1 + ||b||), dual = ||A^T y + s - c|| / (1 + ||c||).
    """
    if it.x.shape[0] != lp.n or it.y.shape[0] != lp.m:
        raise InvalidInputError(
            f"iterate of shape (n={it.x.shape[0]}, m={it.y.shape[0]}) does not "
            f"match problem (n={lp.n}, m={lp.m})"
        )
    primal = np.linalg.norm(lp.a @ it.x - lp.b) / (1.0 + np.linalg.norm(lp.b))
    dual = np.linalg.norm(lp.a.T @ it.y + it.s - lp.c) / (1.0 + np.linalg.norm(lp.c))
    return float(primal), float(dual)


def stopping_criterion(lp: StandardLp, it: Iterate, tol: float) -> bool:
    """mu / max{1, |c.x|, |b.y|} < tol."""
    scale = max(1.0, abs(float(lp.c @ it.x)), abs(float(lp.b @ it.y)))
    return it.mu / scale < tol
