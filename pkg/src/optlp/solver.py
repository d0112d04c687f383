"""The main iteration loop, the short-step baseline, starting-point
strategies and synthetic problem generation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .direction import (
    assemble_direction,
    build_factors,
    decompose,
    step_polynomials,
)
from .errors import IllConditionedError, InvalidInputError, NoFeasibleStepError
from .linalg import least_squares, min_norm_solution, null_space_basis, qr_thin, rank_reveal
from .model import (
    Iterate,
    SolverConfig,
    StandardLp,
    neighborhood_distance,
    residuals,
    stopping_criterion,
)
from .stepsel import CandidatePair, select_step

log = logging.getLogger("optlp.solver")

# How far start residuals may be from zero before a start is rejected.
START_RESIDUAL_TOL = 1e-8

# Acceptance slack on the neighborhood test, to absorb roundoff on steps
# that exact arithmetic guarantees feasible.
NEIGHBORHOOD_SLACK = 1e-8

STATUS_OPTIMAL = "optimal"
STATUS_MAX_ITER = "max_iter"
STATUS_BREAKDOWN = "numerical_breakdown"
STATUS_NO_START = "no_interior_start"


@dataclass(frozen=True)
class IterationRecord:
    """State after one accepted iteration (k is 1-based)."""

    k: int
    mu: float
    sigma: float
    alpha: float
    neighborhood_dist: float
    primal_res: float
    dual_res: float
    origin: str


@dataclass
class SolveReport:
    status: str
    iterations: list[IterationRecord]
    final: Iterate
    objective: float

    @property
    def iteration_count(self) -> int:
        return len(self.iterations)


def _distance_unchecked(it: Iterate) -> float:
    # like neighborhood_distance, but legal on boundary (terminal) points
    v = it.x * it.s
    return float(np.linalg.norm(v - it.mu))


def _make_record(lp: StandardLp, k: int, it: Iterate, sigma: float, alpha: float,
                 origin: str) -> IterationRecord:
    pr, dr = residuals(lp, it)
    return IterationRecord(
        k=k,
        mu=it.mu,
        sigma=sigma,
        alpha=alpha,
        neighborhood_dist=_distance_unchecked(it),
        primal_res=pr,
        dual_res=dr,
        origin=origin,
    )


def _start_rejected(lp: StandardLp, start: Iterate, theta: float) -> str | None:
    pr, dr = residuals(lp, start)
    if pr > START_RESIDUAL_TOL or dr > START_RESIDUAL_TOL:
        return f"start residuals ({pr:.2e}, {dr:.2e}) exceed {START_RESIDUAL_TOL:.0e}"
    dist = neighborhood_distance(start.x, start.s)
    if dist > theta * start.mu * (1.0 + 1e-12):
        return f"start lies outside the theta={theta} neighborhood ({dist:.3e} > {theta * start.mu:.3e})"
    return None


def safeguarded_step(
    it: Iterate,
    direction: tuple[np.ndarray, np.ndarray, np.ndarray],
    pair: CandidatePair,
    cfg: SolverConfig,
) -> tuple[Iterate, float]:
    """Apply the selected step, halving alpha while the new point violates
    positivity or neighborhood membership (exact arithmetic never needs
    this; floating point occasionally does).

    Returns the accepted iterate and the alpha actually applied.
    """
    dx, dy, ds = direction
    alpha = pair.alpha
    slack = cfg.theta * (1.0 + NEIGHBORHOOD_SLACK)
    for _ in range(cfg.safeguard_backtracks + 1):
        x = it.x - alpha * dx
        y = it.y - alpha * dy
        s = it.s - alpha * ds
        if np.array_equal(x, it.x) and np.array_equal(s, it.s):
            raise NoFeasibleStepError("step update fell below machine precision")
        if np.min(x) > 0.0 and np.min(s) > 0.0:
            mu = float(x @ s) / x.shape[0]
            if mu > 0.0 and float(np.linalg.norm(x * s - mu)) <= slack * mu:
                return Iterate(x, y, s), alpha
        alpha *= 0.5
    raise NoFeasibleStepError(
        f"no acceptable step within {cfg.safeguard_backtracks} halvings of alpha"
    )


def solve(
    lp: StandardLp,
    start: Iterate,
    cfg: SolverConfig | None = None,
    observer=None,
) -> SolveReport:
    """Run the path-following iteration with jointly optimal (sigma, alpha).

    ``start`` must be strictly positive, feasible to ~1e-8 and inside the
    theta-neighborhood; otherwise the report comes back with status
    ``no_interior_start``. ``observer``, when given, is called once per
    iteration with (k, iterate, decomposition, polynomials, pair) before the
    step is applied; tests use it to harvest live data.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    reason = _start_rejected(lp, start, cfg.theta)
    if reason is not None:
        log.info("%s: %s", lp.name or "LP", reason)
        return SolveReport(STATUS_NO_START, [], start, lp.objective(start.x))

    nullbasis = null_space_basis(lp.a)
    it = start
    records: list[IterationRecord] = []
    if stopping_criterion(lp, it, cfg.tol):
        return SolveReport(STATUS_OPTIMAL, records, it, lp.objective(it.x))

    status = STATUS_MAX_ITER
    for k in range(1, cfg.max_iter + 1):
        try:
            cache = build_factors(lp, it, nullbasis)
            dec = decompose(cache, it)
            sp = step_polynomials(dec, cfg.theta, it.mu)
            pair = select_step(sp, cfg.a0_zero_rel_tol)
        except (IllConditionedError, NoFeasibleStepError) as exc:
            log.warning("%s: breakdown at iteration %d: %s", lp.name or "LP", k, exc)
            status = STATUS_BREAKDOWN
            break
        if observer is not None:
            observer(k, it, dec, sp, pair)
        if pair.origin == "a0_zero":
            # exact Newton step: lands on an optimal (boundary) point
            dx, dy, ds = assemble_direction(dec, 0.0)
            it = Iterate.terminal(it.x - dx, it.y - dy, it.s - ds)
            records.append(_make_record(lp, k, it, pair.sigma, pair.alpha, pair.origin))
            status = STATUS_OPTIMAL
            break
        direction = assemble_direction(dec, pair.sigma)
        try:
            it, alpha = safeguarded_step(it, direction, pair, cfg)
        except NoFeasibleStepError as exc:
            log.warning("%s: breakdown at iteration %d: %s", lp.name or "LP", k, exc)
            status = STATUS_BREAKDOWN
            break
        records.append(_make_record(lp, k, it, pair.sigma, alpha, pair.origin))
        log.debug(
            "%s: k=%d mu=%.6e sigma=%.4f alpha=%.4f origin=%s",
            lp.name or "LP", k, it.mu, pair.sigma, alpha, pair.origin,
        )
        if stopping_criterion(lp, it, cfg.tol):
            status = STATUS_OPTIMAL
            break
    return SolveReport(status, records, it, lp.objective(it.x))


def solve_shortstep_baseline(
    lp: StandardLp,
    start: Iterate,
    cfg: SolverConfig | None = None,
) -> SolveReport:
    """Classical short-step path following: sigma = 1 - 0.4/sqrt(n), alpha = 1.

    Uses the same direction machinery as :func:`solve`. The per-iteration
    gap factor is exactly 1 - 0.4/sqrt(n); pair it with theta = 0.4, the
    neighborhood its theory assumes.
    """
    cfg = cfg if cfg is not None else SolverConfig(theta=0.4)
    reason = _start_rejected(lp, start, cfg.theta)
    if reason is not None:
        log.info("%s: %s", lp.name or "LP", reason)
        return SolveReport(STATUS_NO_START, [], start, lp.objective(start.x))

    sigma = 1.0 - 0.4 / math.sqrt(lp.n)
    nullbasis = null_space_basis(lp.a)
    it = start
    records: list[IterationRecord] = []
    if stopping_criterion(lp, it, cfg.tol):
        return SolveReport(STATUS_OPTIMAL, records, it, lp.objective(it.x))

    status = STATUS_MAX_ITER
    for k in range(1, cfg.max_iter + 1):
        try:
            cache = build_factors(lp, it, nullbasis)
            dec = decompose(cache, it)
        except IllConditionedError as exc:
            log.warning("%s: breakdown at iteration %d: %s", lp.name or "LP", k, exc)
            status = STATUS_BREAKDOWN
            break
        dx, dy, ds = assemble_direction(dec, sigma)
        x = it.x - dx
        y = it.y - dy
        s = it.s - ds
        if np.min(x) <= 0.0 or np.min(s) <= 0.0:
            status = STATUS_BREAKDOWN
            break
        it = Iterate(x, y, s)
        records.append(_make_record(lp, k, it, sigma, 1.0, "shortstep"))
        if stopping_criterion(lp, it, cfg.tol):
            status = STATUS_OPTIMAL
            break
    return SolveReport(status, records, it, lp.objective(it.x))


def generate_synthetic(n: int, m: int, seed: int) -> tuple[StandardLp, Iterate]:
    """Random standard-form LP with a built-in perfectly centered start.

    A is a dense Gaussian draw (redrawn if rank deficient), x0 = s0 = e,
    y0 Gaussian, b = A x0 and c = A^T y0 + s0, so (x0, y0, s0) is strictly
    feasible with mu = 1 and neighborhood distance 0.
    """
    if not 1 <= m < n:
        raise InvalidInputError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    a = None
    for _ in range(20):
        draw = rng.normal(size=(m, n))
        rank, _ = rank_reveal(draw)
        if rank == m:
            a = draw
            break
    if a is None:
        raise InvalidInputError(f"could not draw a full-rank {m}x{n} matrix")
    y0 = rng.normal(size=m)
    e = np.ones(n)
    b = a @ e
    c = a.T @ y0 + e
    lp = StandardLp(a, b, c, name=f"synthetic-n{n}-m{m}-seed{seed}")
    return lp, Iterate(e, y0, e.copy())


def heuristic_start(lp: StandardLp, theta: float = 0.99) -> Iterate | None:
    """Cheap least-squares starting point; None when it is not interior.

    x is the point of {Ax = b} closest to e, and y pulls s = c - A^T y as
    close to e as the row space allows. Deliberately weak: it only succeeds
    on well-centered problems, and failure is a value so callers can fall
    back to a supplied start.
    """
    factors = qr_thin(lp.a.T)
    e = np.ones(lp.n)
    x = e + min_norm_solution(factors, lp.b - lp.a @ e)
    y = least_squares(factors, lp.c - e)
    s = lp.c - lp.a.T @ y
    if np.min(x) <= 0.0 or np.min(s) <= 0.0:
        return None
    it = Iterate(x, y, s)
    if neighborhood_distance(x, s) > theta * it.mu:
        return None
    return it
