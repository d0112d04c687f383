import math

import numpy as np
import pytest

from optlp.direction import assemble_direction, build_factors, decompose
from optlp.errors import InvalidInputError, NoFeasibleStepError
from optlp.linalg import null_space_basis
from optlp.model import Iterate, SolverConfig, StandardLp, neighborhood_distance, residuals
from optlp.solver import (
    STATUS_NO_START,
    STATUS_OPTIMAL,
    generate_synthetic,
    heuristic_start,
    safeguarded_step,
    solve,
    solve_shortstep_baseline,
)
from optlp.stepsel import CandidatePair


def test_generate_synthetic_contract():
    lp, start = generate_synthetic(12, 5, seed=123)
    pr, dr = residuals(lp, start)
    assert pr <= 1e-14 and dr <= 1e-14
    assert start.mu == 1.0
    assert neighborhood_distance(start.x, start.s) == 0.0

    lp2, start2 = generate_synthetic(12, 5, seed=123)
    assert np.array_equal(lp.a, lp2.a)
    assert np.array_equal(lp.b, lp2.b)
    assert np.array_equal(lp.c, lp2.c)
    assert np.array_equal(start.y, start2.y)

    with pytest.raises(InvalidInputError):
        generate_synthetic(4, 4, seed=0)
    with pytest.raises(InvalidInputError):
        generate_synthetic(4, 0, seed=0)


def test_solve_synthetic_to_optimality():
    lp, start = generate_synthetic(20, 9, seed=11)
    report = solve(lp, start)
    assert report.status == STATUS_OPTIMAL
    mus = [rec.mu for rec in report.iterations]
    assert all(m2 < m1 for m1, m2 in zip(mus, mus[1:]))
    assert mus[0] < start.mu
    pr, dr = residuals(lp, report.final)
    assert pr <= 1e-9 and dr <= 1e-9


def test_solve_gap_law_and_neighborhood_records():
    lp, start = generate_synthetic(24, 10, seed=29)
    cfg = SolverConfig()
    report = solve(lp, start, cfg)
    assert report.status == STATUS_OPTIMAL
    prev_mu = start.mu
    for rec in report.iterations:
        if rec.origin != "a0_zero":
            predicted = prev_mu * (1.0 - rec.alpha * (1.0 - rec.sigma))
            assert rec.mu == pytest.approx(predicted, rel=1e-10)
            assert rec.neighborhood_dist <= cfg.theta * rec.mu * (1.0 + 1e-8)
        prev_mu = rec.mu
        assert rec.primal_res <= 1e-9
        assert rec.dual_res <= 1e-9


def test_solve_rejects_bad_starts():
    lp, start = generate_synthetic(10, 4, seed=3)
    # outside the neighborhood: scale one product way up
    x = start.x.copy()
    x[0] = 60.0
    bad = Iterate(x, start.y, start.s)
    report = solve(lp, bad, SolverConfig())
    assert report.status == STATUS_NO_START
    assert report.iterations == []

    # infeasible start: right b, wrong x
    infeasible = Iterate(start.x + 0.5, start.y, start.s)
    assert solve(lp, infeasible).status == STATUS_NO_START


def test_solve_observer_sees_every_iteration():
    lp, start = generate_synthetic(16, 7, seed=41)
    seen = []
    report = solve(lp, start, observer=lambda k, it, dec, sp, pair: seen.append((k, pair)))
    assert len(seen) == report.iteration_count
    assert [k for k, _ in seen] == [rec.k for rec in report.iterations]


def test_one_iteration_exact_case():
    # s0 lies in range(A^T), so p_x = 0 and a0 = 0: one pure Newton step
    # lands exactly on an optimal pair
    lp = StandardLp(np.array([[1.0, 1.0]]), np.array([2.0]), np.array([2.0, 2.0]))
    start = Iterate([1.0, 1.0], [1.0], [1.0, 1.0])
    report = solve(lp, start)
    assert report.status == STATUS_OPTIMAL
    assert report.iteration_count == 1
    rec = report.iterations[0]
    assert rec.origin == "a0_zero"
    assert rec.sigma == 0.0 and rec.alpha == 1.0
    assert report.final.mu <= 1e-15
    assert report.objective == pytest.approx(4.0)


def test_safeguarded_step_full_alpha_on_clean_pair():
    lp, start = generate_synthetic(14, 6, seed=55)
    report = solve(lp, start)
    # every accepted alpha equals the selected pair's alpha when no
    # backtracking was needed; on this well-conditioned run none should be
    assert all(rec.alpha > 0 for rec in report.iterations)
    cfg = SolverConfig()
    nullbasis = null_space_basis(lp.a)
    dec = decompose(build_factors(lp, start, nullbasis), start)
    from optlp.direction import step_polynomials
    from optlp.stepsel import select_step

    sp = step_polynomials(dec, cfg.theta, start.mu)
    pair = select_step(sp)
    direction = assemble_direction(dec, pair.sigma)
    accepted, alpha = safeguarded_step(start, direction, pair, cfg)
    assert alpha == pair.alpha


def test_safeguarded_step_backtracks_on_inflated_alpha():
    start = Iterate(np.full(4, 1.0), np.zeros(2), np.full(4, 1.0))
    # direction that overshoots positivity at alpha = 1
    dx = 2.0 * start.x
    dy = np.zeros(2)
    ds = np.zeros(4)
    pair = CandidatePair(sigma=0.5, alpha=1.0, predicted_mu=0.5, origin="g_root")
    accepted, alpha = safeguarded_step(start, (dx, dy, ds), pair, SolverConfig())
    assert alpha < 1.0
    assert np.min(accepted.x) > 0.0


def test_safeguarded_step_vanishing_update_raises():
    start = Iterate(np.full(4, 1.0), np.zeros(2), np.full(4, 1.0))
    dx = np.full(4, 1.0)
    pair = CandidatePair(sigma=0.5, alpha=1e-300, predicted_mu=1.0, origin="g_root")
    with pytest.raises(NoFeasibleStepError):
        safeguarded_step(start, (dx, np.zeros(2), np.zeros(4)), pair, SolverConfig())


def test_shortstep_factor_and_closed_form():
    lp, start = generate_synthetic(16, 6, seed=19)
    cfg = SolverConfig(theta=0.4, max_iter=400)
    report = solve_shortstep_baseline(lp, start, cfg)
    assert report.status == STATUS_OPTIMAL
    factor = 1.0 - 0.4 / math.sqrt(16)  # n = 16 -> 0.9
    assert factor == 0.9
    mu = start.mu
    for k, rec in enumerate(report.iterations, start=1):
        assert rec.sigma == pytest.approx(factor)
        assert rec.alpha == 1.0
        assert rec.mu == pytest.approx(start.mu * factor**k, rel=1e-12)
        mu = rec.mu
    # neighborhood stays within the short-step radius
    for rec in report.iterations:
        assert rec.neighborhood_dist <= 0.4 * rec.mu * (1.0 + 1e-8)


def test_optimal_beats_baseline_iterations():
    for seed in (1, 2, 3):
        lp, start = generate_synthetic(25, 10, seed=seed)
        cfg = SolverConfig(theta=0.4, max_iter=500)
        fast = solve(lp, start, cfg)
        slow = solve_shortstep_baseline(lp, start, cfg)
        assert fast.status == STATUS_OPTIMAL and slow.status == STATUS_OPTIMAL
        assert fast.iteration_count <= slow.iteration_count


def test_solve_reports_numerical_breakdown(monkeypatch):
    import optlp.solver as solver_mod
    from optlp.errors import NoFeasibleStepError as NFS

    lp, start = generate_synthetic(10, 4, seed=6)

    def explode(sp, tol):
        raise NFS("synthetic failure")

    monkeypatch.setattr(solver_mod, "select_step", explode)
    report = solver_mod.solve(lp, start)
    assert report.status == "numerical_breakdown"
    assert report.iterations == []
    assert report.final is start


def test_heuristic_start_on_synthetic_is_exact():
    lp, _ = generate_synthetic(15, 6, seed=8)
    it = heuristic_start(lp)
    assert it is not None
    assert np.allclose(it.x, 1.0, atol=1e-12)
    assert np.allclose(it.s, 1.0, atol=1e-12)


def test_heuristic_start_outcome_on_afiro_recorded():
    # empirical record only: the heuristic is deliberately weak and is not
    # expected to pass the neighborhood test on real-world instances
    from pathlib import Path
    from optlp.mps import parse_mps, to_standard_form

    path = Path(__file__).parent / "data" / "netlib" / "afiro.mps"
    lp, _ = to_standard_form(parse_mps(path.read_text()))
    outcome = heuristic_start(lp)
    print(f"heuristic_start on afiro: {'accepted' if outcome else 'no_interior_start'}")


def test_heuristic_start_negative_component_is_none():
    # x = e + A^T (A A^T)^-1 (b - A e); with b = -10 the correction makes
    # both components of x negative
    lp = StandardLp(np.array([[1.0, 1.0]]), np.array([-10.0]), np.array([1.0, 2.0]))
    assert heuristic_start(lp) is None


def test_iteration_count_envelope_across_sizes():
    # observational: counts stay within a generous sqrt(n) log(1/eps) envelope
    counts = {}
    for n in (8, 16, 32, 64):
        lp, start = generate_synthetic(n, n // 2, seed=100 + n)
        report = solve(lp, start)
        assert report.status == STATUS_OPTIMAL
        counts[n] = report.iteration_count
        envelope = math.sqrt(n) * math.log(1e8)
        assert report.iteration_count <= envelope
    print("iteration counts by n:", counts)


def test_feasibility_preserved_along_run():
    lp, start = generate_synthetic(30, 12, seed=77)
    report = solve(lp, start)
    pr0, dr0 = residuals(lp, start)
    for i, rec in enumerate(report.iterations, start=1):
        budget = 1e-10 * (1.0 + i)
        assert rec.primal_res <= pr0 + budget
        assert rec.dual_res <= dr0 + budget
