"""Joint selection of the centering parameter sigma and step length alpha.

Each iteration minimizes the predicted duality gap mu*(1 - alpha*(1 - sigma))
subject to staying in the central-path neighborhood, which reduces to the
quartic inequality

    f(sigma, alpha) = a4 s^4 - a3 s^3 + (a2 - theta^2 mu^2 / alpha^2) s^2
                      - a1 s + a0 <= 0        (s = sigma).

The minimizers are found among: the smallest root of f(sigma, 1) in (0,1)
paired with alpha = 1, and the roots of the stationarity quartic

    g(sigma) = (2 a4 - a3) s^4 + (2 a2 - a3) s^3 - 3 a1 s^2
               + (4 a0 + a1) s - 2 a0

each paired with alpha = theta mu sigma / sqrt(h(sigma)), where
h(sigma) = a4 s^4 - a3 s^3 + a2 s^2 - a1 s + a0. All quartics are solved in
closed form (resolvent cubic) and polished.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidInputError, NoFeasibleStepError
from .direction import StepPolynomials

# Leading coefficients at or below this relative size are treated as zero
# when picking the closed-form branch; the polish step always works against
# the full coefficient set.
_LEADING_TOL = 1e-14

# Project a closed-form root onto the real axis when its imaginary part is
# at most this (roots of interest live in (0,1), so an absolute threshold is
# meaningful); double roots come back from the resolvent with spurious
# imaginary parts up to ~sqrt(eps). Projected candidates must then survive
# the residual check below, which weeds out genuinely complex pairs.
_IMAG_TOL = 1e-5
_RESIDUAL_TOL = 1e-9

_FALLBACK_GRID = 64


@dataclass(frozen=True)
class QuarticPoly:
    """Real polynomial c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0."""

    c4: float
    c3: float
    c2: float
    c1: float
    c0: float

    def coefficients(self) -> list[float]:
        return [self.c4, self.c3, self.c2, self.c1, self.c0]


@dataclass(frozen=True)
class CandidatePair:
    """One admissible (sigma, alpha) choice and the gap it predicts."""

    sigma: float
    alpha: float
    predicted_mu: float
    origin: str  # a0_zero | f_root_alpha1 | g_root | grid_fallback


def eval_f(sp: StepPolynomials, sigma: float, alpha: float) -> float:
    """Neighborhood-feasibility quartic; the pair is admissible iff <= 0."""
    if alpha <= 0.0:
        raise InvalidInputError(f"alpha must be positive, got {alpha}")
    c2 = sp.a2 - (sp.theta * sp.mu / alpha) ** 2
    return (((sp.a4 * sigma - sp.a3) * sigma + c2) * sigma - sp.a1) * sigma + sp.a0


def eval_h(sp: StepPolynomials, sigma: float) -> float:
    """|| p - sigma q + sigma^2 r ||^2 expressed through the coefficients."""
    return (((sp.a4 * sigma - sp.a3) * sigma + sp.a2) * sigma - sp.a1) * sigma + sp.a0


def eval_g(sp: StepPolynomials, sigma: float) -> float:
    """Stationarity quartic whose roots yield interior candidate pairs."""
    return (
        ((((2.0 * sp.a4 - sp.a3) * sigma + (2.0 * sp.a2 - sp.a3)) * sigma - 3.0 * sp.a1) * sigma
         + (4.0 * sp.a0 + sp.a1)) * sigma
        - 2.0 * sp.a0
    )


def f_alpha1_poly(sp: StepPolynomials) -> QuarticPoly:
    """f(sigma, 1) as an explicit quartic in sigma."""
    return QuarticPoly(
        c4=sp.a4,
        c3=-sp.a3,
        c2=sp.a2 - (sp.theta * sp.mu) ** 2,
        c1=-sp.a1,
        c0=sp.a0,
    )


def g_poly(sp: StepPolynomials) -> QuarticPoly:
    return QuarticPoly(
        c4=2.0 * sp.a4 - sp.a3,
        c3=2.0 * sp.a2 - sp.a3,
        c2=-3.0 * sp.a1,
        c1=4.0 * sp.a0 + sp.a1,
        c0=-2.0 * sp.a0,
    )


# ---------------------------------------------------------------------------
# closed-form root finding


def _poly_eval(coeffs: list[float], x: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs: list[float]) -> list[float]:
    deg = len(coeffs) - 1
    return [c * (deg - i) for i, c in enumerate(coeffs[:-1])]


def _quadratic_roots(b: complex, c: complex) -> tuple[complex, complex]:
    # x^2 + b x + c, complex-safe with the cancellation-avoiding pairing
    sq = cmath.sqrt(b * b - 4.0 * c)
    if (b.conjugate() * sq).real >= 0.0:
        q = -0.5 * (b + sq)
    else:
        q = -0.5 * (b - sq)
    if q == 0:
        return 0.0 + 0.0j, 0.0 + 0.0j
    return q, c / q


def _cubic_roots(b: float, c: float, d: float) -> list[complex]:
    # x^3 + b x^2 + c x + d, all three roots
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    if p == 0.0 and q == 0.0:
        return [-shift] * 3
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        sq = math.sqrt(disc)
        u = math.copysign(abs(-q / 2.0 + sq) ** (1.0 / 3.0), -q / 2.0 + sq)
        v = math.copysign(abs(-q / 2.0 - sq) ** (1.0 / 3.0), -q / 2.0 - sq)
        t0 = u + v
        re = -t0 / 2.0
        im = math.sqrt(3.0) * (u - v) / 2.0
        roots = [complex(t0, 0.0), complex(re, im), complex(re, -im)]
    else:
        # three real roots (trigonometric branch); p < 0 here
        mag = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * mag)
        phi = math.acos(min(1.0, max(-1.0, arg)))
        roots = [
            complex(mag * math.cos((phi - 2.0 * math.pi * k) / 3.0), 0.0)
            for k in range(3)
        ]
    return [z - shift for z in roots]


def _quartic_roots(b: float, c: float, d: float, e: float) -> list[complex]:
    # x^4 + b x^3 + c x^2 + d x + e via the resolvent cubic
    qb = 0.25 * b
    qb2 = qb * qb
    p = 3.0 * qb2 - 0.5 * c
    q = b * qb2 - c * qb + 0.5 * d
    r = 3.0 * qb2 * qb2 - c * qb2 + d * qb - e
    scale = max(1.0, abs(b), abs(c), abs(d), abs(e))
    if abs(q) <= _LEADING_TOL * scale:
        # biquadratic in (x + qb)^2
        z1, z2 = _quadratic_roots(complex(-2.0 * p), complex(-r))
        out = []
        for z in (z1, z2):
            w = cmath.sqrt(z)
            out.extend([w - qb, -w - qb])
        return out
    cubs = _cubic_roots(p, r, p * r - 0.5 * q * q)
    # the resolvent needs one real root; take the most-real, largest one
    z0 = max(
        (z for z in cubs if abs(z.imag) <= 1e-8 * max(1.0, abs(z))),
        key=lambda z: z.real,
        default=cubs[0],
    ).real
    s = cmath.sqrt(complex(2.0 * p + 2.0 * z0))
    if s == 0:
        t = complex(z0 * z0 + r)
    else:
        t = -q / s
    r1, r2 = _quadratic_roots(s, z0 + t)
    r3, r4 = _quadratic_roots(-s, z0 - t)
    return [r1 - qb, r2 - qb, r3 - qb, r4 - qb]


def _all_roots(coeffs: list[float]) -> list[complex]:
    """All complex roots of a real polynomial of degree <= 4.

    Leading coefficients that are negligible relative to the largest one are
    dropped, which discards the far-away roots they would imply.
    """
    scale = max(abs(c) for c in coeffs)
    if scale == 0.0:
        raise DegenerateInputError("all polynomial coefficients are zero")
    cs = list(coeffs)
    while len(cs) > 1 and abs(cs[0]) <= _LEADING_TOL * scale:
        cs = cs[1:]
    lead = cs[0]
    cs = [c / lead for c in cs]
    deg = len(cs) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [complex(-cs[1])]
    if deg == 2:
        return list(_quadratic_roots(complex(cs[1]), complex(cs[2])))
    if deg == 3:
        return _cubic_roots(cs[1], cs[2], cs[3])
    return _quartic_roots(cs[1], cs[2], cs[3], cs[4])


def _polish(coeffs: list[float], x: float) -> float:
    """Refine a real root against the exact coefficients.

    Uses the multiplicity-agnostic step x - f f' / (f'^2 - f f''), which
    converges quadratically for simple and multiple roots alike; plain
    Newton would stall at ~sqrt(eps) accuracy on double roots. Near a
    multiple root |f| bottoms out at evaluation noise, so when f' is also
    tiny the root is re-polished as the (simple) zero of f'.
    """
    d1 = _poly_deriv(coeffs)
    d2 = _poly_deriv(d1)
    best = x
    best_res = abs(_poly_eval(coeffs, x))
    for _ in range(16):
        f = _poly_eval(coeffs, x)
        f1 = _poly_eval(d1, x)
        f2 = _poly_eval(d2, x)
        denom = f1 * f1 - f * f2
        if denom != 0.0 and math.isfinite(denom):
            step = f * f1 / denom
        elif f1 != 0.0:
            step = f / f1
        else:
            break
        if not math.isfinite(step):
            break
        x = x - step
        res = abs(_poly_eval(coeffs, x))
        if res < best_res:
            best, best_res = x, res
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    scale = sum(abs(c) for c in coeffs)
    d1scale = sum(abs(c) for c in d1)
    if d1scale > 0.0 and abs(_poly_eval(d1, best)) <= 1e-7 * d1scale:
        y = best
        for _ in range(8):
            g1 = _poly_eval(d2, y)
            if g1 == 0.0:
                break
            step = _poly_eval(d1, y) / g1
            if not math.isfinite(step):
                break
            y = y - step
            if abs(step) <= 1e-16 * max(1.0, abs(y)):
                break
        if abs(_poly_eval(coeffs, y)) <= 1e-11 * scale:
            best = y
    return best


def real_roots_in_open_unit(poly: QuarticPoly, tol: float = 1e-10) -> list[float]:
    """Sorted real roots of ``poly`` strictly inside (0, 1).

    Near-real closed-form roots are projected to the real axis, polished
    against the exact coefficients and deduplicated within ``tol`` (a double
    root is reported once). "Strictly inside" is resolved at the same
    tolerance: roots within ``tol`` of 0 or 1 are treated as boundary roots
    and excluded.
    """
    coeffs = poly.coefficients()
    scale = sum(abs(c) for c in coeffs)
    candidates = []
    for z in _all_roots(coeffs):
        if abs(z.imag) > max(_IMAG_TOL, tol):
            continue
        x = _polish(coeffs, z.real)
        if tol < x < 1.0 - tol and abs(_poly_eval(coeffs, x)) <= _RESIDUAL_TOL * scale:
            candidates.append(x)
    candidates.sort()
    roots: list[float] = []
    for x in candidates:
        if roots and abs(x - roots[-1]) <= tol:
            # keep the representative with the smaller residual
            if abs(_poly_eval(coeffs, x)) < abs(_poly_eval(coeffs, roots[-1])):
                roots[-1] = x
            continue
        roots.append(x)
    return roots


# ---------------------------------------------------------------------------
# step selection


def _pair(sp: StepPolynomials, sigma: float, alpha: float, origin: str) -> CandidatePair:
    predicted = sp.mu * (1.0 - alpha * (1.0 - sigma))
    return CandidatePair(sigma=sigma, alpha=alpha, predicted_mu=predicted, origin=origin)


def select_step(sp: StepPolynomials, a0_zero_rel_tol: float = 1e-12) -> CandidatePair:
    """Choose the (sigma, alpha) pair minimizing the predicted duality gap.

    Candidate sources, in the order they are gathered:

    1. a0 ~ 0 (||p|| negligible against mu sqrt(n)): the pure Newton step
       sigma = 0, alpha = 1 reaches an exact solution.
    2. The smallest root of f(sigma, 1) in (0, 1), with alpha = 1.
    3. Every root sigma of g in (0, 1) with alpha = theta mu sigma /
       sqrt(h(sigma)); pairs with alpha >= 1 are clamped to alpha = 1 and
       kept only if f(sigma, 1) <= 0.
    4. If nothing survives numerically, a coarse feasibility grid over
       (0,1)^2 refined by bisection on alpha.

    Ties are broken toward larger alpha, then smaller sigma.
    """
    n = sp.p.shape[0]
    if math.sqrt(max(sp.a0, 0.0)) <= a0_zero_rel_tol * sp.mu * math.sqrt(n):
        return CandidatePair(sigma=0.0, alpha=1.0, predicted_mu=0.0, origin="a0_zero")

    candidates: list[CandidatePair] = []
    f_roots = real_roots_in_open_unit(f_alpha1_poly(sp))
    if f_roots:
        candidates.append(_pair(sp, f_roots[0], 1.0, "f_root_alpha1"))
    for sigma in real_roots_in_open_unit(g_poly(sp)):
        h = eval_h(sp, sigma)
        if h <= 0.0:
            continue
        alpha = sp.theta * sp.mu * sigma / math.sqrt(h)
        if alpha < 1.0:
            candidates.append(_pair(sp, sigma, alpha, "g_root"))
        elif eval_f(sp, sigma, 1.0) <= 0.0:
            candidates.append(_pair(sp, sigma, 1.0, "g_root"))
    if candidates:
        return min(candidates, key=lambda cp: (cp.predicted_mu, -cp.alpha, cp.sigma))
    return _grid_fallback(sp)


def _grid_fallback(sp: StepPolynomials) -> CandidatePair:
    k = _FALLBACK_GRID
    sigmas = np.arange(1, k + 1) / (k + 1.0)
    alphas = np.arange(1, k + 1) / (k + 1.0)
    h = (((sp.a4 * sigmas - sp.a3) * sigmas + sp.a2) * sigmas - sp.a1) * sigmas + sp.a0
    fgrid = h[:, None] - (sp.theta * sp.mu * sigmas[:, None] / alphas[None, :]) ** 2
    feasible = fgrid <= 0.0
    if not feasible.any():
        raise NoFeasibleStepError("no feasible (sigma, alpha) found on the fallback grid")
    predicted = sp.mu * (1.0 - alphas[None, :] * (1.0 - sigmas[:, None]))
    predicted = np.where(feasible, predicted, np.inf)
    order = np.lexsort(
        (np.broadcast_to(sigmas[:, None], predicted.shape).ravel(),
         -np.broadcast_to(alphas[None, :], predicted.shape).ravel(),
         predicted.ravel())
    )
    i, j = np.unravel_index(order[0], predicted.shape)
    sigma = float(sigmas[i])
    lo = float(alphas[j])
    # grow alpha as far as feasibility allows (f is increasing in alpha)
    if eval_f(sp, sigma, 1.0) <= 0.0:
        lo = 1.0
    else:
        hi = 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if eval_f(sp, sigma, mid) <= 0.0:
                lo = mid
            else:
                hi = mid
    return _pair(sp, sigma, lo, "grid_fallback")
