"""Gradient ascent on the restriction ratio over band-limited sphere functions.

The objective is Phi(f) = ||ext f||_4 / ||f||_2, parametrized by real harmonic
coefficients. Phi^4 is (2 pi)^3 Q(f, f_star, f, f_star) / ||f||_2^4 with Q the
zero-sum quadrilinear form, and for a band limit L every quadrature rule in
the ball-factorized evaluation of Q can be sized so the discrete value is the
continuous one up to rounding. That matters beyond accuracy: the computed
objective then provably never exceeds the sharp constant 2*pi, so an ascent
run that plateaus at 2*pi with vanishing non-constant energy is genuine
evidence, not a quadrature artifact.

Optimization is restricted to real coefficients. The complex symmetry group
(modulations omega -> exp(i xi . omega) f) makes maximizers non-isolated, and
ascent would wander along that manifold instead of settling.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .convolution import slice_point_table
from .harmonics import HarmonicCoeffs, harmonic_values, n_coeffs
from .quadrature import build_ball_grid, build_sphere_grid

__all__ = [
    "OptimizerState",
    "SearchResult",
    "Workspace",
    "make_workspace",
    "objective_phi",
    "gradient",
    "constancy_metric",
    "initial_coeffs",
    "search",
]

SHARP_CONSTANT = 2.0 * np.pi

INITIAL_STEP = 0.1
STEP_SHRINK = 0.5
MIN_STEP = 1e-12


class Workspace:
    """Cached quadrature tables for exact evaluation of Q at band limit L.

    Sizing: the two pair profiles are polynomials of degree <= 2L in the
    radius and in the direction, so n_t = 2L+1 polar nodes (sphere exactness
    4L+1), n_r = 2L+2 radial nodes (degree 4L+2 with the r^2 Jacobian), and
    n_c = 2L+2 circle angles (trig degree 2L) make every 1D rule exact. n_c is
    even so each slice node's opposite is a node, built by explicit negation;
    the partner point x - omega(phi_j) is then omega(phi_{j + n_c/2}) itself,
    and profiles reduce to a rolled product of two basis matvecs.
    """

    def __init__(self, L: int):
        if L < 0:
            raise ValueError(f"band limit must be nonnegative, got {L}")
        self.L = L
        n_t, n_r, n_c = 2 * L + 1, 2 * L + 2, 2 * L + 2
        self.ball = build_ball_grid(n_r, build_sphere_grid(n_t))
        self.n_c = n_c
        X = self.ball.points()
        self.ball_weights = self.ball.weights()
        self.radii = np.linalg.norm(X, axis=1)
        pts, _ = slice_point_table(X, n_c)
        self.basis = harmonic_values(L, pts.reshape(-1, 3))
        self.parity = np.where(
            np.repeat(np.arange(L + 1), 2 * np.arange(L + 1) + 1) % 2 == 0, 1.0, -1.0)
        self._half = n_c // 2
        self._angle_weight = 2.0 * np.pi / n_c

    def _field(self, coeffs: np.ndarray) -> np.ndarray:
        return (coeffs @ self.basis).reshape(-1, self.n_c)

    def _profile(self, va: np.ndarray, vb: np.ndarray) -> np.ndarray:
        # (f sigma * g sigma)(x) over all ball nodes, using the node identity
        # x - omega(phi_j) = omega(phi_{j + n_c/2}).
        vb_op = np.roll(vb, -self._half, axis=1)
        return self._angle_weight * np.sum(va * vb_op, axis=1) / self.radii

    def q_value(self, coeffs: np.ndarray) -> float:
        """Q(f, f_star, f, f_star) for real coefficients; nonnegative."""
        va = self._field(coeffs)
        vb = self._field(self.parity * coeffs)   # f_star = f(-.) for real f
        prof = self._profile(va, vb)
        return float(np.sum(self.ball_weights * prof * prof))

    def q_gradient(self, coeffs: np.ndarray):
        """Q and its coefficient gradient, sharing the forward pass."""
        va = self._field(coeffs)
        vb = self._field(self.parity * coeffs)
        prof = self._profile(va, vb)
        q = float(np.sum(self.ball_weights * prof * prof))
        # dQ/dc_i = sum over ball and angle nodes of
        #   g_n * (Y_i(p) f_star(opposite p) + parity_i Y_i(opposite p) f(p))
        # with g_n = 2 w_n prof_n * angle_weight / r_n; both terms are one
        # matvec against the cached basis after rolling the partner field.
        g = (2.0 * self._angle_weight) * self.ball_weights * prof / self.radii
        w1 = (g[:, None] * np.roll(vb, -self._half, axis=1)).ravel()
        w2 = (g[:, None] * np.roll(va, -self._half, axis=1)).ravel()
        return q, self.basis @ w1 + self.parity * (self.basis @ w2)


@lru_cache(maxsize=4)
def make_workspace(L: int) -> Workspace:
    return Workspace(L)


def _as_real_coeffs(c: HarmonicCoeffs) -> np.ndarray:
    arr = np.asarray(c.coeffs)
    if np.iscomplexobj(arr):
        if np.max(np.abs(arr.imag)) != 0.0:
            raise ValueError("optimizer works on real coefficient vectors")
        arr = arr.real
    return arr.astype(float)


def objective_phi(c: HarmonicCoeffs, workspace: Workspace | None = None) -> float:
    """Phi(f) = ((2 pi)^3 Q)^(1/4) / ||f||_2 for the synthesized f."""
    arr = _as_real_coeffs(c)
    nrm2 = float(arr @ arr)
    if nrm2 == 0.0:
        raise ValueError("Phi is undefined for the zero function")
    ws = workspace or make_workspace(c.max_degree)
    q = ws.q_value(arr)
    return float(((2.0 * np.pi) ** 3 * q) ** 0.25 / np.sqrt(nrm2))


def gradient(c: HarmonicCoeffs, workspace: Workspace | None = None) -> np.ndarray:
    """Gradient of log Phi^4 = log((2 pi)^3 Q) - 2 log ||f||_2^2 in coefficient space.

    The log form is scale-free: constants (of either sign) are critical
    points, and the finite-difference oracle needs no renormalization.
    """
    arr = _as_real_coeffs(c)
    nrm2 = float(arr @ arr)
    if nrm2 == 0.0:
        raise ValueError("gradient is undefined for the zero function")
    ws = workspace or make_workspace(c.max_degree)
    q, dq = ws.q_gradient(arr)
    return dq / q - 4.0 * arr / nrm2


def constancy_metric(c: HarmonicCoeffs) -> float:
    """Fraction of L2 energy in degrees >= 1; zero exactly for constants."""
    total = c.norm_sq()
    if total == 0.0:
        raise ValueError("constancy metric is undefined for the zero function")
    return float((total - np.abs(c.coeffs[0]) ** 2) / total)


@dataclass(frozen=True)
class OptimizerState:
    coeffs: HarmonicCoeffs
    objective: float
    gradient_norm: float
    step_size: float
    iteration: int
    constancy_defect: float


@dataclass(frozen=True)
class SearchResult:
    states: list
    converged: bool
    reason: str

    @property
    def final(self) -> OptimizerState:
        return self.states[-1]


def initial_coeffs(kind: str, L: int, rng: np.random.Generator) -> HarmonicCoeffs:
    """Named starting points: random, perturbed-constant, or zonal (pure omega_z).

    "random" draws a standard normal vector and then rescales the constant
    slot to the L2 norm of the remaining slots, keeping its sign, so half the
    starting energy sits in the mean. The balance matters: odd-degree
    coefficients span an invariant subspace of the ascent field (Q of three
    odd factors and one even one vanishes by the simultaneous-negation
    symmetry), and inside it sits a strict local maximum of pure odd parity
    at Phi = 2 pi - 0.2667508 that captures roughly half of mean-starved
    normal draws. With the balanced mean, 40/40 seeded sweeps reached the
    constant; with the constant slot shrunk to a quarter of the remainder,
    13/40 were trapped.
    """
    c = np.zeros(n_coeffs(L))
    if kind == "random":
        c = rng.standard_normal(n_coeffs(L))
        rest = np.linalg.norm(c[1:])
        if rest > 0.0:
            c[0] = np.copysign(rest, c[0])
    elif kind == "perturbed-constant":
        c[0] = 1.0
        rest = rng.standard_normal(n_coeffs(L) - 1)
        c[1:] = 0.1 * rest / np.linalg.norm(rest)
    elif kind == "zonal":
        if L < 1:
            raise ValueError("zonal init needs band limit >= 1")
        c[2] = 1.0   # flat index of (k, m) = (1, 0); Y_{1,0} is proportional to omega_z
    else:
        raise ValueError(f"unknown init kind {kind!r}")
    return HarmonicCoeffs(L, c)


def search(init: HarmonicCoeffs, max_iter: int = 500, tol: float = 1e-8,
           workspace: Workspace | None = None, rng=None) -> SearchResult:
    """Normalized gradient ascent on log Phi with backtracking line search.

    Accepted steps must increase the objective; on decrease the step is halved
    down to MIN_STEP, below which the run stops and reports a stall. After an
    accepted step the step size doubles back up, capped at INITIAL_STEP.
    Convergence means gradient_norm < tol. The trace holds the initial state
    and every accepted state. rng is accepted for interface uniformity with
    seeded callers; the ascent itself is deterministic.

    Near a quadratic maximum the objective sits within machine epsilon of its
    peak once the iterate is ~sqrt(eps) away, so the line search stops making
    progress while the gradient norm is still ~1e-7. Runs with tol below that
    floor therefore end reporting a stall even when they have found the
    maximizer; the tie is broken by constancy_defect, which drops to ~1e-15
    at a constant.
    """
    arr = _as_real_coeffs(init)
    if not np.any(arr):
        raise ValueError("initial coefficients must be nonzero")
    ws = workspace or make_workspace(init.max_degree)
    L = init.max_degree

    def make_state(arr, step, iteration):
        c = HarmonicCoeffs(L, arr)
        q, dq = ws.q_gradient(arr)
        grad = dq / q - 4.0 * arr
        phi = float(((2.0 * np.pi) ** 3 * q) ** 0.25)
        return OptimizerState(
            coeffs=c, objective=phi, gradient_norm=float(np.linalg.norm(grad)),
            step_size=step, iteration=iteration,
            constancy_defect=constancy_metric(c)), grad

    arr = arr / np.linalg.norm(arr)
    step = INITIAL_STEP
    state, grad = make_state(arr, step, 0)
    trace = [state]
    for iteration in range(1, max_iter + 1):
        if state.gradient_norm < tol:
            return SearchResult(trace, True, "gradient norm below tolerance")
        while True:
            trial = arr + step * grad
            trial = trial / np.linalg.norm(trial)
            q_trial = ws.q_value(trial)
            phi_trial = float(((2.0 * np.pi) ** 3 * q_trial) ** 0.25)
            if phi_trial > state.objective:
                break
            step *= STEP_SHRINK
            if step < MIN_STEP:
                return SearchResult(trace, False, "line search stalled")
        arr = trial
        state, grad = make_state(arr, step, iteration)
        trace.append(state)
        step = min(step * 2.0, INITIAL_STEP)
    if state.gradient_norm < tol:
        return SearchResult(trace, True, "gradient norm below tolerance")
    return SearchResult(trace, False, "iteration limit reached")
