"""Multilinear forms over sphere quadruples with zero sum, and the chord functional.

Everything here orbits one geometric fact: four unit vectors summing to zero
split into two pairs whose sums are opposite points of the ball |x| <= 2, so
integrals over the zero-sum manifold factor through convolution profiles on
that ball. The quadrilinear form Q and bilinear form B are evaluated by that
factorization; a nested double-sphere quadrature route is kept as an
independent slow path for cross-checking, since the factorized route is the
one every headline number depends on.

H(g), the chord-kernel quadratic functional, gets the same dual treatment:
brute-force double quadrature versus the diagonal form 2*pi*sum_k Lambda_k *
(degree-k energy) in harmonic coefficients.
"""

from dataclasses import dataclass

import numpy as np

from .convolution import (convolve_many, eval_with_table, slice_point_table,
                          table_degree)
from .harmonics import HarmonicCoeffs, SphereFunction, harmonic_values
from .legendre import CHORD_KERNEL_ID, FunkHeckeSpectrum
from .quadrature import (BallGrid, SphereGrid, build_ball_grid,
                         build_sphere_grid, integrate_sphere)

__all__ = [
    "GammaSample",
    "PairKernel",
    "FormGrids",
    "antipodal_conjugate",
    "sharp_rearrangement",
    "weighted_pair_kernel",
    "default_form_grids",
    "quadrilinear_q",
    "bilinear_b",
    "pair_slice_average",
    "gamma_sample",
    "gamma_samples",
    "four_identity",
    "four_identity_many",
    "h_direct",
    "h_direct_many",
    "h_spectral",
    "mean_value",
]


def antipodal_conjugate(f: SphereFunction) -> SphereFunction:
    """f_star(omega) = conj(f(-omega)); an involution."""
    return f.antipodal_conjugate()


def sharp_rearrangement(f: SphereFunction) -> SphereFunction:
    """The nonnegative antipodally symmetric function with f's pairwise L2 mass.

    sqrt((|f(omega)|^2 + |f(-omega)|^2)/2); preserves the L2 norm.
    """
    return f.sharp_rearrangement()


@dataclass(frozen=True)
class GammaSample:
    """Four unit vectors with zero sum."""

    omegas: np.ndarray

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        if om.shape != (4, 3):
            raise ValueError(f"expected four 3-vectors, got shape {om.shape}")
        object.__setattr__(self, "omegas", om)
        norms = np.linalg.norm(om, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-13:
            raise ValueError("sample vectors must be unit length")
        if np.linalg.norm(om.sum(axis=0)) > 1e-12:
            raise ValueError("sample vectors must sum to zero")


def _uniform_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def gamma_samples(rng: np.random.Generator, n: int) -> np.ndarray:
    """n zero-sum quadruples, shape (n, 4, 3).

    omega_1, omega_2 uniform on the sphere (rejecting near-antipodal draws
    with |omega_1 + omega_2| < 1e-8), omega_3 uniform on the circle the
    constraint leaves for it, omega_4 the forced remainder. No claim is made
    that this is any particular measure on the manifold; it only needs to
    cover it, since the identities being fuzzed hold pointwise.
    """
    w1 = _uniform_sphere(rng, n)
    w2 = _uniform_sphere(rng, n)
    while True:
        bad = np.linalg.norm(w1 + w2, axis=1) < 1e-8
        if not np.any(bad):
            break
        w2[bad] = _uniform_sphere(rng, int(bad.sum()))
    y = -(w1 + w2)
    centers = 0.5 * y
    rho = np.sqrt(np.maximum(0.0, 1.0 - 0.25 * np.sum(y * y, axis=1)))
    # slice frame, same construction as quadrature.circle_frames
    axis = np.argmin(np.abs(y), axis=1)
    e1 = np.cross(y, np.eye(3)[axis])
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(y / np.linalg.norm(y, axis=1, keepdims=True), e1)
    psi = rng.uniform(0.0, 2.0 * np.pi, n)
    w3 = centers + rho[:, None] * (np.cos(psi)[:, None] * e1 + np.sin(psi)[:, None] * e2)
    w4 = y - w3
    return np.stack([w1, w2, w3, w4], axis=1)


def gamma_sample(rng: np.random.Generator) -> GammaSample:
    """One random zero-sum quadruple."""
    return GammaSample(gamma_samples(rng, 1)[0])


def four_identity_many(omegas: np.ndarray) -> np.ndarray:
    """Sum of the three pairing products |w_i + w_j| |w_k + w_l|, batched."""
    om = np.asarray(omegas, dtype=float)
    if om.ndim == 2:
        om = om[None]
    def pn(i, j):
        return np.linalg.norm(om[:, i] + om[:, j], axis=1)
    return pn(0, 1) * pn(2, 3) + pn(0, 2) * pn(1, 3) + pn(0, 3) * pn(1, 2)


def four_identity(sample: GammaSample) -> float:
    """|w1+w2||w3+w4| + |w1+w3||w2+w4| + |w1+w4||w2+w3|; equals 4 on zero-sum quadruples."""
    return float(four_identity_many(sample.omegas)[0])


class PairKernel:
    """A kernel F(omega, nu) on pairs of unit vectors.

    Always carries a point evaluator. Kernels of the special shape
    mag(f(omega) g(nu)) * |omega + nu|^p additionally record that structure
    (factors, sum_weight_power, magnitude_power); the slice-average routines
    then evaluate the factors through a shared harmonic table and replace
    |omega + nu| on a slice at x by |x| itself, which is what the analytic
    slice nodes satisfy exactly. factors = () means the constant kernel 1;
    factors = None means no structure is known.
    """

    def __init__(self, evaluator, symmetric: bool = False, *, factors=None,
                 sum_weight_power: int = 0, magnitude_power: int | None = None):
        self.evaluator = evaluator
        self.symmetric = symmetric
        self.factors = factors
        self.sum_weight_power = sum_weight_power
        self.magnitude_power = magnitude_power

    def __call__(self, omega, nu):
        return self.evaluator(omega, nu)

    @classmethod
    def one(cls) -> "PairKernel":
        return cls(lambda omega, nu: np.ones(np.shape(omega)[:-1]),
                   symmetric=True, factors=())

    def abs_squared(self) -> "PairKernel":
        ev = self.evaluator
        def squared(omega, nu):
            return np.abs(ev(omega, nu)) ** 2
        if self.factors is None:
            return PairKernel(squared, symmetric=self.symmetric)
        return PairKernel(
            squared, symmetric=self.symmetric, factors=self.factors,
            sum_weight_power=2 * self.sum_weight_power,
            magnitude_power=2 * (self.magnitude_power or 1))


def weighted_pair_kernel(f: SphereFunction) -> PairKernel:
    """F(omega, nu) = f(omega) f(nu) |omega + nu|, the tensor square with pair-sum weight."""
    def ev(omega, nu):
        return f(omega) * f(nu) * np.linalg.norm(np.asarray(omega) + np.asarray(nu), axis=-1)
    return PairKernel(ev, symmetric=True, factors=(f, f), sum_weight_power=1)


# Upper bound on a cached slice-node harmonic table; grids past this size are
# streamed chunk by chunk instead (the default verify grids exceed it).
_TABLE_CACHE_LIMIT_BYTES = 400 * 1024 * 1024

# Ball centers per streamed batch; bounds peak memory of transient tables.
_CHUNK = 2048


@dataclass(frozen=True)
class FormGrids:
    """Quadrature bundle for Q and B.

    outer and partner are sphere grids for the nested double-quadrature route;
    the partner must be an azimuth-offset copy so no node pair is exactly
    antipodal (the inner slice weight 1/|omega_1 + omega_2| would blow up).
    ball and n_c drive the factorized route.

    The factorized route memoizes the slice nodes and their harmonic table on
    this object (when they fit in memory), so repeated Q/B evaluations on one
    bundle pay for geometry and basis once.
    """

    outer: SphereGrid
    partner: SphereGrid
    ball: BallGrid
    n_c: int

    def __post_init__(self):
        object.__setattr__(self, "_slice_cache", None)

    def _cached_batch(self, L: int | None):
        """Full slice batch (pts, radii, weights, table) or None if oversized."""
        if L is None:
            return None
        n_centers = len(self.ball.radial_nodes) * self.ball.directions.n_nodes
        if (L + 1) ** 2 * n_centers * self.n_c * 8 > _TABLE_CACHE_LIMIT_BYTES:
            return None
        cached = self._slice_cache
        if cached is not None and cached[0] >= L:
            return cached[1]
        pts, r = slice_point_table(self.ball.points(), self.n_c)
        table = harmonic_values(L, pts.reshape(-1, 3))
        batch = (pts, r, self.ball.weights(), table)
        object.__setattr__(self, "_slice_cache", (L, batch))
        return batch


def _slice_batches(grids: FormGrids, L_tab: int | None):
    """Yield (pts, radii, weights, table) slice batches over the ball grid.

    One cached batch when the table fits, otherwise streamed chunks with a
    freshly computed table each (table is None when no input is band-limited).
    """
    cached = grids._cached_batch(L_tab)
    if cached is not None:
        yield cached
        return
    X = grids.ball.points()
    w = grids.ball.weights()
    for i0 in range(0, len(X), _CHUNK):
        sel = slice(i0, i0 + _CHUNK)
        pts, r = slice_point_table(X[sel], grids.n_c)
        table = None
        if L_tab is not None:
            table = harmonic_values(L_tab, pts.reshape(-1, 3))
        yield pts, r, w[sel], table


def default_form_grids(n_t: int = 32, n_c: int = 64, n_r: int = 48) -> FormGrids:
    outer = build_sphere_grid(n_t, azimuth_offset=0.5)
    partner = build_sphere_grid(n_t, azimuth_offset=1.0)
    ball = build_ball_grid(n_r, outer)
    return FormGrids(outer=outer, partner=partner, ball=ball, n_c=n_c)


def _check_offset(grids: FormGrids):
    g1, g2 = grids.outer, grids.partner
    if (g1.azimuth_offset == g2.azimuth_offset
            and g1.exactness_degree == g2.exactness_degree):
        raise ValueError(
            "outer grids are identical; the second must be an azimuth-offset "
            "copy, otherwise node pairs hit the antipodal singularity exactly")


def pair_slice_average(F: PairKernel, X: np.ndarray, n_c: int, chunk: int = 2048) -> np.ndarray:
    """(1/|x|) * integral of F(omega(phi), x - omega(phi)) dphi for each row x of X.

    The pair-measure profile of F: for F = f tensor g this is the convolution
    of f sigma and g sigma at x. This is the reference evaluation (literal
    partner points, generic evaluator); the ball routes below exploit kernel
    structure instead and are cross-checked against it.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.zeros(len(X), dtype=complex)
    for i0 in range(0, len(X), chunk):
        sel = slice(i0, i0 + chunk)
        pts, r = slice_point_table(X[sel], n_c)
        flat = pts.reshape(-1, 3)
        partner = (X[sel][:, None, :] - pts).reshape(-1, 3)
        vals = np.asarray(F(flat, partner)).reshape(-1, n_c)
        out[sel] = (2.0 * np.pi / n_c) * vals.sum(axis=1) / r
    return out


def _kernel_slice_values(F: PairKernel, pts, flat, r, n_c: int, table, negate: bool):
    """F at the node pairs (p_j, p_{j+n_c/2}) of each slice, sign-flipped if asked.

    Structured kernels evaluate their factors through the shared table and use
    |omega + nu| = |x| = r, exact at the analytic nodes; unstructured ones get
    the literal point pairs. Returns an (n_centers, n_c) array.
    """
    half = n_c // 2
    if F.factors is not None:
        if len(F.factors) == 0:
            prod = np.ones((len(r), n_c))
        else:
            fa, fb = F.factors
            va = eval_with_table(fa, table, flat, negate).reshape(-1, n_c)
            vb = eval_with_table(fb, table, flat, negate).reshape(-1, n_c)
            prod = va * np.roll(vb, -half, axis=1)
        if F.magnitude_power:
            prod = np.abs(prod) ** F.magnitude_power
        if F.sum_weight_power:
            prod = prod * r[:, None] ** F.sum_weight_power
        return prod
    partner = np.roll(pts, -half, axis=1).reshape(-1, 3)
    if negate:
        vals = F.evaluator(-flat, -partner)
    else:
        vals = F.evaluator(flat, partner)
    return np.asarray(vals).reshape(-1, n_c)


def _q_ball(f1, f2, f3, f4, grids: FormGrids) -> complex:
    # One harmonic table per batch serves all four inputs: values at -p come
    # from parity-flipped coefficients, and the second member of each pair
    # lives n_c/2 angle steps away on the same slice.
    half = grids.n_c // 2
    scale = (2.0 * np.pi / grids.n_c) ** 2
    total = 0.0 + 0.0j
    for pts, r, w, table in _slice_batches(grids, table_degree((f1, f2, f3, f4))):
        flat = pts.reshape(-1, 3)
        v1 = eval_with_table(f1, table, flat).reshape(-1, grids.n_c)
        v2 = eval_with_table(f2, table, flat).reshape(-1, grids.n_c)
        v3 = eval_with_table(f3, table, flat, negate=True).reshape(-1, grids.n_c)
        v4 = eval_with_table(f4, table, flat, negate=True).reshape(-1, grids.n_c)
        c12 = np.sum(v1 * np.roll(v2, -half, axis=1), axis=1) / r
        c34 = np.sum(v3 * np.roll(v4, -half, axis=1), axis=1) / r
        total += np.sum(w * c12 * c34)
    return complex(scale * total)


def _b_ball(F: PairKernel, G: PairKernel, grids: FormGrids) -> complex:
    L_tab = table_degree([f for K in (F, G) if K.factors
                          for f in K.factors])
    scale = (2.0 * np.pi / grids.n_c) ** 2
    total = 0.0 + 0.0j
    for pts, r, w, table in _slice_batches(grids, L_tab):
        flat = pts.reshape(-1, 3)
        fv = _kernel_slice_values(F, pts, flat, r, grids.n_c, table, negate=False)
        gv = _kernel_slice_values(G, pts, flat, r, grids.n_c, table, negate=True)
        total += np.sum(w * (fv.sum(axis=1) / r) * (gv.sum(axis=1) / r))
    return complex(scale * total)


def quadrilinear_q(f1, f2, f3, f4, grids: FormGrids, method: str = "ball"):
    """Q(f1, f2, f3, f4): integral of the product over zero-sum quadruples.

    method="ball" factors the constraint through x = omega_1 + omega_2 =
    -(omega_3 + omega_4) and integrates the product of the two pair profiles
    over the ball; for band-limited inputs every 1D rule involved is exact, so
    the result is correct to rounding. method="outer" is the literal nested
    quadrature (double sphere integral of f1 f2 times the slice profile of
    (f3, f4) at -omega_1 - omega_2); its 1/|omega_1 + omega_2| weight is
    integrable but unsmooth, so it converges slowly and serves only as an
    independent cross-check.
    """
    if method == "ball":
        if grids.n_c % 2 == 0:
            return _q_ball(f1, f2, f3, f4, grids)
        X = grids.ball.points()
        c12 = convolve_many(f1, f2, X, grids.n_c)
        c34 = convolve_many(f3, f4, -X, grids.n_c)
        return complex(np.sum(grids.ball.weights() * c12 * c34))
    if method == "outer":
        _check_offset(grids)
        g1, g2 = grids.outer, grids.partner
        v1 = np.asarray(f1(g1.nodes)) * g1.weights
        v2 = np.asarray(f2(g2.nodes)) * g2.weights
        total = 0.0 + 0.0j
        for node, wv in zip(g1.nodes, v1):
            Y = -(node[None, :] + g2.nodes)
            total += wv * np.sum(v2 * convolve_many(f3, f4, Y, grids.n_c))
        return complex(total)
    raise ValueError(f"unknown method {method!r}")


def bilinear_b(F: PairKernel, G: PairKernel, grids: FormGrids, method: str = "ball"):
    """B(F, G): pair kernels integrated against the zero-sum pairing measure.

    Same dual-route structure as quadrilinear_q. For F built by
    weighted_pair_kernel the |omega + nu| factor cancels the slice weight, so
    the ball route is again exact for band-limited ingredients.
    """
    if method == "ball":
        if grids.n_c % 2 == 0:
            return _b_ball(F, G, grids)
        X = grids.ball.points()
        cf = pair_slice_average(F, X, grids.n_c)
        cg = pair_slice_average(G, -X, grids.n_c)
        return complex(np.sum(grids.ball.weights() * cf * cg))
    if method == "outer":
        _check_offset(grids)
        g1, g2 = grids.outer, grids.partner
        total = 0.0 + 0.0j
        for node, w in zip(g1.nodes, g1.weights):
            pair_vals = np.asarray(F.evaluator(np.broadcast_to(node, g2.nodes.shape),
                                               g2.nodes))
            inner = pair_slice_average(G, -(node[None, :] + g2.nodes), grids.n_c)
            total += w * np.sum(g2.weights * pair_vals * inner)
        return complex(total)
    raise ValueError(f"unknown method {method!r}")


def mean_value(g, grid: SphereGrid):
    """Mean of g over the sphere: integral divided by 4*pi."""
    return integrate_sphere(grid, g) / (4.0 * np.pi)


def h_direct(g, grid: SphereGrid):
    """H(g) = double integral of conj(g(omega)) g(nu) |omega - nu| by quadrature.

    The second copy of the sphere uses an azimuth-offset partner grid: the
    chord kernel has a cone point on the diagonal, and keeping the two node
    sets apart removes the accuracy loss the coincident-node rule shows.
    Result is real up to rounding for any g (Hermitian kernel).
    """
    return h_direct_many([g], grid)[0]


def h_direct_many(gs, grid: SphereGrid, block: int = 1024):
    """h_direct for several functions sharing one pass over the chord matrix."""
    n_t = (grid.exactness_degree + 1) // 2
    partner = build_sphere_grid(n_t, grid.azimuth_offset + 0.5)
    v1 = np.stack([np.asarray(g(grid.nodes)) for g in gs])
    v2 = np.stack([np.asarray(g(partner.nodes)) for g in gs])
    left = np.conj(v1) * grid.weights
    right = (partner.weights * v2).T
    acc = np.zeros(len(gs), dtype=complex)
    for i0 in range(0, grid.n_nodes, block):
        sel = slice(i0, i0 + block)
        chord = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * (grid.nodes[sel] @ partner.nodes.T)))
        acc += np.einsum("gi,ig->g", left[:, sel], chord @ right)
    if np.all(acc.imag == 0.0):
        return acc.real
    return acc


def h_spectral(c: HarmonicCoeffs, spectrum: FunkHeckeSpectrum) -> float:
    """H(g) in coefficient space: 2*pi * sum_k Lambda_k * (degree-k energy)."""
    if spectrum.kernel_id != CHORD_KERNEL_ID:
        raise ValueError(
            f"spectrum is for kernel {spectrum.kernel_id!r}; H needs the chord kernel")
    if spectrum.max_degree < c.max_degree:
        raise ValueError(
            f"spectrum covers degrees <= {spectrum.max_degree}, "
            f"coefficients reach {c.max_degree}")
    energies = c.degree_energies()
    return float(2.0 * np.pi * np.sum(spectrum.multipliers[:len(energies)] * energies))
