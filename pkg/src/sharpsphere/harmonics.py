"""Real spherical harmonics: basis tables, analysis/synthesis, zonal operators.

The basis is orthonormal with respect to the raw surface measure (L2(sigma)
norm 1, not 4*pi-normalized), so Parseval needs no extra constants and a zonal
kernel with Funk-Hecke multipliers lambda_k acts on coefficients as plain
multiplication by 2*pi*lambda_k. The Condon-Shortley phase is omitted; every
quantity this library computes is quadratic in the basis, so the sign
convention is unobservable, but it matters for comparing raw coefficient
tables against other software.

Flat coefficient layout: index(k, m) = k*k + k + m, degrees contiguous,
m = -k..k within a degree. Negative m holds the sin(m*phi) branch.
"""

from dataclasses import dataclass

import numpy as np

from .quadrature import SphereGrid

__all__ = [
    "HarmonicCoeffs",
    "BasisTable",
    "SphereFunction",
    "flat_index",
    "n_coeffs",
    "parity_signs",
    "harmonic_values",
    "random_band_limited",
    "build_basis",
    "analyze",
    "synthesize",
    "funk_hecke_apply",
    "eigenvalue_residual",
]


def flat_index(k: int, m: int) -> int:
    """Position of the (k, m) coefficient in the flat layout."""
    if not -k <= m <= k:
        raise ValueError(f"order m={m} out of range for degree k={k}")
    return k * k + k + m


def n_coeffs(L: int) -> int:
    return (L + 1) * (L + 1)


def _degree_index(L: int) -> np.ndarray:
    """Degree of each flat coefficient slot: [0, 1,1,1, 2,2,2,2,2, ...]."""
    return np.repeat(np.arange(L + 1), 2 * np.arange(L + 1) + 1)


def parity_signs(L: int) -> np.ndarray:
    """(-1)^k per flat slot; the antipodal map acts as Y_{k,m}(-w) = (-1)^k Y_{k,m}(w)."""
    return 1.0 - 2.0 * (_degree_index(L) % 2)


def _assoc_legendre_rows(L: int, t: np.ndarray, s: np.ndarray, out: np.ndarray):
    """Fully normalized associated Legendre values Pbar_k^m(t) for m >= 0.

    Written into the m >= 0 slots of the flat-layout table out (row k*k+k+m);
    the azimuth factors are applied by the caller in a second pass.

    t = cos(theta), s = sin(theta) passed separately: callers obtain s from
    hypot(x, y), which is more accurate near the poles than sqrt(1 - t^2).
    Normalization absorbs the azimuth-free part of the harmonic, so that
    Y_{k,0} = Pbar_k^0 and Y_{k,+-m} = sqrt(2) * Pbar_k^m * {cos,sin}(m phi)
    are orthonormal in L2(sigma). Recursion is along increasing k at fixed m,
    seeded by the diagonal march; all multipliers are O(1), so the scheme is
    stable for the moderate degrees used here.
    """
    scratch = np.empty_like(t)
    pmm = np.full_like(t, 1.0 / np.sqrt(4.0 * np.pi))
    for m in range(L + 1):
        out[m * m + 2 * m] = pmm
        if m == L:
            break
        row = out[(m + 1) * (m + 2) + m]
        np.multiply(t, out[m * m + 2 * m], out=row)
        row *= np.sqrt(2.0 * m + 3.0)
        for k in range(m + 2, L + 1):
            a = np.sqrt((4.0 * k * k - 1.0) / (k * k - m * m))
            b = np.sqrt(((k - 1.0) ** 2 - m * m) / (4.0 * (k - 1.0) ** 2 - 1.0))
            row = out[k * k + k + m]
            np.multiply(t, out[k * k - k + m], out=row)
            np.multiply(out[(k - 1) * (k - 2) + m], b, out=scratch)
            row -= scratch
            row *= a
        np.multiply(pmm, s, out=scratch)
        scratch *= np.sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0))
        pmm, scratch = scratch, pmm


def harmonic_values(L: int, points: np.ndarray) -> np.ndarray:
    """Evaluate all real harmonics through degree L at unit vectors.

    Returns a ((L+1)^2, n) matrix in the flat layout; row i holds one basis
    function sampled at every point. Because the layout is degree-contiguous,
    the leading (L'+1)^2 rows of a degree-L table are exactly the degree-L'
    table, so one table can serve every band limit up to L.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    s = np.hypot(x, y)
    vals = np.empty(((L + 1) ** 2, len(points)))
    _assoc_legendre_rows(L, z, s, vals)
    if L == 0:
        return vals
    phi = np.arctan2(y, x)
    c1, s1 = np.cos(phi), np.sin(phi)
    cm, sm = c1, s1
    root2 = np.sqrt(2.0)
    for m in range(1, L + 1):
        if m > 1:
            # angle-addition update of (cos(m phi), sin(m phi)); refreshed from
            # libm every 8 steps so rounding drift stays at a few ulp
            if m % 8 == 0:
                cm, sm = np.cos(m * phi), np.sin(m * phi)
            else:
                cm, sm = cm * c1 - sm * s1, sm * c1 + cm * s1
        cs, ss = root2 * cm, root2 * sm
        for k in range(m, L + 1):
            pos = vals[k * k + k + m]
            np.multiply(pos, ss, out=vals[k * k + k - m])
            pos *= cs
    return vals


@dataclass(frozen=True)
class HarmonicCoeffs:
    """Expansion coefficients c_{k,m} through degree max_degree, flat layout."""

    max_degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != (n_coeffs(self.max_degree),):
            raise ValueError(
                f"expected {n_coeffs(self.max_degree)} coefficients for degree "
                f"{self.max_degree}, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)
        c.setflags(write=False)

    def norm_sq(self) -> float:
        """Squared L2(sigma) norm of the synthesized function (Parseval)."""
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def degree_energies(self) -> np.ndarray:
        """Sum over m of |c_{k,m}|^2, one entry per degree k."""
        e = np.abs(self.coeffs) ** 2
        edges = np.cumsum(2 * np.arange(self.max_degree + 1) + 1)
        return np.array([seg.sum() for seg in np.split(e, edges[:-1])])

    def mean_value(self):
        """Mean over the sphere; c_{0,0} = sqrt(4 pi) * mean."""
        return self.coeffs[0] / np.sqrt(4.0 * np.pi)

    def antipodal_conjugate(self) -> "HarmonicCoeffs":
        # conj(f(-omega)) has coefficients (-1)^k conj(c_{k,m})
        return HarmonicCoeffs(self.max_degree,
                              parity_signs(self.max_degree) * np.conj(self.coeffs))


@dataclass(frozen=True)
class BasisTable:
    """All basis functions through max_degree sampled on one SphereGrid.

    values has shape ((L+1)^2, n_nodes); with w the grid weights, the weighted
    Gram matrix values @ diag(w) @ values.T is the identity as long as the
    grid integrates degree 2L exactly.
    """

    grid: SphereGrid
    max_degree: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)


def build_basis(L: int, grid: SphereGrid) -> BasisTable:
    """Tabulate the orthonormal basis on a grid; needs exactness >= 2L."""
    if L < 0:
        raise ValueError(f"max degree must be nonnegative, got {L}")
    if grid.exactness_degree < 2 * L:
        raise ValueError(
            f"grid exactness {grid.exactness_degree} < 2L = {2 * L}; "
            "products of two basis functions would not integrate exactly")
    return BasisTable(grid=grid, max_degree=L, values=harmonic_values(L, grid.nodes))


def analyze(f, basis: BasisTable) -> HarmonicCoeffs:
    """Project grid values onto the basis: c_{k,m} = sum_n w_n f_n Y_{k,m}(node_n).

    f may be an array of values at the basis grid nodes or a callable on unit
    vectors (evaluated at the nodes). Exact for band-limited f within the
    basis degree.
    """
    vals = f(basis.grid.nodes) if callable(f) else np.asarray(f)
    if vals.shape != (basis.grid.n_nodes,):
        raise ValueError(
            f"expected values on the {basis.grid.n_nodes}-node basis grid, "
            f"got shape {vals.shape}")
    return HarmonicCoeffs(basis.max_degree, basis.values @ (basis.grid.weights * vals))


def synthesize(c: HarmonicCoeffs, basis: BasisTable) -> np.ndarray:
    """Evaluate the expansion at the basis grid nodes."""
    if c.max_degree != basis.max_degree:
        raise ValueError(
            f"coefficient degree {c.max_degree} does not match basis degree "
            f"{basis.max_degree}")
    return c.coeffs @ basis.values


def funk_hecke_apply(spectrum, c: HarmonicCoeffs) -> HarmonicCoeffs:
    """Apply a zonal kernel in coefficient space: c_{k,m} -> 2 pi lambda_k c_{k,m}."""
    if spectrum.max_degree < c.max_degree:
        raise ValueError(
            f"spectrum covers degrees <= {spectrum.max_degree}, "
            f"coefficients reach {c.max_degree}")
    mult = 2.0 * np.pi * spectrum.multipliers[_degree_index(c.max_degree)]
    return HarmonicCoeffs(c.max_degree, mult * c.coeffs)


def random_band_limited(L: int, rng: np.random.Generator, decay: float = 2.0,
                        complex_valued: bool = False) -> HarmonicCoeffs:
    """Random coefficients with per-degree amplitude (1 + k)^(-decay).

    The decay keeps low degrees dominant, which mirrors smooth test functions
    and keeps sign-indefinite quadratic functionals of the sample bounded away
    from zero (flat spectra make them nearly cancel in expectation).
    """
    amp = (1.0 + _degree_index(L)) ** (-decay)
    c = rng.standard_normal(n_coeffs(L))
    if complex_valued:
        c = c + 1j * rng.standard_normal(n_coeffs(L))
    return HarmonicCoeffs(L, amp * c)


class SphereFunction:
    """A function on the unit sphere, evaluable at arbitrary unit vectors.

    Wraps either a closure or a coefficient table (evaluated by synthesis);
    the coefficient-backed form remembers that it is band-limited, which the
    quadrature-exactness reasoning elsewhere relies on. A sharp rearrangement
    of a coefficient-backed function records its source in sharp_source, so
    bulk evaluators can obtain both |f(w)|^2 and |f(-w)|^2 from one basis
    table instead of calling the closure at w and -w.
    """

    __slots__ = ("_fn", "coeffs", "sharp_source")

    def __init__(self, fn, coeffs: HarmonicCoeffs | None = None,
                 sharp_source: "SphereFunction | None" = None):
        self._fn = fn
        self.coeffs = coeffs
        self.sharp_source = sharp_source

    def __call__(self, points):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        vals = self._fn(np.atleast_2d(pts))
        return vals[0] if single else vals

    @classmethod
    def from_callable(cls, fn) -> "SphereFunction":
        """Wrap a closure mapping an (n, 3) array of unit vectors to n values."""
        return cls(fn)

    @classmethod
    def from_coeffs(cls, c: HarmonicCoeffs) -> "SphereFunction":
        def fn(pts):
            return c.coeffs @ harmonic_values(c.max_degree, pts)
        return cls(fn, coeffs=c)

    @classmethod
    def constant(cls, value=1.0) -> "SphereFunction":
        c = np.zeros(1, dtype=complex if isinstance(value, complex) else float)
        c[0] = value * np.sqrt(4.0 * np.pi)
        return cls.from_coeffs(HarmonicCoeffs(0, c))

    @classmethod
    def plane_wave(cls, xi) -> "SphereFunction":
        """omega -> exp(i xi . omega); not band-limited."""
        xi = np.asarray(xi, dtype=float).reshape(3)
        return cls(lambda pts: np.exp(1j * (pts @ xi)))

    def antipodal_conjugate(self) -> "SphereFunction":
        if self.coeffs is not None:
            return SphereFunction.from_coeffs(self.coeffs.antipodal_conjugate())
        fn = self._fn
        return SphereFunction(lambda pts: np.conj(fn(-pts)))

    def sharp_rearrangement(self) -> "SphereFunction":
        fn = self._fn
        def sharp(pts):
            return np.sqrt(0.5 * (np.abs(fn(pts)) ** 2 + np.abs(fn(-pts)) ** 2))
        return SphereFunction(sharp, sharp_source=self)


def eigenvalue_residual(k: int, m: int, basis: BasisTable, mesh_size: int = 96) -> float:
    """Laplace-Beltrami check: residual of the discrete Delta Y = -k(k+1) Y.

    An auxiliary theta-phi mesh (mesh_size x 2*mesh_size, independent of the
    basis grid) carries second-order finite differences: conservative flux
    form in theta, periodic central differences in phi. The two rows nearest
    each pole are excluded from the reported max; the chart is singular there
    while the harmonic itself is not.
    """
    if not 0 <= k <= basis.max_degree:
        raise ValueError(f"degree k={k} outside basis range 0..{basis.max_degree}")
    if not -k <= m <= k:
        raise ValueError(f"order m={m} out of range for degree k={k}")
    M = mesh_size
    h = np.pi / M
    theta = (np.arange(M) + 0.5) * h
    phi = np.arange(2 * M) * (2.0 * np.pi / (2 * M))
    T, P = np.meshgrid(theta, phi, indexing="ij")
    pts = np.column_stack([
        (np.sin(T) * np.cos(P)).ravel(),
        (np.sin(T) * np.sin(P)).ravel(),
        np.cos(T).ravel(),
    ])
    Y = harmonic_values(k, pts)[flat_index(k, m)].reshape(M, 2 * M)

    sin_t = np.sin(theta)
    sin_half = np.sin(theta[:-1] + 0.5 * h)   # flux faces between rows
    flux = sin_half[:, None] * (Y[1:] - Y[:-1]) / h
    lap_t = np.empty_like(Y)
    lap_t[1:-1] = (flux[1:] - flux[:-1]) / (h * sin_t[1:-1, None])
    lap_t[0] = lap_t[-1] = 0.0   # excluded below anyway

    h_p = 2.0 * np.pi / (2 * M)
    lap_p = (np.roll(Y, -1, axis=1) - 2.0 * Y + np.roll(Y, 1, axis=1)) / h_p**2
    lap = lap_t + lap_p / (sin_t**2)[:, None]

    resid = np.abs(lap + k * (k + 1) * Y)
    return float(resid[2:-2].max())
