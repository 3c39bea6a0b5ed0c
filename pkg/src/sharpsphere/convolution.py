"""Convolution of sphere-carried measures, the extension operator, and L4 norms.

The convolution of two measures f*sigma and g*sigma is a function on the ball
|x| <= 2: at x it is the integral of f(omega) g(x - omega) over the circle
where the unit spheres centered at 0 and at x intersect, times 1/|x|. All
L4-norm computations route through this fact (Plancherel) instead of sampling
the oscillatory extension on a 3D grid.
"""

import numpy as np

from .harmonics import SphereFunction, harmonic_values, parity_signs
from .quadrature import BallGrid, SphereGrid, circle_frames

__all__ = [
    "ConvProfile",
    "convolve_at",
    "convolve_many",
    "conv_profile",
    "conv_l2_norm",
    "extension_at",
    "l4_norm",
]

# Centers per vectorized batch; bounds peak memory of the slice-point tables.
_CHUNK = 2048


def _angle_tables(n_c: int):
    # For even n_c the second half of the circle nodes is built by explicit
    # negation of the first, so omega(phi_j + pi) == -direction of omega(phi_j)
    # about the center holds bitwise. Downstream inequalities that pair a node
    # with its opposite then degrade only at rounding level.
    ang = np.arange(n_c) * (2.0 * np.pi / n_c)
    if n_c % 2 == 0:
        half = n_c // 2
        ch, sh = np.cos(ang[:half]), np.sin(ang[:half])
        return np.concatenate([ch, -ch]), np.concatenate([sh, -sh])
    return np.cos(ang), np.sin(ang)


def slice_point_table(X: np.ndarray, n_c: int):
    """Circle-slice nodes for a batch of centers X, shape (M, 3).

    Returns (pts, radii) with pts of shape (M, n_c, 3); row i holds the n_c
    nodes of the slice at X[i].
    """
    if n_c < 1:
        raise ValueError(f"n_c must be a positive integer, got {n_c}")
    centers, rad, e1, e2 = circle_frames(X)
    c, s = _angle_tables(n_c)
    disp = c[None, :, None] * e1[:, None, :] + s[None, :, None] * e2[:, None, :]
    pts = centers[:, None, :] + rad[:, None, None] * disp
    return pts, np.linalg.norm(X, axis=-1)


def band_degree(func) -> int | None:
    """Band limit usable for shared-table evaluation of func, or None.

    Coefficient-backed functions report their own degree; a sharp
    rearrangement of a coefficient-backed function reports the source degree
    (its values at +-p both come from the source's table rows).
    """
    c = getattr(func, "coeffs", None)
    if c is not None:
        return c.max_degree
    src = getattr(func, "sharp_source", None)
    if src is not None and getattr(src, "coeffs", None) is not None:
        return src.coeffs.max_degree
    return None


def table_degree(funcs) -> int | None:
    """Largest band limit among funcs, or None when no shared table would help."""
    degs = [d for d in (band_degree(f) for f in funcs) if d is not None]
    return max(degs) if degs else None


def eval_with_table(func, table, flat, negate: bool = False) -> np.ndarray:
    """Values of func at flat (or at -flat), through the basis table if possible.

    table holds harmonic_values(L, flat) for L at least the band limit of
    func; the flat layout makes the leading rows serve any smaller degree.
    Negation never touches the table: f(-p) synthesizes from parity-flipped
    coefficients, and a sharp rearrangement is antipodally symmetric.
    """
    c = getattr(func, "coeffs", None)
    if c is not None and table is not None:
        co = c.coeffs
        if negate:
            co = co * parity_signs(c.max_degree)
        return co @ table[: co.size]
    src = getattr(func, "sharp_source", None)
    if src is not None and getattr(src, "coeffs", None) is not None and table is not None:
        co = src.coeffs.coeffs
        sub = table[: co.size]
        plus = co @ sub
        minus = (co * parity_signs(src.coeffs.max_degree)) @ sub
        return np.sqrt(0.5 * (np.abs(plus) ** 2 + np.abs(minus) ** 2))
    return np.asarray(func(-flat if negate else flat))


def convolve_many(f, g, X: np.ndarray, n_c: int) -> np.ndarray:
    """(f sigma * g sigma)(x) for every row x of X; zero where |x| > 2.

    For even n_c the angle tables pair each slice node with its opposite,
    x - p_j = p_{j + n_c/2}, so g is read off the same node values as f
    (rolled); odd n_c falls back to evaluating g at the literal x - p points.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    r = np.linalg.norm(X, axis=-1)
    out = np.zeros(len(X), dtype=complex)
    idx = np.flatnonzero(r <= 2.0)
    L_tab = table_degree((f, g))
    for i0 in range(0, len(idx), _CHUNK):
        sel = idx[i0:i0 + _CHUNK]
        pts, rr = slice_point_table(X[sel], n_c)
        flat = pts.reshape(-1, 3)
        table = harmonic_values(L_tab, flat) if L_tab is not None else None
        a = eval_with_table(f, table, flat).reshape(len(sel), n_c)
        if n_c % 2 == 0:
            b = eval_with_table(g, table, flat).reshape(len(sel), n_c)
            b = np.roll(b, -(n_c // 2), axis=1)
        else:
            b = np.asarray(g((X[sel][:, None, :] - pts).reshape(-1, 3))).reshape(len(sel), n_c)
        out[sel] = (2.0 * np.pi / n_c) * np.sum(a * b, axis=1) / rr
    return out


def convolve_at(f: SphereFunction, g: SphereFunction, x, n_c: int):
    """(f sigma * g sigma)(x) by the trapezoid rule on the slice at x.

    Exact (up to rounding) whenever f(omega(phi)) g(x - omega(phi)) is a
    trigonometric polynomial of degree < n_c in the slice angle, which holds
    with degree 2L for band-limited f, g of degree L. Returns exactly 0 for
    |x| > 2; x = 0 is rejected, the convolution density diverges there.
    """
    x = np.asarray(x, dtype=float).reshape(3)
    r = float(np.linalg.norm(x))
    if r > 2.0:
        return 0.0
    pts = slice_point_table(x[None], n_c)[0][0]   # raises at x = 0
    vals = np.asarray(f(pts)) * np.asarray(g(x - pts))
    return (2.0 * np.pi / n_c) * np.sum(vals) / r


class ConvProfile:
    """Radial profile of (f sigma * g sigma)(r * direction)."""

    def __init__(self, radii: np.ndarray, values: np.ndarray, direction: np.ndarray):
        self.radii = np.asarray(radii, dtype=float)
        self.values = np.asarray(values)
        self.direction = np.asarray(direction, dtype=float)


def conv_profile(f, g, radii, direction=(0.0, 0.0, 1.0), n_c: int = 64) -> ConvProfile:
    """Sample the convolution along a ray of the given radii in (0, 2]."""
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0.0) or np.any(radii > 2.0):
        raise ValueError("profile radii must lie in (0, 2]")
    u = np.asarray(direction, dtype=float).reshape(3)
    u = u / np.linalg.norm(u)
    vals = convolve_many(f, g, radii[:, None] * u, n_c)
    return ConvProfile(radii, vals, u)


def conv_l2_norm(f: SphereFunction, g: SphereFunction, ball: BallGrid, n_c: int) -> float:
    """L2(R^3) norm of f sigma * g sigma via ball quadrature of |conv|^2."""
    vals = convolve_many(f, g, ball.points(), n_c)
    return float(np.sqrt(np.sum(ball.weights() * np.abs(vals) ** 2)))


def extension_at(f: SphereFunction, x, grid: SphereGrid):
    """The extension (Fourier transform of f dsigma) at a point x in R^3."""
    x = np.asarray(x, dtype=float).reshape(3)
    vals = np.asarray(f(grid.nodes)) * np.exp(-1j * (grid.nodes @ x))
    return np.sum(grid.weights * vals)


def l4_norm(f: SphereFunction, ball: BallGrid, n_c: int) -> float:
    """L4(R^3) norm of the extension of f.

    Plancherel turns the quartic integral into the L2 norm of the convolution
    of f sigma with its antipodal conjugate:
    ||ext f||_4^2 = (2 pi)^{3/2} ||f sigma * f_star sigma||_2.
    """
    fstar = f.antipodal_conjugate()
    return float(np.sqrt((2.0 * np.pi) ** 1.5 * conv_l2_norm(f, fstar, ball, n_c)))
