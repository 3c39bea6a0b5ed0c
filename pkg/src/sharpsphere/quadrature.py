"""Quadrature rules for the unit sphere, intersection circles, and the ball |x| <= 2.

Three measures appear throughout the library: the surface measure sigma on S^2
(total mass 4*pi), the weighted arc measure on circles S^2 n {omega : x.omega =
|x|^2/2} that realizes the convolution of two copies of sigma, and the volume
measure on the ball of radius 2 where such convolutions live.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DegenerateSliceError(ValueError):
    """Raised when a circle slice is requested at x = 0."""


class EmptyIntersectionError(ValueError):
    """Raised when a circle slice is requested at |x| > 2 (spheres do not meet)."""


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature on S^2: Gauss-Legendre in t = cos(theta), uniform azimuth.

    Attributes
    ----------
    nodes : (N, 3) array
        Unit vectors.
    weights : (N,) array
        Positive weights summing to 4*pi.
    exactness_degree : int
        Spherical polynomials up to this degree integrate exactly.
    azimuth_offset : float
        Offset of the azimuth grid, in units of the azimuth step pi/n_t.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    azimuth_offset: float = 0.5

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return len(self.weights)


def build_sphere_grid(n_t: int, azimuth_offset: float = 0.5) -> SphereGrid:
    """Build a sphere grid with n_t polar nodes and 2*n_t azimuthal nodes.

    The azimuth nodes sit at (j + azimuth_offset)*pi/n_t. The default half-step
    offset keeps the node set away from phi = 0; passing a different offset
    yields a grid whose nodes interleave with the default one, which is what
    double integrals of kernels with a diagonal or antipodal singularity need.
    """
    if n_t < 1:
        raise ValueError(f"n_t must be a positive integer, got {n_t}")
    t, w_t = np.polynomial.legendre.leggauss(n_t)
    step = np.pi / n_t
    phi = (np.arange(2 * n_t) + azimuth_offset) * step
    tt = np.repeat(t, 2 * n_t)
    pp = np.tile(phi, n_t)
    ss = np.sqrt(1.0 - tt * tt)
    nodes = np.column_stack([ss * np.cos(pp), ss * np.sin(pp), tt])
    weights = np.repeat(w_t, 2 * n_t) * step
    return SphereGrid(nodes, weights, exactness_degree=2 * n_t - 1,
                      azimuth_offset=float(azimuth_offset))


def integrate_sphere(grid: SphereGrid, f):
    """Integrate f over S^2 against the grid.

    f may be a callable taking an (N, 3) array of unit vectors, or an array of
    values at the grid nodes. Non-finite values are rejected.
    """
    vals = f(grid.nodes) if callable(f) else np.asarray(f)
    vals = np.broadcast_to(vals, (grid.n_nodes,))
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand produced non-finite values on the grid")
    return np.sum(grid.weights * vals)


@dataclass(frozen=True)
class CircleSlice:
    """The circle S^2 n {omega : |x - omega| = 1}, carrying the 1/|x| conv weight.

    Points are omega(phi) = center + radius*(cos(phi)*e1 + sin(phi)*e2); both
    omega(phi) and x - omega(phi) are unit vectors.
    """

    center: np.ndarray
    radius: float
    frame: tuple[np.ndarray, np.ndarray]
    angle_nodes: np.ndarray
    weight_factor: float

    def points(self) -> np.ndarray:
        e1, e2 = self.frame
        c, s = np.cos(self.angle_nodes), np.sin(self.angle_nodes)
        return self.center + self.radius * (np.outer(c, e1) + np.outer(s, e2))


def circle_frames(xs: np.ndarray):
    """Deterministic slice geometry for a batch of centers xs, shape (M, 3).

    Returns (centers, radii, e1, e2). e1 is the normalized cross product of x
    with the standard axis along which x has the smallest |component|; e2
    completes the right-handed frame x_hat, e1, e2.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    r = np.linalg.norm(xs, axis=1)
    if np.any(r == 0.0):
        raise DegenerateSliceError("circle slice undefined at x = 0")
    if np.any(r > 2.0):
        raise EmptyIntersectionError("spheres at 0 and x do not intersect for |x| > 2")
    axis = np.argmin(np.abs(xs), axis=1)
    e_axis = np.eye(3)[axis]
    e1 = np.cross(xs, e_axis)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    xhat = xs / r[:, None]
    e2 = np.cross(xhat, e1)
    radii = np.sqrt(np.maximum(0.0, 1.0 - 0.25 * r * r))
    return 0.5 * xs, radii, e1, e2


def build_circle_slice(x, n_c: int) -> CircleSlice:
    """Slice at x with n_c uniformly spaced angle nodes and weight 1/|x|."""
    if n_c < 1:
        raise ValueError(f"n_c must be a positive integer, got {n_c}")
    x = np.asarray(x, dtype=float).reshape(3)
    centers, radii, e1, e2 = circle_frames(x[None, :])
    angles = np.arange(n_c) * (2.0 * np.pi / n_c)
    return CircleSlice(
        center=centers[0],
        radius=float(radii[0]),
        frame=(e1[0], e2[0]),
        angle_nodes=angles,
        weight_factor=1.0 / float(np.linalg.norm(x)),
    )


@dataclass(frozen=True)
class BallGrid:
    """Product quadrature on the ball |x| <= 2: radial Gauss-Legendre x SphereGrid.

    radial_weights include the r^2 Jacobian, so a plain double sum against
    integrand values at r*u approximates the volume integral.
    """

    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    directions: SphereGrid

    def __post_init__(self):
        self.radial_nodes.setflags(write=False)
        self.radial_weights.setflags(write=False)

    def points(self) -> np.ndarray:
        """All quadrature points r*u, radial-major, shape (n_r * N_dir, 3)."""
        return (self.radial_nodes[:, None, None] * self.directions.nodes).reshape(-1, 3)

    def weights(self) -> np.ndarray:
        return (self.radial_weights[:, None] * self.directions.weights).ravel()


def build_ball_grid(n_r: int, directions: SphereGrid) -> BallGrid:
    """Radial Gauss-Legendre nodes mapped affinely from (-1,1) to (0,2).

    Endpoints are excluded automatically, so the 1/r blow-up of surface-measure
    convolutions at the origin is never sampled; the integrands of interest,
    r^2 |conv|^2, stay bounded.
    """
    if n_r < 1:
        raise ValueError(f"n_r must be a positive integer, got {n_r}")
    u, w = np.polynomial.legendre.leggauss(n_r)
    r = u + 1.0
    return BallGrid(radial_nodes=r, radial_weights=w * r * r, directions=directions)


def integrate_ball(ball: BallGrid, f):
    """Integrate f over the ball |x| <= 2; f takes an (M, 3) array of points."""
    vals = f(ball.points()) if callable(f) else np.asarray(f)
    vals = np.broadcast_to(vals, (len(ball.radial_nodes) * ball.directions.n_nodes,))
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand produced non-finite values on the ball grid")
    return np.sum(ball.weights() * vals)
