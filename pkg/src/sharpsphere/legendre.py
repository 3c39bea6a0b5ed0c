"""Legendre polynomials and the chord kernel's zonal (Funk-Hecke) multipliers.

The kernel sqrt(2 - 2t) is the chord length |omega - nu| between unit vectors
with omega . nu = t. Its Legendre coefficients Lambda_k drive the spectral form
of the quadratic functional H; the closed form

    Lambda_k = -8 / ((2k-1)(2k+1)(2k+3))

is validated here against brute-force quadrature before anything downstream
trusts it. (At k = 0 the same expression yields +8/3; all higher multipliers
are negative.)
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "LegendreTable",
    "FunkHeckeSpectrum",
    "legendre_eval",
    "legendre_values",
    "recurrence_residuals",
    "a_coefficient",
    "lambda_closed_form",
    "funk_hecke_coefficient",
    "chord_kernel",
    "chord_spectrum_quadrature",
]

CHORD_KERNEL_ID = "chord"


@dataclass(frozen=True)
class LegendreTable:
    """P_0(t) ... P_K(t), and optionally P'_0(t) ... P'_K(t), at one point t."""

    max_degree: int
    t: float
    values: np.ndarray
    derivatives: Optional[np.ndarray] = None


@dataclass(frozen=True)
class FunkHeckeSpectrum:
    """Per-degree multipliers lambda_k of a zonal kernel phi(omega . nu).

    The zonal operator g -> integral of phi(omega . nu) g(nu) dsigma(nu) acts
    on degree-k spherical harmonics as multiplication by 2*pi*lambda_k, with
    lambda_k = integral of phi(t) P_k(t) dt over (-1, 1).
    """

    kernel_id: str
    multipliers: np.ndarray

    @property
    def max_degree(self) -> int:
        return len(self.multipliers) - 1


def legendre_values(K: int, t: np.ndarray) -> np.ndarray:
    """Bonnet recursion, vectorized: values[k, ...] = P_k(t) for k = 0..K."""
    t = np.asarray(t, dtype=float)
    values = np.empty((K + 1,) + t.shape)
    values[0] = 1.0
    if K >= 1:
        values[1] = t
    for k in range(1, K):
        values[k + 1] = ((2 * k + 1) * t * values[k] - k * values[k - 1]) / (k + 1)
    return values


def _derivative_values(K: int, t: np.ndarray, p: np.ndarray) -> np.ndarray:
    # P'_{k+1} = t P'_k + (k+1) P_k. Deliberately not the difference identity
    # (2k+1) P_k = P'_{k+1} - P'_{k-1}: that one is a downstream correctness
    # check and must not hold by construction.
    t = np.asarray(t, dtype=float)
    d = np.zeros((K + 1,) + t.shape)
    for k in range(K):
        d[k + 1] = t * d[k] + (k + 1) * p[k]
    return d


def legendre_eval(K: int, t: float, with_derivatives: bool = False) -> LegendreTable:
    """Evaluate P_0..P_K at a scalar t in [-1, 1] by upward Bonnet recursion.

    Upward recursion is stable on [-1, 1] because |P_k| <= 1 there. With
    with_derivatives set, P'_k is carried alongside in increasing k.
    """
    if K < 0:
        raise ValueError(f"max degree must be nonnegative, got {K}")
    t = float(t)
    if not -1.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [-1, 1], got {t}")
    p = legendre_values(K, t)
    d = _derivative_values(K, t, p) if with_derivatives else None
    return LegendreTable(max_degree=K, t=t, values=p, derivatives=d)


def recurrence_residuals(K: int, t: float) -> tuple[float, float, float]:
    """Max residuals over k = 1..K of three derivative recurrences.

    Checked identities:
      (2k+1) P_k = P'_{k+1} - P'_{k-1}
      (2k+1) P_k = (k+1) P'_{k+1} - (2k+1) t P'_k + k P'_{k-1}
            P_k = P'_{k+1} - 2t P'_k + P'_{k-1}

    The table is extended internally to degree K+1 so that all three are
    evaluable at k = K.
    """
    table = legendre_eval(K + 1, t, with_derivatives=True)
    p, d = table.values, table.derivatives
    k = np.arange(1, K + 1)
    r0 = (2 * k + 1) * p[k] - (d[k + 1] - d[k - 1])
    r1 = (2 * k + 1) * p[k] - ((k + 1) * d[k + 1] - (2 * k + 1) * t * d[k] + k * d[k - 1])
    r2 = p[k] - (d[k + 1] - 2 * t * d[k] + d[k - 1])
    return (
        float(np.abs(r0).max()),
        float(np.abs(r1).max()),
        float(np.abs(r2).max()),
    )


def a_coefficient(k: int) -> float:
    """A_k = 2/(2k+1), the Legendre coefficient of 1/|omega - nu| = (2-2t)^(-1/2)."""
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return 2.0 / (2 * k + 1)


def lambda_closed_form(K: int) -> FunkHeckeSpectrum:
    """Closed-form chord-kernel multipliers Lambda_0..Lambda_K.

    Consolidates (2k+1) Lambda_k = A_{k+1} - A_{k-1} with A_k = 2/(2k+1) into
    Lambda_k = -8/((2k-1)(2k+1)(2k+3)); Lambda_0 = 8/3 and Lambda_k < 0 for
    k >= 1.
    """
    if K < 0:
        raise ValueError(f"max degree must be nonnegative, got {K}")
    k = np.arange(K + 1, dtype=float)
    lam = -8.0 / ((2 * k - 1) * (2 * k + 1) * (2 * k + 3))
    return FunkHeckeSpectrum(kernel_id=CHORD_KERNEL_ID, multipliers=lam)


def chord_kernel(t):
    """The chord-length kernel sqrt(2 - 2t) = |omega - nu| at omega . nu = t."""
    return np.sqrt(np.maximum(0.0, 2.0 - 2.0 * np.asarray(t, dtype=float)))


def funk_hecke_coefficient(
    kernel: Callable,
    k: int,
    n_quad: int,
    sqrt_singular_at_one: bool = False,
) -> float:
    """Gauss-Legendre quadrature of integral kernel(t) P_k(t) dt over (-1, 1).

    With sqrt_singular_at_one set, the substitution t = 1 - 2u^2 (dt = -4u du)
    is applied first. For kernels of the form smooth(t)*sqrt(1-t) this removes
    the endpoint singularity entirely -- for the chord kernel the transformed
    integrand 4u * kernel(1-2u^2) * P_k(1-2u^2) is a polynomial in u, so the
    quadrature is exact once n_quad exceeds k + 1.
    """
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    if n_quad < k + 1:
        raise ValueError(f"n_quad must be at least k+1 = {k + 1}, got {n_quad}")
    x, w = np.polynomial.legendre.leggauss(n_quad)
    if sqrt_singular_at_one:
        u = 0.5 * (x + 1.0)   # map to (0, 1)
        w = 0.5 * w
        t = 1.0 - 2.0 * u * u
        w = w * 4.0 * u
    else:
        t = x
    kv = np.asarray(kernel(t), dtype=float)
    if not np.all(np.isfinite(kv)):
        raise ValueError("kernel produced non-finite values on the quadrature nodes")
    return float(np.sum(w * kv * legendre_values(k, t)[k]))


def chord_spectrum_quadrature(K: int, n_quad: Optional[int] = None) -> FunkHeckeSpectrum:
    """Chord-kernel multipliers by quadrature, the oracle for lambda_closed_form."""
    if n_quad is None:
        n_quad = K + 8
    lam = np.array([
        funk_hecke_coefficient(chord_kernel, k, n_quad, sqrt_singular_at_one=True)
        for k in range(K + 1)
    ])
    return FunkHeckeSpectrum(kernel_id=CHORD_KERNEL_ID, multipliers=lam)
