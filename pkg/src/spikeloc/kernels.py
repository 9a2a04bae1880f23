"""Gaussian smoothing kernel, its Fourier weights, and the periodic Gaussian.

The kernel pair is

    phi(x)     = (K/sigma) * exp(-pi * x**2 * (K/sigma)**2)
    phi_hat(k) = exp(-pi * (k*sigma/K)**2)

and the periodic Gaussian phi_p is the 1-periodization of phi.  Three
independent evaluation routes are provided for phi_p:

  * lattice sum      sum_j phi(x+j)                     (production path)
  * Fourier sum      sum_k phi_hat(k) * exp(2*pi*i*k*x) (Poisson dual)
  * theta product    prod_n (1-q^(2n)) (1 + 2 q^(2n-1) cos(2 pi x) + q^(4n-2))

with nome q = exp(-pi*sigma**2/K**2).  All three are the same function; the
lattice sum converges in a handful of terms whenever K >= 3*sigma, so it is
the route used everywhere outside cross-validation tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# terms are dropped once they fall below this fraction of the running value;
# keeps kernel truncation error several orders below every threshold margin
TRUNCATION_RTOL = 1e-18

_LOG_TRUNC = -math.log(TRUNCATION_RTOL)  # ~41.45


@dataclass(frozen=True)
class KernelParams:
    """Kernel shape (sigma, K); both positive reals, K need not be integer."""

    sigma: float
    K: float

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be a positive real, got {self.sigma}")
        if not (self.K > 0 and math.isfinite(self.K)):
            raise ValueError(f"K must be a positive real, got {self.K}")
        if not 0 < self.q < 1:
            raise ValueError(f"nome q={self.q} outside (0, 1)")

    @property
    def q(self) -> float:
        """Nome of the theta product form, exp(-pi*sigma**2/K**2)."""
        return math.exp(-math.pi * self.sigma**2 / self.K**2)


def gaussian(kp: KernelParams, x):
    """Kernel phi(x) = (K/sigma) exp(-pi x^2 (K/sigma)^2); peak K/sigma at 0."""
    r = kp.K / kp.sigma
    return r * np.exp(-math.pi * np.square(np.asarray(x, dtype=float)) * r * r)


def gaussian_hat(kp: KernelParams, k):
    """Fourier weight phi_hat(k) = exp(-pi (k sigma/K)^2)."""
    s = kp.sigma / kp.K
    return np.exp(-math.pi * np.square(np.asarray(k, dtype=float)) * s * s)


def wrap_unit(x):
    """Reduce to the fundamental domain [-1/2, 1/2)."""
    x = np.asarray(x, dtype=float)
    w = x - np.round(x)
    # round-half-even sends +-0.5 to +-0.5; fold the right edge onto -1/2
    return np.where(w >= 0.5, w - 1.0, w)


def periodic_gaussian(kp: KernelParams, x):
    """1-periodization sum_j phi(x+j), truncated at relative 1e-18.

    The argument is wrapped into [-1/2, 1/2) and folded to |x| before
    summing, so phi_p(-x) equals phi_p(x) bitwise.  The j=0 term uses the
    same arithmetic as gaussian(), which keeps phi <= phi_p exact in floats.
    """
    xa = np.abs(wrap_unit(x))
    total = gaussian(kp, xa)
    for j in range(1, 64):
        term = gaussian(kp, xa - j) + gaussian(kp, xa + j)
        total = total + term
        if np.all(term <= TRUNCATION_RTOL * total):
            break
    return total if total.ndim else float(total)


def periodic_gaussian_fourier(kp: KernelParams, x):
    """Poisson-dual route: sum_k phi_hat(k) exp(2 pi i k x), real cosine form.

    Alternating cancellation makes this route ill-conditioned where
    phi_p(x) << phi_p(0); it is kept as a cross-validation oracle.
    """
    xa = np.asarray(x, dtype=float)
    k_max = int(math.ceil(kp.K / kp.sigma * math.sqrt(_LOG_TRUNC / math.pi))) + 1
    total = np.ones_like(xa)
    for k in range(1, k_max + 1):
        total = total + 2.0 * float(gaussian_hat(kp, k)) * np.cos(2.0 * math.pi * k * xa)
    return total if total.ndim else float(total)


def periodic_gaussian_theta(kp: KernelParams, x):
    """Theta product route, truncated once q^(2n-1) drops below 1e-18.

    Each factor (1-q^(2n)) (1 + 2 q^(2n-1) cos(2 pi x) + q^(4n-2)) is
    evaluated as (1-q^(2n)) * ((1-a)^2 + 2 a (1+cos(2 pi x))) with
    a = q^(2n-1); both summands are nonnegative, which avoids the
    cancellation the textbook form suffers near x = 1/2.  Powers of the
    nome go through expm1/exp on m * pi sigma^2/K^2 directly, keeping
    1 - q^m fully accurate even when q is close to 1.
    """
    t = math.pi * kp.sigma**2 / kp.K**2  # = -log(q), exact form
    xa = wrap_unit(x)
    one_plus_c = 2.0 * np.square(np.cos(math.pi * xa))  # = 1 + cos(2 pi x)
    n_max = int(math.ceil((_LOG_TRUNC / t + 1.0) / 2.0)) + 1
    total = np.ones_like(np.asarray(xa, dtype=float))
    for n in range(1, n_max + 1):
        m_odd = (2 * n - 1) * t
        a = math.exp(-m_odd)
        one_minus_a = -math.expm1(-m_odd)
        one_minus_q2n = -math.expm1(-2 * n * t)
        total = total * (one_minus_q2n * (one_minus_a**2 + 2.0 * a * one_plus_c))
        if a < TRUNCATION_RTOL:
            break
    return total if total.ndim else float(total)


def phi_p_zero(kp: KernelParams) -> float:
    """Peak value phi_p(0) = sum_k phi_hat(k), via the lattice sum."""
    return float(periodic_gaussian(kp, 0.0))
