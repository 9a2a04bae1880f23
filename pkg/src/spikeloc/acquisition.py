"""Observed data: exact Fourier samples plus bounded or shot noise.

Noise models either satisfy |y(k) - f_hat(k)| <= eps exactly (the two
worst-case extremizers and the random disk mode) or come with a
high-probability radius eps_hat (the shot model, a Hadamard-test style
+-1 sampler for the real and imaginary parts of each coefficient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import SpikeMeasure, fourier_periodic, fourier_real

_U64 = 2**64 - 1

# seed-stream tags so different consumers of one user seed never collide
_TAG_DISK = 2
_TAG_PROFILE = 3
_TAG_SHOTS = 4


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _U64, *tags]))


@dataclass(frozen=True)
class PeriodicSignal:
    """Values y(k) on the integer grid k = -K..K (length 2K+1)."""

    K: int
    values: np.ndarray

    def __post_init__(self):
        if self.K < 1 or int(self.K) != self.K:
            raise ValueError(f"K must be a positive integer, got {self.K}")
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (2 * self.K + 1,):
            raise ValueError(f"need {2 * self.K + 1} values, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def k(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1, dtype=float)


@dataclass(frozen=True)
class RealSignal:
    """Values y(k) on a uniform grid covering [-K, K] with both endpoints."""

    K: float
    h: float
    values: np.ndarray

    def __post_init__(self):
        if not self.K > 0:
            raise ValueError(f"K must be positive, got {self.K}")
        if not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h}")
        v = np.asarray(self.values, dtype=complex)
        n = int(round(2.0 * self.K / self.h))
        if v.shape != (n + 1,):
            raise ValueError(
                f"grid/value mismatch: h={self.h} over [-K, K] needs {n + 1} values, "
                f"got shape {v.shape}"
            )
        object.__setattr__(self, "values", v)

    @property
    def k(self) -> np.ndarray:
        n = int(round(2.0 * self.K / self.h))
        return np.linspace(-self.K, self.K, n + 1)


def real_grid(K: float, h_target: float) -> np.ndarray:
    """Uniform k grid over [-K, K] with an even number of intervals.

    The spacing is rounded down to divide 2K exactly; an even interval count
    keeps every coarse grid (every other point) a valid grid too, which the
    quadrature convergence check relies on.
    """
    n = int(math.ceil(2.0 * K / h_target))
    if n % 2:
        n += 1
    n = max(n, 2)
    return np.linspace(-K, K, n + 1)


def _check_eps(eps: float) -> None:
    if not (eps >= 0 and math.isfinite(eps)):
        raise ValueError(f"noise bound eps must be a finite nonnegative real, got {eps}")


@dataclass(frozen=True)
class UniformDisk:
    """Independent noise drawn uniformly from the closed eps-disk."""

    eps: float
    seed: int = 0

    def __post_init__(self):
        _check_eps(self.eps)


@dataclass(frozen=True)
class WorstCaseBoost:
    """Phases aligned at target_x: acts as a phantom spike of mass eps there."""

    eps: float
    target_x: float

    def __post_init__(self):
        _check_eps(self.eps)


@dataclass(frozen=True)
class WorstCaseSuppress:
    """Anti-aligned phases at target_x: cancels eps of reconstruction mass there."""

    eps: float
    target_x: float

    def __post_init__(self):
        _check_eps(self.eps)


@dataclass(frozen=True)
class Shots:
    """Hadamard-test sampling: each Re/Im estimated by N +-1 shots."""

    n: int
    seed: int = 0
    delta: float = 0.01

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one shot, got n={self.n}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")


NoiseSpec = UniformDisk | WorstCaseBoost | WorstCaseSuppress | Shots | None


def sample_periodic(m: SpikeMeasure, K: int) -> PeriodicSignal:
    """Noiseless Fourier coefficients on k = -K..K."""
    k = np.arange(-int(K), int(K) + 1)
    return PeriodicSignal(K=int(K), values=fourier_periodic(m, k))


def sample_real(m: SpikeMeasure, K: float, h: float) -> RealSignal:
    """Noiseless Fourier transform on the uniform grid of spacing ~h."""
    k = real_grid(K, h)
    actual_h = float(k[1] - k[0])
    return RealSignal(K=float(K), h=actual_h, values=fourier_real(m, k))


def _disk_noise_periodic(sig: PeriodicSignal, spec: UniformDisk) -> np.ndarray:
    noise = np.empty(2 * sig.K + 1, dtype=complex)
    for j in range(2 * sig.K + 1):
        # per-k substream: parallel and serial sampling agree exactly
        g = _rng(spec.seed, _TAG_DISK, j)
        r = spec.eps * math.sqrt(g.random())
        theta = 2.0 * math.pi * g.random()
        noise[j] = r * complex(math.cos(theta), math.sin(theta))
    return noise


def _profile_noise_real(k: np.ndarray, spec: UniformDisk) -> np.ndarray:
    # A real-line signal is a function of continuous k, so the noise must be
    # one too: independent per-sample draws would change under grid
    # refinement and defeat the quadrature convergence check.  Instead draw
    # a random smooth trigonometric profile, normalized in closed form so
    # |noise(k)| <= eps pointwise for every k.
    g = _rng(spec.seed, _TAG_PROFILE)
    m = 8
    locs = g.uniform(-1.0, 1.0, size=m)
    radii = np.sqrt(g.random(m))
    phases = 2.0 * math.pi * g.random(m)
    coeff = radii * np.exp(1j * phases)
    scale = spec.eps / np.abs(coeff).sum()
    return scale * (coeff[None, :] * np.exp(-2j * math.pi * np.outer(k, locs))).sum(axis=1)


def _shot_values(values: np.ndarray, n: int, seed: int) -> np.ndarray:
    out = np.empty(values.shape, dtype=complex)
    for j, v in enumerate(values):
        re, im = float(v.real), float(v.imag)
        if max(abs(re), abs(im)) > 1.0 + 1e-9:
            raise ValueError(
                f"shot sampling needs |Re|,|Im| <= 1 (unit-mass measure); got {v}"
            )
        g = _rng(seed, _TAG_SHOTS, j)
        p_re = min(max((1.0 + re) / 2.0, 0.0), 1.0)
        p_im = min(max((1.0 + im) / 2.0, 0.0), 1.0)
        mean_re = (2.0 * g.binomial(n, p_re) - n) / n
        mean_im = (2.0 * g.binomial(n, p_im) - n) / n
        out[j] = complex(mean_re, mean_im)
    return out


def add_noise(sig, spec: NoiseSpec):
    """Return a signal of the same shape with the requested perturbation.

    None is the identity.  Both worst-case modes add eps * e^{-2 pi i k x_t},
    with sign +1 (boost) or -1 (suppress): under the e^{+2 pi i k x}
    reconstruction each sample's contribution at x_t is then exactly
    +-eps * phi_hat(k), the extremal aligned/anti-aligned case.
    """
    if spec is None:
        return sig
    k = sig.k
    if isinstance(spec, UniformDisk):
        if isinstance(sig, PeriodicSignal):
            noise = _disk_noise_periodic(sig, spec)
        else:
            noise = _profile_noise_real(k, spec)
    elif isinstance(spec, WorstCaseBoost):
        noise = spec.eps * np.exp(-2j * math.pi * k * spec.target_x)
    elif isinstance(spec, WorstCaseSuppress):
        noise = -spec.eps * np.exp(-2j * math.pi * k * spec.target_x)
    elif isinstance(spec, Shots):
        if not isinstance(sig, PeriodicSignal):
            raise ValueError("shot noise is defined for periodic signals only")
        return PeriodicSignal(K=sig.K, values=_shot_values(sig.values, spec.n, spec.seed))
    else:
        raise TypeError(f"unknown noise spec {spec!r}")
    if isinstance(sig, PeriodicSignal):
        return PeriodicSignal(K=sig.K, values=sig.values + noise)
    return RealSignal(K=sig.K, h=sig.h, values=sig.values + noise)


def hoeffding_radius(K: int, n: int, delta: float = 0.01) -> float:
    """Radius eps_hat with P(max_k |y(k) - f_hat(k)| <= eps_hat) >= 1 - delta.

    Per-component radius sqrt(L/n) with L = log(4(2K+1)/delta), the two
    components combined in quadrature: eps_hat = sqrt(2L/n).  Calibration:
    the joint two-component deviation is asymptotically chi-square with two
    degrees of freedom, giving tail exp(-L) = delta/(4(2K+1)) per frequency
    and at most delta/4 after the union over the 2K+1 frequencies.  The
    empirical coverage test in the suite checks this directly.
    """
    if n < 1:
        raise ValueError("need at least one shot")
    L = math.log(4.0 * (2 * K + 1) / delta)
    return math.sqrt(2.0 * L / n)


def shots_budget(K: int, eps_target: float, delta: float = 0.01) -> int:
    """Smallest shot count with hoeffding_radius(K, n, delta) <= eps_target."""
    if not eps_target > 0:
        raise ValueError("eps_target must be positive")
    L = math.log(4.0 * (2 * K + 1) / delta)
    n = max(1, math.ceil(2.0 * L / eps_target**2))
    while hoeffding_radius(K, n, delta) > eps_target:  # guard against ceil rounding
        n += 1
    return n


def shots_periodic(
    m: SpikeMeasure, K: int, n: int, seed: int, delta: float = 0.01
) -> tuple[PeriodicSignal, float]:
    """Shot-sampled signal plus its high-probability noise radius."""
    clean = sample_periodic(m, K)
    noisy = PeriodicSignal(K=int(K), values=_shot_values(clean.values, n, seed))
    return noisy, hoeffding_radius(int(K), n, delta)
