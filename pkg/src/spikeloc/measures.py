"""Ground-truth measures: dominant spikes plus a small residue.

A measure is a probability measure, either on the circle [-1/2, 1/2) or on
the real line, made of S dominant point masses (each weight >= beta) and an
optional residue of total mass <= omega.  Two residue shapes with exact
Fourier transforms are supported: a cluster of sub-threshold spikes and a
uniform box density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .kernels import KernelParams, gaussian, periodic_gaussian
from .params import PERIODIC, REAL_LINE, ProblemParams

MASS_TOL = 1e-12  # slack on unit-mass and cap checks, absorbs serialization round-trips


@dataclass(frozen=True)
class Spike:
    location: float
    weight: float

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError(f"spike weight must be positive, got {self.weight}")
        if not math.isfinite(self.location):
            raise ValueError(f"spike location must be finite, got {self.location}")


@dataclass(frozen=True)
class UniformBox:
    """Uniform density of total mass `mass` on [center - width/2, center + width/2]."""

    center: float
    width: float
    mass: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"box width must be positive, got {self.width}")
        if not self.mass > 0:
            raise ValueError(f"box mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class SpikeCluster:
    """Residue made of point masses, each strictly below the dominant floor."""

    spikes: tuple[Spike, ...]

    def __post_init__(self):
        if not self.spikes:
            raise ValueError("empty spike cluster; use residue=None instead")


Residue = UniformBox | SpikeCluster | None


def _residue_mass(residue: Residue) -> float:
    if residue is None:
        return 0.0
    if isinstance(residue, UniformBox):
        return residue.mass
    return float(sum(s.weight for s in residue.spikes))


@dataclass(frozen=True)
class SpikeMeasure:
    """Dominant spikes + residue; must total unit mass to be valid."""

    spikes: tuple[Spike, ...]
    residue: Residue = None
    domain: str = PERIODIC

    def __post_init__(self):
        if not self.spikes:
            raise ValueError("a measure needs at least one dominant spike")
        if self.domain not in (PERIODIC, REAL_LINE):
            raise ValueError(f"unknown domain {self.domain!r}")

    @property
    def locations(self) -> np.ndarray:
        return np.array([s.location for s in self.spikes], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([s.weight for s in self.spikes], dtype=float)

    @property
    def residue_mass(self) -> float:
        return _residue_mass(self.residue)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum()) + self.residue_mass


@dataclass(frozen=True)
class ValidationResult:
    passed: bool
    violations: tuple[str, ...] = ()


def validate(m: SpikeMeasure, p: ProblemParams) -> ValidationResult:
    """Check the structural conditions; diagnostic, never raises."""
    bad: list[str] = []
    for s in m.spikes:
        if s.weight < p.beta - MASS_TOL:
            bad.append(f"dominant weight {s.weight:g} below floor beta={p.beta:g}")
    rmass = m.residue_mass
    if rmass > p.omega + MASS_TOL:
        bad.append(f"residue mass {rmass:g} exceeds cap omega={p.omega:g}")
    if isinstance(m.residue, SpikeCluster):
        for s in m.residue.spikes:
            if s.weight >= p.beta:
                bad.append(
                    f"residue spike weight {s.weight:g} reaches beta={p.beta:g}; "
                    "it is a dominant spike by definition"
                )
    if abs(m.total_mass - 1.0) > MASS_TOL:
        bad.append(f"total mass {m.total_mass!r} is not 1")
    if m.domain == PERIODIC:
        locs = list(m.locations)
        if isinstance(m.residue, SpikeCluster):
            locs += [s.location for s in m.residue.spikes]
        for x in locs:
            if not -0.5 <= x < 0.5:
                bad.append(f"periodic location {x:g} outside [-1/2, 1/2)")
        if isinstance(m.residue, UniformBox) and m.residue.width > 1.0:
            bad.append(f"periodic box width {m.residue.width:g} exceeds the circle")
    return ValidationResult(passed=not bad, violations=tuple(bad))


def _fourier(m: SpikeMeasure, k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape, dtype=complex)
    for s in m.spikes:
        out += s.weight * np.exp(-2j * math.pi * k * s.location)
    if isinstance(m.residue, SpikeCluster):
        for s in m.residue.spikes:
            out += s.weight * np.exp(-2j * math.pi * k * s.location)
    elif isinstance(m.residue, UniformBox):
        b = m.residue
        # box transform: mass * e^{-2 pi i k c} * sin(pi k w)/(pi k w)
        out += b.mass * np.exp(-2j * math.pi * k * b.center) * np.sinc(k * b.width)
    return out


def fourier_periodic(m: SpikeMeasure, k):
    """Fourier coefficient(s) int e^{-2 pi i x k} dm(x) at integer k."""
    karr = np.asarray(k)
    if not np.all(np.equal(np.mod(karr, 1), 0)):
        raise ValueError("periodic Fourier coefficients need integer k")
    out = _fourier(m, karr)
    return out if out.ndim else complex(out)


def fourier_real(m: SpikeMeasure, k):
    """Fourier transform int e^{-2 pi i x k} dm(x) at real k."""
    out = _fourier(m, k)
    return out if out.ndim else complex(out)


def smoothed_density(m: SpikeMeasure, kp: KernelParams, x):
    """Closed-form kernel-smoothed density (phi * m)(x), periodized on the circle.

    Spikes contribute w * phi_p(x - x_s) (plain phi on the line); a box
    contributes its mass times the averaged kernel CDF difference, summed
    over lattice images in the periodic case.
    """
    x = np.asarray(x, dtype=float)
    kernel = periodic_gaussian if m.domain == PERIODIC else gaussian
    out = np.zeros(x.shape, dtype=float)
    for s in m.spikes:
        out += s.weight * kernel(kp, x - s.location)
    if isinstance(m.residue, SpikeCluster):
        for s in m.residue.spikes:
            out += s.weight * kernel(kp, x - s.location)
    elif isinstance(m.residue, UniformBox):
        b = m.residue
        r = math.sqrt(math.pi) * kp.K / kp.sigma
        js = range(-8, 9) if m.domain == PERIODIC else (0,)
        acc = np.zeros(x.shape, dtype=float)
        for j in js:
            hi = x - b.center + b.width / 2.0 + j
            lo = x - b.center - b.width / 2.0 + j
            acc += 0.5 * (erf(r * hi) - erf(r * lo))
        out += b.mass / b.width * acc
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class InstanceSpec:
    """Recipe for a random ground-truth instance.

    s           number of dominant spikes
    residue     "none", "box" or "cluster"
    domain      "periodic" or "real"
    min_gap     minimum pairwise spike separation (0 allows coincident spikes)
    loc_range   where spike locations are drawn; defaults to the full circle
                (periodic) or (-0.8, 0.8) (real line)
    cluster_size, box_width, residue_frac  shape knobs for the residue
    """

    s: int
    residue: str = "none"
    domain: str = PERIODIC
    min_gap: float = 0.0
    loc_range: tuple[float, float] | None = None
    cluster_size: int = 3
    box_width: tuple[float, float] = (0.02, 0.3)
    residue_frac: tuple[float, float] = (0.3, 0.95)

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("need at least one dominant spike")
        if self.residue not in ("none", "box", "cluster"):
            raise ValueError(f"unknown residue kind {self.residue!r}")


def _draw_locations(rng: np.random.Generator, n: int, lo: float, hi: float,
                    min_gap: float, periodic: bool) -> np.ndarray:
    for _ in range(1000):
        locs = rng.uniform(lo, hi, size=n)
        if min_gap <= 0 or n == 1:
            return locs
        d = np.abs(locs[:, None] - locs[None, :])
        if periodic:
            d = np.minimum(d, 1.0 - d)
        np.fill_diagonal(d, np.inf)
        if d.min() >= min_gap:
            return locs
    raise ValueError(f"could not place {n} spikes with min_gap={min_gap:g}")


def random_instance(p: ProblemParams, spec: InstanceSpec, seed: int) -> SpikeMeasure:
    """Deterministic random measure satisfying all structural conditions.

    Dominant weights are beta plus a random share of the free mass, so the
    weight floor and unit total mass hold exactly by construction.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), 1]))
    s_count = spec.s
    if s_count * p.beta > 1.0 + MASS_TOL:
        raise ValueError(
            f"infeasible: {s_count} spikes of weight >= {p.beta:g} exceed unit mass"
        )
    free = 1.0 - s_count * p.beta

    residue: Residue = None
    res_mass = 0.0
    periodic = spec.domain == PERIODIC
    if spec.loc_range is not None:
        lo, hi = spec.loc_range
    elif periodic:
        lo, hi = -0.5, 0.5
    else:
        lo, hi = -0.8, 0.8

    if spec.residue != "none":
        cap = min(p.omega, free)
        if cap <= MASS_TOL:
            raise ValueError(
                "infeasible: residue requested but no mass is available "
                f"(omega={p.omega:g}, free={free:g})"
            )
        f_lo, f_hi = spec.residue_frac
        res_mass = cap * rng.uniform(f_lo, f_hi)
        if spec.residue == "box":
            w_lo, w_hi = spec.box_width
            width = rng.uniform(w_lo, min(w_hi, 0.9) if periodic else w_hi)
            center = rng.uniform(lo, hi)
            residue = UniformBox(center=center, width=width, mass=res_mass)
        else:
            n = spec.cluster_size
            parts = rng.random(n) + 1e-3
            parts = parts / parts.sum() * res_mass
            locs = rng.uniform(lo, hi, size=n)
            residue = SpikeCluster(
                spikes=tuple(Spike(float(x), float(w)) for x, w in zip(locs, parts))
            )

    # all remaining mass goes to the dominant spikes: floor and unit total
    # then hold exactly, no renormalization needed
    headroom = free - res_mass
    shares = rng.random(s_count)
    shares = shares / shares.sum()
    weights = p.beta + headroom * shares
    locs = _draw_locations(rng, s_count, lo, hi, spec.min_gap, periodic)

    m = SpikeMeasure(
        spikes=tuple(Spike(float(x), float(w)) for x, w in zip(locs, weights)),
        residue=residue,
        domain=spec.domain,
    )
    check = validate(m, p)
    if not check.passed:  # construction is supposed to make this impossible
        raise AssertionError(f"generated instance failed validation: {check.violations}")
    return m
