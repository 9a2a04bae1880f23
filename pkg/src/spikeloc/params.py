"""Problem constants and the derived algorithm parameters.

Everything the localizer needs (kernel width, threshold, admissible noise)
is a closed-form function of the frequency cutoff K, the dominant-weight
floor beta, and the residue-mass cap omega.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

MIN_GAP = 1e-9  # below this, sigma/tau blow up and no experiment is meaningful

REAL_LINE = "real"
PERIODIC = "periodic"


@dataclass(frozen=True)
class ProblemParams:
    """Constants of one recovery problem.

    K      frequency cutoff (any positive real on the line, a positive
           integer in the periodic setting)
    beta   lower bound on dominant spike weights, in (0, 1]
    omega  upper bound on the residue's total mass, in [0, beta)
    eps    assumed bound on the per-frequency measurement noise
    """

    K: float
    beta: float
    omega: float
    eps: float = 0.0

    def __post_init__(self):
        if not self.K > 0:
            raise ValueError(f"K must be positive, got {self.K}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        if not 0 <= self.omega < self.beta:
            raise ValueError(
                f"need 0 <= omega < beta (a residue as heavy as a dominant "
                f"spike is unrecoverable); got omega={self.omega}, beta={self.beta}"
            )
        if self.beta - self.omega < MIN_GAP:
            raise ValueError(
                f"beta - omega = {self.beta - self.omega:g} is below {MIN_GAP:g}; "
                "kernel width diverges"
            )
        if self.eps < 0:
            raise ValueError(f"eps must be nonnegative, got {self.eps}")

    @property
    def gap(self) -> float:
        return self.beta - self.omega


@dataclass(frozen=True)
class DerivedParams:
    """Algorithm parameters fixed in closed form by (K, beta, omega).

    sigma      kernel width parameter; the smoothing kernel has spatial
               scale sigma/K
    tau        localization radius multiplier; guaranteed accuracy is tau/K
    threshold  absolute cutoff applied to the smoothed-reconstruction
               magnitude
    eps_max    largest noise bound the guarantee tolerates
    k_min      smallest admissible K (periodic only, equals 3*tau)
    setting    "real" or "periodic"

    tau == sigma**2 by construction, and exp(-pi*sigma**2) equals
    (beta-omega)/6 on the line, (beta-omega)/12 on the circle.
    """

    sigma: float
    tau: float
    threshold: float
    eps_max: float
    setting: str
    K: float
    k_min: float | None = None

    @property
    def radius(self) -> float:
        """Guaranteed localization radius tau/K."""
        return self.tau / self.K


def _warn_if_noisy(p: ProblemParams, eps_max: float) -> None:
    # out-of-regime eps is allowed (failure-onset studies) but flagged;
    # ulp-scale slack so eps == eps_max never trips after float round-trips
    if p.eps > eps_max * (1.0 + 1e-12):
        warnings.warn(
            f"assumed noise eps={p.eps:g} exceeds the admissible bound "
            f"eps_max={eps_max:g}; guarantees do not apply",
            stacklevel=3,
        )


def derive_real(p: ProblemParams) -> DerivedParams:
    """Derive kernel width, threshold and noise cap for the real-line setting.

    sigma = sqrt(log(6/(beta-omega))/pi), tau = sigma**2,
    threshold = (2*beta+omega)*K/(3*sigma), eps_max = (beta-omega)/6.
    """
    tau = math.log(6.0 / p.gap) / math.pi
    sigma = math.sqrt(tau)
    threshold = (2.0 * p.beta + p.omega) * p.K / (3.0 * sigma)
    eps_max = p.gap / 6.0
    _warn_if_noisy(p, eps_max)
    return DerivedParams(
        sigma=sigma,
        tau=tau,
        threshold=threshold,
        eps_max=eps_max,
        setting=REAL_LINE,
        K=float(p.K),
    )


def derive_periodic(p: ProblemParams, enforce_k_min: bool = True) -> DerivedParams:
    """Derive kernel width, threshold and noise cap for the periodic setting.

    sigma = sqrt(log(12/(beta-omega))/pi), tau = sigma**2,
    threshold = (6*beta+5*omega)/11 * phi_p(0), eps_max = (beta-omega)/3.
    Requires integer K >= 3*tau (K == 3*tau admitted); pass
    enforce_k_min=False to derive parameters for an inadmissible K, e.g.
    when probing out-of-regime behaviour.
    """
    if float(p.K) != int(p.K):
        raise ValueError(f"periodic setting requires integer K, got {p.K}")
    tau = math.log(12.0 / p.gap) / math.pi
    sigma = math.sqrt(tau)
    k_min = 3.0 * tau
    if enforce_k_min and p.K < k_min:
        raise ValueError(
            f"K={p.K:g} is below the minimum admissible cutoff "
            f"3*tau={k_min:.6f} for beta-omega={p.gap:g}"
        )
    from .kernels import KernelParams, phi_p_zero

    phi0 = phi_p_zero(KernelParams(sigma=sigma, K=float(p.K)))
    threshold = (6.0 * p.beta + 5.0 * p.omega) / 11.0 * phi0
    eps_max = p.gap / 3.0
    _warn_if_noisy(p, eps_max)
    return DerivedParams(
        sigma=sigma,
        tau=tau,
        threshold=threshold,
        eps_max=eps_max,
        setting=PERIODIC,
        K=float(p.K),
        k_min=k_min,
    )


def derive(p: ProblemParams, setting: str, enforce_k_min: bool = True) -> DerivedParams:
    if setting == REAL_LINE:
        return derive_real(p)
    if setting == PERIODIC:
        return derive_periodic(p, enforce_k_min=enforce_k_min)
    raise ValueError(f"unknown setting {setting!r}")
