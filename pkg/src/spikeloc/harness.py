"""Guarantee-verification experiments, parameter sweeps, and the QPE scenario.

Every run produces a machine-readable report.  Reports are deterministic in
(config, seed); wall-clock timings are kept out of the serialized form so
identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import datetime
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .acquisition import (
    NoiseSpec,
    Shots,
    UniformDisk,
    WorstCaseBoost,
    WorstCaseSuppress,
    add_noise,
    sample_periodic,
    shots_budget,
    shots_periodic,
)
from .geometry import PointSet, contains, max_dev_set_to_points, wrap_point
from .localizer import (
    DEFAULT_GRID_DENSITY,
    indicator_periodic,
    indicator_real,
    localize_periodic,
    localize_real,
)
from .measures import (
    InstanceSpec,
    SpikeMeasure,
    fourier_real,
    random_instance,
    validate,
)
from .params import PERIODIC, REAL_LINE, ProblemParams, derive

_U64 = 2**64 - 1


def _seeded(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _U64, *tags]))


@dataclass
class VerificationReport:
    """Outcome of one localization run checked against the guarantees."""

    instance: dict
    setting: str
    noise: dict
    eps_assumed: float
    eps_realized: float
    premises: dict
    premises_violated: bool
    contained: bool
    max_dev_e_to_star: float
    bound: float
    margin_step1: float
    margin_step2: float
    empty_estimate: bool
    passed: bool
    intervals: dict
    seeds: dict
    timings: dict = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> dict:
        d = {
            "instance": self.instance,
            "setting": self.setting,
            "noise": self.noise,
            "eps_assumed": self.eps_assumed,
            "eps_realized": self.eps_realized,
            "premises": self.premises,
            "premises_violated": self.premises_violated,
            "contained": self.contained,
            "max_dev_e_to_star": self.max_dev_e_to_star,
            "bound": self.bound,
            "margin_step1": self.margin_step1,
            "margin_step2": self.margin_step2,
            "empty_estimate": self.empty_estimate,
            "passed": self.passed,
            "intervals": self.intervals,
            "seeds": self.seeds,
        }
        if include_timings:
            d["timings"] = self.timings
        return d

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), sort_keys=True, indent=2) + "\n"


def describe_measure(m: SpikeMeasure) -> dict:
    from .measures import SpikeCluster, UniformBox

    if m.residue is None:
        res: dict = {"kind": "none"}
    elif isinstance(m.residue, UniformBox):
        res = {
            "kind": "box",
            "center": m.residue.center,
            "width": m.residue.width,
            "mass": m.residue.mass,
        }
    elif isinstance(m.residue, SpikeCluster):
        res = {
            "kind": "cluster",
            "spikes": [[s.location, s.weight] for s in m.residue.spikes],
        }
    else:
        raise TypeError(f"unknown residue {m.residue!r}")
    return {
        "domain": m.domain,
        "s": len(m.spikes),
        "spikes": [[s.location, s.weight] for s in m.spikes],
        "residue": res,
    }


def _describe_noise(noise: NoiseSpec) -> dict:
    if noise is None:
        return {"kind": "none"}
    if isinstance(noise, UniformDisk):
        return {"kind": "uniform_disk", "eps": noise.eps, "seed": noise.seed}
    if isinstance(noise, WorstCaseBoost):
        return {"kind": "boost", "eps": noise.eps, "target_x": noise.target_x}
    if isinstance(noise, WorstCaseSuppress):
        return {"kind": "suppress", "eps": noise.eps, "target_x": noise.target_x}
    if isinstance(noise, Shots):
        return {"kind": "shots", "n": noise.n, "seed": noise.seed, "delta": noise.delta}
    raise TypeError(f"unknown noise spec {noise!r}")


def verify_once(
    p: ProblemParams,
    m: SpikeMeasure,
    noise: NoiseSpec,
    setting: str,
    grid_density: float = DEFAULT_GRID_DENSITY,
    window: tuple[float, float] = (-1.0, 1.0),
) -> VerificationReport:
    """Run the full pipeline on one instance and check both guarantees.

    Premise violations (noise above the admissible cap, inadmissible K,
    invalid measure) are recorded, never fatal: out-of-regime behaviour is
    exactly what the failure-onset experiments need to see.
    """
    t0 = time.perf_counter()
    check = validate(m, p)
    dp = derive(p, setting, enforce_k_min=False)

    seeds: dict = {}
    if setting == PERIODIC:
        clean = sample_periodic(m, int(p.K))
        if isinstance(noise, Shots):
            sig, eps_assumed = shots_periodic(m, int(p.K), noise.n, noise.seed, noise.delta)
            seeds["shots"] = noise.seed
        else:
            sig = add_noise(clean, noise)
            eps_assumed = 0.0 if noise is None else noise.eps
            if isinstance(noise, UniformDisk):
                seeds["noise"] = noise.seed
        eps_realized = float(np.max(np.abs(sig.values - clean.values)))
        t1 = time.perf_counter()
        support, trace = localize_periodic(
            sig, p, noise=None, grid_density=grid_density, enforce_k_min=False
        )
        spike_vals = indicator_periodic(sig, dp, m.locations)
    else:
        if isinstance(noise, Shots):
            raise ValueError("shot noise is defined for the periodic setting only")
        eps_assumed = 0.0 if noise is None else noise.eps
        if isinstance(noise, UniformDisk):
            seeds["noise"] = noise.seed
        t1 = time.perf_counter()
        support, trace, sig = localize_real(
            m, p, noise=noise, grid_density=grid_density, window=window,
            return_signal=True,
        )
        eps_realized = float(np.max(np.abs(sig.values - fourier_real(m, sig.k))))
        spike_vals = indicator_real(sig, dp, m.locations, check=False)
    t2 = time.perf_counter()

    premises = {
        "measure_valid": check.passed,
        "eps_within_cap": bool(eps_assumed <= dp.eps_max + 1e-15),
        "noise_within_assumed": bool(eps_realized <= eps_assumed + 1e-12),
    }
    if setting == PERIODIC:
        premises["k_admissible"] = bool(p.K >= dp.k_min)
        premises["k_at_least_3sigma"] = bool(p.K >= 3.0 * dp.sigma)

    star = PointSet.make(m.locations, domain=m.domain)
    is_contained = contains(star, support)
    max_dev = max_dev_set_to_points(support, star)
    margin1 = float(np.min(spike_vals) - dp.threshold)
    margin2 = dp.radius - max_dev
    passed = bool(is_contained and max_dev <= dp.radius)

    return VerificationReport(
        instance=describe_measure(m),
        setting=setting,
        noise=_describe_noise(noise),
        eps_assumed=float(eps_assumed),
        eps_realized=eps_realized,
        premises=premises,
        premises_violated=not all(premises.values()),
        contained=is_contained,
        max_dev_e_to_star=float(max_dev),
        bound=float(dp.radius),
        margin_step1=margin1,
        margin_step2=float(margin2),
        empty_estimate=support.is_empty,
        passed=passed,
        intervals=support.to_dict(),
        seeds=seeds,
        timings={
            "acquire_s": t1 - t0,
            "localize_s": t2 - t1,
            "total_s": time.perf_counter() - t0,
        },
    )


def random_problem(
    seed: int,
    index: int,
    setting: str = PERIODIC,
    s_range: tuple[int, int] = (1, 5),
    gap_range: tuple[float, float] = (0.05, 0.5),
    residue_kinds: tuple[str, ...] = ("none", "box", "cluster"),
) -> tuple[ProblemParams, SpikeMeasure]:
    """Instance generator shared by the verification suites and sweeps.

    Draws a feasible (S, beta, omega) jointly: gap in the requested range
    capped by unit mass, residue mass at least 0.02 whenever a residue is
    requested, and K = max(8, ceil(3 tau) + 1) so the periodic cutoff
    premise always holds.
    """
    rng = _seeded(seed, 7, index)
    s = int(rng.integers(s_range[0], s_range[1] + 1))
    kind = residue_kinds[index % len(residue_kinds)]
    gap_hi = min(gap_range[1], 0.7 / s)
    gap = float(rng.uniform(gap_range[0], max(gap_range[0], gap_hi)))
    beta_lo = gap + (0.02 if kind != "none" else 0.0)
    beta_hi = min(0.92 / s, gap + 0.4)
    beta = float(rng.uniform(beta_lo, max(beta_lo, beta_hi)))
    omega = beta - gap
    c = 12.0 if setting == PERIODIC else 6.0
    tau = math.log(c / gap) / math.pi
    K = max(8, int(math.ceil(3.0 * tau)) + 1)
    eps_max = gap / 3.0 if setting == PERIODIC else gap / 6.0
    p = ProblemParams(K=K, beta=beta, omega=omega, eps=eps_max)
    domain = PERIODIC if setting == PERIODIC else REAL_LINE
    spec = InstanceSpec(s=s, residue=kind, domain=domain)
    m = random_instance(p, spec, seed=int(rng.integers(0, 2**63)))
    return p, m


def adversarial_targets(p: ProblemParams, m: SpikeMeasure, seed: int) -> tuple[float, float]:
    """Stressing noise targets: suppress at a spike, boost just past the
    guaranteed radius from one."""
    rng = _seeded(seed, 11)
    locs = m.locations
    suppress_at = float(locs[rng.integers(0, len(locs))])
    c = 12.0 if m.domain == PERIODIC else 6.0
    radius = math.log(c / (p.beta - p.omega)) / math.pi / p.K
    off = float(locs[rng.integers(0, len(locs))]) + 1.05 * radius * (
        1 if rng.random() < 0.5 else -1
    )
    boost_at = wrap_point(off) if m.domain == PERIODIC else off
    return suppress_at, boost_at


SWEEP_COLUMNS = [
    "gap", "beta", "omega", "k", "k_min", "admissible", "trials", "pass_rate",
    "mean_dev_tau_units", "max_dev_tau_units", "mean_margin_step1", "mean_margin_step2",
]


def sweep(
    base: ProblemParams,
    gaps: list[float],
    trials: int,
    seed: int,
    setting: str = PERIODIC,
    noise_kind: str = "suppress",
    s: int = 2,
) -> list[dict]:
    """Pass rates and deviation statistics as the weight/residue gap varies.

    omega is held at base.omega and beta = omega + gap; K stays at base.K.
    Rows whose K falls below the periodic minimum are flagged inadmissible
    and still run (out of regime) for failure-onset curves.
    """
    rows: list[dict] = []
    for gi, gap in enumerate(gaps):
        beta = base.omega + gap
        eps = gap / 3.0 if setting == PERIODIC else gap / 6.0
        p = ProblemParams(K=base.K, beta=beta, omega=base.omega, eps=eps)
        dp = derive(p, setting, enforce_k_min=False)
        admissible = setting != PERIODIC or p.K >= dp.k_min
        passes, devs, m1s, m2s = [], [], [], []
        for ti in range(trials):
            inst_seed = int(_seeded(seed, 13, gi, ti).integers(0, 2**63))
            domain = PERIODIC if setting == PERIODIC else REAL_LINE
            m = random_instance(
                p, InstanceSpec(s=min(s, int(1.0 / beta)), residue="none", domain=domain),
                seed=inst_seed,
            )
            sup_at, boost_at = adversarial_targets(p, m, inst_seed)
            if noise_kind == "suppress":
                noise: NoiseSpec = WorstCaseSuppress(eps=eps, target_x=sup_at)
            elif noise_kind == "boost":
                noise = WorstCaseBoost(eps=eps, target_x=boost_at)
            elif noise_kind == "uniform":
                noise = UniformDisk(eps=eps, seed=inst_seed)
            elif noise_kind == "none":
                noise = None
            else:
                raise ValueError(f"unknown noise kind {noise_kind!r}")
            rep = verify_once(p, m, noise, setting)
            passes.append(rep.passed)
            devs.append(rep.max_dev_e_to_star / rep.bound)
            m1s.append(rep.margin_step1)
            m2s.append(rep.margin_step2)
        rows.append({
            "gap": gap,
            "beta": beta,
            "omega": base.omega,
            "k": base.K,
            "k_min": dp.k_min if setting == PERIODIC else 0.0,
            "admissible": admissible,
            "trials": trials,
            "pass_rate": sum(passes) / trials,
            "mean_dev_tau_units": float(np.mean(devs)),
            "max_dev_tau_units": float(np.max(devs)),
            "mean_margin_step1": float(np.mean(m1s)),
            "mean_margin_step2": float(np.mean(m2s)),
        })
    return rows


def write_sweep_csv(rows: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([
                f"{r[c]:.17g}" if isinstance(r[c], float) else r[c] for c in SWEEP_COLUMNS
            ])


def qpe_scenario(
    eigs: list[float],
    amps: list[float],
    residue_amp: float = 0.0,
    *,
    k_max: int,
    n_shots: int | None = None,
    eps_target: float | None = None,
    delta: float = 0.01,
    seed: int = 0,
    beta: float | None = None,
    omega: float | None = None,
    residue_model: str = "box",
    grid_density: float = DEFAULT_GRID_DENSITY,
) -> dict:
    """Eigenvalue estimation from phase-estimation style shot data.

    A state with amplitudes `amps` on eigenstates at `eigs` plus an
    orthogonal residue of amplitude `residue_amp` induces the spectral
    measure with weights |c_s|^2 and residue mass |c_res|^2.  Re/Im of each
    Fourier sample are estimated from n +-1 shots (Hadamard-test model);
    the recovered support intervals estimate the eigenvalues.
    """
    eigs_arr = np.asarray(eigs, dtype=float)
    amps_arr = np.asarray(amps, dtype=float)
    if eigs_arr.shape != amps_arr.shape or eigs_arr.ndim != 1 or eigs_arr.size == 0:
        raise ValueError("eigs and amps must be equal-length nonempty 1-d sequences")
    total = float(np.sum(amps_arr**2) + residue_amp**2)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"amplitudes must be normalized: sum of squares is {total!r}")
    if np.any(eigs_arr < -0.5) or np.any(eigs_arr >= 0.5):
        raise ValueError("eigenvalues must lie in [-1/2, 1/2)")
    if (n_shots is None) == (eps_target is None):
        raise ValueError("give exactly one of n_shots or eps_target")

    weights = amps_arr**2
    res_mass = float(residue_amp**2)
    beta = float(np.min(weights)) if beta is None else beta
    omega = res_mass if omega is None else omega
    p = ProblemParams(K=int(k_max), beta=beta, omega=omega, eps=0.0)

    from .measures import Spike, SpikeCluster, UniformBox

    rng = _seeded(seed, 17)
    residue = None
    if res_mass > 0.0:
        if residue_model == "box":
            width = float(rng.uniform(0.05, 0.2))
            center = float(rng.uniform(-0.5, 0.5))
            residue = UniformBox(center=center, width=width, mass=res_mass)
        elif residue_model == "cluster":
            parts = rng.random(3) + 1e-3
            parts = parts / parts.sum() * res_mass
            locs = rng.uniform(-0.5, 0.5, size=3)
            residue = SpikeCluster(
                spikes=tuple(Spike(float(x), float(w)) for x, w in zip(locs, parts))
            )
        else:
            raise ValueError(f"unknown residue model {residue_model!r}")
    m = SpikeMeasure(
        spikes=tuple(Spike(float(x), float(w)) for x, w in zip(eigs_arr, weights)),
        residue=residue,
        domain=PERIODIC,
    )
    check = validate(m, p)

    n = n_shots if n_shots is not None else shots_budget(int(k_max), eps_target, delta)
    rep = verify_once(p, m, Shots(n=n, seed=seed, delta=delta), PERIODIC,
                      grid_density=grid_density)
    out = rep.to_dict()
    out.update({
        "experiment": "qpe",
        "measurement_model": "hadamard_test_pm1",
        "noise_radius_rule": "eps_hat = sqrt(2*log(4*(2K+1)/delta)/n)",
        "eigenvalues": [float(x) for x in eigs_arr],
        "weights": [float(w) for w in weights],
        "residue_mass": res_mass,
        "n_shots": int(n),
        "delta": delta,
        "eps_hat": rep.eps_assumed,
        "noise_within_bound": rep.premises["noise_within_assumed"],
        "conditional_applicable": rep.premises["noise_within_assumed"],
        "validation": list(check.violations),
        "seed": int(seed),
    })
    return out


def save_report(doc: dict | VerificationReport, out_dir, experiment: str, seed: int,
                include_timings: bool = False) -> Path:
    """Write <experiment>-<timestamp>-<seed>.json; contents are timestamp-free."""
    if isinstance(doc, VerificationReport):
        doc = doc.to_dict(include_timings)
    ts = datetime.datetime.now(datetime.timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{experiment}-{ts}-{seed}.json"
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path
