"""Acceptance gate: the guarantee-level properties of the whole pipeline.

Each test prints one PASS/FAIL line (visible with pytest -s or in the
captured output) and enforces its stated tolerance and runtime budget.
"""

import json
import math
import time

import numpy as np

from spikeloc import (
    KernelParams,
    Shots,
    UniformDisk,
    WorstCaseBoost,
    WorstCaseSuppress,
    add_noise,
    derive_periodic,
    derive_real,
    gaussian,
    indicator_periodic_complex,
    periodic_gaussian,
    periodic_gaussian_fourier,
    periodic_gaussian_theta,
    phi_p_zero,
    qpe_scenario,
    random_problem,
    sample_periodic,
    smoothed_density,
    verify_once,
)
from spikeloc.harness import adversarial_targets

SEED = 20240901


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")


def test_criterion_1_periodic_theorem_suite():
    t0 = time.perf_counter()
    n_instances = 500
    failures = []
    for i in range(n_instances):
        p, m = random_problem(SEED, i, setting="periodic")
        dp = derive_periodic(p)
        suppress_at, boost_at = adversarial_targets(p, m, SEED + i)
        for noise in (WorstCaseBoost(eps=dp.eps_max, target_x=boost_at),
                      WorstCaseSuppress(eps=dp.eps_max, target_x=suppress_at)):
            rep = verify_once(p, m, noise, "periodic")
            if not (rep.contained and rep.max_dev_e_to_star <= rep.bound):
                failures.append((i, noise, rep.max_dev_e_to_star, rep.bound))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 120
    report("1 periodic-theorem-suite", ok,
           f"{n_instances} instances x2 noise modes, {len(failures)} failures, "
           f"{elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 120


def test_criterion_2_real_line_theorem_suite():
    t0 = time.perf_counter()
    n_instances = 200
    failures = []
    for i in range(n_instances):
        p, m = random_problem(SEED + 1, i, setting="real")
        dp = derive_real(p)
        suppress_at, boost_at = adversarial_targets(p, m, SEED + i)
        noise = (WorstCaseSuppress(eps=dp.eps_max, target_x=suppress_at) if i % 2
                 else WorstCaseBoost(eps=dp.eps_max, target_x=boost_at))
        rep = verify_once(p, m, noise, "real", window=(-1.0, 1.0))
        if not (rep.contained and rep.max_dev_e_to_star <= rep.bound):
            failures.append((i, rep.max_dev_e_to_star, rep.bound))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    report("2 real-line-theorem-suite", ok,
           f"{n_instances} instances, quadrature check enforced, "
           f"{len(failures)} failures, {elapsed:.1f}s")
    assert not failures, failures[:5]
    assert elapsed < 300


def test_criterion_3_kernel_bound_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 2)
    sandwich_x = np.linspace(-1.0 / 3.0, 1.0 / 3.0, 10_000)
    mono_x = np.linspace(0.0, 0.5, 10_000)
    violations = 0
    for trial in range(100):
        sigma = float(rng.uniform(0.5, 2.5))
        ratio = 3.0 if trial == 0 else float(rng.uniform(3.0, 20.0))
        kp = KernelParams(sigma=sigma, K=ratio * sigma)
        lower = gaussian(kp, sandwich_x)
        upper = (1.0 + 1e-4) * lower
        val = periodic_gaussian(kp, sandwich_x)
        violations += int(np.any(val < lower) or np.any(val > upper))
        mono = periodic_gaussian(kp, mono_x)
        violations += int(np.any(np.diff(mono) >= 0.0))
        violations += int(phi_p_zero(kp) > (1.0 + 1e-4) * kp.K / kp.sigma)
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 30
    report("3 kernel-bound-suite", ok,
           f"100 widths, sandwich+monotonicity+peak, {violations} violations, "
           f"{elapsed:.1f}s")
    assert violations == 0
    assert elapsed < 30


def test_criterion_4_kernel_oracle_agreement():
    # 1e-12 three-way agreement needs the alternating Fourier route to stay
    # conditioned: half the draws take near-minimal width ratios with x
    # anywhere, half take wider ratios with x inside the kernel core
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 3)
    n = 10_000
    worst = 0.0
    for i in range(n):
        sigma = float(rng.uniform(0.5, 2.5))
        if i % 2:
            kp = KernelParams(sigma=sigma, K=sigma * float(rng.uniform(3.0, 3.4)))
            x = float(rng.uniform(-0.5, 0.5))
        else:
            kp = KernelParams(sigma=sigma, K=sigma * float(rng.uniform(3.0, 10.0)))
            x = float(rng.uniform(-1.2, 1.2)) * sigma / kp.K
        a = periodic_gaussian(kp, x)
        b = periodic_gaussian_theta(kp, x)
        c = periodic_gaussian_fourier(kp, x)
        rel = max(abs(a - b), abs(a - c), abs(b - c)) / abs(a)
        worst = max(worst, rel)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 10
    report("4 kernel-oracle-agreement", ok,
           f"{n} draws, worst relative spread {worst:.2e}, {elapsed:.1f}s")
    assert worst <= 1e-12
    assert elapsed < 10


def test_criterion_5_error_chain_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 4)
    violations = 0
    worst_ratio = 0.0
    for i in range(100):
        p, m = random_problem(SEED + 4, i, setting="periodic")
        dp = derive_periodic(p)
        kp = KernelParams(dp.sigma, float(p.K))
        clean = sample_periodic(m, int(p.K))
        if i % 2:
            noise = UniformDisk(eps=dp.eps_max, seed=SEED + i)
        else:
            noise = WorstCaseBoost(eps=dp.eps_max, target_x=float(rng.uniform(-0.5, 0.5)))
        sig = add_noise(clean, noise)
        x = rng.uniform(-0.5, 0.5, 1000)
        lhs = np.abs(indicator_periodic_complex(sig, dp, x) - smoothed_density(m, kp, x))
        bound = (dp.eps_max + math.exp(-math.pi * dp.sigma**2)) * phi_p_zero(kp)
        violations += int(np.any(lhs > bound))
        worst_ratio = max(worst_ratio, float(lhs.max() / bound))
    elapsed = time.perf_counter() - t0
    ok = violations == 0
    report("5 error-chain-bound", ok,
           f"100 instances x1000 points, worst |error|/bound {worst_ratio:.3f}, "
           f"{elapsed:.1f}s")
    assert violations == 0


def test_criterion_6_qpe_coverage():
    t0 = time.perf_counter()
    eigs = [-0.3, 0.11, 0.4]
    amps = [math.sqrt(0.4), math.sqrt(0.3), math.sqrt(0.2)]
    res_amp = math.sqrt(0.1)
    n_seeds = 200
    unconditional = 0
    conditional_failures = 0
    conditioned = 0
    for seed in range(n_seeds):
        doc = qpe_scenario(
            eigs, amps, res_amp, k_max=8, eps_target=0.1 / 3.0, delta=0.01,
            seed=SEED + seed, beta=0.2, omega=0.1,
            residue_model="box" if seed % 2 else "cluster",
        )
        unconditional += doc["passed"]
        if doc["noise_within_bound"]:
            conditioned += 1
            conditional_failures += not doc["passed"]
    elapsed = time.perf_counter() - t0
    uncond_rate = unconditional / n_seeds
    ok = conditional_failures == 0 and uncond_rate >= 0.97 and elapsed < 180
    report("6 qpe-coverage", ok,
           f"{n_seeds} seeds, conditional failures {conditional_failures}/{conditioned}, "
           f"unconditional rate {uncond_rate:.3f}, {elapsed:.1f}s")
    assert conditional_failures == 0
    assert uncond_rate >= 0.97
    assert elapsed < 180


def test_criterion_7_determinism():
    p, m = random_problem(SEED, 0, setting="periodic")
    dp = derive_periodic(p)
    suppress_at, _ = adversarial_targets(p, m, SEED)
    docs = []
    for _ in range(2):
        rep = verify_once(p, m, WorstCaseSuppress(eps=dp.eps_max, target_x=suppress_at),
                          "periodic")
        docs.append(rep.to_json().encode())
    shot_docs = []
    for _ in range(2):
        rep = verify_once(p, m, Shots(n=2000, seed=SEED), "periodic")
        shot_docs.append(rep.to_json().encode())
    ok = docs[0] == docs[1] and shot_docs[0] == shot_docs[1]
    report("7 determinism", ok, "byte-identical report JSON under repeated runs")
    assert docs[0] == docs[1]
    assert shot_docs[0] == shot_docs[1]
    # sanity: the serialized form is valid JSON with the guarantee fields
    doc = json.loads(docs[0])
    assert {"contained", "max_dev_e_to_star", "bound", "passed"} <= set(doc)
