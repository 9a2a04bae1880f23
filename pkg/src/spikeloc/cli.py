"""Command-line front end.

Subcommands: synth | localize | verify | sweep | qpe.  Each run is driven
by a JSON config (schema-validated, unknown keys rejected) plus repeatable
--set key=value overrides.  Exit codes: 0 success/pass, 1 localization
failure, 2 premise violation, 64 config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .acquisition import (
    PeriodicSignal,
    RealSignal,
    Shots,
    UniformDisk,
    WorstCaseBoost,
    WorstCaseSuppress,
)
from .harness import describe_measure, qpe_scenario, save_report, sweep, verify_once, write_sweep_csv
from .localizer import DEFAULT_GRID_DENSITY, localize_periodic, localize_real
from .measures import InstanceSpec, Spike, SpikeCluster, SpikeMeasure, UniformBox, random_instance
from .params import PERIODIC, REAL_LINE, ProblemParams

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PREMISE = 2
EXIT_CONFIG = 64


class ConfigError(Exception):
    pass


def _check_keys(d: dict, allowed: set[str], where: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object, got {type(d).__name__}")
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def _require(d: dict, keys: set[str], where: str) -> None:
    missing = keys - set(d)
    if missing:
        raise ConfigError(f"missing required key(s) in {where}: {sorted(missing)}")


# ---------------------------------------------------------------- measures

def measure_from_dict(d: dict) -> SpikeMeasure:
    _check_keys(d, {"domain", "s", "spikes", "residue"}, "measure")
    _require(d, {"spikes"}, "measure")
    spikes = tuple(Spike(float(x), float(w)) for x, w in d["spikes"])
    res = d.get("residue", {"kind": "none"})
    kind = res.get("kind", "none") if isinstance(res, dict) else "invalid"
    if kind == "none":
        residue = None
    elif kind == "box":
        _check_keys(res, {"kind", "center", "width", "mass"}, "measure.residue")
        residue = UniformBox(center=float(res["center"]), width=float(res["width"]),
                             mass=float(res["mass"]))
    elif kind == "cluster":
        _check_keys(res, {"kind", "spikes"}, "measure.residue")
        residue = SpikeCluster(
            spikes=tuple(Spike(float(x), float(w)) for x, w in res["spikes"])
        )
    else:
        raise ConfigError(f"unknown residue kind {kind!r}")
    return SpikeMeasure(spikes=spikes, residue=residue, domain=d.get("domain", PERIODIC))


def measure_to_json(m: SpikeMeasure) -> str:
    return json.dumps(describe_measure(m), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- signals

def signal_to_csv(sig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("k,re,im\n")
        for k, v in zip(sig.k, sig.values):
            f.write(f"{k:.17g},{v.real:.17g},{v.imag:.17g}\n")


def signal_to_dict(sig) -> dict:
    d = {
        "setting": PERIODIC if isinstance(sig, PeriodicSignal) else REAL_LINE,
        "K": sig.K,
        "k": [float(k) for k in sig.k],
        "re": [float(v.real) for v in sig.values],
        "im": [float(v.imag) for v in sig.values],
    }
    if isinstance(sig, RealSignal):
        d["h"] = sig.h
    return d


def signal_from_csv(path, setting: str):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ConfigError(f"signal CSV must have columns k,re,im; got {data.shape[1]}")
    return _signal_from_columns(data[:, 0], data[:, 1] + 1j * data[:, 2], setting)


def signal_from_dict(d: dict):
    _check_keys(d, {"setting", "K", "h", "k", "re", "im"}, "signal")
    _require(d, {"setting", "k", "re", "im"}, "signal")
    k = np.asarray(d["k"], dtype=float)
    values = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)
    return _signal_from_columns(k, values, d["setting"])


def _signal_from_columns(k: np.ndarray, values: np.ndarray, setting: str):
    if setting == PERIODIC:
        K = int(round(k[-1]))
        expect = np.arange(-K, K + 1)
        if k.size != 2 * K + 1 or not np.allclose(k, expect):
            raise ConfigError("periodic signal must list k = -K..K in order")
        return PeriodicSignal(K=K, values=values)
    h = float(np.mean(np.diff(k)))
    return RealSignal(K=float(k[-1]), h=h, values=values)


# ---------------------------------------------------------------- config

_PROBLEM_KEYS = {"k", "beta", "omega", "eps"}
_NOISE_KEYS = {"kind", "eps", "target_x", "n", "seed", "delta"}
_INSTANCE_KEYS = {"s", "residue", "min_gap", "cluster_size"}
_SWEEP_KEYS = {"gaps", "trials", "noise_kind", "s"}
_QPE_KEYS = {"eigs", "amps", "residue_amp", "k", "n_shots", "eps_target",
             "delta", "residue_model", "beta", "omega"}
_TOP_KEYS = {"setting", "problem", "instance", "measure", "measure_file",
             "signal_file", "noise", "grid_density", "window", "seed",
             "sweep", "qpe"}


def _problem_from(cfg: dict) -> ProblemParams:
    _require(cfg, {"problem"}, "config")
    d = cfg["problem"]
    _check_keys(d, _PROBLEM_KEYS, "problem")
    _require(d, {"k", "beta", "omega"}, "problem")
    try:
        return ProblemParams(K=d["k"], beta=d["beta"], omega=d["omega"],
                             eps=d.get("eps", 0.0))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid problem parameters: {e}") from e


def _setting_from(cfg: dict) -> str:
    s = cfg.get("setting", PERIODIC)
    if s not in (PERIODIC, REAL_LINE):
        raise ConfigError(f"setting must be 'periodic' or 'real', got {s!r}")
    return s


def _noise_from(cfg: dict, default_seed: int):
    d = cfg.get("noise")
    if d is None:
        return None
    _check_keys(d, _NOISE_KEYS, "noise")
    kind = d.get("kind", "none")
    seed = int(d.get("seed", default_seed))
    if kind == "none":
        return None
    if kind == "uniform":
        _require(d, {"eps"}, "noise")
        return UniformDisk(eps=float(d["eps"]), seed=seed)
    if kind == "boost":
        _require(d, {"eps", "target_x"}, "noise")
        return WorstCaseBoost(eps=float(d["eps"]), target_x=float(d["target_x"]))
    if kind == "suppress":
        _require(d, {"eps", "target_x"}, "noise")
        return WorstCaseSuppress(eps=float(d["eps"]), target_x=float(d["target_x"]))
    if kind == "shots":
        _require(d, {"n"}, "noise")
        return Shots(n=int(d["n"]), seed=seed, delta=float(d.get("delta", 0.01)))
    raise ConfigError(f"unknown noise kind {kind!r}")


def _measure_from(cfg: dict, setting: str, p: ProblemParams, seed: int) -> SpikeMeasure:
    sources = [k for k in ("measure", "measure_file", "instance") if k in cfg]
    if len(sources) != 1:
        raise ConfigError(
            f"exactly one of measure / measure_file / instance required; got {sources}"
        )
    if "measure" in cfg:
        return measure_from_dict(cfg["measure"])
    if "measure_file" in cfg:
        with open(cfg["measure_file"], encoding="utf-8") as f:
            return measure_from_dict(json.load(f))
    d = cfg["instance"]
    _check_keys(d, _INSTANCE_KEYS, "instance")
    _require(d, {"s"}, "instance")
    domain = PERIODIC if setting == PERIODIC else REAL_LINE
    spec = InstanceSpec(
        s=int(d["s"]),
        residue=d.get("residue", "none"),
        domain=domain,
        min_gap=float(d.get("min_gap", 0.0)),
        cluster_size=int(d.get("cluster_size", 3)),
    )
    return random_instance(p, spec, seed)


def _window_from(cfg: dict) -> tuple[float, float]:
    w = cfg.get("window", [-1.0, 1.0])
    if not (isinstance(w, (list, tuple)) and len(w) == 2):
        raise ConfigError(f"window must be [lo, hi], got {w!r}")
    return float(w[0]), float(w[1])


def load_config(path: str, overrides: list[str]) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    for ov in overrides:
        if "=" not in ov:
            raise ConfigError(f"--set needs key=value, got {ov!r}")
        key, raw = ov.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set path {key!r} crosses a non-object")
        node[parts[-1]] = value
    _check_keys(cfg, _TOP_KEYS, "config")
    return cfg


# ---------------------------------------------------------------- commands

def cmd_synth(cfg: dict, out: Path, seed: int) -> int:
    p = _problem_from(cfg)
    setting = _setting_from(cfg)
    if "instance" not in cfg:
        raise ConfigError("synth needs an 'instance' block")
    m = _measure_from({"instance": cfg["instance"]}, setting, p, seed)
    path = out / f"measure-{seed}.json"
    path.write_text(measure_to_json(m), encoding="utf-8")
    print(path)
    return EXIT_OK


def cmd_localize(cfg: dict, out: Path, seed: int) -> int:
    p = _problem_from(cfg)
    setting = _setting_from(cfg)
    noise = _noise_from(cfg, seed)
    density = float(cfg.get("grid_density", DEFAULT_GRID_DENSITY))
    if "signal_file" in cfg:
        for k in ("measure", "measure_file", "instance"):
            if k in cfg:
                raise ConfigError("give either signal_file or a measure source, not both")
        source = signal_from_csv(cfg["signal_file"], setting)
    else:
        source = _measure_from(cfg, setting, p, seed)
    if setting == PERIODIC:
        support, trace = localize_periodic(source, p, noise=noise, grid_density=density)
    else:
        support, trace = localize_real(source, p, noise=noise, grid_density=density,
                                       window=_window_from(cfg))
    ipath = out / f"intervals-{seed}.json"
    ipath.write_text(json.dumps(support.to_dict(), sort_keys=True, indent=2) + "\n",
                     encoding="utf-8")
    tpath = out / f"trace-{seed}.csv"
    trace.to_csv(tpath)
    print(ipath)
    print(tpath)
    return EXIT_OK


def cmd_verify(cfg: dict, out: Path, seed: int) -> int:
    p = _problem_from(cfg)
    setting = _setting_from(cfg)
    noise = _noise_from(cfg, seed)
    m = _measure_from(cfg, setting, p, seed)
    report = verify_once(
        p, m, noise, setting,
        grid_density=float(cfg.get("grid_density", DEFAULT_GRID_DENSITY)),
        window=_window_from(cfg),
    )
    path = save_report(report, out, "verify", seed)
    status = "PASS" if report.passed else "FAIL"
    print(f"verify: {status} contained={report.contained} "
          f"max_dev={report.max_dev_e_to_star:.6g} bound={report.bound:.6g}")
    print(path)
    if report.premises_violated:
        return EXIT_PREMISE
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_sweep(cfg: dict, out: Path, seed: int) -> int:
    p = _problem_from(cfg)
    setting = _setting_from(cfg)
    _require(cfg, {"sweep"}, "config")
    d = cfg["sweep"]
    _check_keys(d, _SWEEP_KEYS, "sweep")
    _require(d, {"gaps", "trials"}, "sweep")
    rows = sweep(p, [float(g) for g in d["gaps"]], int(d["trials"]), seed,
                 setting=setting, noise_kind=d.get("noise_kind", "suppress"),
                 s=int(d.get("s", 2)))
    path = out / f"sweep-{seed}.csv"
    write_sweep_csv(rows, path)
    print(path)
    return EXIT_OK


def cmd_qpe(cfg: dict, out: Path, seed: int) -> int:
    _require(cfg, {"qpe"}, "config")
    d = cfg["qpe"]
    _check_keys(d, _QPE_KEYS, "qpe")
    _require(d, {"eigs", "amps", "k"}, "qpe")
    doc = qpe_scenario(
        [float(x) for x in d["eigs"]],
        [float(a) for a in d["amps"]],
        float(d.get("residue_amp", 0.0)),
        k_max=int(d["k"]),
        n_shots=int(d["n_shots"]) if "n_shots" in d else None,
        eps_target=float(d["eps_target"]) if "eps_target" in d else None,
        delta=float(d.get("delta", 0.01)),
        seed=seed,
        beta=float(d["beta"]) if "beta" in d else None,
        omega=float(d["omega"]) if "omega" in d else None,
        residue_model=d.get("residue_model", "box"),
        grid_density=float(cfg.get("grid_density", DEFAULT_GRID_DENSITY)),
    )
    path = save_report(doc, out, "qpe", seed)
    print(f"qpe: {'PASS' if doc['passed'] else 'FAIL'} n_shots={doc['n_shots']} "
          f"eps_hat={doc['eps_hat']:.6g} noise_within_bound={doc['noise_within_bound']}")
    print(path)
    if doc["premises_violated"]:
        return EXIT_PREMISE
    return EXIT_OK if doc["passed"] else EXIT_FAIL


_COMMANDS = {
    "synth": cmd_synth,
    "localize": cmd_localize,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "qpe": cmd_qpe,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spikeloc",
        description="Dominant-spike support recovery from noisy Fourier data",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        dest="overrides", help="override a config entry (repeatable)")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, args.overrides)
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, out, seed)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        # synth failures are bad requests; pipeline failures are violated
        # admissibility conditions (inadmissible K, unusable signal grid)
        return EXIT_CONFIG if args.command == "synth" else EXIT_PREMISE


if __name__ == "__main__":
    sys.exit(main())
