"""Experiment runner: baseline sweep, evolution runs, stats, scene export.

Driven by a JSON config file; every constant of the shipped default config
reproduces the reference experiment setup, so a bare `solartree evolve`
runs the stock GA experiment. Command-line flags override config fields.

Emitted files (all deterministic for a fixed config and master seed):
  baseline.csv            orientation_deg,tilt_deg,watts
  <algo>_runNN_trace.csv  evaluations,avg_fitness,best_fitness
  <algo>_summary.csv      run,best_fitness rows, then average/global rows
  <algo>_mean_trace.csv   evaluations,mean_avg_fitness (across runs)
  <algo>_best_genome.txt  key-value genome with fitness breakdown
  scene.json              oriented plate rectangles plus trunk metadata
  meta.json               scenario echo, calibration constant, seed
CSV floats carry 6 significant digits; the genome file keeps full
precision so a re-parsed genome reproduces its fitness bit-for-bit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import evolution, fitness, scene, stats
from .geometry import MASK_BITS
from .solar import Scenario

ALGORITHMS = ("ga", "es-comma", "es-plus", "ep")

DEFAULT_CONFIG = {
    "scenario": {
        "latitude": 33.957409,
        "longitude": -83.376801,
        "day_of_year": 227,
        "hours": [11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0],
        "tz_offset_hours": 0.0,
        "albedo": 0.2,
    },
    "calibration_target_watts": fitness.FLAT_REFERENCE_WATTS,
    "algorithm": "ga",
    "runs": 30,
    "seed": 2024,
    "out_dir": "results",
    "ga": {},
    "es": {},
    "ep": {},
}

BASELINE_TILTS = (0.0, 15.0, 30.0, 45.0, 60.0)
BASELINE_ORIENTATIONS = (0.0, 90.0, 180.0, 270.0)  # N, E, S, W


def fmt(value: float) -> str:
    """CSV float formatting: 6 significant digits, dot decimal separator."""
    return format(float(value), ".6g")


def load_config(path: str | None) -> dict:
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            user = json.load(fh)
    except OSError as exc:
        raise ValueError(f"config: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config: {path} is not valid JSON: {exc}") from exc
    if not isinstance(user, dict):
        raise ValueError("config: top level must be a JSON object")
    for key, value in user.items():
        if key not in cfg:
            raise ValueError(f"config: unknown field '{key}'")
        if isinstance(cfg[key], dict):
            if not isinstance(value, dict):
                raise ValueError(f"config: '{key}' must be an object")
            for sub, subval in value.items():
                if key == "scenario" and sub not in cfg["scenario"]:
                    raise ValueError(f"config: unknown field 'scenario.{sub}'")
                cfg[key][sub] = subval
        else:
            cfg[key] = value
    return cfg


def scenario_from_config(cfg: dict) -> Scenario:
    s = cfg["scenario"]
    try:
        return Scenario(
            latitude=float(s["latitude"]),
            longitude=float(s["longitude"]),
            day_of_year=int(s["day_of_year"]),
            hours=tuple(float(h) for h in s["hours"]),
            tz_offset_hours=float(s["tz_offset_hours"]),
            albedo=float(s["albedo"]),
        )
    except (TypeError, KeyError) as exc:
        raise ValueError(f"config: scenario field invalid: {exc}") from exc
    # ValueError from Scenario already names the offending field


def engine_for(cfg: dict, algorithm: str):
    """Engine callable and its config object for an algorithm label."""
    try:
        if algorithm == "ga":
            return evolution.ga_run, evolution.GaConfig(**cfg["ga"])
        if algorithm == "ep":
            return evolution.ep_run, evolution.EpConfig(**cfg["ep"])
        if algorithm in ("es-comma", "es-plus"):
            block = dict(cfg["es"])
            block["strategy"] = "comma" if algorithm == "es-comma" else "plus"
            return evolution.es_run, evolution.EsConfig(**block)
    except TypeError as exc:
        raise ValueError(f"config: bad {algorithm} block: {exc}") from exc
    raise ValueError(f"algorithm: unknown label '{algorithm}' (choose from {ALGORITHMS})")


def ensure_out_dir(path_str: str) -> Path:
    out = Path(path_str)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValueError(f"out_dir: cannot create {out}: {exc}") from exc
    return out


def write_meta(out: Path, cfg: dict, calibration: float, extra: dict | None = None) -> None:
    doc = {
        "scenario": cfg["scenario"],
        "calibration_target_watts": cfg["calibration_target_watts"],
        "calibration_constant": calibration,
    }
    if extra:
        doc.update(extra)
    (out / "meta.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_genome_file(path: Path, genome: fitness.Genome, result: fitness.EvalResult) -> None:
    lines = [f"mask = {genome.mask_string()}"]
    for k in range(fitness.N_SLOTS):
        h, t, a = genome.slots[k]
        lines.append(f"slot{k:02d} = {h!r} {t!r} {a!r}")
    lines += [
        f"gross_watts = {result.gross_watts!r}",
        f"conflict_count = {result.conflict_count}",
        f"penalty_watts = {result.penalty_watts!r}",
        f"fitness = {result.fitness!r}",
    ]
    path.write_text("\n".join(lines) + "\n")


def read_genome_file(path) -> fitness.Genome:
    entries = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"genome file: cannot read {path}: {exc}") from exc
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"genome file: malformed line: {line!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    if "mask" not in entries:
        raise ValueError("genome file: missing 'mask' line")
    mask_str = entries["mask"]
    if len(mask_str) != MASK_BITS or set(mask_str) - {"0", "1"}:
        raise ValueError("genome file: mask must be 16 characters of 0/1")
    slots = []
    for k in range(fitness.N_SLOTS):
        key = f"slot{k:02d}"
        if key not in entries:
            raise ValueError(f"genome file: missing '{key}' line")
        parts = entries[key].split()
        if len(parts) != 3:
            raise ValueError(f"genome file: '{key}' needs height tilt azimuth")
        slots.append([float(p) for p in parts])
    return fitness.make_genome(mask_str, slots)


def _write_csv(path: Path, header: str, rows: list[str]) -> None:
    path.write_text("\n".join([header] + rows) + "\n")


def cmd_baseline(args) -> int:
    cfg = load_config(args.config)
    out = ensure_out_dir(args.out or cfg["out_dir"])
    base = scenario_from_config(cfg)
    calibration = fitness.calibrate(base, float(cfg["calibration_target_watts"]))
    scenario = replace(base, calibration=calibration)

    rows = [
        f"{fmt(orientation)},{fmt(tilt)},{fmt(fitness.flat_baseline(scenario, tilt, orientation))}"
        for orientation in BASELINE_ORIENTATIONS
        for tilt in BASELINE_TILTS
    ]
    _write_csv(out / "baseline.csv", "orientation_deg,tilt_deg,watts", rows)
    write_meta(out, cfg, calibration)
    print(f"calibration constant = {calibration!r}")
    print(f"wrote {out / 'baseline.csv'}")
    return 0


def cmd_evolve(args) -> int:
    cfg = load_config(args.config)
    algorithm = args.algo or cfg["algorithm"]
    runs = args.runs if args.runs is not None else int(cfg["runs"])
    if runs < 1:
        raise ValueError("runs: must be at least 1")
    master_seed = args.seed if args.seed is not None else int(cfg["seed"])
    out = ensure_out_dir(args.out or cfg["out_dir"])

    engine, engine_cfg = engine_for(cfg, algorithm)
    base = scenario_from_config(cfg)
    calibration = fitness.calibrate(base, float(cfg["calibration_target_watts"]))
    scenario = replace(base, calibration=calibration)

    traces = []
    for run_idx in range(runs):
        trace = engine(engine_cfg, scenario, seed=master_seed + run_idx)
        rows = [
            f"{evals},{fmt(avg)},{fmt(best)}" for evals, avg, best in trace.checkpoints
        ]
        _write_csv(
            out / f"{algorithm}_run{run_idx:02d}_trace.csv",
            "evaluations,avg_fitness,best_fitness",
            rows,
        )
        traces.append(trace)

    # aggregate from the emitted (6-significant-digit) values so the summary
    # is exactly reproducible from the CSVs alone
    bests_emitted = [float(fmt(t.best_fitness)) for t in traces]
    summary_rows = [f"{i},{fmt(b)}" for i, b in enumerate(bests_emitted)]
    summary_rows.append(f"average,{fmt(np.mean(bests_emitted))}")
    summary_rows.append(f"global,{fmt(np.max(bests_emitted))}")
    _write_csv(out / f"{algorithm}_summary.csv", "run,best_fitness", summary_rows)

    mean_trace = stats.summarize(traces, method=algorithm).averaged_trace
    _write_csv(
        out / f"{algorithm}_mean_trace.csv",
        "evaluations,mean_avg_fitness",
        [f"{evals},{fmt(avg)}" for evals, avg in mean_trace],
    )

    best_run = int(np.argmax(bests_emitted))
    best_genome = traces[best_run].best_genome
    write_genome_file(
        out / f"{algorithm}_best_genome.txt",
        best_genome,
        fitness.evaluate(best_genome, scenario),
    )
    write_meta(
        out,
        cfg,
        calibration,
        extra={"algorithm": algorithm, "runs": runs, "master_seed": master_seed},
    )
    print(f"{algorithm}: {runs} runs -> {out}")
    print(f"average best {fmt(np.mean(bests_emitted))} W, global best {fmt(np.max(bests_emitted))} W")
    return 0


def read_summary_bests(path) -> list[float]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ValueError(f"summary file: cannot read {path}: {exc}") from exc
    if not lines or lines[0] != "run,best_fitness":
        raise ValueError(f"summary file: {path} missing 'run,best_fitness' header")
    bests = []
    for line in lines[1:]:
        label, _, value = line.partition(",")
        if label in ("average", "global"):
            continue
        bests.append(float(value))
    return bests


def cmd_stats(args) -> int:
    bests_a = read_summary_bests(args.summary_a)
    bests_b = read_summary_bests(args.summary_b)
    if len(bests_a) < 2 or len(bests_b) < 2:
        raise ValueError("summary file: need at least 2 runs per summary for a t-test")
    result = stats.t_test_two_tailed(bests_a, bests_b)
    print(f"t = {result.t_statistic!r}")
    print(f"df = {result.degrees_of_freedom!r}")
    print(f"p (two-tailed) = {result.p_value!r}")
    if args.out:
        out = ensure_out_dir(args.out)
        _write_csv(
            out / "t_test.csv",
            "t,df,p_two_tailed",
            [f"{fmt(result.t_statistic)},{fmt(result.degrees_of_freedom)},{fmt(result.p_value)}"],
        )
        print(f"wrote {out / 't_test.csv'}")
    return 0


def cmd_export_scene(args) -> int:
    genome = read_genome_file(args.genome_file)
    built = scene.build_scene(genome)
    out = ensure_out_dir(args.out) if args.out else Path(".")
    path = out / "scene.json"
    scene.write_scene(built, path)
    print(f"wrote {path} ({len(built.plates)} plates)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solartree",
        description="Evolve tree-shaped solar panel layouts and reproduce the experiment suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("baseline", help="flat-panel orientation/tilt sweep with calibration")
    p.add_argument("--config", help="JSON config path (defaults ship the stock setup)")
    p.add_argument("--out", help="output directory (overrides config out_dir)")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("evolve", help="run seeded independent evolution runs")
    p.add_argument("--config", help="JSON config path")
    p.add_argument("--algo", choices=ALGORITHMS, help="algorithm (overrides config)")
    p.add_argument("--runs", type=int, help="number of independent runs")
    p.add_argument("--seed", type=int, help="master seed; run i uses seed+i")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("stats", help="two-tailed Welch t-test between two summaries")
    p.add_argument("summary_a", help="first <algo>_summary.csv")
    p.add_argument("summary_b", help="second <algo>_summary.csv")
    p.add_argument("--out", help="also write t_test.csv here")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export-scene", help="genome file -> 3D scene JSON")
    p.add_argument("genome_file", help="<algo>_best_genome.txt from evolve")
    p.add_argument("--out", help="output directory (default: current)")
    p.set_defaults(func=cmd_export_scene)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
