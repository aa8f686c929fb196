"""Command-line front end: gen, run, verify, bench.

Usage:
    selfheal gen    --config gen.cfg    --out traces/
    selfheal run    --config run.cfg    --out results/
    selfheal verify --config run.cfg    --out results/
    selfheal bench  --config bench.cfg  --out bench/

Config files are flat "key = value" lines with '#' comments. The master
seed comes from --seed, else the SELFHEAL_SEED environment variable, else
the config's `seed` key. Exit codes: 0 success (for verify: zero hard
violations), 1 verification found violations, 2 parse/config/I-O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import random
import sys
from pathlib import Path
from statistics import median

from fractions import Fraction

from .adversary import RNG_NAME, STRATEGY_KINDS, StrategySpec, read_trace, write_trace
from .engine import RunConfig, RunState, run
from .families import FAMILY_NAMES, make_family
from .graph import Graph, dump_edge_list, load_edge_list
from .healers import HEALER_NAMES, HaftHealer
from .metrics import (
    HARD_DEGREE_BOUND,
    hard_stretch_bound,
    parse_csv,
    records_to_csv,
    summarize,
)
from .virtual_graph import VirtualGraph


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


def load_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _get_int(cfg: dict, key: str, default: int | None = None) -> int:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing config key {key!r}")
        return default
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"config key {key!r} must be an integer") from None


def _get_float(cfg: dict, key: str, default: float) -> float:
    if key not in cfg:
        return default
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"config key {key!r} must be a number") from None


def _get_bool(cfg: dict, key: str, default: bool) -> bool:
    if key not in cfg:
        return default
    value = cfg[key].lower()
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise ConfigError(f"config key {key!r} must be true or false")


def _strategy_from(cfg: dict, seed: int) -> StrategySpec:
    kind = cfg.get("strategy", "mixed")
    if kind not in STRATEGY_KINDS:
        raise ConfigError(f"unknown strategy {kind!r}; expected one of {STRATEGY_KINDS}")
    return StrategySpec(
        kind=kind,
        p_delete=_get_float(cfg, "p_delete", 0.7),
        insert_degree=_get_int(cfg, "insert_degree", 2),
        seed=seed,
    )


def _initial_graph(cfg: dict, seed: int) -> Graph:
    family = cfg.get("family", "from-file")
    if family == "from-file":
        path = cfg.get("graph")
        if not path:
            raise ConfigError("family from-file needs a 'graph' key")
        return load_edge_list(path)
    if family not in FAMILY_NAMES:
        raise ConfigError(
            f"unknown family {family!r}; expected one of {FAMILY_NAMES + ('from-file',)}"
        )
    n = _get_int(cfg, "n")
    p = _get_float(cfg, "p", 0.15)
    return make_family(family, n, p, random.Random(f"{seed}:family"))


def _write_manifest(out: Path, command: str, cfg: dict, seed: int) -> None:
    manifest = {
        "command": command,
        "parameters": dict(sorted(cfg.items())),
        "seed": seed,
        "rng": {"name": RNG_NAME, "python": platform.python_version()},
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


# -- subcommands ----------------------------------------------------------------


def cmd_gen(cfg: dict, out: Path, seed: int, quiet: bool) -> int:
    """Write an initial graph, a scripted trace, and a manifest."""
    initial = _initial_graph(cfg, seed)
    strategy = _strategy_from(cfg, seed)
    t_max = _get_int(cfg, "T", 32)
    healer = cfg.get("healer", "haft")
    if healer not in HEALER_NAMES:
        raise ConfigError(f"unknown healer {healer!r}")
    # Online strategies see the healed graph, so trace generation replays
    # the loop against the named healer (recorded in the manifest).
    state = run(
        RunConfig(
            initial=initial,
            healer=healer,
            strategy=strategy,
            t_max=t_max,
            seed=seed,
            exact_apsp_cap=0,
            stretch_samples=0,
        )
    )
    out.mkdir(parents=True, exist_ok=True)
    dump_edge_list(initial, out / "graph.edges")
    write_trace(state.events, out / "trace.jsonl")
    _write_manifest(out, "gen", cfg, seed)
    if not quiet:
        print(f"gen: {initial.node_count} nodes, {len(state.events)} events -> {out}")
    return 0


def _run_from_config(cfg: dict, seed: int) -> RunState:
    initial = _initial_graph(cfg, seed)
    healer = cfg.get("healer", "haft")
    if healer not in HEALER_NAMES:
        raise ConfigError(f"unknown healer {healer!r}")
    if "trace" in cfg:
        events = tuple(read_trace(cfg["trace"]))
        strategy = StrategySpec(kind="scripted", events=events, seed=seed)
        t_max = _get_int(cfg, "T", len(events))
    else:
        strategy = _strategy_from(cfg, seed)
        t_max = _get_int(cfg, "T")
    return run(
        RunConfig(
            initial=initial,
            healer=healer,
            strategy=strategy,
            t_max=t_max,
            seed=seed,
            exact_apsp_cap=_get_int(cfg, "exact_apsp_cap", 256),
            stretch_samples=_get_int(cfg, "stretch_samples", 1000),
            dedup_slots=_get_bool(cfg, "dedup_slots", False),
        )
    )


def cmd_run(cfg: dict, out: Path, seed: int, quiet: bool) -> int:
    """Execute a run; write metrics CSV, DOT exports, and a summary."""
    state = _run_from_config(cfg, seed)
    out.mkdir(parents=True, exist_ok=True)
    (out / "metrics.csv").write_text(records_to_csv(state.records), encoding="utf-8")
    live = state.live_graph()
    (out / "live.dot").write_text(live.to_dot("live"), encoding="utf-8")
    if isinstance(state.healer, HaftHealer):
        vg = state.healer.vg
    else:
        vg = VirtualGraph.from_graph(live)
    (out / "virtual.dot").write_text(vg.to_dot("virtual"), encoding="utf-8")
    summary = summarize(state.records)
    payload = {
        "status": state.status,
        "timesteps": len(state.records),
        "warnings": state.warnings,
        "setup_messages": state.setup_messages,
        "healer": cfg.get("healer", "haft"),
        "seed": seed,
        "rng": {"name": RNG_NAME, "python": platform.python_version()},
        "summary": summary.to_dict(),
    }
    (out / "summary.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _write_manifest(out, "run", cfg, seed)
    if not quiet:
        print(
            f"run: {len(state.records)} timesteps, status={state.status}, "
            f"violations={len(summary.violations)} -> {out}"
        )
    return 0


def cmd_verify(cfg: dict, out: Path, seed: int, quiet: bool) -> int:
    """Replay a run and check every invariant level.

    Virtual level: healer state audit (virtual-graph invariants, haft shape,
    simulator assignment). Real level: connectivity, the 4x degree hard
    bound, and the 2*ceil(log2 n') stretch hard bound in exact mode. The
    virtual checks implying the real ones is the point; both are exercised.
    """
    from .engine import start, step
    from .adversary import next_event

    initial = _initial_graph(cfg, seed)
    healer = cfg.get("healer", "haft")
    if healer not in HEALER_NAMES:
        raise ConfigError(f"unknown healer {healer!r}")
    if "trace" in cfg:
        events = tuple(read_trace(cfg["trace"]))
        strategy = StrategySpec(kind="scripted", events=events, seed=seed)
        t_max = _get_int(cfg, "T", len(events))
    else:
        strategy = _strategy_from(cfg, seed)
        t_max = _get_int(cfg, "T")
    config = RunConfig(
        initial=initial,
        healer=healer,
        strategy=strategy,
        t_max=t_max,
        seed=seed,
        exact_apsp_cap=_get_int(cfg, "exact_apsp_cap", 256),
        stretch_samples=_get_int(cfg, "stretch_samples", 1000),
        dedup_slots=_get_bool(cfg, "dedup_slots", False),
    )
    violations: list[str] = []
    state = start(config)
    for _ in range(config.t_max):
        event = next_event(config.strategy, state.live_graph(), state.shadow, state.adversary)
        if event is None:
            break
        step(state, event)
        record = state.records[-1]
        audit = state.healer.audit()
        for issue in audit:
            violations.append(f"t={record.t} state-audit: {issue}")
        if not record.connected:
            violations.append(f"t={record.t} connectivity: live graph disconnected")
        if record.max_degree_ratio > HARD_DEGREE_BOUND:
            violations.append(
                f"t={record.t} degree: ratio {float(record.max_degree_ratio)} > 4"
            )
        if record.stretch_mode == "exact" and record.shadow_nodes > 1:
            bound = hard_stretch_bound(record.shadow_nodes)
            stretch = record.max_stretch
            if stretch is not None and (
                not isinstance(stretch, Fraction) or stretch > bound
            ):
                violations.append(
                    f"t={record.t} stretch: {stretch} > {bound}"
                )
        if state.live_count == 0:
            break
    if "csv" in cfg:
        try:
            text = Path(cfg["csv"]).read_text(encoding="utf-8")
            parse_csv(text)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"metrics CSV unreadable: {exc}") from None
        if text != records_to_csv(state.records):
            violations.append("csv: stored metrics differ from replay")
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "healer": healer,
        "seed": seed,
        "timesteps": len(state.records),
        "status": state.status,
        "violations": violations,
    }
    (out / "verify_report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if not quiet:
        for v in violations:
            print(f"VIOLATION {v}")
        print(f"verify: {len(violations)} violations over {len(state.records)} timesteps")
    return 1 if violations else 0


def cmd_bench(cfg: dict, out: Path, seed: int, quiet: bool, trials_override: int | None) -> int:
    """Sweep (n, healer) points; write a scaling table and log-log slopes."""
    n_list = _int_list(cfg.get("n_list", "64,128,256"))
    healers = _name_list(cfg.get("healers", "haft,rebuild"), HEALER_NAMES)
    trials = trials_override if trials_override is not None else _get_int(cfg, "trials", 3)
    family = cfg.get("family", "random-tree")
    p = _get_float(cfg, "p", 0.15)
    kind = cfg.get("strategy", "clustered")
    rows = []
    touched_by_healer: dict[str, list[tuple[int, float]]] = {h: [] for h in healers}
    for n in n_list:
        t_max = _get_int(cfg, "T", n // 2)
        for healer in healers:
            messages: list[int] = []
            rounds: list[int] = []
            hops: list[int] = []
            touched: list[int] = []
            ratios: list[float] = []
            for trial in range(trials):
                trial_seed = seed + 7919 * trial
                initial = make_family(family, n, p, random.Random(f"{trial_seed}:{n}:family"))
                state = run(
                    RunConfig(
                        initial=initial,
                        healer=healer,
                        strategy=StrategySpec(kind=kind, seed=trial_seed),
                        t_max=t_max,
                        seed=trial_seed,
                        exact_apsp_cap=0,
                        stretch_samples=0,
                    )
                )
                for r in state.records:
                    if r.op != "delete":
                        continue
                    messages.append(r.messages)
                    rounds.append(r.rounds)
                    hops.append(r.max_hops)
                    touched.append(r.touched_count)
                    ratios.append(float(r.max_degree_ratio))
            if messages:
                med_touched = float(median(touched))
                touched_by_healer[healer].append((n, med_touched))
                rows.append(
                    {
                        "n": n,
                        "healer": healer,
                        "trials": trials,
                        "deletions": len(messages),
                        "median_messages": float(median(messages)),
                        "median_rounds": float(median(rounds)),
                        "median_max_hops": float(median(hops)),
                        "median_touched": med_touched,
                        "max_degree_ratio": max(ratios),
                    }
                )
    header = (
        "n,healer,trials,deletions,median_messages,median_rounds,"
        "median_max_hops,median_touched,max_degree_ratio"
    )
    lines = [header]
    for row in rows:
        lines.append(
            f'{row["n"]},{row["healer"]},{row["trials"]},{row["deletions"]},'
            f'{row["median_messages"]},{row["median_rounds"]},'
            f'{row["median_max_hops"]},{row["median_touched"]},{row["max_degree_ratio"]}'
        )
    out.mkdir(parents=True, exist_ok=True)
    (out / "bench.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    slopes = {
        healer: loglog_slope(points) for healer, points in touched_by_healer.items() if points
    }
    (out / "bench_summary.json").write_text(
        json.dumps({"touched_loglog_slopes": slopes}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    _write_manifest(out, "bench", cfg, seed)
    if not quiet:
        for line in lines:
            print(line)
        for healer, slope in sorted(slopes.items()):
            print(f"slope[{healer}] = {slope:.3f}")
    return 0


def loglog_slope(points: list[tuple[int, float]]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    if len(points) < 2:
        return 0.0
    xs = [math.log(x) for x, _ in points]
    ys = [math.log(max(y, 1e-9)) for _, y in points]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    denom = sum((x - mx) ** 2 for x in xs)
    if denom == 0:
        return 0.0
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / denom


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad integer list {text!r}") from None


def _name_list(text: str, allowed: tuple[str, ...]) -> list[str]:
    names = [tok.strip() for tok in text.split(",") if tok.strip()]
    for name in names:
        if name not in allowed:
            raise ConfigError(f"unknown name {name!r}; expected one of {allowed}")
    return names


# -- entry point ------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="selfheal",
        description="Self-healing network simulator: trace generation, runs, "
        "verification, benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("gen", "run", "verify", "bench"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="key = value config file")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="master seed override")
        sp.add_argument("--healer", default=None, help="healer name override")
        sp.add_argument("--trials", type=int, default=None, help="bench trials override")
        sp.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.healer is not None:
            cfg["healer"] = args.healer
        seed = _resolve_seed(args.seed, cfg)
        out = Path(args.out)
        if args.command == "gen":
            return cmd_gen(cfg, out, seed, args.quiet)
        if args.command == "run":
            return cmd_run(cfg, out, seed, args.quiet)
        if args.command == "verify":
            return cmd_verify(cfg, out, seed, args.quiet)
        return cmd_bench(cfg, out, seed, args.quiet, args.trials)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _resolve_seed(flag: int | None, cfg: dict) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("SELFHEAL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"SELFHEAL_SEED must be an integer, got {env!r}") from None
    return _get_int(cfg, "seed", 0)


if __name__ == "__main__":
    sys.exit(main())
