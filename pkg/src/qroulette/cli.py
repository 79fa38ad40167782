"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Sequence

from .averaging import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    TABLE1_QUANTUM,
    AveragingSpec,
    FixedGamma,
    FourierGrid,
    MonteCarlo,
    SmearedBullet,
    expected_outcome_probabilities,
    figure_series,
    table1_quantum,
)
from .classical import ClassicalConfig, classical_all_alive_round_probability, classical_game
from .errors import ConfigError, QRouletteError
from .game import (
    GameConfig,
    bullet_probability,
    evolve_trace,
    expected_payoffs,
    gamma_from_bullet_probability,
    payoff_sole_survivor,
    payoff_zero_sum,
)
from .statevec import all_outcomes, distribution, format_outcome, parse_outcome
from .verify import run_checks, table1_tolerance

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_PI_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


def tool_version() -> str:
    try:
        return version("qroulette")
    except PackageNotFoundError:
        return "0+unknown"


def parse_angle(text: str) -> float:
    """A float, or a multiple of pi such as ``pi``, ``pi/2``, ``2pi/3``, ``-0.5*pi``."""
    text = text.strip().lower().replace(" ", "")
    match = _PI_RE.match(text)
    if match:
        coef, denom = match.groups()
        value = math.pi * (float(coef) if coef not in ("", "+", "-") else (-1.0 if coef == "-" else 1.0))
        return value / float(denom) if denom else value
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def _float_list(text: str, parse=float) -> list[float]:
    return [parse(tok) for tok in text.split(",") if tok.strip()]


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def manifest(command: str, config: dict[str, Any], seed: int | None = None, method: str | None = None) -> dict:
    return {
        "tool": "qroulette",
        "version": tool_version(),
        "command": command,
        "config": config,
        "seed": seed,
        "method": method,
        "timestamp": _timestamp(),
    }


# ---------------------------------------------------------------- config


def _load_config_file(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - {"players", "rounds", "alpha", "beta", "gammas", "bullet_probs"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def resolve_game(args: argparse.Namespace) -> tuple[GameConfig, list[float] | None]:
    """Merge config file and flags (flags win).

    Returns the game and, when the schedule was given as bullet
    probabilities, those probabilities unconverted.
    """
    cfg = _load_config_file(args.config)
    scale = math.pi / 180 if args.degrees else 1.0

    players = args.players if args.players is not None else cfg.get("players")
    rounds = args.rounds if args.rounds is not None else cfg.get("rounds", 1)
    if players is None:
        raise ConfigError("number of players is required (--players or 'players' in the config)")
    alpha = (args.alpha if args.alpha is not None else float(cfg.get("alpha", 0.0))) * scale
    beta = (args.beta if args.beta is not None else float(cfg.get("beta", 0.0))) * scale

    flag_sources = [x for x in (args.gammas, args.gamma, args.bullet_probs) if x is not None]
    if len(flag_sources) > 1:
        raise ConfigError("give only one of --gammas, --gamma and --bullet-probs")
    probs = None
    if args.gammas is not None:
        gammas = [g * scale for g in args.gammas]
    elif args.gamma is not None:
        gammas = [args.gamma * scale] * (int(players) * int(rounds))
    elif args.bullet_probs is not None:
        probs = list(args.bullet_probs)
    elif "gammas" in cfg and "bullet_probs" in cfg:
        raise ConfigError("config may hold 'gammas' or 'bullet_probs', not both")
    elif "gammas" in cfg:
        gammas = [float(g) * scale for g in cfg["gammas"]]
    elif "bullet_probs" in cfg:
        probs = [float(p) for p in cfg["bullet_probs"]]
    else:
        raise ConfigError("a gamma schedule is required (--gammas, --gamma, --bullet-probs or the config)")
    if probs is not None:
        gammas = [gamma_from_bullet_probability(p) for p in probs]
    return GameConfig(int(players), int(rounds), tuple(gammas), alpha, beta), probs


def game_dict(c: GameConfig) -> dict[str, Any]:
    return {"players": c.n, "rounds": c.m, "alpha": c.alpha, "beta": c.beta, "gammas": list(c.gammas)}


# ---------------------------------------------------------------- output


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def emit(args, meta: dict, result: dict, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    """Write ``result`` as JSON (manifest embedded) or ``rows`` as CSV (manifest alongside)."""
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        text = json.dumps({"manifest": meta, "result": result}, indent=2) + "\n"
    else:
        text = _csv_text(header, rows)
    out = getattr(args, "output", None)
    if not out or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.write_text(text)
    if fmt == "csv":
        Path(str(path) + ".manifest.json").write_text(json.dumps(meta, indent=2) + "\n")


# ---------------------------------------------------------------- commands


def cmd_simulate(args) -> int:
    c, _ = resolve_game(args)
    trace = evolve_trace(c)
    states = trace if args.trace else trace[-1:]
    first_round = 1 if args.trace else c.m
    payoff = None
    if args.payoff == "sole-survivor":
        payoff = payoff_sole_survivor(c.n)
    elif args.payoff == "zero-sum":
        payoff = payoff_zero_sum(c.n)

    rounds_out, rows = [], []
    for k, s in enumerate(states, start=first_round):
        dist = distribution(s)
        entry: dict[str, Any] = {
            "round": k,
            "distribution": {format_outcome(o): p for o, p in dist.items()},
            "amplitudes": {format_outcome(o): [a.real, a.imag] for o, a in zip(all_outcomes(c.n), s.amps)},
        }
        if payoff is not None:
            entry["payoffs"] = expected_payoffs(s, payoff)
        rounds_out.append(entry)
        rows.extend((k, format_outcome(o), p) for o, p in dist.items())

    final = rounds_out[-1]
    result = {"distribution": final["distribution"], "amplitudes": final["amplitudes"]}
    if payoff is not None:
        result["payoffs"] = final["payoffs"]
        result["payoff_scheme"] = args.payoff
    if args.trace:
        result["trace"] = rounds_out
    meta = manifest("simulate", {**game_dict(c), "payoff": args.payoff, "trace": args.trace})
    emit(args, meta, result, ("round", "outcome", "probability"), rows)
    return EXIT_OK


def cmd_average(args) -> int:
    c, _ = resolve_game(args)
    if args.method == "grid":
        k = args.nodes or 2 * c.m * c.n + 1
        method: MonteCarlo | FourierGrid = FourierGrid(k, k)
    else:
        method = MonteCarlo(args.samples, args.seed)
    spec = AveragingSpec(not args.fix_phases, args.randomize_gammas, method)
    outcomes = [parse_outcome(t) for t in args.outcomes.split(",")] if args.outcomes else all_outcomes(c.n)
    est = expected_outcome_probabilities(c, spec, outcomes)
    result = {
        format_outcome(o): {"mean": e.mean, "std_err": e.std_err, "samples_or_nodes": e.samples_or_nodes}
        for o, e in est.items()
    }
    rows = [(format_outcome(o), e.mean, e.std_err, e.samples_or_nodes) for o, e in est.items()]
    cfg = {
        **game_dict(c),
        "randomize_alpha_beta": spec.randomize_alpha_beta,
        "randomize_gammas": spec.randomize_gammas,
        "samples": getattr(method, "samples", None),
        "nodes": getattr(method, "nodes_alpha", None),
    }
    seed = method.seed if isinstance(method, MonteCarlo) else None
    emit(args, manifest("average", cfg, seed, args.method), result, ("outcome", "mean", "std_err", "samples_or_nodes"), rows)
    return EXIT_OK


def cmd_table1(args) -> int:
    players = [args.players] if args.players else [3, 4, 5]
    for n in players:
        if n not in TABLE1_QUANTUM:
            raise ConfigError(f"table 1 covers 3, 4 or 5 players, got {n}")
    result, rows, ok = {}, [], True
    for n in players:
        e = table1_quantum(n, args.samples, args.seed)
        target = TABLE1_QUANTUM[n]
        tol = table1_tolerance(target, e.std_err)
        passed = abs(e.mean - target) <= tol
        ok &= passed
        classical = classical_all_alive_round_probability(n, 0.5)
        result[str(n)] = {
            "estimate": e.mean,
            "std_err": e.std_err,
            "samples": e.samples_or_nodes,
            "target": target,
            "tolerance": tol,
            "classical": classical,
            "status": "PASS" if passed else "FAIL",
        }
        rows.append((n, e.mean, e.std_err, target, tol, classical, "PASS" if passed else "FAIL"))
    for n, mean, se, target, tol, _, status in rows:
        print(f"n={n}  estimate={mean!r}  std_err={se!r}  target={target!r}  tol={tol!r}  {status}")
    if args.output:
        meta = manifest("table1", {"players": players, "samples": args.samples}, args.seed, "mc")
        header = ("players", "estimate", "std_err", "target", "tolerance", "classical", "status")
        emit(args, meta, result, header, rows)
    return EXIT_OK if ok else EXIT_FAIL


FIGURES = {
    1: [(1, 1, 1), (1, 1, 1, 1)],
    2: [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    3: [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
}


def cmd_figures(args) -> int:
    policy = SmearedBullet(args.smeared_reading) if args.gamma_policy == "smeared" else FixedGamma(math.pi / 2)
    tracked = FIGURES[args.figure]
    by_n: dict[int, list] = {}
    for o in tracked:
        by_n.setdefault(len(o), []).append(o)
    series = {n: figure_series(n, args.rounds, outs, policy) for n, outs in by_n.items()}
    rows = []
    for o in tracked:
        for k, per_round in enumerate(series[len(o)], start=1):
            rows.append((k, format_outcome(o), per_round[o].mean))
    rows.sort(key=lambda r: (r[0], tracked.index(parse_outcome(r[1]))))
    result = {format_outcome(o): [r[2] for r in rows if r[1] == format_outcome(o)] for o in tracked}
    cfg = {"figure": args.figure, "rounds": args.rounds, "gamma_policy": args.gamma_policy}
    if args.gamma_policy == "smeared":
        cfg["smeared_reading"] = args.smeared_reading
    emit(args, manifest("figures", cfg, None, "grid"), result, ("round", "outcome", "probability"), rows)
    return EXIT_OK


def cmd_classical(args) -> int:
    c, raw = resolve_game(args)
    probs = tuple(raw) if raw is not None else tuple(bullet_probability(g) for g in c.gammas)
    d = classical_game(ClassicalConfig(c.n, c.m, probs))
    ordered = {format_outcome(o): d.get(o, 0.0) for o in all_outcomes(c.n)}
    rows = [(o, p) for o, p in ordered.items()]
    cfg = {"players": c.n, "rounds": c.m, "bullet_probs": list(probs)}
    emit(args, manifest("classical", cfg), {"distribution": ordered}, ("outcome", "probability"), rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(args.filter)
    if not results:
        raise ConfigError(f"no checks match filter {args.filter!r}")
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"SUMMARY  {passed}/{len(results)} passed")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


# ---------------------------------------------------------------- parser


def _add_game_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with players, rounds, alpha, beta, gammas or bullet_probs")
    p.add_argument("--players", type=int)
    p.add_argument("--rounds", type=int)
    p.add_argument("--alpha", type=parse_angle)
    p.add_argument("--beta", type=parse_angle)
    p.add_argument("--gammas", type=lambda t: _float_list(t, parse_angle), help="comma-separated, rounds*players entries")
    p.add_argument("--gamma", type=parse_angle, help="one angle for every shot")
    p.add_argument("--bullet-probs", type=_float_list, help="comma-separated per-shot bullet probabilities")
    p.add_argument("--degrees", action="store_true", help="read angles in degrees")


def _add_output_flags(p: argparse.ArgumentParser, default_format: str = "json") -> None:
    p.add_argument("--output", "-o", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qroulette", description="n-person quantum Russian roulette simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evolve one game and measure it")
    _add_game_flags(p)
    _add_output_flags(p)
    p.add_argument("--trace", action="store_true", help="include every round")
    p.add_argument("--payoff", choices=("sole-survivor", "zero-sum"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("average", help="average outcome probabilities over random parameters")
    _add_game_flags(p)
    _add_output_flags(p)
    p.add_argument("--method", choices=("mc", "grid"), default="grid")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--nodes", type=int, help="grid nodes per phase (default 2*rounds*players+1)")
    p.add_argument("--outcomes", help="comma-separated bitstrings (default: all)")
    p.add_argument("--randomize-gammas", action="store_true")
    p.add_argument("--fix-phases", action="store_true", help="keep alpha and beta at their given values")
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("table1", help="all-alive probability after two rounds, everything uniform")
    p.add_argument("--players", type=int, choices=(3, 4, 5))
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_output_flags(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("figures", help="per-round series for figures 1-3")
    p.add_argument("--figure", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--rounds", type=int, default=25)
    p.add_argument("--gamma-policy", choices=("half", "smeared"), default="half")
    p.add_argument("--smeared-reading", choices=("game", "round"), default="game")
    _add_output_flags(p, default_format="csv")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("classical", help="exact classical roulette distribution")
    _add_game_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("verify", help="run the reproduction checks")
    p.add_argument("--filter", help="only run checks whose id contains this text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QRouletteError as exc:
        print(f"qroulette: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qroulette: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
