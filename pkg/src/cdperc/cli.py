"""Command-line harness.

Subcommands: bounds, curve, simulate, explore, oracle, dominance, report.
Exit codes: 0 success, 1 a verification check failed, 2 usage error. Every
emitted artifact embeds its resolved config; `report --replay <artifact>`
re-runs the producing computation and compares. A key=value config file
supplies defaults that explicit flags override; the CDPERC_OUT environment
variable sets the default output directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import artifacts, bounds, dynamics, exploration, mixed
from .clocks import ClockField, derive_seed
from .lattice import FREE_BOX, HYPERCUBIC, LatticeSpec, ProjectionMap

USAGE_ERROR = 2
VERIFY_FAIL = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default already exits 2; keep message
        self.print_usage(sys.stderr)
        raise SystemExit_(message)


class SystemExit_(Exception):
    pass


def _build_parser() -> _Parser:
    p = _Parser(prog="cdperc", description=__doc__)
    p.add_argument("--config", help="key=value defaults file")
    sub = p.add_subparsers(dest="subcommand", required=True)

    b = sub.add_parser("bounds", help="analytic bound verification")
    b.add_argument("action", choices=["verify-theorem1", "theorem3", "sb"])
    b.add_argument("--kappa", type=int, default=10)
    b.add_argument("--d", type=int)
    b.add_argument("--d-max", type=int, default=4000)
    b.add_argument("--c", type=Fraction, default=Fraction(17, 10))
    b.add_argument("--t", type=Fraction)
    b.add_argument("--p", type=Fraction, default=Fraction(1, 2))
    b.add_argument("--dp", type=int, default=2)
    b.add_argument("--floor", type=int, default=4000)
    b.add_argument("--skip-low-dim", action="store_true")
    b.add_argument("--out")

    c = sub.add_parser("curve", help="critical-curve emission")
    c.add_argument("action", choices=["emit", "crossover"])
    c.add_argument("--b-min", type=float, default=0.5)
    c.add_argument("--b-max", type=float, default=1.0)
    c.add_argument("--step", type=float, default=0.005)
    c.add_argument("--site-upper", type=float, default=mixed.WIERMAN_SITE_UPPER)
    c.add_argument("--out")

    s = sub.add_parser("simulate", help="crossing-probability Monte Carlo")
    s.add_argument("--kind", default=HYPERCUBIC)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--boundary", default=FREE_BOX)
    s.add_argument("--kappa", type=int, required=True)
    s.add_argument("--t", type=float, nargs="+", required=True)
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out")

    e = sub.add_parser("explore", help="exploration runs and tallies")
    e.add_argument("--variant", choices=["general", "cubic", "matching-square"],
                   required=True)
    e.add_argument("--d", type=int, default=10)
    e.add_argument("--kappa", type=int, required=True)
    e.add_argument("--t", type=float, required=True)
    e.add_argument("--runs", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--stop-open", type=int, default=10_000)
    e.add_argument("--stop-radius", type=int, default=200)
    e.add_argument("--trace", help="record one trace (first run) to this file")
    e.add_argument("--out")

    o = sub.add_parser("oracle", help="exact small-graph probability")
    o.add_argument("--graph", choices=sorted(dynamics.SMALL_GRAPHS), required=True)
    o.add_argument("--kappa", type=int, required=True)
    o.add_argument("--t", type=Fraction, required=True)
    o.add_argument("--event", required=True, help="edge:<i> or all:<i,j,...>")

    d = sub.add_parser("dominance", help="tally verdicts")
    d.add_argument("--tally", required=True)
    d.add_argument("--s", type=float)
    d.add_argument("--b", type=float)
    d.add_argument("--p", type=float, default=0.5)
    d.add_argument("--confidence", type=float, default=0.99)
    d.add_argument("--out")

    r = sub.add_parser("report", help="summarize or replay an artifact")
    r.add_argument("artifact")
    r.add_argument("--replay", action="store_true")
    return p


def _apply_config_file(parser: _Parser, argv):
    """key=value file applied as defaults; flags still win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    defaults = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit_(f"bad config line {line!r}")
            key, _, val = line.partition("=")
            defaults[key.strip().replace("-", "_")] = val.strip()
    rest = argv[:i] + argv[i + 2:]
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            # defaults apply only to the invoked subcommand's options
            invoked = next((tok for tok in rest if tok in action.choices), None)
            if invoked is None:
                break
            for act in action.choices[invoked]._actions:
                if act.dest not in defaults:
                    continue
                raw = defaults[act.dest]
                try:
                    if act.type is not None:
                        if act.nargs in ("+", "*"):
                            act.default = [act.type(tok) for tok in raw.split()]
                        else:
                            act.default = act.type(raw)
                    else:
                        act.default = raw
                except (ValueError, TypeError) as exc:
                    raise SystemExit_(f"bad config value {act.dest}={raw!r}: {exc}")
                act.required = False
    return rest


# --- row builders (shared by emission and replay) -----------------------------


def _curve_rows(cfg):
    import numpy as np
    grid = np.arange(cfg["b_min"], cfg["b_max"] + cfg["step"] / 2, cfg["step"])
    grid = [min(float(b), 1.0) for b in grid]
    header = ["b", "sc_upper", "hammersley_s", "region"]
    return header, mixed.curve_points(grid, cfg["site_upper"])


def _simulate_rows(cfg, threads: int = 1):
    # threads is deliberately not part of the config: it must not affect values
    spec = LatticeSpec(kind=cfg["kind"], d=int(cfg["d"]),
                       boundary=cfg["boundary"], radius=int(cfg["n"]))
    header = ["kind", "d", "boundary", "kappa", "t", "n", "samples",
              "estimate", "stderr", "seed"]
    ests = dynamics.theta_curve(spec, int(cfg["kappa"]), sorted(cfg["t"]),
                                int(cfg["n"]), int(cfg["samples"]),
                                int(cfg["seed"]), threads=threads)
    rows = [[cfg["kind"], cfg["d"], cfg["boundary"], cfg["kappa"], est.t,
             cfg["n"], cfg["samples"], est.estimate, est.stderr, cfg["seed"]]
            for est in ests]
    return header, rows


def _run_explorations(cfg, trace_path=None):
    tally = exploration.DominanceTally()
    survived = 0
    for i in range(int(cfg["runs"])):
        clocks = ClockField(derive_seed(int(cfg["seed"]), i))
        record = trace_path is not None and i == 0
        if cfg["variant"] == "general":
            _, tally, outcome = exploration.explore_general(
                int(cfg["d"]), int(cfg["kappa"]), float(cfg["t"]), clocks,
                stop_open=int(cfg["stop_open"]),
                stop_radius=int(cfg["stop_radius"]), tally=tally)
        else:
            _, tally, outcome, trace = exploration.explore_planar(
                cfg["variant"], int(cfg["kappa"]), float(cfg["t"]), clocks,
                stop_open=int(cfg["stop_open"]),
                stop_radius=int(cfg["stop_radius"]), tally=tally,
                record_trace=record)
            if record:
                artifacts.save_trace(trace_path, trace, cfg)
        if outcome == exploration.SURVIVED:
            survived += 1
    return tally, survived


def tally_rows(tally: exploration.DominanceTally, runs: int, survived: int):
    header = ["metric", "key", "count"]
    rows = [["runs", "", runs], ["survived", "", survived],
            ["open_trials", "", tally.open_trials],
            ["open_successes", "", tally.open_successes],
            ["activation_trials", "", tally.activation_trials],
            ["activation_successes", "", tally.activation_successes]]
    for m in sorted(tally.planar):
        for k in sorted(tally.planar[m]):
            rows.append(["planar", f"{m}:{k}", tally.planar[m][k]])
    for name in ("rescue_trials", "rescue_successes"):
        src = getattr(tally, name)
        for m in sorted(src):
            rows.append([name, str(m), src[m]])
    return header, rows


def tally_from_rows(rows) -> exploration.DominanceTally:
    tally = exploration.DominanceTally()
    for metric, key, count in rows:
        count = int(count)
        if metric in ("open_trials", "open_successes", "activation_trials",
                      "activation_successes"):
            setattr(tally, metric, count)
        elif metric == "planar":
            m, k = key.split(":")
            tally.planar.setdefault(int(m), {})[int(k)] = count
        elif metric in ("rescue_trials", "rescue_successes"):
            getattr(tally, metric)[int(key)] = count
        elif metric not in ("runs", "survived"):
            raise ValueError(f"unknown tally metric {metric!r}")
    return tally


def _explore_rows(cfg):
    tally, survived = _run_explorations(cfg)
    return tally_rows(tally, int(cfg["runs"]), survived)


def _bounds_doc(cfg):
    c = Fraction(cfg["c"])
    rep = bounds.verify_theorem1(kappa=int(cfg["kappa"]), d_max=int(cfg["d_max"]),
                                 c=c, floor=int(cfg["floor"]),
                                 check_low_dim=not cfg["skip_low_dim"])
    return rep


# --- subcommand drivers ---------------------------------------------------------


def _cmd_bounds(args) -> int:
    if args.action == "verify-theorem1":
        cfg = {"subcommand": "bounds", "action": args.action,
               "kappa": args.kappa, "d_max": args.d_max, "c": str(args.c),
               "floor": args.floor, "skip_low_dim": args.skip_low_dim}
        rep = _bounds_doc(cfg)
        doc = rep.to_dict()
        if args.out:
            artifacts.write_json(args.out, doc, cfg)
        print(json.dumps({"all_pass": rep.all_pass,
                          "sweep_count": rep.sweep_count,
                          "failures": rep.failures}))
        return 0 if rep.all_pass else VERIFY_FAIL
    if args.action == "theorem3":
        t = args.t if args.t is not None else Fraction(62, 100)
        checks = bounds.verify_theorem3_inequalities(t, args.p)
        for ch in checks:
            print(f"{ch['name']}: margin={ch['margin']:.6g} "
                  f"{'holds' if ch['holds'] else 'FAILS'}")
        if args.out:
            artifacts.write_json(args.out, checks,
                                 {"subcommand": "bounds", "action": "theorem3",
                                  "t": str(t), "p": str(args.p)})
        return 0 if all(ch["holds"] for ch in checks) else VERIFY_FAIL
    # sb
    if args.d is None:
        raise SystemExit_("sb requires --d")
    params = bounds.BoundParams(d=args.d, kappa=args.kappa,
                                c=None if args.t is not None else args.c,
                                t=args.t, dp=args.dp)
    s, b = bounds.s_b_of(params)
    print(f"s={float(s)!r} b={float(b)!r}")
    return 0


def _cmd_curve(args) -> int:
    if args.action == "crossover":
        print(repr(mixed.crossover_solve(args.site_upper)))
        return 0
    cfg = {"subcommand": "curve", "action": "emit", "b_min": args.b_min,
           "b_max": args.b_max, "step": args.step,
           "site_upper": args.site_upper}
    header, rows = _curve_rows(cfg)
    out = args.out or "curve.csv"
    path = artifacts.write_csv(out, header, rows, cfg)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _cmd_simulate(args) -> int:
    cfg = {"subcommand": "simulate", "kind": args.kind, "d": args.d,
           "boundary": args.boundary, "kappa": args.kappa, "t": sorted(args.t),
           "n": args.n, "samples": args.samples, "seed": args.seed}
    header, rows = _simulate_rows(cfg, threads=args.threads)
    out = args.out or "theta.csv"
    path = artifacts.write_csv(out, header, rows, cfg)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _cmd_explore(args) -> int:
    cfg = {"subcommand": "explore", "variant": args.variant, "d": args.d,
           "kappa": args.kappa, "t": args.t, "runs": args.runs,
           "seed": args.seed, "stop_open": args.stop_open,
           "stop_radius": args.stop_radius}
    tally, survived = _run_explorations(cfg, trace_path=args.trace)
    header, rows = tally_rows(tally, args.runs, survived)
    out = args.out or "tally.csv"
    path = artifacts.write_csv(out, header, rows, cfg)
    print(f"wrote {path}; survived {survived}/{args.runs}")
    return 0


def _cmd_oracle(args) -> int:
    graph = dynamics.SMALL_GRAPHS[args.graph]
    kind, _, rest = args.event.partition(":")
    if kind == "edge":
        event = dynamics.edge_open_event(int(rest))
    elif kind == "all":
        event = dynamics.all_open_event(int(x) for x in rest.split(","))
    else:
        raise SystemExit_(f"unknown event {args.event!r}")
    prob = dynamics.exact_event_probability(graph, args.kappa, args.t, event)
    print(float(prob))
    return 0


def _cmd_dominance(args) -> int:
    _, header, raw = artifacts.read_csv(args.tally)
    if header != ["metric", "key", "count"]:
        raise SystemExit_(f"{args.tally}: not a tally artifact")
    tally = tally_from_rows(raw)
    rows = exploration.dominance_report(tally, s_threshold=args.s,
                                        b_threshold=args.b, p=args.p,
                                        confidence=args.confidence)
    for r in rows:
        print(f"{r['context']}: freq={r['frequency']:.5f} lcb={r['lcb']:.5f} "
              f"threshold={r['threshold']:.5f} {r['verdict']}")
    if args.out:
        artifacts.write_csv(args.out,
                            ["context", "trials", "frequency", "lcb",
                             "threshold", "verdict"],
                            [[r["context"], r["trials"], r["frequency"],
                              r["lcb"], r["threshold"], r["verdict"]]
                             for r in rows],
                            {"subcommand": "dominance", "tally": args.tally,
                             "s": args.s, "b": args.b, "p": args.p,
                             "confidence": args.confidence})
    return 0


_REPLAYERS = {"curve": _curve_rows, "simulate": _simulate_rows,
              "explore": _explore_rows}


def _cmd_report(args) -> int:
    if args.artifact.endswith(".json"):
        doc = artifacts.read_json(args.artifact)
        cfg, data = doc["config"], doc["data"]
        if not args.replay:
            print(json.dumps({"config": cfg}, sort_keys=True))
            return 0
        if cfg is None or cfg.get("subcommand") != "bounds":
            raise SystemExit_("cannot replay this artifact")
        rep = _bounds_doc(cfg)
        same = rep.to_dict() == data
        print("replay: identical" if same else "replay: MISMATCH")
        return 0 if same else VERIFY_FAIL
    cfg, header, rows = artifacts.read_csv(args.artifact)
    if not args.replay:
        print(json.dumps({"config": cfg, "rows": len(rows)}, sort_keys=True))
        return 0
    if cfg is None or cfg.get("subcommand") not in _REPLAYERS:
        raise SystemExit_("artifact has no replayable config")
    new_header, new_rows = _REPLAYERS[cfg["subcommand"]](cfg)
    fresh = [[artifacts._fmt(x) for x in row] for row in new_rows]
    same = new_header == header and fresh == rows
    print("replay: identical" if same else "replay: MISMATCH")
    return 0 if same else VERIFY_FAIL


_COMMANDS = {"bounds": _cmd_bounds, "curve": _cmd_curve,
             "simulate": _cmd_simulate, "explore": _cmd_explore,
             "oracle": _cmd_oracle, "dominance": _cmd_dominance,
             "report": _cmd_report}


def run(argv) -> int:
    parser = _build_parser()
    try:
        argv = _apply_config_file(parser, list(argv))
        args = parser.parse_args(argv)
        return _COMMANDS[args.subcommand](args)
    except SystemExit_ as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
