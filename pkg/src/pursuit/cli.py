"""``pursuit`` command line.

Exit codes: 0 success / property holds, 1 property violated or refuted,
2 usage or input error, 3 resource budget exceeded. Data goes to stdout,
logs to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import config as _config
from . import generators as gen
from .errors import ContractViolation, DomainError, GenerationError, GeometryError, PolicyFault, PursuitError, ResourceError
from .game import GameConfig
from .graph import load_graph

log = logging.getLogger("pursuit")

JSON_SCHEMA = "pursuit.cli/1"
EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
# deputy offsets along the path by deputy count; 4 is the full formation
DEPUTY_SETS = {4: (-2, -1, 1, 2), 3: (-2, -1, 1), 2: (-1, 1), 1: (1,), 0: ()}


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps({"schema": JSON_SCHEMA, "command": args.command, **payload}, sort_keys=True, default=str))
    else:
        print(text)


def _ints(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated vertex ids, got {s!r}") from None


# -- commands ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "rows", "cols", "q", "p") if getattr(args, k) is not None}
    g = gen.generate(gen.FamilySpec(args.family, params, args.seed))
    if args.subdivide:
        g = gen.subdivide(g, args.subdivide).graph
    if args.line_graph:
        g = gen.line_graph(g)[0]
    text = g.dumps()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        log.info("wrote %s (n=%d, m=%d)", args.output, g.n, g.m)
    else:
        print(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    from .solver import analyze

    g = load_graph(args.graph)
    a = analyze(g, GameConfig(args.k, args.cop_speed, args.robber_speed), budget=args.max_states)
    s = a.summary()
    txt = f"k={args.k}: {'cops win' if a.cops_win else 'robber wins'}"
    if a.cops_win:
        txt += f", placement {list(a.witness)}, capture within {a.witness_value} cop moves"
    txt += f" ({a.state_count} states, backend {a.backend})"
    _emit(args, s, txt)
    return EXIT_OK


def cmd_copnumber(args) -> int:
    from .solver import cop_number

    g = load_graph(args.graph)
    res = cop_number(g, args.max_k, args.cop_speed, args.robber_speed, budget=args.max_states)
    _emit(args, {"cop_number": res.value, "k_max": res.k_max, "exceeds": res.exceeds}, str(res))
    return EXIT_OK


def _cop_policy(name, g, k, args):
    from .copwin import copwin_policy
    from .solver import analyze, optimal_policies

    if name == "optimal":
        return optimal_policies(analyze(g, GameConfig(k), budget=args.max_states))[0]
    if name == "copwin":
        return copwin_policy(g)
    raise DomainError(f"unknown cop policy {name!r}")


def _robber_policy(name, g, k, args):
    from .policy import RandomRobber, StayRobber
    from .solver import analyze, optimal_policies

    if name == "optimal":
        return optimal_policies(analyze(g, GameConfig(k), budget=args.max_states))[1]
    if name == "random":
        return RandomRobber(g, GameConfig(k), seed=args.seed)
    if name == "stay":
        return StayRobber(g, GameConfig(k))
    raise DomainError(f"unknown robber policy {name!r}")


def _write_trace(args, trace) -> None:
    if getattr(args, "trace", None) and trace is not None:
        with open(args.trace, "w") as fh:
            fh.write(trace.dumps() + "\n")
        log.info("trace written to %s", args.trace)


def cmd_simulate(args) -> int:
    from .simulator import play

    g = load_graph(args.graph)
    k = 1 if args.cops == "copwin" else args.k
    cop = _cop_policy(args.cops, g, k, args)
    rob = _robber_policy(args.robber, g, k, args)
    horizon = args.horizon or 4 * g.n * g.n
    tr = play(g, GameConfig(k), cop, rob, horizon)
    _write_trace(args, tr)
    _emit(args, {"captured": tr.captured, "turn": tr.turn, "horizon": horizon}, tr.outcome)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .simulator import Trace, replay, verify_capture, verify_guarding

    if args.what == "trace":
        with open(args.graph) as fh:
            tr = Trace.loads(fh.read())
        try:
            replay(tr)
        except (PolicyFault, ContractViolation) as exc:
            _emit(args, {"valid": False, "reason": str(exc)}, f"invalid: {exc}")
            return EXIT_VIOLATED
        _emit(args, {"valid": True, "outcome": tr.outcome}, f"valid trace, {tr.outcome}")
        return EXIT_OK

    g = load_graph(args.graph)
    if args.what == "guard-npath":
        from .copwin import guard_path_neighborhood

        if not args.path:
            raise DomainError("--path is required for guard-npath")
        P = _ints(args.path)
        D = _ints(args.region) if args.region else list(range(g.n))
        offsets = DEPUTY_SETS[args.deputies]
        a = guard_path_neighborhood(g, P, D, start=args.start, offsets=offsets)
        v = verify_guarding(g, a.policy.cfg, a, a.target, D, budget=args.max_product_states)
        path = v.robber_path()
        _emit(
            args,
            {"valid": v.valid, "states": v.states, "setup_bound": a.setup_bound, "reason": v.reason, "robber_path": path},
            f"{'valid' if v.valid else 'INVALID'}: {1 + len(offsets)} cop(s) guard N[P] after {a.setup_bound} moves"
            + ("" if v.valid else f"; {v.reason}; robber path {path}")
            + f" ({v.states} product states)",
        )
        return EXIT_OK if v.valid else EXIT_VIOLATED

    if args.what == "capture":
        k = 1 if args.cops == "copwin" else args.k
        cop = _cop_policy(args.cops, g, k, args)
        v = verify_capture(g, GameConfig(k), cop, args.turn_bound, budget=args.max_product_states)
        _write_trace(args, v.trace)
        worst = None if v.worst == float("inf") else v.worst
        _emit(
            args,
            {"valid": v.valid, "worst": worst, "turn_bound": v.turn_bound, "states": v.states, "reason": v.reason},
            f"{'valid' if v.valid else 'INVALID'}: worst capture {v.worst} (bound {v.turn_bound}, {v.states} states)",
        )
        return EXIT_OK if v.valid else EXIT_VIOLATED
    raise DomainError(f"unknown verify target {args.what!r}")


def cmd_check(args) -> int:
    from .reductions import check_dd_inclusion, check_line_graph_inequality, check_subdivision_inequality, refute_string

    g = load_graph(args.graph)
    if args.what == "refute-string":
        v = refute_string(g, args.k_budget, budget=args.max_states)
        _emit(args, {"verdict": v.verdict, "bound": v.bound, "note": v.note}, f"{v.verdict} (lower bound {v.bound}; {v.note})")
        return EXIT_VIOLATED if v.refuted else EXIT_OK
    if args.what == "subdivision":
        r = check_subdivision_inequality(g, args.d, budget=args.max_states)
    elif args.what == "linegraph":
        r = check_line_graph_inequality(g, budget=args.max_states)
    elif args.what == "dd":
        r = check_dd_inclusion(g, args.d, budget=args.max_states)
    else:
        raise DomainError(f"unknown check {args.what!r}")
    _emit(args, r.to_dict(), str(r))
    return EXIT_OK if r.holds else EXIT_VIOLATED


def cmd_rep(args) -> int:
    from .filament import load_rep, random_rep, top_sequence, validate

    if args.what == "random":
        rep = random_rep(args.n, args.seed)
        print(rep.dumps())
        return EXIT_OK
    rep = load_rep(args.rep)
    if args.what == "check":
        bad = validate(rep)
        _emit(args, {"valid": not bad, "violations": [str(b) for b in bad]}, "valid" if not bad else "\n".join(map(str, bad)))
        return EXIT_OK if not bad else EXIT_VIOLATED
    bad = validate(rep)
    if bad:
        raise GeometryError("; ".join(map(str, bad[:3])))
    if args.what == "graph":
        g = rep.graph
        if args.json:
            _emit(args, {"graph": g.to_dict()}, "")
        else:
            print(g.dumps())
        return EXIT_OK
    if args.what == "envelope":
        S = _ints(args.subset) if args.subset else range(rep.n)
        tops = top_sequence(rep, S)
        rows = [{"vertex": t.vertex, "lo": str(t.lo), "hi": str(t.hi)} for t in tops]
        _emit(args, {"entries": rows}, "\n".join(f"{r['vertex']}: [{r['lo']}, {r['hi']}]" for r in rows))
        return EXIT_OK
    raise DomainError(f"unknown rep command {args.what!r}")


def cmd_reproduce(args) -> int:
    from .claims import CLAIMS, reproduce

    ids = list(CLAIMS) if args.claim == "all" else [args.claim]
    if any(c not in CLAIMS for c in ids):
        raise DomainError(f"unknown claim {args.claim!r}; choose from {', '.join(CLAIMS)} or all")
    results = [reproduce(c, threads=args.threads) for c in ids]
    if args.json:
        _emit(args, {"results": [r.to_dict() for r in results]}, "")
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATED


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def common_flags(sub: bool) -> argparse.ArgumentParser:
        # subcommand copies must not clobber flags given before the subcommand
        dflt = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--json", action="store_true", default=dflt(False), help="machine-readable output")
        c.add_argument("--config", default=dflt(None), help="key = value budget file")
        c.add_argument("--threads", type=int, default=dflt(os.cpu_count()), help="workers for sweeps")
        c.add_argument("--max-states", type=int, default=dflt(None), help="solver state budget")
        c.add_argument("--max-product-states", type=int, default=dflt(None), help="verifier state budget")
        c.add_argument("-v", "--verbose", action="count", default=dflt(0))
        return c

    common = common_flags(True)

    speeds = argparse.ArgumentParser(add_help=False)
    speeds.add_argument("--cop-speed", type=int, default=1)
    speeds.add_argument("--robber-speed", type=int, default=1)

    p = argparse.ArgumentParser(prog="pursuit", description="Cops-and-robbers workbench", parents=[common_flags(False)])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", parents=[common], help="emit a graph family as JSON")
    s.add_argument("--family", required=True, choices=gen.FAMILIES)
    s.add_argument("--n", type=int)
    s.add_argument("--rows", type=int)
    s.add_argument("--cols", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--p", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--subdivide", type=int, metavar="D", help="replace every edge by a path of length D")
    s.add_argument("--line-graph", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", parents=[common, speeds], help="solve the k-cop game")
    s.add_argument("graph")
    s.add_argument("-k", type=int, default=1)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("copnumber", parents=[common, speeds], help="exact cop number up to --max-k")
    s.add_argument("graph")
    s.add_argument("--max-k", type=int, default=3)
    s.set_defaults(func=cmd_copnumber)

    s = sub.add_parser("simulate", parents=[common], help="play one game")
    s.add_argument("graph")
    s.add_argument("--cops", choices=("optimal", "copwin"), default="optimal")
    s.add_argument("--robber", choices=("optimal", "random", "stay"), default="optimal")
    s.add_argument("-k", type=int, default=1)
    s.add_argument("--horizon", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trace")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify", parents=[common], help="exhaustive verification")
    s.add_argument("what", choices=("guard-npath", "capture", "trace"))
    s.add_argument("graph", help="graph JSON (or trace JSON for 'trace')")
    s.add_argument("--path")
    s.add_argument("--region", help="robber region D (default: all vertices)")
    s.add_argument("--start", type=int)
    s.add_argument("--deputies", type=int, default=4, choices=(0, 1, 2, 3, 4))
    s.add_argument("--cops", choices=("optimal", "copwin"), default="optimal")
    s.add_argument("-k", type=int, default=1)
    s.add_argument("--turn-bound", type=int)
    s.add_argument("--trace")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("check", parents=[common], help="inequality checks and string refutation")
    s.add_argument("what", choices=("subdivision", "linegraph", "dd", "refute-string"))
    s.add_argument("graph")
    s.add_argument("-d", type=int, default=2)
    s.add_argument("--k-budget", type=int, default=4)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("rep", parents=[common], help="filament representations")
    s.add_argument("what", choices=("check", "graph", "envelope", "random"))
    s.add_argument("rep", nargs="?")
    s.add_argument("--subset")
    s.add_argument("--n", type=int, default=6)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_rep)

    s = sub.add_parser("reproduce", parents=[common], help="run an acceptance recipe")
    s.add_argument("claim")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        budgets = _config.load_config(args.config) if args.config else _config.from_env()
        if args.max_states is not None:
            budgets = _config.Budgets(args.max_states, budgets.max_product_states, budgets.time_limit)
        if args.max_product_states is not None:
            budgets = _config.Budgets(budgets.max_states, args.max_product_states, budgets.time_limit)
        _config.set_current(budgets)
        args.max_states = budgets.max_states
        args.max_product_states = budgets.max_product_states
        if args.command == "rep" and args.what != "random" and not args.rep:
            raise DomainError("a representation file is required")
        return args.func(args)
    except ResourceError as exc:
        log.error("%s", exc)
        return EXIT_RESOURCE
    except (DomainError, ContractViolation, GeometryError, GenerationError, PolicyFault, PursuitError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    finally:
        _config.set_current(None)
        log.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
