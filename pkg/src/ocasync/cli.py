"""Command-line front end.

Every subcommand reads an automaton (a file path, or a built-in corpus name),
dispatches to the library, and writes exactly one JSON document to stdout.
Exit codes: 0 completed (including negative verdicts), 1 malformed input,
2 resource budget exceeded, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bignum, corpus, lps, mc, oracle, periodicity
from .errors import BudgetExceededError, FormulaSyntaxError, OcaSyntaxError
from .formula import Kind, parse_formula, pretty, subformulas
from .oca import (
    Configuration, Oca, loads, oca_to_json, parse_configuration, validate,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_INTERNAL = 3


def _load_oca(spec: str) -> Oca:
    if spec.startswith("corpus:"):
        return corpus.load(spec[len("corpus:"):])
    path = Path(spec)
    if path.exists():
        return loads(path.read_text())
    if spec in corpus.names():
        return corpus.load(spec)
    raise OcaSyntaxError(f"no such file or corpus automaton: {spec}")


def _parse_mode(text: str):
    if text in ("paper", "empirical"):
        return text, None
    if text.startswith("supplied:"):
        t_str, _, p_str = text[len("supplied:"):].partition(",")
        try:
            return "supplied", periodicity.TpPair(int(t_str), int(p_str))
        except ValueError:
            raise OcaSyntaxError(f"malformed supplied pair in {text!r}") from None
    raise OcaSyntaxError(f"unknown mode {text!r}; use paper|supplied:t,p|empirical")


def _parse_caps(text: str) -> tuple[int, int]:
    try:
        a, _, b = text.partition(",")
        return int(a), int(b)
    except ValueError:
        raise OcaSyntaxError(f"malformed caps {text!r}; use counterCap,levelCap") from None


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _ok(command: str, data: dict) -> int:
    _emit({"command": command, "ok": True, "data": data})
    return EXIT_OK


def _fail(command: str, kind: str, message: str, extra: dict | None = None) -> int:
    err = {"kind": kind, "message": message}
    if extra:
        err.update(extra)
    _emit({"command": command, "ok": False, "error": err})
    return {"input": EXIT_INPUT, "budget": EXIT_BUDGET}.get(kind, EXIT_INTERNAL)


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_validate(args) -> int:
    oca = _load_oca(args.oca)
    diags = validate(oca)
    if diags:
        return _fail("validate", "input", "automaton invalid",
                     {"diagnostics": diags})
    return _ok("validate", {"diagnostics": [], "automaton": oca_to_json(oca)})


def _apply_job_file(args) -> None:
    """Fill unset flags from a JSON job description."""
    doc = json.loads(Path(args.job).read_text())
    if not isinstance(doc, dict):
        raise OcaSyntaxError("job file must hold a JSON object")
    known = {"oca", "formula", "init", "mode", "caps", "b", "budget", "mineVCap"}
    unknown = set(doc) - known
    if unknown:
        raise OcaSyntaxError(f"unknown job keys {sorted(unknown)}")
    for key, attr in [
        ("oca", "oca"), ("formula", "formula"), ("init", "init"),
        ("mode", "mode"), ("caps", "caps"), ("b", "b"),
        ("budget", "budget"), ("mineVCap", "mine_v_cap"),
    ]:
        if key in doc and getattr(args, attr, None) in (None, _unset_defaults.get(attr)):
            setattr(args, attr, doc[key])


_unset_defaults = {"mode": "empirical", "caps": "60,200"}


def _cmd_check(args) -> int:
    if args.job:
        _apply_job_file(args)
    if not args.oca or not args.formula or not args.init:
        raise OcaSyntaxError("check needs an automaton, a formula, and an init "
                             "(from flags or a job file)")
    oca = _load_oca(args.oca)
    f = parse_formula(args.formula)
    init = parse_configuration(oca, args.init)
    mode, supplied = _parse_mode(args.mode)
    result = mc.check_oca(
        oca, f, init, mode,
        supplied=supplied,
        caps=_parse_caps(args.caps),
        b_override=args.b,
        node_budget=args.budget,
        mine_v_cap=args.mine_v_cap,
    )
    return _ok("check", result.to_json())


def _cmd_sat_sets(args) -> int:
    oca = _load_oca(args.oca)
    f = parse_formula(args.formula)
    mode, supplied = _parse_mode(args.mode)
    result = mc.check_oca(
        oca, f, Configuration(0, 0), mode,
        supplied=supplied,
        caps=_parse_caps(args.caps),
        b_override=args.b,
        node_budget=args.budget,
        mine_v_cap=args.mine_v_cap,
    )
    return _ok("sat-sets", {
        "formula": pretty(f),
        "perState": {s: u.to_json() for s, u in sorted(result.per_state.items())},
        "constantsUsed": result.constants_used,
        "caveats": result.caveats,
    })


def _cmd_constants(args) -> int:
    oca = _load_oca(args.oca)
    f = parse_formula(args.formula)
    table = []
    pairs: dict = {}
    bundle_doc = None
    for g in subformulas(f):
        if g.kind is Kind.UE:
            return _fail("constants", "input",
                         "the constant recursion covers UA but not UE")
        if g.kind is Kind.UA:
            (t1, p1), (t2, p2) = (pairs[c] for c in g.children)
            bundle = periodicity.ua_constants(
                oca.n_states,
                prev_t=bignum.maximum(t1, t2),
                prev_p=bignum.lcm(p1, p2),
                b_override=args.b,
            )
            pairs[g] = bundle.pair
            bundle_doc = bundle.to_json()
        else:
            pairs[g] = periodicity.ctl_constants(
                g.kind, [pairs[c] for c in g.children], oca.n_states
            )
        t, p = pairs[g]
        table.append({
            "formula": pretty(g),
            "t": bignum.to_jsonable(t),
            "p": bignum.to_jsonable(p),
        })
    return _ok("constants", {
        "recursion": table,
        "bundle": bundle_doc,
        "states": oca.n_states,
    })


def _cmd_oracle(args) -> int:
    oca = _load_oca(args.oca)
    f = parse_formula(args.formula)
    init = parse_configuration(oca, args.init)
    verdict = oracle.eval_bounded(oca, init, f, args.counter_cap, args.level_cap)
    return _ok("oracle", {
        "formula": pretty(f),
        "init": args.init,
        "verdict": verdict.value,
        "counterCap": args.counter_cap,
        "levelCap": args.level_cap,
    })


def _cmd_mine_period(args) -> int:
    oca = _load_oca(args.oca)
    f = parse_formula(args.formula)
    state = oca.state_index(args.state)
    pair, row = oracle.mine_period(
        oca, f, state, args.v_cap, (args.counter_cap, args.level_cap)
    )
    return _ok("mine-period", {
        "formula": pretty(f),
        "state": args.state,
        "pair": {"t": pair.t, "p": pair.p} if pair else None,
        "verdicts": [v.value for v in row],
    })


def _cmd_cross_check(args) -> int:
    oca = _load_oca(args.oca)
    f = parse_formula(args.formula)
    mode, supplied = _parse_mode(args.mode)
    inits = [parse_configuration(oca, s) for s in args.init]
    report = oracle.cross_check(
        oca, f, inits, mode, _parse_caps(args.caps), supplied=supplied,
    )
    doc = report.to_json(oca)
    return _ok("cross-check", doc)


def _cmd_check_lemma11(args) -> int:
    oca = _load_oca(args.oca)
    bundle = periodicity.ua_constants(
        oca.n_states, prev_t=args.prev_t, prev_p=args.prev_p, b_override=args.b
    )
    report = oracle.check_shift_periodicity(
        oca, bundle,
        counters=args.counter or None,
        level_cap=args.level_cap,
        counter_cap=args.counter_cap,
    )
    return _ok("check-lemma11", report.to_json(oca))


def _cmd_lps(args) -> int:
    oca = _load_oca(args.oca)
    src = oca.state_index(args.src)
    dst = oca.state_index(args.dst)
    schemes = []
    start = parse_configuration(oca, args.start) if args.start else None
    for scheme in lps.enumerate_lps(oca, src, dst, args.flat, args.size):
        if len(schemes) >= args.max_schemes:
            break
        row = {
            "alpha0": list(scheme.alpha0),
            "segments": [
                {"beta": list(b), "alpha": list(a)} for b, a in scheme.segments
            ],
            "flatLength": scheme.flat_length,
            "size": scheme.size,
        }
        if start is not None and args.target_length is not None:
            reach = lps.shaped_reach(oca, scheme, start, args.target_length, args.exp_cap)
            reached = []
            for cfg in sorted(reach):
                exps = lps.shaped_witness_exponents(
                    oca, scheme, start, cfg, args.target_length, args.exp_cap
                )
                slopes = (
                    {str(k): v for k, v in sorted(
                        lps.analyze_cycle_repetitions(oca, scheme, list(exps)).items()
                    )} if exps is not None else {}
                )
                reached.append({
                    "config": f"{oca.state_names[cfg.state]},{cfg.counter}",
                    "exponents": list(exps) if exps is not None else None,
                    "slopeRepetitions": slopes,
                })
            row["reached"] = reached
        schemes.append(row)
    return _ok("lps", {
        "from": args.src, "to": args.dst,
        "flatLenBound": args.flat, "sizeBound": args.size,
        "schemes": schemes,
    })


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ocasync",
        description="Synchronized branching-time model checking over one-counter automata",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, formula=True, init=False, mode=False, required=True):
        p.add_argument("--oca", required=required,
                       help="automaton file (text or JSON) or corpus name")
        if formula:
            p.add_argument("--formula", required=required)
        if init:
            p.add_argument("--init", required=required,
                           help="initial configuration state,counter")
        if mode:
            p.add_argument("--mode", default="empirical",
                           help="paper | supplied:t,p | empirical")
            p.add_argument("--caps", default="60,200", help="counterCap,levelCap")
            p.add_argument("--b", type=int, default=None,
                           help="override the path-scheme bound for paper constants")
            p.add_argument("--budget", type=int, default=None,
                           help="node budget for the unfolding")
            p.add_argument("--mine-v-cap", type=int, default=None)

    p = sub.add_parser("check", help="decide a formula at an initial configuration")
    common(p, init=True, mode=True, required=False)
    p.add_argument("--job", default=None,
                   help="JSON job file supplying oca/formula/init/mode defaults")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("sat-sets", help="per-state satisfaction sets of a formula")
    common(p, mode=True)
    p.set_defaults(fn=_cmd_sat_sets)

    p = sub.add_parser("constants", help="threshold/period recursion and constant bundle")
    common(p)
    p.add_argument("--b", type=int, default=None)
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("oracle", help="three-valued brute-force evaluation")
    common(p, init=True)
    p.add_argument("--counter-cap", type=int, default=60)
    p.add_argument("--level-cap", type=int, default=200)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("mine-period", help="empirically mine a threshold/period pair")
    common(p)
    p.add_argument("--state", required=True)
    p.add_argument("--v-cap", type=int, default=30)
    p.add_argument("--counter-cap", type=int, default=60)
    p.add_argument("--level-cap", type=int, default=200)
    p.set_defaults(fn=_cmd_mine_period)

    p = sub.add_parser("cross-check", help="checker vs oracle, per initial configuration")
    common(p, mode=True)
    p.add_argument("--init", action="append", required=True,
                   help="initial configuration state,counter (repeatable)")
    p.set_defaults(fn=_cmd_cross_check)

    p = sub.add_parser("check-lemma11",
                       help="audit level-shift periodicity at a scaled-down bundle")
    common(p, formula=False)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--prev-t", type=int, default=0)
    p.add_argument("--prev-p", type=int, default=1)
    p.add_argument("--counter", action="append", type=int,
                   help="audited counter values (default: derived from the bundle)")
    p.add_argument("--level-cap", type=int, default=None)
    p.add_argument("--counter-cap", type=int, default=None)
    p.set_defaults(fn=_cmd_check_lemma11)

    p = sub.add_parser("lps", help="enumerate path schemes and shaped reachability")
    common(p, formula=False)
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--flat", type=int, default=4)
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--start", default=None, help="configuration state,counter")
    p.add_argument("--target-length", type=int, default=None)
    p.add_argument("--exp-cap", type=int, default=32)
    p.add_argument("--max-schemes", type=int, default=50)
    p.set_defaults(fn=_cmd_lps)

    p = sub.add_parser("validate", help="check automaton invariants")
    common(p, formula=False)
    p.set_defaults(fn=_cmd_validate)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        return args.fn(args)
    except (OcaSyntaxError, FormulaSyntaxError, ValueError, KeyError) as exc:
        return _fail(command, "input", str(exc))
    except BudgetExceededError as exc:
        return _fail(command, "budget", str(exc), {
            "required": getattr(exc, "required", None),
            "budget": getattr(exc, "budget", None),
        })
    except Exception as exc:  # noqa: BLE001 -- exit code 3 is the contract
        return _fail(command, "internal", f"{type(exc).__name__}: {exc}")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
