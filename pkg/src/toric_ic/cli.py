"""Command-line interface: fan validation, Betti numbers, cohomology tables,
duality reports, and a deterministic self-check suite.

Exit codes: 0 success, 2 parse/usage error, 3 fan-axiom failure,
4 incomplete-fan precondition, 5 property failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from .cohom import (
    JOutOfRange,
    NotSimplicial,
    gamma_table,
    generalized_h_vector,
    h_vector_oracle,
    ih_betti,
    omega_betti,
    serre_duality_report,
)
from .fan import Fan, FanError, fan_from_json
from .gem import (
    FanNotComplete,
    dualize_D,
    dualize_Dhat_gamma,
    gamma,
    is_gem_quasi_iso,
    shallow_resolve,
)
from .ic import (
    InvalidPerversity,
    Perversity,
    build_ic,
    duality_pairing_check,
    support_box,
    verify_conditions,
)
from .randgen import random_gem_complex

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID_FAN = 3
EXIT_INCOMPLETE = 4
EXIT_PROPERTY = 5

_PRESETS = ("middle", "top", "bottom")


def _thread_cap() -> int:
    """Parallelism cap from TORIC_IC_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("TORIC_IC_THREADS", "1")))
    except ValueError:
        return 1


def _run_checks(checks):
    """Run (name, thunk) pairs, optionally across threads; returns the name
    of the first failing check (by list order), or None."""
    cap = _thread_cap()
    if cap == 1:
        for name, thunk in checks:
            if not thunk():
                return name
        return None
    with ThreadPoolExecutor(max_workers=cap) as pool:
        results = list(pool.map(lambda c: c[1](), checks))
    for (name, _), ok in zip(checks, results):
        if not ok:
            return name
    return None


def _load_fan(path: str):
    with open(path) as f:
        obj = json.load(f)
    return fan_from_json(obj)


def _parse_perversity(fan: Fan, spec: str) -> Perversity:
    if spec in _PRESETS:
        return Perversity.preset(fan, spec)
    if spec.lstrip().startswith("{"):
        return Perversity.from_json(fan, json.loads(spec))
    with open(spec) as f:
        return Perversity.from_json(fan, json.load(f))


def _emit(args, obj: dict, table_lines) -> None:
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        for line in table_lines:
            print(line)


def _census(fan: Fan) -> dict:
    return {str(d): len(fan.cones_of_dim(d)) for d in range(fan.rank + 1)}


def cmd_validate(args, fan: Fan) -> int:
    census = _census(fan)
    obj = {"rank": fan.rank, "cones_by_dim": census, "complete": fan.is_complete}
    n = sum(census.values())
    flag = "complete" if fan.is_complete else "not complete"
    _emit(args, obj, [f"{n} cones, {flag}"])
    return EXIT_OK


def cmd_betti(args, fan: Fan) -> int:
    p = _parse_perversity(fan, args.perversity)
    betti = ih_betti(fan, p)
    _emit(args, {"betti": list(betti)}, [" ".join(str(b) for b in betti)])
    return EXIT_OK


def cmd_gamma(args, fan: Fan) -> int:
    p = _parse_perversity(fan, args.perversity)
    table = gamma_table(fan, build_ic(fan, p))
    obj = {
        "gamma": {f"{i},{q}": v for (i, q), v in sorted(table.items())},
        "complete": fan.is_complete,
    }
    lines = [f"H^{i}_{q} = {v}" for (i, q), v in sorted(table.items())]
    if not fan.is_complete:
        lines.append("(fan not complete: table lacks the hypercohomology reading)")
    _emit(args, obj, lines)
    return EXIT_OK


def cmd_omega(args, fan: Fan) -> int:
    p = _parse_perversity(fan, args.perversity)
    row = omega_betti(fan, p, args.j)
    _emit(args, {"omega": list(row), "j": args.j},
          [" ".join(str(b) for b in row)])
    return EXIT_OK


def cmd_duality(args, fan: Fan) -> int:
    p = _parse_perversity(fan, args.perversity)
    rep = serre_duality_report(fan, p)
    obj = {"duality": {"ok": rep.ok,
                       "violations": [list(v) for v in rep.violations]}}
    lines = ["duality: ok" if rep.ok else
             f"duality: {len(rep.violations)} violations"]
    _emit(args, obj, lines)
    return EXIT_OK if rep.ok else EXIT_PROPERTY


def cmd_selfcheck(args, fan: Fan) -> int:
    rng = random.Random(args.seed)
    r = fan.rank
    checks = []
    for name in _PRESETS:
        p = Perversity.preset(fan, name)
        L = build_ic(fan, p)
        checks.append((f"conditions[{name}]",
                       lambda L=L, p=p: verify_conditions(L, p).ok))
        checks.append((f"support-box[{name}]",
                       lambda L=L: support_box(L).ok))
        checks.append((f"resolution-cones[{name}]",
                       lambda L=L: is_gem_quasi_iso(shallow_resolve(L)[1])))
    pm = Perversity.middle(fan)
    checks.append(("duality-pairing[middle]",
                   lambda: duality_pairing_check(fan, pm).ok))
    samples = [build_ic(fan, pm)]
    samples += [random_gem_complex(fan, rng) for _ in range(2)]

    def _sections_duality(L):
        h = gamma(L, check=False).cohomology_dims()
        hd = gamma(dualize_D(L), check=False).cohomology_dims()
        return hd == {(r - i, -r - q): v for (i, q), v in h.items()}

    for n, L in enumerate(samples):
        checks.append((f"valid[{n}]", lambda L=L: L.validate().valid))
        checks.append((f"sections-duality[{n}]",
                       lambda L=L: _sections_duality(L)))
        if fan.is_complete:
            checks.append((f"augmented-dual-acyclic[{n}]",
                           lambda L=L: dualize_Dhat_gamma(L, check=False).is_acyclic()))
    if fan.is_complete:
        for name in _PRESETS:
            p = Perversity.preset(fan, name)
            checks.append((f"global-duality[{name}]",
                           lambda p=p: serre_duality_report(fan, p).ok))
    failed = _run_checks(checks)
    obj = {"ok": failed is None, "seed": args.seed,
           "failed": failed, "checks": [name for name, _ in checks]}
    _emit(args, obj, ["selfcheck: ok" if failed is None
                      else f"selfcheck: FAILED {failed}"])
    return EXIT_OK if failed is None else EXIT_PROPERTY


_COMMANDS = {
    "validate": cmd_validate,
    "betti": cmd_betti,
    "gamma": cmd_gamma,
    "omega": cmd_omega,
    "duality": cmd_duality,
    "selfcheck": cmd_selfcheck,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toric-ic",
        description="Exact intersection cohomology of toric varieties from fan data.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("fan", help="path to a fan JSON file")
        sp.add_argument("--format", choices=("json", "table"), default="table")
        if name != "validate":
            sp.add_argument("-p", "--perversity", default="middle",
                            help="preset name, inline JSON, or a JSON file path")
        if name == "omega":
            sp.add_argument("-j", type=int, required=True,
                            help="internal degree, 0..rank")
        if name == "selfcheck":
            sp.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        fan = _load_fan(args.fan)
    except FanError as e:
        print(f"invalid fan: {e}", file=sys.stderr)
        return EXIT_INVALID_FAN
    except (OSError, ValueError, KeyError, TypeError) as e:
        print(f"cannot read fan: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return _COMMANDS[args.command](args, fan)
    except FanNotComplete as e:
        print(f"fan not complete: {e}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (InvalidPerversity, JOutOfRange, NotSimplicial,
            OSError, json.JSONDecodeError) as e:
        print(f"bad input: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
