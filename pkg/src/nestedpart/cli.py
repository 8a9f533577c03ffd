"""``np`` command line: enumerate, verify, rank, closure.

Exit codes: 0 pass, 1 falsified identity, 2 infeasible or unsupported,
3 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from .checks import SUITES, run_suite
from .closure import ClosureBoundError, closure
from .partition import (
    Endomorphism,
    PartitionType,
    SizeBoundError,
    compose,
    count_respecting_leaf_maps,
    enumerate_endomorphisms,
)
from .predicates import UnsupportedConstruction, stratum
from .rank import (
    FiniteSemigroup,
    InfeasibleError,
    brute_rank,
    lower_bound_2k,
    strata_parity_prune,
    upper_bound_certificate,
    verify_lower_bound,
)
from .wreath import ISO_ORIENTATION

SCHEMA = "nestedpart-report/1"
EXIT_OK, EXIT_FALSIFIED, EXIT_UNSUPPORTED, EXIT_BAD_INPUT = 0, 1, 2, 3

INTERNING = "ids index P(n~) in lexicographic order of local-map tables (level 1 first, prefix points ascending)"


class BadInput(ValueError):
    pass


def default_bound() -> int:
    return int(os.environ.get("NP_BOUND", 10**6))


def default_enum_bound() -> int:
    return int(os.environ.get("NP_ENUM_BOUND", 10**4))


def parse_type(text: str, bound: int) -> PartitionType:
    try:
        return PartitionType.parse(text, max_leaves=bound)
    except SizeBoundError:
        raise
    except ValueError as e:
        raise BadInput(str(e)) from None


def level_counts(ptype: PartitionType) -> list[int]:
    """``|P_j(n~)|`` for ``j = 0..k`` by counting choices of local maps."""
    out = []
    for j in range(ptype.depth + 1):
        total = 1
        for s, n in enumerate(ptype.levels, start=1):
            choices = math.factorial(n) if s <= j else n**n
            total *= choices ** ptype.sizes[s - 1]
        out.append(total)
    return out


def cmd_enumerate(args) -> tuple[dict, int]:
    pt = parse_type(args.type, args.bound)
    counts = level_counts(pt)
    report = {
        "type": list(pt.levels),
        "total": pt.monoid_size(),
        "levels": {f"P_{j}": counts[j] for j in range(1, pt.depth + 1)},
        "automorphisms": counts[-1],
        "strata": {str(j): counts[j] - (counts[j + 1] if j < pt.depth else 0) for j in range(pt.depth + 1)},
    }
    status = EXIT_OK
    checks = {}
    checks["formula total"] = counts[0] == pt.monoid_size()
    if pt.monoid_size() <= args.enum_bound:
        elems = enumerate_endomorphisms(pt, bound=args.enum_bound)
        st = [stratum(f) for f in elems]
        checks["enumeration total"] = len(elems) == pt.monoid_size()
        checks["enumerated strata"] = all(
            st.count(j) == report["strata"][str(j)] for j in range(pt.depth + 1)
        )
    nleaves = pt.sizes[-1]
    if nleaves**nleaves <= 10**4:
        checks["leaf-map filter"] = count_respecting_leaf_maps(pt) == pt.monoid_size()
    report["checks"] = checks
    if not all(checks.values()):
        status = EXIT_FALSIFIED
    return report, status


def cmd_verify(args) -> tuple[dict, int]:
    pt = parse_type(args.type, args.bound) if args.type else None
    if pt is None and args.what not in ("coprime", "strannaya"):
        raise BadInput(f"verify {args.what} needs --type")
    checks = run_suite(args.what, pt, bound=args.bound)
    report = {
        "suite": args.what,
        "type": list(pt.levels) if pt else None,
        "checks": [c.to_json() for c in checks],
        "passed": all(c.ok for c in checks),
    }
    if args.what == "wreath-iso":
        report["orientation"] = ISO_ORIENTATION
    return report, EXIT_OK if report["passed"] else EXIT_FALSIFIED


def _hypotheses(pt: PartitionType) -> list[str]:
    unmet = []
    if pt.depth < 2:
        unmet.append("k >= 2 (a single level cannot carry the k-element group generating set)")
    low = [j for j, n in enumerate(pt.levels, start=1) if n < 3]
    if low:
        unmet.append(f"n_j >= 3 for the generator construction (fails at levels {low})")
    return unmet


def cmd_rank(args) -> tuple[dict, int]:
    pt = parse_type(args.type, args.bound)
    k = pt.depth
    report = {"type": list(pt.levels), "method": args.method, "claim_2k": 2 * k,
              "unmet_hypotheses": _hypotheses(pt)}
    if args.method == "brute":
        if pt.monoid_size() > args.enum_bound:
            raise InfeasibleError(f"|P| = {pt.monoid_size()} exceeds enumeration bound {args.enum_bound}")
        S = FiniteSemigroup.of_type(pt, bound=args.enum_bound)
        prune = strata_parity_prune(S, pt) if min(pt.levels) >= 2 else None
        cert = brute_rank(S, prune=prune)
        ids = cert.witness["generators"]
        report["certificate"] = cert.to_json()
        report["interning"] = INTERNING
        report["manifest"] = {str(i): S.elements[i].to_json() for i in ids}
        report["matches_2k"] = cert.value == 2 * k
        if cert.value == 2 * k:
            return report, EXIT_OK
        if pt.depth < 2:
            report["note"] = "rank differs from 2k where k = 1; the 2k statement presumes k >= 2"
            return report, EXIT_OK
        return report, EXIT_FALSIFIED

    # certified
    lower = lower_bound_2k(pt)
    lchecks = verify_lower_bound(lower)
    report["lower"] = lower.to_json()
    report["lower_checks"] = lchecks
    if not all(lchecks.values()):
        return report, EXIT_FALSIFIED
    try:
        upper = upper_bound_certificate(pt, bound=args.bound, workers=args.workers)
    except UnsupportedConstruction as e:
        report["upper"] = {"status": "unsupported", "reason": str(e), "level": e.level}
        return report, EXIT_UNSUPPORTED
    report["upper"] = upper.to_json()
    if upper.kind == "upper-bound":
        report["rank"] = 2 * k
        return report, EXIT_OK
    if pt.depth < 2:
        report["upper"]["status"] = "unsupported"
        report["upper"]["reason"] = "construction does not generate P(n~) when k = 1"
        return report, EXIT_UNSUPPORTED
    return report, EXIT_FALSIFIED


def cmd_closure(args) -> tuple[dict, int]:
    try:
        with open(args.gens) as fh:
            data = json.load(fh)
        items = data["generators"] if isinstance(data, dict) else data
        gens = [Endomorphism.from_json(x, max_leaves=args.bound) for x in items]
    except (OSError, KeyError, TypeError, ValueError) as e:
        raise BadInput(f"cannot read generators from {args.gens}: {e}") from None
    if not gens:
        raise BadInput("no generators given")
    pt = gens[0].ptype
    if any(g.ptype != pt for g in gens):
        raise BadInput("generators have different partition types")
    target = pt.monoid_size()
    c = closure(gens, compose, bound=args.bound, target=target, workers=args.workers)
    report = {"type": list(pt.levels), "closure": c.report.to_json()}
    return report, EXIT_OK


def _emit(report: dict, status: int, args, elapsed: float) -> None:
    report = {"schema": SCHEMA, "command": args.command, "exit": status, **report}
    if args.json:
        text = json.dumps(report, indent=2, sort_keys=True)
    else:
        text = _format_text(report) + f"\n({elapsed:.2f}s)"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _format_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, val in report.items():
        if key in ("manifest", "witness") and isinstance(val, dict) and len(json.dumps(val)) > 300:
            lines.append(f"{pad}{key}: <{len(val)} entries, use --json>")
        elif isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_format_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict) and "name" in val[0]:
            lines.append(f"{pad}{key}:")
            for c in val:
                mark = "INFO" if c.get("informational") else "PASS" if c.get("ok") else "FAIL"
                extra = f" ({c['detail']})" if c.get("detail") else ""
                lines.append(f"{pad}  [{mark}] {c['name']}: {c['passed']}/{c['checked']}{extra}")
        else:
            lines.append(f"{pad}{key}: {val}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--bound", type=int, default=default_bound(),
                        help="closure / leaf-count bound (env NP_BOUND)")
    common.add_argument("--enum-bound", type=int, default=default_enum_bound(),
                        help="bound on explicitly enumerated semigroups (env NP_ENUM_BOUND)")
    common.add_argument("--json", action="store_true")
    common.add_argument("--out")

    p = argparse.ArgumentParser(prog="np", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("enumerate", parents=[common], help="sizes of P(n~), its levels and strata")
    e.add_argument("--type", required=True)
    v = sub.add_parser("verify", parents=[common], help="run an exhaustive identity suite")
    v.add_argument("what", choices=SUITES)
    v.add_argument("--type")
    r = sub.add_parser("rank", parents=[common], help="rank certificates")
    r.add_argument("--type", required=True)
    r.add_argument("--method", choices=("brute", "certified"), default="certified")
    c = sub.add_parser("closure", parents=[common], help="closure of endomorphisms read from JSON")
    c.add_argument("--gens", required=True)
    return p


COMMANDS = {"enumerate": cmd_enumerate, "verify": cmd_verify, "rank": cmd_rank, "closure": cmd_closure}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_BAD_INPUT if e.code else EXIT_OK
    t0 = time.perf_counter()
    try:
        report, status = COMMANDS[args.command](args)
    except BadInput as e:
        print(f"np: bad input: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (SizeBoundError, ClosureBoundError, InfeasibleError) as e:
        print(f"np: infeasible: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except UnsupportedConstruction as e:
        print(f"np: unsupported construction: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    _emit(report, status, args, time.perf_counter() - t0)
    return status


if __name__ == "__main__":
    sys.exit(main())
