"""Command-line front end.

Subcommands: ``solve``, ``verify``, ``generate`` and ``bench``.  Exit codes
are 0 for YES, 1 for NO, 2 for usage or input errors and 3 for UNKNOWN
(randomized rounds exhausted or a resource budget hit).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import fpt, oracle
from .errors import InputError, InternalError, ResourceError
from .gen import (
    CnfInstance,
    ThreeDMInstance,
    complete_instance,
    random_3dm,
    random_instance,
    random_sat4occ,
    reduce_3dm_maxmin24,
    reduce_3dm_maxmin33,
    reduce_sat_mov25,
)
from .ilp import DEFAULT_MAX_VARS
from .model import Instance, Matching, Measure, dump_instance, dump_matching, load_instance, load_matching, verify
from .poly import (
    lowdeg_applicable,
    solve_complete,
    solve_direct,
    solve_maxmin_lowdeg,
    solve_mov_deg4,
    solve_two_colors,
)

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
KC_MAX_K = 12


@dataclass(frozen=True)
class RouteDecision:
    solver: str
    reason: str


@dataclass(frozen=True)
class Outcome:
    answer: str  # YES, NO or UNKNOWN
    solver: str
    matching: Matching | None = None
    note: str = ""


# ---------------------------------------------------------------------------
# applicability


def _kc_fits(inst: Instance) -> bool:
    if inst.k > KC_MAX_K:
        return False
    return fpt.build_kc_model(inst).num_vars <= DEFAULT_MAX_VARS


APPLICABLE: dict[str, Callable[[Instance], bool]] = {
    "complete": lambda i: i.is_complete and i.at_most_nonempty,
    "two-colors": lambda i: i.num_colors == 2 and not i.upper_bounded,
    "mov-deg4": lambda i: i.measure is Measure.MOV and i.max_right_degree <= 4 and i.at_most_nonempty,
    "maxmin-lowdeg": lowdeg_applicable,
    "direct": lambda i: i.max_left_degree <= 1,
    "maxmin-k": lambda i: i.measure is Measure.MAXMIN and i.size_free and i.k <= KC_MAX_K,
    "maxmin-k-nonempty": lambda i: i.measure is Measure.MAXMIN and i.nonempty and i.k <= fpt.DEFAULT_K_CAP,
    "mov-k": lambda i: i.measure is Measure.MOV and i.at_most_nonempty and i.k <= fpt.MOV_K_CAP,
    "targeted-mov": lambda i: i.measure is Measure.MOV and i.at_most_nonempty,
    "kc": _kc_fits,
    "dp": lambda i: i.n <= oracle.DP_MAX_N,
    "oracle": lambda i: True,
}
ALGOS = ["auto", *APPLICABLE]


def route(instance: Instance) -> RouteDecision:
    """Pick the most specific solver whose preconditions hold."""
    i = instance
    if APPLICABLE["complete"](i):
        return RouteDecision("complete", "complete bipartite graph")
    if APPLICABLE["two-colors"](i):
        return RouteDecision("two-colors", "two colors without a size upper bound")
    if APPLICABLE["mov-deg4"](i):
        return RouteDecision("mov-deg4", f"MoV with right degree {i.max_right_degree} <= 4")
    if APPLICABLE["maxmin-lowdeg"](i):
        return RouteDecision(
            "maxmin-lowdeg", f"Max-Min with degrees (left {i.max_left_degree}, right {i.max_right_degree})"
        )
    if APPLICABLE["direct"](i):
        return RouteDecision("direct", "every left vertex has at most one neighbor")
    if APPLICABLE["maxmin-k"](i):
        return RouteDecision("maxmin-k", "Max-Min without size constraints, parameter k")
    if APPLICABLE["maxmin-k-nonempty"](i):
        return RouteDecision("maxmin-k-nonempty", f"Max-Min with non-emptiness, k = {i.k}")
    if APPLICABLE["mov-k"](i):
        return RouteDecision("mov-k", "MoV with at most non-emptiness, parameter k (randomized)")
    if APPLICABLE["kc"](i):
        return RouteDecision("kc", "general size constraints, parameter k + |C|")
    if APPLICABLE["dp"](i):
        return RouteDecision("dp", f"n = {i.n} fits the subset dynamic program")
    return RouteDecision("oracle", "no structural shortcut applies")


# ---------------------------------------------------------------------------
# solving


def _parse_colors(text: str | None, name: str) -> tuple[int, ...]:
    if not text:
        raise InputError(f"--algo targeted-mov needs {name}")
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"{name} must be a comma-separated list of color ids") from exc


def run_solver(name: str, inst: Instance, args: argparse.Namespace | None = None) -> Outcome:
    """Run one solver; ``NO`` only when the solver is exact."""
    seed = getattr(args, "seed", None)
    rounds = getattr(args, "rounds", None)
    budget = getattr(args, "budget", None) or oracle.DEFAULT_BUDGET
    exact = True
    if name == "kc":
        got = fpt.solve_kc(inst)
    elif name == "maxmin-k":
        got = fpt.solve_maxmin_k(inst)
    elif name == "maxmin-k-nonempty":
        got = fpt.solve_maxmin_k_nonempty(inst)
    elif name == "mov-k":
        got = fpt.solve_mov_k(inst, rounds=rounds, seed=seed)
        exact = False
    elif name == "targeted-mov":
        targets = fpt.TargetSpec(_parse_colors(getattr(args, "mu1", None), "--mu1"), _parse_colors(getattr(args, "mu2", None), "--mu2"))
        got = fpt.solve_targeted_mov(inst, targets, nonempty=inst.size_min >= 1)
        exact = False  # NO only refutes the given targets
    elif name == "two-colors":
        got = solve_two_colors(inst)
    elif name == "mov-deg4":
        got = solve_mov_deg4(inst)
    elif name == "maxmin-lowdeg":
        got = solve_maxmin_lowdeg(inst)
    elif name == "complete":
        got = solve_complete(inst)
    elif name == "direct":
        got = solve_direct(inst)
    elif name == "dp":
        got = oracle.subset_dp_matching(inst)
    elif name == "oracle":
        got = oracle.solve_oracle(inst, budget)
    else:
        raise InputError(f"unknown algorithm {name!r}")
    if got is not None:
        if not verify(inst, got).valid:  # pragma: no cover - solvers verify already
            raise InternalError(f"{name} returned an invalid matching")
        return Outcome("YES", name, got)
    return Outcome("NO" if exact else "UNKNOWN", name)


def solve_auto(inst: Instance, args: argparse.Namespace | None = None) -> tuple[Outcome, RouteDecision]:
    """Routed solver first, then exact fallbacks on UNKNOWN or budget errors."""
    decision = route(inst)
    chain = [decision.solver, "kc", "dp", "oracle"]
    notes = []
    last = Outcome("UNKNOWN", decision.solver)
    for name in dict.fromkeys(chain):
        if name != decision.solver and not APPLICABLE[name](inst):
            continue
        try:
            out = run_solver(name, inst, args)
        except ResourceError as exc:
            notes.append(f"{name}: {exc}")
            continue
        if out.answer != "UNKNOWN":
            return Outcome(out.answer, out.solver, out.matching, "; ".join(notes)), decision
        notes.append(f"{name}: no certificate")
        last = out
    return Outcome("UNKNOWN", last.solver, None, "; ".join(notes)), decision


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(Path(args.input))
    if args.dump_ilp:
        model = fpt.build_maxmin_model(inst) if inst.measure is Measure.MAXMIN and inst.size_free else fpt.build_kc_model(inst)
        Path(args.dump_ilp).write_text(model.dump() + "\n")
    start = time.perf_counter()
    if args.algo == "auto":
        out, decision = solve_auto(inst, args)
        reason = decision.reason
    else:
        try:
            out = run_solver(args.algo, inst, args)
        except ResourceError as exc:
            out = Outcome("UNKNOWN", args.algo, note=str(exc))
        reason = "forced by --algo"
    millis = (time.perf_counter() - start) * 1000
    report = {"answer": out.answer, "solver": out.solver, "reason": reason, "millis": round(millis, 3)}
    if out.note:
        report["note"] = out.note
    if out.matching is not None:
        if args.output:
            dump_matching(out.matching, Path(args.output))
        else:
            report["assign"] = list(out.matching.assign)
    print(json.dumps(report))
    return {"YES": EXIT_YES, "NO": EXIT_NO}.get(out.answer, EXIT_UNKNOWN)


def _cmd_verify(args: argparse.Namespace) -> int:
    inst = load_instance(Path(args.input))
    matching = load_matching(Path(args.matching))
    verdict = verify(inst, matching)
    if verdict.valid:
        print("valid")
        return EXIT_YES
    for violation in verdict.violations:
        print(violation)
    return EXIT_NO


# ---------------------------------------------------------------------------
# generation


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.form == "random":
        inst = random_instance(
            args.n,
            args.k,
            args.colors,
            ell=args.ell,
            measure=args.measure,
            seed=args.seed,
            edge_prob=args.edge_prob,
            max_left_degree=args.max_left_degree,
            max_right_degree=args.max_right_degree,
            min_left_degree=args.min_left_degree,
            size_min=args.size_min,
            size_max=args.size_max,
        )
    elif args.form == "complete":
        inst = complete_instance([int(x) for x in args.counts.split(",")], args.k, args.ell, args.measure, args.size_min)
    elif args.form == "from-3dm":
        if args.input:
            data = _read_json(args.input)
            try:
                tdm = ThreeDMInstance(data["size_x"], data["size_y"], data["size_z"], tuple(map(tuple, data["triples"])))
            except (KeyError, TypeError) as exc:
                raise InputError("3DM file needs size_x, size_y, size_z and triples") from exc
        else:
            tdm = random_3dm(args.size, args.triples, seed=args.seed)
        inst = reduce_3dm_maxmin33(tdm) if args.variant == "33" else reduce_3dm_maxmin24(tdm)
    else:
        if args.input:
            data = _read_json(args.input)
            try:
                cnf = CnfInstance(data["num_vars"], tuple(map(tuple, data["clauses"])))
            except (KeyError, TypeError) as exc:
                raise InputError("CNF file needs num_vars and clauses") from exc
        else:
            cnf = random_sat4occ(args.num_vars, seed=args.seed)
        inst = reduce_sat_mov25(cnf)
    text = dump_instance(inst)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return EXIT_YES


# ---------------------------------------------------------------------------
# benchmarking


def builtin_suite(name: str) -> list[tuple[str, Instance]]:
    """Small deterministic suites; ``name`` may also be a directory of JSON files."""
    path = Path(name)
    if path.is_dir():
        return [(p.stem, load_instance(p)) for p in sorted(path.glob("*.json"))]
    out: list[tuple[str, Instance]] = []
    if name == "smoke":
        for s in range(12):
            measure = "mov" if s % 2 else "maxmin"
            out.append((f"rand{s}", random_instance(7, 2 + s % 2, 2 + s % 3, s % 3, measure, seed=s, edge_prob=0.5, min_left_degree=1)))
        out.append(("complete431", complete_instance([4, 3, 1], 2, 0, "mov")))
        out.append(("deg4", random_instance(8, 4, 3, 1, "mov", seed=99, max_right_degree=4, min_left_degree=1)))
        out.append(("lowdeg23", random_instance(8, 5, 3, 1, "maxmin", seed=7, max_left_degree=2, max_right_degree=3, min_left_degree=1)))
        return out
    if name == "scaling":
        for s in range(3):
            out.append((f"maxmin2000_{s}", random_instance(2000, 3, 50, 2, "maxmin", seed=s, edge_prob=0.5, min_left_degree=1)))
        return out
    raise InputError(f"unknown suite {name!r} (use smoke, scaling or a directory)")


def _cmd_bench(args: argparse.Namespace) -> int:
    suite = builtin_suite(args.suite)
    handle = open(args.csv_out, "w", newline="") if args.csv_out else sys.stdout
    try:
        writer = csv.writer(handle)
        writer.writerow(["instance", "algo", "answer", "millis", "n", "k", "colors", "ell"])
        for label, inst in suite:
            algos = [a for a in APPLICABLE if a != "targeted-mov" and APPLICABLE[a](inst)]
            if inst.n > 12:
                algos = [a for a in algos if a not in ("oracle", "dp")]
            for algo in algos:
                start = time.perf_counter()
                try:
                    answer = run_solver(algo, inst, args).answer
                except ResourceError:
                    answer = "UNKNOWN"
                millis = (time.perf_counter() - start) * 1000
                writer.writerow([label, algo, answer, f"{millis:.3f}", inst.n, inst.k, inst.num_colors, inst.ell])
    finally:
        if handle is not sys.stdout:
            handle.close()
    return EXIT_YES


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairmatch", description="Fair many-to-one matching solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide an instance and write a witness")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--algo", choices=ALGOS, default="auto")
    p.add_argument("--seed", type=int)
    p.add_argument("--rounds", type=int)
    p.add_argument("--budget", type=int, help="brute-force search space budget for the oracle")
    p.add_argument("--mu1", help="targeted-mov: top colors, comma-separated, one per right vertex")
    p.add_argument("--mu2", help="targeted-mov: runner-up colors")
    p.add_argument("--dump-ilp", metavar="PATH", help="write the parameterized ILP model as text")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a matching against an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--matching", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("generate", help="write an instance")
    gsub = p.add_subparsers(dest="form", required=True)
    g = gsub.add_parser("random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--colors", type=int, required=True)
    g.add_argument("--ell", type=int, default=0)
    g.add_argument("--measure", choices=[m.value for m in Measure], default="mov")
    g.add_argument("--seed", type=int)
    g.add_argument("--edge-prob", type=float, default=0.5)
    g.add_argument("--max-left-degree", type=int)
    g.add_argument("--max-right-degree", type=int)
    g.add_argument("--min-left-degree", type=int, default=0)
    g.add_argument("--size-min", type=int, default=0)
    g.add_argument("--size-max", type=int)
    g.add_argument("--output")
    g = gsub.add_parser("complete")
    g.add_argument("--counts", required=True, help="comma-separated color counts")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--ell", type=int, default=0)
    g.add_argument("--measure", choices=[m.value for m in Measure], default="mov")
    g.add_argument("--size-min", type=int, default=0)
    g.add_argument("--output")
    g = gsub.add_parser("from-3dm")
    g.add_argument("--input", help="JSON with size_x, size_y, size_z, triples")
    g.add_argument("--size", type=int, default=3)
    g.add_argument("--triples", type=int, default=5)
    g.add_argument("--seed", type=int)
    g.add_argument("--variant", choices=["33", "24"], default="33", help="degree bounds of the output")
    g.add_argument("--output")
    g = gsub.add_parser("from-sat")
    g.add_argument("--input", help="JSON with num_vars and clauses")
    g.add_argument("--num-vars", type=int, default=3)
    g.add_argument("--seed", type=int)
    g.add_argument("--output")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="time every applicable solver on a suite")
    p.add_argument("--suite", default="smoke")
    p.add_argument("--csv-out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage to stderr
        return EXIT_USAGE if exc.code else EXIT_YES
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
