"""Command-line interface: ``cacaug {validate,solve,verify,gen,analyze,bench}``.

Exit codes
    0  success
    2  usage error
    3  parse error
    4  invalid instance
    5  infeasible instance or solution
    6  a recorded or checked bound does not hold
    7  budget or subcactus cap exceeded
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import analysis
from .cactus import Instance, LinkKind, check_solution, three_edge_connected_with
from .completion import run_matching_algorithm
from .errors import (
    BudgetExceeded,
    GenerationFailed,
    GuaranteeViolated,
    Infeasible,
    InfeasibleInstance,
    NotLeafToLeafPlus,
    ParseError,
    SubcactusTooLarge,
    UnknownLinkId,
    ValidationError,
)
from .exact import brute_force_opt, solve_combined, solve_exact, solve_subcacti
from .generators import RandomProfile, fig3_tap, gen_random, gen_random_tap
from .io import (
    InstanceFile,
    parse_instance_file,
    parse_solution_file,
    serialize_instance_file,
    serialize_solution_file,
    solution_file_from,
)
from .matching import make_matching

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INVALID = 4
EXIT_INFEASIBLE = 5
EXIT_BOUND = 6
EXIT_BUDGET = 7

CLI_LEAF_CAP = 12


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> Instance:
    return parse_instance_file(_read(path)).to_instance()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _solve(instance: Instance, algo: str, budget: int | None, leaf_cap: int):
    if algo == "matching":
        return run_matching_algorithm(instance)
    if algo == "subcactus":
        return solve_subcacti(instance, leaf_cap)
    if algo == "combined":
        return solve_combined(instance, leaf_cap)
    if budget is None:
        raise _Fail(EXIT_USAGE, "--algo exact requires --budget")
    return solve_exact(instance, budget)


def cmd_validate(args) -> int:
    inst = _load(args.file)
    print(f"ok: {inst.n} vertices, {len(inst.cactus.cycles)} cycles, {len(inst.links)} links, "
          f"{len(inst.two_cuts)} 2-cuts, root {inst.root}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args.file)
    start = time.perf_counter()
    sol = _solve(inst, args.algo, args.budget, args.leaf_cap)
    elapsed = time.perf_counter() - start
    sf = solution_file_from(inst, sol)
    if args.timing:
        sf.stats["wall_seconds"] = round(elapsed, 6)
    _emit(serialize_solution_file(sf), args.out)
    return EXIT_OK


def _verify_bounds(inst: Instance, sf) -> list[str]:
    """Re-derive the bounds a solution file claims; return violated ones."""
    problems = []
    stats = sf.stats
    ids = frozenset(sf.link_ids)
    if "matching_links" in stats:
        m = make_matching(inst, stats["matching_links"])
        if not m.link_ids <= ids:
            problems.append("matching links are not part of the solution")
        if not m.covered_leaves <= inst.leaves:
            problems.append("matching uses a non-leaf endpoint")
        if m.objective < len(ids):
            problems.append(f"size {len(ids)} exceeds |M| + |M_in|/2 + |T| - 2|M| = {float(m.objective)}")
        if "objective_bound" in stats and float(m.objective) != stats["objective_bound"]:
            problems.append("recorded objective_bound does not match the matching")
        if "arcs" in stats and 2 * stats["arcs"] > 2 * (float(m.objective) - m.size):
            problems.append("recorded arc count exceeds the completion bound")
    if sf.algorithm == "combined":
        sizes = [stats.get("matching_solution"), stats.get("subcactus_solution")]
        if None in sizes or len(ids) != min(sizes):
            problems.append("combined size is not the smaller of the two recorded solutions")
    kinds = inst.link_kinds
    n_in = sum(1 for i in ids if kinds[i] is LinkKind.IN)
    if stats.get("in_count", n_in) != n_in or stats.get("cross_count", len(ids) - n_in) != len(ids) - n_in:
        problems.append("recorded in/cross counts are wrong")
    return problems


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    sf = parse_solution_file(_read(args.solution))
    if sf.size != len(set(sf.link_ids)):
        raise _Fail(EXIT_INFEASIBLE, f"recorded size {sf.size} differs from {len(set(sf.link_ids))} links")
    try:
        check_solution(inst, sf.link_ids)
    except Infeasible as exc:
        print(f"infeasible: uncovered 2-cut {list(exc.witness.vertices)}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not sf.feasible:
        raise _Fail(EXIT_INFEASIBLE, "file records infeasible but the link set is feasible")
    if not three_edge_connected_with(inst, sf.link_ids):
        raise _Fail(EXIT_INFEASIBLE, "min-cut cross-check disagrees")
    problems = _verify_bounds(inst, sf)
    if problems:
        for p in problems:
            print(f"bound: {p}", file=sys.stderr)
        return EXIT_BOUND
    print(f"ok: {sf.size} links, feasible, all recorded bounds hold")
    return EXIT_OK


def cmd_gen(args) -> int:
    profile = RandomProfile(
        n_range=(args.n_min, args.n_max),
        k_cap=args.k_cap,
        link_count=(args.links_min, args.links_max),
        endpoints=args.endpoints,
        ensure_feasible=not args.no_ensure_feasible,
    )
    if args.family == "fig3":
        if args.m < 2:
            raise _Fail(EXIT_USAGE, "--m must be at least 2")
        tap = fig3_tap(args.m)
        f = InstanceFile(n=tap.vertex_count, links=tap.links, edges=tap.edges, root=tap.root, kind="tap")
    elif args.family == "random":
        f = InstanceFile.from_instance(gen_random(profile, args.seed))
    else:
        tap = gen_random_tap(profile, args.seed)
        f = InstanceFile(n=tap.vertex_count, links=tap.links, edges=tap.edges, root=tap.root, kind="tap")
    _emit(serialize_instance_file(f), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.check_b is None and not args.rho:
        raise _Fail(EXIT_USAGE, "give --check-b B and/or --rho")
    report = {}
    if args.check_b is not None:
        cfg = analysis.BCheckConfig(
            b=args.check_b, grid_step=args.grid, refinement_rounds=args.refine,
            sv_range=(args.sv_min, args.sv_max),
        )
        res = analysis.verify_b(cfg)
        report["b_check"] = {
            "b": cfg.b,
            "grid_step": cfg.grid_step,
            "refinement_rounds": cfg.refinement_rounds,
            "min_value": res.min_value,
            "argmin": res.argmin,
            "points": res.points,
            "holds": res.min_value >= -1e-9,
        }
    if args.rho:
        r = analysis.compute_rho()
        report["rho"] = {
            "alpha_star": r.alpha_star,
            "rho": r.rho,
            "residual": r.residual,
            "branch_gap": r.branch_gap,
            "b045_residual": r.b045_residual,
        }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


BENCH_COLUMNS = ["instance", "algo", "size", "opt", "ratio", "feasible", "millis"]


def cmd_bench(args) -> int:
    paths = sorted(Path(args.dir).glob("*.json"))
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ("matching", "subcactus", "combined", "exact"):
            raise _Fail(EXIT_USAGE, f"unknown algorithm {a!r}")
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(BENCH_COLUMNS)
        for path in paths:
            inst = _load(str(path))
            try:
                opt = brute_force_opt(inst, args.budget).opt_value
            except BudgetExceeded:
                opt = None
            for algo in algos:
                start = time.perf_counter()
                try:
                    sol = _solve(inst, algo, args.budget, args.leaf_cap)
                except (BudgetExceeded, SubcactusTooLarge, NotLeafToLeafPlus):
                    w.writerow([path.name, algo, "", "" if opt is None else opt, "", "", ""])
                    continue
                millis = (time.perf_counter() - start) * 1000
                feasible = three_edge_connected_with(inst, sol.link_ids)
                ratio = "" if not opt else f"{sol.size / opt:.6f}"
                w.writerow([
                    path.name, algo, sol.size, "" if opt is None else opt, ratio,
                    str(feasible).lower(), f"{millis:.3f}" if args.timing else "",
                ])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cacaug", description="Leaf-to-leaf cactus augmentation toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check an instance file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("file")
    s.add_argument("--algo", choices=["matching", "subcactus", "combined", "exact"], default="combined")
    s.add_argument("--budget", type=int, help="link budget for --algo exact")
    s.add_argument("--leaf-cap", type=int, default=CLI_LEAF_CAP, help="max leaves per principal subcactus")
    s.add_argument("--timing", action="store_true", help="record wall time in the stats")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    vf = sub.add_parser("verify", help="re-check a solution file against an instance")
    vf.add_argument("instance")
    vf.add_argument("solution")
    vf.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", choices=["fig3", "random", "random-tap"], required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--m", type=int, default=6, help="number of towers for fig3")
    g.add_argument("--n-min", type=int, default=4)
    g.add_argument("--n-max", type=int, default=12)
    g.add_argument("--k-cap", type=int, default=3)
    g.add_argument("--links-min", type=int, default=2)
    g.add_argument("--links-max", type=int, default=9)
    g.add_argument("--endpoints", choices=["leaf_to_leaf", "leaf_to_leaf_plus", "any"], default="leaf_to_leaf")
    g.add_argument("--no-ensure-feasible", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="numeric checks of the ratio analysis")
    a.add_argument("--check-b", type=float, metavar="B")
    a.add_argument("--grid", type=float, default=0.01, metavar="STEP")
    a.add_argument("--refine", type=int, default=2)
    a.add_argument("--sv-min", type=float, default=0.0)
    a.add_argument("--sv-max", type=float, default=1.0)
    a.add_argument("--rho", action="store_true")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bench", help="run solvers over a directory of instances, CSV out")
    b.add_argument("--dir", required=True)
    b.add_argument("--algos", default="matching,subcactus,combined")
    b.add_argument("--budget", type=int, default=20)
    b.add_argument("--leaf-cap", type=int, default=CLI_LEAF_CAP)
    b.add_argument("--timing", action="store_true", help="fill the millis column")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, UnknownLinkId) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InfeasibleInstance, Infeasible) as exc:
        w = getattr(exc, "witness", None)
        extra = f" (uncovered 2-cut {list(w.vertices)})" if w is not None else ""
        print(f"infeasible: {exc}{extra}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NotLeafToLeafPlus as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GuaranteeViolated as exc:
        print(f"bound violated: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (BudgetExceeded, SubcactusTooLarge, GenerationFailed) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except analysis.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
