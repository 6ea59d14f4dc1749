"""Command-line entry point: ``sigmarho <subcommand> ...``.

Exit codes: 0 YES / valid, 1 NO / invalid / sweep disagreement, 2 bad input
or unsupported request, 3 an enumeration cap was exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import kernel_modulator
from .domination import (
    CAP_ENV_VAR,
    DominationAnswer,
    SigmaRhoSpec,
    brute_force,
    brute_force_weighted,
    is_sigma_rho_dominating,
    preset,
)
from .errors import CapExceededError, LiftInconsistencyError, ParseError, SigmaRhoError
from .graph import (
    Graph,
    Modulator,
    approx_vertex_cover,
    compute_degree_d_modulator,
    format_graph,
    generate_connected,
    generate_random,
    read_graph,
    verify_modulator,
)
from .kernel_nd import VARIANTS, format_nd_kernel, nd_enumerate_solve
from .modular import (
    MODULAR_SOLVERS,
    decompose,
    format_decomposition,
    modular_width,
    parse_decomposition,
    random_cograph,
)
from .poly import all_solutions, format_csp, satisfiable_brute

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

SWEEP_COLUMNS = (
    "id", "n", "m", "p", "graph_seed", "sigma", "rho", "d", "k",
    "constraints", "bits", "kernel", "oracle", "agree", "lifts", "lift_errors",
)


# --------------------------------------------------------------------------
# shared helpers
# --------------------------------------------------------------------------

def _add_spec_args(p: argparse.ArgumentParser):
    p.add_argument("--problem", help="named problem, e.g. efficient-dominating or [1,2]-dominating")
    p.add_argument("--sigma", help="sigma as '0,2,4', 'nat' or 'nat+'")
    p.add_argument("--rho", help="rho, same syntax as --sigma")


def _spec(args) -> SigmaRhoSpec:
    if args.problem:
        if args.sigma or args.rho:
            raise SigmaRhoError("give either --problem or --sigma/--rho, not both")
        return preset(args.problem)
    if args.sigma is None or args.rho is None:
        raise SigmaRhoError("need --problem or both --sigma and --rho")
    return SigmaRhoSpec.of(args.sigma, args.rho)


def _vertex_list(text: str, n: int) -> list[int]:
    """Comma-separated 1-indexed vertices; empty string is the empty set."""
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"bad vertex {tok!r}") from None
        if not 1 <= v <= n:
            raise ParseError(f"vertex {v} out of range 1..{n}")
        out.append(v - 1)
    return out


def _fmt_set(vs) -> str:
    return ",".join(str(v + 1) for v in sorted(vs))


def _answer_line(ans: DominationAnswer, weighted: bool = False) -> str:
    if not ans.exists:
        return "NO"
    line = f"YES size={len(ans.witness)}"
    if weighted:
        line += f" weight={ans.value}"
    return line + f" witness={_fmt_set(ans.witness)}"


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_solve(args) -> int:
    wg = read_graph(args.graph)
    spec = _spec(args)
    weighted = any(w != 1 for w in wg.weights)
    if args.method == "brute":
        if weighted:
            ans = brute_force_weighted(wg, spec, args.budget)
        else:
            ans = brute_force(wg.graph, spec, args.budget)
    elif args.method == "nd":
        if weighted:
            raise SigmaRhoError("the nd method solves unweighted graphs only")
        ans = nd_enumerate_solve(wg.graph, spec, args.budget)
    else:
        return _solve_modular(wg.graph, args)
    print(_answer_line(ans, weighted))
    return EXIT_YES if ans.exists else EXIT_NO


def _solve_modular(g: Graph, args) -> int:
    if args.problem not in MODULAR_SOLVERS:
        raise SigmaRhoError(f"modular solving supports --problem {' or '.join(MODULAR_SOLVERS)}")
    if args.tree:
        path = Path(args.tree)
        tree = parse_decomposition(path.read_text(), base_dir=str(path.parent), graph=g)
    else:
        tree = decompose(g)
    sol = MODULAR_SOLVERS[args.problem](g, tree)
    budget = getattr(args, "budget", None)
    if sol is None or (budget is not None and len(sol) > budget):
        print(f"NO mw={modular_width(tree)}")
        return EXIT_NO
    print(f"YES size={len(sol)} witness={_fmt_set(sol)} mw={modular_width(tree)}")
    return EXIT_YES


def cmd_solve_modular(args) -> int:
    return _solve_modular(read_graph(args.graph).graph, args)


def _sidecar(kr: kernel_modulator.KernelResult) -> str:
    coeffs = " ".join(str(c) for c in kr.interpolant.coeffs)
    lines = [
        f"c gamma {kr.gamma} alpha {kr.alpha} degree {kr.substituted_degree}",
        f"c constraints {kr.constraints_before_reduction} -> {len(kr.csp.constraints)}",
        f"c shortcut {'yes' if kr.shortcut else 'no'}",
        f"interpolant {coeffs}",
    ]
    lines += [f"var {i} {v + 1}" for i, v in enumerate(kr.modulator_order)]
    for v in sorted(kr.elimination_table):
        entry = kr.elimination_table[v]
        lines.append(f"elim {v + 1}: {coeffs}; {_fmt_set(entry.modulator_neighbors)}")
    return "\n".join(lines) + "\n"


def cmd_kernelize(args) -> int:
    g = read_graph(args.graph).graph
    spec = _spec(args)
    d = args.modulator_degree
    if args.modulator is not None:
        s = frozenset(_vertex_list(args.modulator, g.n))
        if not verify_modulator(g, s, d):
            raise SigmaRhoError(f"given set is not a degree-{d} modulator")
    elif args.approx:
        if d != 0:
            raise SigmaRhoError("--approx only covers vertex cover (--modulator-degree 0)")
        s = approx_vertex_cover(g)
    else:
        s = compute_degree_d_modulator(g, d)
    kr = kernel_modulator.kernelize(g, Modulator(s, d), spec, shortcut=not args.no_shortcut)
    csp_text = format_csp(kr.csp)
    if args.out:
        Path(args.out).write_text(csp_text)
        Path(args.out + ".map").write_text(_sidecar(kr))
    else:
        sys.stdout.write(csp_text)
    print(
        f"k={kr.k} constraints={len(kr.csp.constraints)} bits={kr.bit_size_estimate}",
        file=sys.stderr,
    )
    if not args.solve:
        return EXIT_YES
    tau = satisfiable_brute(kr.csp)
    if tau is None:
        print("NO")
        return EXIT_NO
    lifted = kernel_modulator.lift_assignment(kr, tau)
    print(f"YES size={len(lifted)} witness={_fmt_set(lifted)}")
    return EXIT_YES


def cmd_kernelize_nd(args) -> int:
    g = read_graph(args.graph).graph
    kern = VARIANTS[args.variant](g, _spec(args), args.k)
    _write(format_nd_kernel(kern), args.out)
    return EXIT_YES


def cmd_generate(args) -> int:
    if args.cograph:
        g = random_cograph(args.n, args.seed)
    elif args.connected:
        g = generate_connected(args.n, args.p, args.seed)
    else:
        g = generate_random(args.n, args.p, args.seed)
    _write(format_graph(g), args.out)
    if args.tree_out:
        Path(args.tree_out).write_text(format_decomposition(decompose(g)) + "\n")
    return EXIT_YES


def cmd_verify(args) -> int:
    wg = read_graph(args.graph)
    spec = _spec(args)
    d = _vertex_list(args.witness, wg.graph.n)
    ok = is_sigma_rho_dominating(wg.graph, spec, d)
    weight = sum(wg.weights[v] for v in d)
    if ok and args.budget is not None and weight > args.budget:
        print(f"INVALID weight={weight} exceeds budget {args.budget}")
        return EXIT_NO
    print(("VALID" if ok else "INVALID") + f" size={len(set(d))} weight={weight}")
    return EXIT_YES if ok else EXIT_NO


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepTask:
    index: int
    n: int
    p: float
    graph_seed: int
    spec: SigmaRhoSpec
    d: int
    shortcut: bool
    timing: bool


def _sweep_one(task: SweepTask) -> list[str]:
    start = time.perf_counter()
    g = generate_random(task.n, task.p, task.graph_seed)
    s = compute_degree_d_modulator(g, task.d)
    # looked up on the module so tests can swap in a broken kernelizer
    kr = kernel_modulator.kernelize(g, Modulator(s, task.d), task.spec, shortcut=task.shortcut)
    sols = all_solutions(kr.csp)
    lift_errors = 0
    for tau in sols:
        try:
            kernel_modulator.lift_assignment(kr, tau)
        except LiftInconsistencyError:
            lift_errors += 1
    oracle = brute_force(g, task.spec).exists
    kernel = bool(sols)
    row = [
        task.index, g.n, g.edge_count, task.p, task.graph_seed, task.spec.sigma, task.spec.rho,
        task.d, kr.k, len(kr.csp.constraints), kr.bit_size_estimate,
        "YES" if kernel else "NO", "YES" if oracle else "NO",
        int(kernel == oracle), len(sols), lift_errors,
    ]
    if task.timing:
        row.append(f"{time.perf_counter() - start:.4f}")
    return [str(x) for x in row]


def build_sweep_tasks(args) -> tuple[list[SweepTask], int]:
    """Instances in id order plus the number of (spec, d) pairs skipped by the guard."""
    specs = [SigmaRhoSpec.of(*s.split(";")) for s in args.spec] if args.spec else [preset(x) for x in args.problems]
    ps = [float(x) for x in args.p.split(",")]
    ds = [int(x) for x in args.d.split(",")]
    pairs, skipped = [], 0
    for spec in specs:
        for d in ds:
            if kernel_modulator.check_guard(spec, d):
                pairs.append((spec, d))
            else:
                skipped += 1
    tasks = []
    for i in range(args.count):
        rng = random.Random(f"{args.seed}:{i}")
        n = rng.randint(args.n_min, args.n_max)
        p = ps[i % len(ps)]
        gseed = rng.randrange(2**31)
        for spec, d in pairs:
            tasks.append(SweepTask(len(tasks), n, p, gseed, spec, d, not args.no_shortcut, args.timing))
    return tasks, skipped


def cmd_sweep(args) -> int:
    tasks, skipped = build_sweep_tasks(args)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_sweep_one, tasks))  # map keeps id order
    else:
        rows = [_sweep_one(t) for t in tasks]
    cols = SWEEP_COLUMNS + (("seconds",) if args.timing else ())
    agree = sum(r[13] == "1" for r in rows)
    lift_errors = sum(int(r[15]) for r in rows)
    lines = ["\t".join(cols)] + ["\t".join(r) for r in rows]
    lines.append(
        f"# instances={len(rows)} agree={agree} disagree={len(rows) - agree} "
        f"lift_errors={lift_errors} guard_skipped={skipped}"
    )
    _write("\n".join(lines) + "\n", args.out)
    if args.out:
        print(lines[-1])
    return EXIT_YES if agree == len(rows) and lift_errors == 0 else EXIT_NO


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigmarho",
        description="Exact solvers and kernels for [sigma, rho]-domination.",
        epilog=f"Set {CAP_ENV_VAR}=<int> to change the vertex cap of the exhaustive oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide / minimize a [sigma, rho]-set")
    p.add_argument("--graph", required=True)
    _add_spec_args(p)
    p.add_argument("--method", choices=("brute", "nd", "modular"), default="brute")
    p.add_argument("--budget", "--k", type=int, dest="budget", help="maximum size (or weight)")
    p.add_argument("--tree", help="decomposition file for --method modular")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernelize", help="modulator kernel to a polynomial root CSP")
    p.add_argument("--graph", required=True)
    _add_spec_args(p)
    p.add_argument("--modulator-degree", type=int, default=0)
    p.add_argument("--modulator", help="1-indexed vertex list; computed exactly when omitted")
    p.add_argument("--approx", action="store_true", help="greedy 2-approximate vertex cover instead of an exact one")
    p.add_argument("--no-shortcut", action="store_true", help="always run the full reduction")
    p.add_argument("--out", help="CSP file; a .map sidecar is written next to it")
    p.add_argument("--solve", action="store_true", help="also solve the kernel and lift the answer")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("kernelize-nd", help="neighborhood-diversity kernel")
    p.add_argument("--graph", required=True)
    _add_spec_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--variant", choices=tuple(VARIANTS), default="bounded")
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernelize_nd)

    p = sub.add_parser("solve-modular", help="modular-width solver")
    p.add_argument("--graph", required=True)
    p.add_argument("--tree")
    p.add_argument("--problem", required=True, choices=tuple(MODULAR_SOLVERS))
    p.set_defaults(func=cmd_solve_modular, budget=None)

    p = sub.add_parser("generate", help="seeded random graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--connected", action="store_true")
    kind.add_argument("--cograph", action="store_true")
    p.add_argument("--out")
    p.add_argument("--tree-out", help="also write a decomposition tree")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a claimed witness")
    p.add_argument("--graph", required=True)
    _add_spec_args(p)
    p.add_argument("--witness", required=True, help="1-indexed vertex list, may be empty")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="modulator kernel vs. oracle on random graphs")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--p", default="0.2,0.5,0.8")
    p.add_argument("--d", default="0,1,2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--problems", nargs="+",
        default=["efficient-dominating", "total-perfect-dominating", "weakly-perfect-dominating"],
    )
    p.add_argument("--spec", action="append", help="extra 'sigma;rho' pair, replaces --problems")
    p.add_argument("--no-shortcut", action="store_true")
    p.add_argument("--timing", action="store_true", help="add a wall-time column (breaks byte-identity)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SigmaRhoError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
