"""Command-line interface.

Subcommands: solve (print a solution file), bench (timing/slowdown tables),
gen (write a synthetic DIMACS instance), verify (certificate plus brute
force on small instances). Exit codes: 0 success, 1 verification failure,
2 usage error.
"""

import argparse
import os
import sys

from . import bench as bench_mod
from . import solvers
from .dimacs import parse_dimacs, write_cut_solution, write_dimacs, write_flow_solution
from .errors import CutDisagreementError, FlowbenchError, VerificationFailure
from .generators import InstanceSpec, generate_instance, parse_spec_string
from .memory import run_child_measured
from .verify import BRUTE_FORCE_MAX_NODES, brute_force_min_cut, certify


def build_parser():
    p = argparse.ArgumentParser(
        prog="flowbench",
        description="Max-flow/min-cut solver suite and benchmark harness.")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="solve one DIMACS instance and print the solution")
    ps.add_argument("file")
    ps.add_argument("--algo", required=True, choices=solvers.ALGORITHMS)
    ps.add_argument("--variant", choices=("highest", "lowest"), default=None,
                    help="pseudoflow bucket selection (hpf only)")
    ps.add_argument("--k", type=int, default=None,
                    help="partial-augment path bound (par only; default ceil(sqrt(m)))")
    ps.add_argument("--reps", type=int, default=1, help="timed repetitions")
    ps.add_argument("--min-cut-only", action="store_true",
                    help="skip flow recovery; print the cut solution instead")

    pb = sub.add_parser("bench", help="benchmark solvers on files or synthetic specs")
    pb.add_argument("sources", nargs="+",
                    help="DIMACS files and/or spec strings like "
                         "'kind=grid3d,w=8,h=8,d=4,nb=6,cap=10,seed=1'")
    pb.add_argument("--algos", default="prf,hpf,bk,par",
                    help="comma-separated solver list")
    pb.add_argument("--reps", type=int, default=5)
    pb.add_argument("--out", choices=("table", "csv", "paper", "summary"),
                    default="table", help="output format")
    pb.add_argument("--out-file", default=None, help="write output here instead of stdout")
    pb.add_argument("--min-cut-only", action="store_true")
    pb.add_argument("--no-warmup", action="store_true")
    pb.add_argument("--k", type=int, default=None)
    pb.add_argument("--variant", choices=("highest", "lowest"), default=None)
    pb.add_argument("--isolate", action="store_true",
                    help="measure memory on a child process per (instance, solver)")

    pg = sub.add_parser("gen", help="generate a synthetic instance as DIMACS")
    pg.add_argument("--kind", required=True, choices=("grid2d", "grid3d", "stereo"))
    pg.add_argument("--size", required=True, help="WxH or WxHxD")
    pg.add_argument("--neighborhood", type=int, default=None,
                    help="4|8 (grid2d), 6|26 (grid3d), 2|5 (stereo)")
    pg.add_argument("--cap", type=int, default=10, help="maximum arc capacity")
    pg.add_argument("--noise", type=float, default=0.0)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--decimate", action="store_true", help="halve each axis")
    pg.add_argument("--out", default=None, help="output path (default stdout)")

    pv = sub.add_parser("verify", help="solve and check the certificate "
                        "(plus brute force when n <= 22)")
    pv.add_argument("file")
    pv.add_argument("--algo", required=True, choices=solvers.ALGORITHMS)
    pv.add_argument("--k", type=int, default=None)
    pv.add_argument("--variant", choices=("highest", "lowest"), default=None)
    return p


def _solver_params(args):
    params = {}
    if getattr(args, "variant", None) and args.algo == "hpf":
        params["variant"] = args.variant
    if getattr(args, "k", None) and args.algo == "par":
        params["k"] = args.k
    return params


def _cmd_solve(args):
    report = bench_mod.run_instance(
        args.algo, args.file, repetitions=max(1, args.reps), warmup=False,
        min_cut_only=args.min_cut_only, keep_solution=True,
        measure_memory=False, **_solver_params(args))
    cut, flow = report.solution
    out = sys.stdout.buffer
    if args.min_cut_only:
        write_cut_solution(cut, out)
    else:
        net = parse_dimacs(args.file).network
        write_flow_solution(net, flow, out)
    out.flush()
    t = report.timing
    print(f"# {args.algo} on {report.instance}: cut={report.cut_value} "
          f"t_init={t.t_init:.4f}s t_minCut={t.t_min_cut:.4f}s "
          f"t_maxFlow={t.t_max_flow:.4f}s (reps={t.repetitions})",
          file=sys.stderr)
    return 0


def _load_sources(raw_sources):
    sources = []
    for text in raw_sources:
        if os.path.exists(text):
            sources.append((text, None))
        elif "=" in text:
            spec = parse_spec_string(text)
            sources.append((spec, spec.name))
        else:
            raise FlowbenchError(
                f"{text!r} is neither an existing file nor a spec string")
    return sources


def _cmd_bench(args):
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in solvers.ALGORITHMS:
            raise FlowbenchError(f"unknown solver {a!r}")
    sources = _load_sources(args.sources)
    reports = []
    for source, name in sources:
        for algo in algos:
            params = {}
            if args.variant and algo == "hpf":
                params["variant"] = args.variant
            if args.k and algo == "par":
                params["k"] = args.k
            report = bench_mod.run_instance(
                algo, source, repetitions=args.reps, warmup=not args.no_warmup,
                min_cut_only=args.min_cut_only, name=name, **params)
            if args.isolate:
                data, disp = bench_mod.instance_bytes(source, name)
                import tempfile
                with tempfile.NamedTemporaryFile(suffix=".dimacs", delete=False) as fh:
                    fh.write(data)
                    tmp = fh.name
                try:
                    argv = [sys.executable, "-m", "flowbench.cli", "solve", tmp,
                            "--algo", algo, "--min-cut-only"]
                    rc, peak, src = run_child_measured(argv)
                    if rc == 0 and peak is not None:
                        report.peak_memory_bytes = peak
                        report.memory_source = src
                finally:
                    os.unlink(tmp)
            reports.append(report)

    if len(algos) >= 2:
        table = bench_mod.slowdown_table(reports)
    else:
        table = None

    if args.out == "csv":
        text = bench_mod.reports_to_csv(reports)
    elif args.out == "paper":
        if table is None:
            raise FlowbenchError("paper layout needs >= 2 solvers")
        text = table.to_text()
    elif args.out == "summary":
        text = bench_mod.summary_averages(reports).to_text()
    else:
        text = _rows_table(reports, table)
    if args.out_file:
        with open(args.out_file, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _rows_table(reports, table):
    slow_of = {}
    if table is not None:
        for row in table.rows:
            for algo, sl in row.slowdowns.items():
                slow_of[(row.instance, algo)] = sl
    head = ["instance", "n", "m", "algo", "cut", "t_init", "t_minCut",
            "t_maxFlow", "mem[MB]", "slowdown"]
    grid = [head]
    for r in reports:
        mem = "" if r.peak_memory_bytes is None else f"{r.peak_memory_bytes / 2**20:.1f}"
        sl = slow_of.get((r.instance, r.algo))
        grid.append([
            r.instance, f"{r.n:,}", f"{r.m:,}", r.algo, str(r.cut_value),
            f"{r.timing.t_init:.3f}", f"{r.timing.t_min_cut:.3f}",
            f"{r.timing.t_max_flow:.3f}", mem,
            "" if sl is None else f"{sl:.2f}",
        ])
    widths = [max(len(row[i]) for row in grid) for i in range(len(head))]
    lines = []
    for gi, row in enumerate(grid):
        line = "  ".join(cell.rjust(w) if i else cell.ljust(w)
                         for i, (cell, w) in enumerate(zip(row, widths)))
        lines.append(line.rstrip())
        if gi == 0:
            lines.append("-" * len(line))
    return "\n".join(lines) + "\n"


def _cmd_gen(args):
    parts = args.size.lower().split("x")
    if len(parts) not in (2, 3):
        raise FlowbenchError(f"--size must be WxH or WxHxD, got {args.size!r}")
    dims = [int(x) for x in parts]
    kind = args.kind
    if kind == "grid3d" and len(dims) != 3:
        raise FlowbenchError("grid3d needs WxHxD")
    nb = args.neighborhood
    if nb is None:
        nb = {"grid2d": 4, "grid3d": 6, "stereo": 2}[kind]
    spec = InstanceSpec(kind=kind, width=dims[0], height=dims[1],
                        depth=dims[2] if len(dims) == 3 else 1,
                        neighborhood=nb, max_capacity=args.cap,
                        noise=args.noise, seed=args.seed,
                        decimate=args.decimate)
    data = write_dimacs(generate_instance(spec))
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        print(f"# wrote {spec.name} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(data)
    return 0


def _cmd_verify(args):
    inst = parse_dimacs(args.file)
    net = inst.network
    cut, flow, _counters = solvers.solve(args.algo, net, **_solver_params(args))
    report = certify(net, flow, cut)
    ok = report.certified
    print(f"certify {args.algo} on {inst.name}: "
          f"{'PASS' if ok else 'FAIL'} (flow={report.flow_value}, "
          f"cut={cut.cut_value})" + ("" if ok else f" [{report.violation}]"))
    if net.node_count <= BRUTE_FORCE_MAX_NODES:
        best, _side = brute_force_min_cut(net)
        match = best == cut.cut_value
        print(f"brute force: min cut {best} -> {'MATCH' if match else 'MISMATCH'}")
        ok = ok and match
    else:
        print(f"brute force: skipped (n={net.node_count} > {BRUTE_FORCE_MAX_NODES})")
    return 0 if ok else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "verify":
            return _cmd_verify(args)
    except (CutDisagreementError, VerificationFailure) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except FlowbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
