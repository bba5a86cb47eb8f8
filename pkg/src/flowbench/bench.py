"""Benchmark harness: repeated timed solves, slowdown and summary tables.

Timing methodology: every repetition re-parses the instance bytes and
rebuilds the network so t_init is charged uniformly to all solvers (parse +
graph build + solver state allocation), t_minCut covers the phase up to cut
availability, and t_maxFlow the flow recovery. Phases use a monotonic wall
clock; a warm-up run is excluded from the means; cut values and operation
counters must be identical across repetitions (determinism check). Peak
memory is sampled in-process around one repetition by default; child-process
isolation is available through the CLI.
"""

import io
import os
import time
from dataclasses import dataclass

from . import solvers
from .dimacs import parse_dimacs, write_dimacs
from .errors import CutDisagreementError, SolverInvariantError, VerificationFailure
from .generators import InstanceSpec, generate_instance
from .memory import SOURCE_UNAVAILABLE, PeakMemorySampler
from .report import SolveReport, TimingBreakdown, reports_to_csv  # noqa: F401

# One directed arc costs three 64-bit words here (adjacency slot, head,
# capacity); any real solve must allocate at least this much.
ARC_RECORD_BYTES = 24


def arc_array_lower_bound(m):
    return m * ARC_RECORD_BYTES


def instance_bytes(source, name=None):
    """Normalize a bench input (bytes, path, or InstanceSpec) to DIMACS
    bytes plus a display name. Generation is not timed; parsing is."""
    if isinstance(source, InstanceSpec):
        inst = generate_instance(source)
        return write_dimacs(inst), name or source.name
    if isinstance(source, bytes):
        return source, name or "<bytes>"
    if isinstance(source, str) and "\n" in source:
        return source.encode("ascii"), name or "<string>"
    path = os.fspath(source)
    with open(path, "rb") as fh:
        return fh.read(), name or os.path.basename(path)


def run_instance(algo, source, repetitions=5, *, min_cut_only=False,
                 warmup=True, measure_memory=True, keep_solution=False,
                 name=None, **solver_params):
    """Run one solver on one instance with repetition and return a report.

    Each repetition separately times parse+build (t_init), the min-cut phase
    (t_minCut), and flow recovery (t_maxFlow; skipped when min_cut_only).
    Phase means exclude the warm-up run. Memory is sampled around the
    warm-up run when present, else around the first timed repetition.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    data, name = instance_bytes(source, name)
    reps = []
    cut_value = None
    counters = None
    flow_value = None
    solution = None
    nn = mm = 0
    peak_bytes = None
    mem_source = SOURCE_UNAVAILABLE
    kk = None

    total_runs = repetitions + (1 if warmup else 0)
    for idx in range(total_runs):
        is_warmup = warmup and idx == 0
        sample_mem = measure_memory and (idx == 0)
        sampler = PeakMemorySampler() if sample_mem else None
        if sampler is not None:
            sampler.__enter__()
        t0 = time.perf_counter()
        inst = parse_dimacs(data, name=name)
        net = inst.network
        run = solvers.prepare(algo, net, **solver_params)
        t1 = time.perf_counter()
        cut, state = run.min_cut()
        t2 = time.perf_counter()
        if min_cut_only:
            flow = None
            t3 = t2
        else:
            flow = run.recover(state)
            t3 = time.perf_counter()
        if sampler is not None:
            sampler.__exit__(None, None, None)
            peak_bytes = sampler.peak_bytes
            mem_source = sampler.source
        nn, mm = net.node_count, net.arc_count
        kk = getattr(run._run, "k", None)
        rep_counters = run.counters()
        rep_flow_value = None if flow is None else flow.value(net)
        if cut_value is None:
            cut_value = cut.cut_value
            counters = rep_counters
            flow_value = rep_flow_value
        else:
            if cut.cut_value != cut_value or rep_counters != counters:
                raise SolverInvariantError(
                    f"{algo} is nondeterministic on {name}: "
                    f"{cut.cut_value}/{rep_counters} vs {cut_value}/{counters}")
            if rep_flow_value != flow_value:
                raise SolverInvariantError(
                    f"{algo} flow value changed across repetitions on {name}")
        if flow is not None and flow.value(net) != cut.cut_value:
            raise VerificationFailure(
                f"{algo} on {name}: flow value {flow.value(net)} != "
                f"cut value {cut.cut_value}")
        if not is_warmup:
            reps.append((t1 - t0, t2 - t1, t3 - t2))
        if keep_solution and idx == total_runs - 1:
            solution = (cut, flow)

    r = len(reps)
    timing = TimingBreakdown(
        t_init=sum(x[0] for x in reps) / r,
        t_min_cut=sum(x[1] for x in reps) / r,
        t_max_flow=sum(x[2] for x in reps) / r,
        repetitions=r,
    )
    return SolveReport(
        instance=name, algo=algo, n=nn, m=mm, cut_value=int(cut_value),
        flow_value=flow_value, timing=timing, peak_memory_bytes=peak_bytes,
        memory_source=mem_source, variant=solver_params.get("variant"),
        k=kk, counters=counters, solution=solution,
    )


@dataclass
class SlowdownRow:
    instance: str
    n: int
    m: int
    cut_value: int
    times: dict       # algo -> t_init + t_minCut seconds
    slowdowns: dict   # algo -> factor (fastest gets exactly 1.0)

    def fastest(self):
        best = None
        for algo, tt in self.times.items():
            if best is None or tt < self.times[best]:
                best = algo
        return best


@dataclass
class SlowdownTable:
    algos: list
    rows: list

    def to_csv(self):
        out = io.StringIO()
        head = ["instance", "n", "m", "cut_value"]
        head += [f"t_{a}" for a in self.algos]
        head += [f"slowdown_{a}" for a in self.algos]
        out.write(",".join(head) + "\n")
        for row in self.rows:
            cells = [row.instance, str(row.n), str(row.m), str(row.cut_value)]
            cells += [f"{row.times[a]:.6f}" for a in self.algos]
            cells += [f"{row.slowdowns[a]:.2f}" for a in self.algos]
            out.write(",".join(cells) + "\n")
        return out.getvalue()

    def to_text(self):
        head = ["instance", "nodes", "arcs", "cut"]
        head += [f"{a} [s]" for a in self.algos]
        head += [f"{a} slow" for a in self.algos]
        grid = [head]
        for row in self.rows:
            cells = [row.instance, f"{row.n:,}", f"{row.m:,}", str(row.cut_value)]
            cells += [f"{row.times[a]:.2f}" for a in self.algos]
            cells += [f"{row.slowdowns[a]:.2f}" for a in self.algos]
            grid.append(cells)
        widths = [max(len(r[i]) for r in grid) for i in range(len(head))]
        lines = []
        for gi, r in enumerate(grid):
            line = "  ".join(cell.rjust(w) if i else cell.ljust(w)
                             for i, (cell, w) in enumerate(zip(r, widths)))
            lines.append(line.rstrip())
            if gi == 0:
                lines.append("-" * len(line))
        return "\n".join(lines) + "\n"


def slowdown_table(reports):
    """Per-instance run times (init + min-cut) and slowdown factors.

    Requires at least two solvers per instance and exact cut-value agreement
    across them; disagreement is a correctness failure, not a table row.
    """
    by_inst = {}
    algos = []
    for r in reports:
        by_inst.setdefault(r.instance, []).append(r)
        if r.algo not in algos:
            algos.append(r.algo)
    rows = []
    for inst, group in by_inst.items():
        seen = {}
        for r in group:
            if r.algo in seen:
                raise ValueError(f"duplicate report for ({inst}, {r.algo})")
            seen[r.algo] = r
        if len(seen) < 2:
            raise ValueError(
                f"instance {inst}: need >= 2 solvers for a slowdown table")
        values = {r.cut_value for r in group}
        if len(values) != 1:
            detail = ", ".join(f"{r.algo}={r.cut_value}" for r in group)
            raise CutDisagreementError(f"instance {inst}: {detail}")
        times = {a: seen[a].min_cut_time for a in algos if a in seen}
        tmin = min(times.values())
        if tmin <= 0:
            # sub-resolution timings: fall back to treating them as equal
            slow = {a: 1.0 for a in times}
        else:
            slow = {a: times[a] / tmin for a in times}
        any_r = group[0]
        rows.append(SlowdownRow(inst, any_r.n, any_r.m,
                                group[0].cut_value, times, slow))
    return SlowdownTable(algos=algos, rows=rows)


@dataclass
class SummaryPartition:
    fastest: str
    count: int
    mean_time: dict
    mean_slowdown: dict


@dataclass
class SummaryTable:
    algos: list
    partitions: list

    def to_text(self):
        lines = []
        header = "".ljust(16) + "".join(a.upper().rjust(12) for a in self.algos)
        for part in self.partitions:
            lines.append(f"{part.fastest.upper()} is better "
                         f"({part.count} problem instances)")
            lines.append(header)
            lines.append("Ave. run-time".ljust(16) + "".join(
                f"{part.mean_time[a]:.2f}".rjust(12) for a in self.algos))
            lines.append("Ave. slowdown".ljust(16) + "".join(
                f"{part.mean_slowdown[a]:.2f}".rjust(12) for a in self.algos))
            lines.append("")
        return "\n".join(lines)


def summary_averages(reports):
    """Partition instances by their fastest solver; per partition report
    each solver's mean run time and mean slowdown (Table II layout)."""
    table = slowdown_table(reports)
    if not table.rows:
        raise ValueError("no instances to summarize")
    groups = {}
    for row in table.rows:
        groups.setdefault(row.fastest(), []).append(row)
    partitions = []
    for fastest in table.algos:
        rows = groups.get(fastest)
        if not rows:
            continue
        mean_time = {}
        mean_slow = {}
        for a in table.algos:
            have = [r for r in rows if a in r.times]
            if have:
                mean_time[a] = sum(r.times[a] for r in have) / len(have)
                mean_slow[a] = sum(r.slowdowns[a] for r in have) / len(have)
        partitions.append(SummaryPartition(fastest, len(rows), mean_time, mean_slow))
    return SummaryTable(algos=table.algos, partitions=partitions)
