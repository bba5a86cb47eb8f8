"""Report records produced by the benchmark harness."""

import io
from dataclasses import dataclass, field


@dataclass
class TimingBreakdown:
    """Mean per-phase wall-clock seconds over the timed repetitions.

    t_init covers parsing, graph build, and solver state allocation;
    t_min_cut the phase up to cut availability; t_max_flow the flow
    recovery (0.0 for min-cut-only runs).
    """
    t_init: float
    t_min_cut: float
    t_max_flow: float
    repetitions: int

    @property
    def min_cut_total(self):
        return self.t_init + self.t_min_cut

    @property
    def total(self):
        return self.t_init + self.t_min_cut + self.t_max_flow


@dataclass
class SolveReport:
    instance: str
    algo: str
    n: int
    m: int
    cut_value: int
    flow_value: int | None
    timing: TimingBreakdown
    peak_memory_bytes: int | None = None
    memory_source: str = "unavailable"
    variant: str | None = None
    k: int | None = None
    counters: dict = field(default_factory=dict)
    solution: object = None  # (cut, flow) when requested; never serialized

    @property
    def min_cut_time(self):
        return self.timing.min_cut_total


CSV_BASE_COLUMNS = ["instance", "n", "m", "algo", "variant", "t_init",
                    "t_minCut", "t_maxFlow", "cut_value", "flow_value",
                    "peak_mem_bytes", "mem_source", "repetitions", "k"]


def reports_to_csv(reports):
    """One row per (instance, solver); counter columns are the union over
    all reports, missing entries left empty."""
    counter_keys = sorted({key for r in reports for key in r.counters})
    out = io.StringIO()
    out.write(",".join(CSV_BASE_COLUMNS + counter_keys) + "\n")
    for r in reports:
        row = [
            r.instance, str(r.n), str(r.m), r.algo, r.variant or "",
            f"{r.timing.t_init:.6f}", f"{r.timing.t_min_cut:.6f}",
            f"{r.timing.t_max_flow:.6f}", str(r.cut_value),
            "" if r.flow_value is None else str(r.flow_value),
            "" if r.peak_memory_bytes is None else str(r.peak_memory_bytes),
            r.memory_source, str(r.timing.repetitions),
            "" if r.k is None else str(r.k),
        ]
        for key in counter_keys:
            val = r.counters.get(key)
            row.append("" if val is None else str(val))
        out.write(",".join(row) + "\n")
    return out.getvalue()
