"""Uniform two-phase interface over the four solvers.

Every solver exposes the same shape to the harness: prepare (state
allocation, charged to t_init), min_cut (phase up to cut availability), and
recover (flow recovery; a no-op for BK, which maintains a feasible flow
throughout and is charged ~0 seconds of t_maxFlow, matching how the
reference codes report it).
"""

from . import boykov_kolmogorov as bk
from . import partial_augment as par
from . import pseudoflow as hpf
from . import push_relabel as prf

ALGORITHMS = ("prf", "hpf", "bk", "par")

_MODULES = {"prf": prf, "hpf": hpf, "bk": bk, "par": par}


class SolverRun:
    """One prepared solver run: min_cut() then optionally recover()."""

    def __init__(self, algo, net, **params):
        if algo not in _MODULES:
            raise ValueError(f"unknown solver {algo!r}; expected one of {ALGORITHMS}")
        self.algo = algo
        self.net = net
        self._run = _MODULES[algo].prepare(net, **params)

    def min_cut(self):
        """Returns (CutSolution, solver state FlowState). The state is a
        preflow for prf/par, a pseudoflow for hpf, a feasible flow for bk."""
        return self._run.min_cut()

    def recover(self, state):
        """Turn the min-cut stage's state into a feasible maximum flow."""
        if self.algo == "prf":
            return prf.prf_recover_flow(self.net, state)
        if self.algo == "hpf":
            return hpf.hpf_recover_flow(self.net, state)
        if self.algo == "par":
            return par.par_recover_flow(self.net, state)
        return state  # bk already holds a feasible maximum flow

    def counters(self):
        return self._run.counter_dict()


def prepare(algo, net, **params):
    return SolverRun(algo, net, **params)


def solve(algo, net, *, min_cut_only=False, **params):
    """Convenience one-shot solve.

    Returns (CutSolution, FlowState | None, counters): the flow is the
    recovered feasible maximum flow, or None when min_cut_only.
    """
    run = SolverRun(algo, net, **params)
    cut, state = run.min_cut()
    if min_cut_only:
        return cut, None, run.counters()
    return cut, run.recover(state), run.counters()
