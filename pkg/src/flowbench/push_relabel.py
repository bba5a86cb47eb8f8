"""Generic push-relabel max-flow solver, FIFO highest-label variant.

Phase 1 maintains a preflow and distance labels, discharging the active
node of highest label (FIFO within a label bucket) until no active node of
label < n remains; the nodes then labeled >= n form the source side of a
minimum cut. Gap relabeling fires whenever a label bucket below n empties,
and a full BFS relabeling (global relabel) runs at start-up and after every
2n relabel operations. Phase 2 converts the maximum preflow into a maximum
flow by returning stranded excess to the source (see recovery module).

Labels are capped at 2n; a node whose label reaches n is frozen for the
rest of phase 1. Per-node current-arc cursors persist across selections and
reset only on relabel.
"""

import numpy as np

from ._jit import kernel
from .errors import SolverInvariantError
from .labels import exact_residual_labels, labels_are_valid
from .network import CutSolution, FlowState
from .recovery import recover_feasible_flow

C_PUSHES = 0
C_RELABELS = 1
C_GAP_RELABELS = 2
C_GLOBAL_RELABELS = 3
N_COUNTERS = 4

GLOBAL_RELABEL_ALPHA = 2  # relabel-work budget between global relabels, times n


@kernel
def _rebuild_active(n, s, t, first, label, excess, cur, qhead, qtail, qnext,
                    in_queue, pop, lab_head, lab_next, lab_prev):
    """Reset cursors, label buckets, populations and FIFO queues from the
    current labels/excesses. Returns the highest active label."""
    for lab in range(n):
        qhead[lab] = -1
        qtail[lab] = -1
        lab_head[lab] = -1
        pop[lab] = 0
    hi = -1
    for v in range(n):
        cur[v] = first[v]
        in_queue[v] = 0
        qnext[v] = -1
        lab_next[v] = -1
        lab_prev[v] = -1
        if v == s or v == t:
            continue
        lab = label[v]
        if lab < n:
            pop[lab] += 1
            w = lab_head[lab]
            lab_next[v] = w
            if w >= 0:
                lab_prev[w] = v
            lab_head[lab] = v
            if excess[v] > 0:
                if qtail[lab] < 0:
                    qhead[lab] = v
                else:
                    qnext[qtail[lab]] = v
                qtail[lab] = v
                in_queue[v] = 1
                if lab > hi:
                    hi = lab
    return hi


@kernel
def _prf_phase1(n, s, t, first, adj, tail, head, cap, pair_flow,
                label, excess, cur, qhead, qtail, qnext, in_queue,
                pop, lab_head, lab_next, lab_prev,
                grl_period, audit_every, counters):
    m = head.shape[0]
    for v in range(n):
        label[v] = 0
        excess[v] = 0
    for j in range(pair_flow.shape[0]):
        pair_flow[j] = 0
    label[s] = n

    # Saturate all source-adjacent arcs. Pairs touching s always have their
    # forward direction leaving s (arcs into s are dropped at build time).
    for p in range(first[s], first[s + 1]):
        a = adj[p]
        if (a & 1) == 0 and cap[a] > 0:
            pair_flow[a >> 1] = cap[a]
            excess[head[a]] += cap[a]
            excess[s] -= cap[a]

    exact_residual_labels(n, s, t, first, adj, head, cap, pair_flow, label)
    counters[C_GLOBAL_RELABELS] += 1
    hi = _rebuild_active(n, s, t, first, label, excess, cur, qhead, qtail,
                         qnext, in_queue, pop, lab_head, lab_next, lab_prev)
    work = 0
    audit_at = audit_every

    while hi >= 0:
        u = qhead[hi]
        if u < 0:
            hi -= 1
            continue
        qhead[hi] = qnext[u]
        if qhead[hi] < 0:
            qtail[hi] = -1
        qnext[u] = -1
        in_queue[u] = 0
        if excess[u] <= 0 or label[u] >= n:
            continue  # stale entry (gap-relabeled or already drained)

        eu = excess[u]
        lu = label[u]
        while True:
            p = cur[u]
            pe = first[u + 1]
            while p < pe:
                a = adj[p]
                j = a >> 1
                pf = pair_flow[j]
                r = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
                if r > 0:
                    v = head[a]
                    if label[v] + 1 == lu:
                        d = eu if eu < r else r
                        if (a & 1) == 0:
                            pair_flow[j] = pf + d
                        else:
                            pair_flow[j] = pf - d
                        counters[C_PUSHES] += 1
                        ev = excess[v]
                        excess[v] = ev + d
                        eu -= d
                        if (ev == 0 and v != t and v != s and label[v] < n
                                and in_queue[v] == 0):
                            lv = label[v]
                            if qtail[lv] < 0:
                                qhead[lv] = v
                            else:
                                qnext[qtail[lv]] = v
                            qtail[lv] = v
                            in_queue[v] = 1
                            if lv > hi:
                                hi = lv
                        if eu == 0:
                            break
                p += 1
            cur[u] = p
            if eu == 0:
                excess[u] = 0
                break

            # Relabel: 1 plus the minimum label over residual out-arcs.
            counters[C_RELABELS] += 1
            work += 1
            old = lu
            minl = 2 * n
            for p2 in range(first[u], first[u + 1]):
                a = adj[p2]
                j = a >> 1
                pf = pair_flow[j]
                r = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
                if r > 0:
                    lv = label[head[a]]
                    if lv < minl:
                        minl = lv
            newl = minl + 1
            if newl > 2 * n:
                newl = 2 * n

            pop[old] -= 1
            nx = lab_next[u]
            pv = lab_prev[u]
            if pv >= 0:
                lab_next[pv] = nx
            else:
                lab_head[old] = nx
            if nx >= 0:
                lab_prev[nx] = pv
            lab_next[u] = -1
            lab_prev[u] = -1

            label[u] = newl
            cur[u] = first[u]
            lu = newl
            if newl < n:
                pop[newl] += 1
                w = lab_head[newl]
                lab_next[u] = w
                if w >= 0:
                    lab_prev[w] = u
                lab_head[newl] = u

            if pop[old] == 0:
                # Gap: no node holds label `old` any more, so every node
                # with old < label < n can no longer reach t.
                counters[C_GAP_RELABELS] += 1
                for lab in range(old + 1, n):
                    v = lab_head[lab]
                    while v >= 0:
                        nxt = lab_next[v]
                        label[v] = n
                        lab_next[v] = -1
                        lab_prev[v] = -1
                        v = nxt
                    lab_head[lab] = -1
                    pop[lab] = 0
                lu = label[u]

            if audit_every > 0 and counters[C_PUSHES] + counters[C_RELABELS] >= audit_at:
                audit_at += audit_every
                if not labels_are_valid(n, m, tail, head, cap, pair_flow, label):
                    return 1

            if lu >= n:
                excess[u] = eu  # frozen with its excess; phase 2 returns it
                break
            if work >= grl_period:
                excess[u] = eu
                exact_residual_labels(n, s, t, first, adj, head, cap,
                                      pair_flow, label)
                counters[C_GLOBAL_RELABELS] += 1
                hi = _rebuild_active(n, s, t, first, label, excess, cur,
                                     qhead, qtail, qnext, in_queue, pop,
                                     lab_head, lab_next, lab_prev)
                work = 0
                if audit_every > 0 and not labels_are_valid(
                        n, m, tail, head, cap, pair_flow, label):
                    return 1
                break

    # Exact labels at termination make {label >= n} precisely the set of
    # nodes that cannot reach t in the residual graph.
    exact_residual_labels(n, s, t, first, adj, head, cap, pair_flow, label)
    counters[C_GLOBAL_RELABELS] += 1
    if audit_every > 0 and not labels_are_valid(n, m, tail, head, cap,
                                                pair_flow, label):
        return 1
    return 0


def global_relabel(net, run):
    """Set labels to exact residual BFS distances to t; nodes that cannot
    reach t get n plus their residual distance to s. Rebuilds the active
    buckets, populations and cursors to match."""
    exact_residual_labels(net.node_count, net.source, net.sink, net.first,
                          net.adj, net.head, net.cap, run.pair_flow, run.label)
    run.counters[C_GLOBAL_RELABELS] += 1
    _rebuild_active(net.node_count, net.source, net.sink, net.first,
                    run.label, run.excess, run.cur, run.qhead, run.qtail,
                    run.qnext, run.in_queue, run.pop, run.lab_head,
                    run.lab_next, run.lab_prev)


def gap_relabel(net, run, emptied_label):
    """Lift every node with emptied_label < l(v) < n to n: none of them can
    reach t once label `emptied_label` has no occupants."""
    n = net.node_count
    g = int(emptied_label)
    mask = (run.label > g) & (run.label < n)
    mask[net.source] = False
    mask[net.sink] = False
    run.label[mask] = n
    run.counters[C_GAP_RELABELS] += 1
    _rebuild_active(net.node_count, net.source, net.sink, net.first,
                    run.label, run.excess, run.cur, run.qhead, run.qtail,
                    run.qnext, run.in_queue, run.pop, run.lab_head,
                    run.lab_next, run.lab_prev)


class PrfRun:
    """Allocated solver state for one run (allocation is charged to t_init)."""

    def __init__(self, net, audit_every=0):
        self.net = net
        self.audit_every = int(audit_every)
        n = net.node_count
        self.label = np.empty(n, dtype=np.int64)
        self.excess = np.empty(n, dtype=np.int64)
        self.cur = np.empty(n, dtype=np.int64)
        self.pair_flow = np.empty(net.pair_count, dtype=np.int64)
        self.qhead = np.empty(max(n, 1), dtype=np.int64)
        self.qtail = np.empty(max(n, 1), dtype=np.int64)
        self.qnext = np.empty(n, dtype=np.int64)
        self.in_queue = np.empty(n, dtype=np.uint8)
        self.pop = np.empty(max(n, 1), dtype=np.int64)
        self.lab_head = np.empty(max(n, 1), dtype=np.int64)
        self.lab_next = np.empty(n, dtype=np.int64)
        self.lab_prev = np.empty(n, dtype=np.int64)
        self.counters = np.zeros(N_COUNTERS, dtype=np.int64)

    def init_preflow(self):
        """Zero flow, saturate the source-adjacent arcs, zero labels except
        l(s) = n. Used by tests that drive the heuristics step by step; the
        full solve performs the same initialization inside the kernel."""
        net = self.net
        self.label[:] = 0
        self.label[net.source] = net.node_count
        self.excess[:] = 0
        self.pair_flow[:] = 0
        for p in range(int(net.first[net.source]), int(net.first[net.source + 1])):
            a = int(net.adj[p])
            if (a & 1) == 0 and net.cap[a] > 0:
                self.pair_flow[a >> 1] = net.cap[a]
                self.excess[net.head[a]] += net.cap[a]
                self.excess[net.source] -= net.cap[a]
        _rebuild_active(net.node_count, net.source, net.sink, net.first,
                        self.label, self.excess, self.cur, self.qhead,
                        self.qtail, self.qnext, self.in_queue, self.pop,
                        self.lab_head, self.lab_next, self.lab_prev)

    def min_cut(self):
        net = self.net
        err = _prf_phase1(net.node_count, net.source, net.sink,
                          net.first, net.adj, net.tail, net.head, net.cap,
                          self.pair_flow, self.label, self.excess, self.cur,
                          self.qhead, self.qtail, self.qnext, self.in_queue,
                          self.pop, self.lab_head, self.lab_next, self.lab_prev,
                          GLOBAL_RELABEL_ALPHA * net.node_count,
                          self.audit_every, self.counters)
        if err != 0:
            raise SolverInvariantError("push-relabel label validity violated")
        preflow = FlowState(self.pair_flow.copy(), self.excess.copy())
        cut = CutSolution.from_source_side(net, self.label >= net.node_count)
        return cut, preflow

    def counter_dict(self):
        c = self.counters
        return {
            "pushes": int(c[C_PUSHES]),
            "relabels": int(c[C_RELABELS]),
            "gap_relabels": int(c[C_GAP_RELABELS]),
            "global_relabels": int(c[C_GLOBAL_RELABELS]),
        }


def prepare(net, *, audit_every=0, **_ignored):
    return PrfRun(net, audit_every=audit_every)


def prf_min_cut(net, *, audit_every=0):
    """Phase 1: returns (CutSolution, maximum preflow, operation counters)."""
    run = PrfRun(net, audit_every=audit_every)
    cut, preflow = run.min_cut()
    return cut, preflow, run.counter_dict()


def prf_recover_flow(net, preflow):
    """Phase 2: push stranded excess back to s, preserving the flow into t."""
    if not preflow.is_preflow(net):
        raise ValueError("input is not a preflow (capacity or sign violation)")
    value_before = preflow.value(net)
    flow = recover_feasible_flow(net, preflow)
    if flow.value(net) != value_before:
        raise SolverInvariantError(
            f"phase 2 changed the flow value: {value_before} -> {flow.value(net)}")
    return flow


def label_validity_holds(net, label, flow):
    """Exposed for tests: O(m) label-validity sweep on arbitrary state."""
    return bool(labels_are_valid(net.node_count, net.arc_count, net.tail,
                                 net.head, net.cap, flow.pair_flow, label))
