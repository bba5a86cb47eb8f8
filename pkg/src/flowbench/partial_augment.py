"""Partial augment-relabel max-flow solver.

Source-adjacent arcs are saturated up front; thereafter the solver picks an
active node r (FIFO) and grows a path of admissible arcs from it in DFS
order, relabeling and retreating at dead ends. The search stops when the
path tip reaches t or the path length reaches the bound k, at which point
the bottleneck (capped by r's excess) is pushed along the whole path: a
partial augment moves excess up to k hops toward the sink at a time. With
k = 1 this degenerates to FIFO push-relabel; with k >= n every augment
completes an entire shortest augmenting path. The default k is ceil(sqrt(m)),
the choice with the O(n^2 sqrt(m)) bound.

Gap and global relabeling are identical to the push-relabel module's: an
emptied label bucket below n lifts everything above it to n, and an exact
BFS relabeling runs every 2n relabel operations. At termination the nodes
labeled >= n (after a final exact relabel) form the source side of a
minimum cut; stranded excess is returned to s by the shared recovery pass.
"""

import math

import numpy as np

from ._jit import kernel
from .errors import SolverInvariantError
from .labels import exact_residual_labels, labels_are_valid
from .network import CutSolution, FlowState
from .recovery import recover_feasible_flow

P_AUGMENTATIONS = 0
P_RETREATS = 1
P_RELABELS = 2
P_GAP_RELABELS = 3
P_GLOBAL_RELABELS = 4
N_COUNTERS = 5

GLOBAL_RELABEL_ALPHA = 2


def default_k(net):
    """ceil(sqrt(m)), the bound behind the O(n^2 sqrt(m)) complexity."""
    m = net.arc_count
    if m <= 1:
        return 1
    r = math.isqrt(m)
    return r if r * r == m else r + 1


@kernel
def _par_rebuild(n, s, t, first, label, excess, cur, qstate, qnext, in_queue,
                 pop, lab_head, lab_next, lab_prev):
    for lab in range(n):
        lab_head[lab] = -1
        pop[lab] = 0
    qstate[0] = -1
    qstate[1] = -1
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
                if qstate[1] < 0:
                    qstate[0] = v
                else:
                    qnext[qstate[1]] = v
                qstate[1] = v
                in_queue[v] = 1


@kernel
def _par_solve(n, s, t, k, first, adj, tail, head, cap, pair_flow, label,
               excess, cur, qstate, qnext, in_queue, pop, lab_head, lab_next,
               lab_prev, pnodes, parcs, grl_period, audit_every, counters):
    m = head.shape[0]
    for v in range(n):
        label[v] = 0
        excess[v] = 0
    for j in range(pair_flow.shape[0]):
        pair_flow[j] = 0
    label[s] = n
    for p in range(first[s], first[s + 1]):
        a = adj[p]
        if (a & 1) == 0 and cap[a] > 0:
            pair_flow[a >> 1] = cap[a]
            excess[head[a]] += cap[a]
            excess[s] -= cap[a]

    exact_residual_labels(n, s, t, first, adj, head, cap, pair_flow, label)
    counters[P_GLOBAL_RELABELS] += 1
    _par_rebuild(n, s, t, first, label, excess, cur, qstate, qnext, in_queue,
                 pop, lab_head, lab_next, lab_prev)
    work = 0
    audit_at = audit_every

    while qstate[0] >= 0:
        r = qstate[0]
        qstate[0] = qnext[r]
        if qstate[0] < 0:
            qstate[1] = -1
        qnext[r] = -1
        in_queue[r] = 0
        if excess[r] <= 0 or label[r] >= n:
            continue

        plen = 0
        pnodes[0] = r
        while True:
            v = pnodes[plen]
            if v == t or plen == k:
                # Partial augment: bottleneck of the path, capped by e(r).
                delta = excess[r]
                for i in range(1, plen + 1):
                    a = parcs[i]
                    pf = pair_flow[a >> 1]
                    ra = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
                    if ra < delta:
                        delta = ra
                for i in range(1, plen + 1):
                    a = parcs[i]
                    if (a & 1) == 0:
                        pair_flow[a >> 1] += delta
                    else:
                        pair_flow[a >> 1] -= delta
                counters[P_AUGMENTATIONS] += 1
                excess[r] -= delta
                tip = v
                was = excess[tip]
                excess[tip] = was + delta
                if (tip != t and tip != s and was == 0 and label[tip] < n
                        and in_queue[tip] == 0):
                    if qstate[1] < 0:
                        qstate[0] = tip
                    else:
                        qnext[qstate[1]] = tip
                    qstate[1] = tip
                    qnext[tip] = -1
                    in_queue[tip] = 1
                newlen = plen
                for i in range(1, plen + 1):
                    a = parcs[i]
                    pf = pair_flow[a >> 1]
                    ra = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
                    if ra == 0:
                        newlen = i - 1
                        break
                plen = newlen
                if excess[r] == 0:
                    break
                continue

            p = cur[v]
            pe = first[v + 1]
            found = -1
            lv = label[v]
            while p < pe:
                a = adj[p]
                pf = pair_flow[a >> 1]
                ra = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
                if ra > 0 and lv == label[head[a]] + 1:
                    found = a
                    break
                p += 1
            cur[v] = p
            if found >= 0:
                plen += 1
                pnodes[plen] = head[found]
                parcs[plen] = found
                continue

            # Dead end: relabel v and retreat one step.
            counters[P_RETREATS] += 1
            counters[P_RELABELS] += 1
            work += 1
            old = label[v]
            minl = 2 * n
            for p2 in range(first[v], first[v + 1]):
                a = adj[p2]
                pf = pair_flow[a >> 1]
                ra = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
                if ra > 0:
                    lx = label[head[a]]
                    if lx < minl:
                        minl = lx
            newl = minl + 1
            if newl > 2 * n:
                newl = 2 * n

            pop[old] -= 1
            nx = lab_next[v]
            pv = lab_prev[v]
            if pv >= 0:
                lab_next[pv] = nx
            else:
                lab_head[old] = nx
            if nx >= 0:
                lab_prev[nx] = pv
            lab_next[v] = -1
            lab_prev[v] = -1
            label[v] = newl
            cur[v] = first[v]
            if newl < n:
                pop[newl] += 1
                w = lab_head[newl]
                lab_next[v] = w
                if w >= 0:
                    lab_prev[w] = v
                lab_head[newl] = v

            gapped = False
            if pop[old] == 0:
                counters[P_GAP_RELABELS] += 1
                gapped = True
                for lab in range(old + 1, n):
                    x = lab_head[lab]
                    while x >= 0:
                        nxt = lab_next[x]
                        label[x] = n
                        lab_next[x] = -1
                        lab_prev[x] = -1
                        x = nxt
                    lab_head[lab] = -1
                    pop[lab] = 0

            if audit_every > 0 and counters[P_RELABELS] + counters[P_AUGMENTATIONS] >= audit_at:
                audit_at += audit_every
                if not labels_are_valid(n, m, tail, head, cap, pair_flow, label):
                    return 1

            if work >= grl_period:
                exact_residual_labels(n, s, t, first, adj, head, cap,
                                      pair_flow, label)
                counters[P_GLOBAL_RELABELS] += 1
                _par_rebuild(n, s, t, first, label, excess, cur, qstate,
                             qnext, in_queue, pop, lab_head, lab_next,
                             lab_prev)
                work = 0
                break

            if gapped:
                # Labels jumped around (possibly on the path): restart r.
                if excess[r] > 0 and label[r] < n and in_queue[r] == 0:
                    if qstate[1] < 0:
                        qstate[0] = r
                    else:
                        qnext[qstate[1]] = r
                    qstate[1] = r
                    qnext[r] = -1
                    in_queue[r] = 1
                break

            if plen == 0:
                if label[r] >= n:
                    break  # frozen; stranded excess returns in recovery
            else:
                plen -= 1

    exact_residual_labels(n, s, t, first, adj, head, cap, pair_flow, label)
    counters[P_GLOBAL_RELABELS] += 1
    if audit_every > 0 and not labels_are_valid(n, m, tail, head, cap,
                                                pair_flow, label):
        return 1
    return 0


def par_global_relabel(net, run):
    """Same contract as push_relabel.global_relabel, on ParState labels."""
    exact_residual_labels(net.node_count, net.source, net.sink, net.first,
                          net.adj, net.head, net.cap, run.pair_flow, run.label)
    run.counters[P_GLOBAL_RELABELS] += 1
    _par_rebuild(net.node_count, net.source, net.sink, net.first, run.label,
                 run.excess, run.cur, run.qstate, run.qnext, run.in_queue,
                 run.pop, run.lab_head, run.lab_next, run.lab_prev)


def par_gap_relabel(net, run, emptied_label):
    """Same contract as push_relabel.gap_relabel, on ParState labels."""
    n = net.node_count
    g = int(emptied_label)
    mask = (run.label > g) & (run.label < n)
    mask[net.source] = False
    mask[net.sink] = False
    run.label[mask] = n
    run.counters[P_GAP_RELABELS] += 1
    _par_rebuild(net.node_count, net.source, net.sink, net.first, run.label,
                 run.excess, run.cur, run.qstate, run.qnext, run.in_queue,
                 run.pop, run.lab_head, run.lab_next, run.lab_prev)


class ParRun:
    def __init__(self, net, k=None, audit_every=0):
        self.net = net
        self.k = int(k) if k is not None else default_k(net)
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        self.audit_every = int(audit_every)
        n = net.node_count
        self.label = np.empty(n, dtype=np.int64)
        self.excess = np.empty(n, dtype=np.int64)
        self.cur = np.empty(n, dtype=np.int64)
        self.pair_flow = np.empty(net.pair_count, dtype=np.int64)
        self.qstate = np.empty(2, dtype=np.int64)
        self.qnext = np.empty(n, dtype=np.int64)
        self.in_queue = np.empty(n, dtype=np.uint8)
        self.pop = np.empty(max(n, 1), dtype=np.int64)
        self.lab_head = np.empty(max(n, 1), dtype=np.int64)
        self.lab_next = np.empty(n, dtype=np.int64)
        self.lab_prev = np.empty(n, dtype=np.int64)
        self.pnodes = np.empty(self.k + 2, dtype=np.int64)
        self.parcs = np.empty(self.k + 2, dtype=np.int64)
        self.counters = np.zeros(N_COUNTERS, dtype=np.int64)

    def init_preflow(self):
        """Test hook mirroring push_relabel.PrfRun.init_preflow."""
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
        _par_rebuild(net.node_count, net.source, net.sink, net.first,
                     self.label, self.excess, self.cur, self.qstate,
                     self.qnext, self.in_queue, self.pop, self.lab_head,
                     self.lab_next, self.lab_prev)

    def min_cut(self):
        net = self.net
        err = _par_solve(net.node_count, net.source, net.sink, self.k,
                         net.first, net.adj, net.tail, net.head, net.cap,
                         self.pair_flow, self.label, self.excess, self.cur,
                         self.qstate, self.qnext, self.in_queue, self.pop,
                         self.lab_head, self.lab_next, self.lab_prev,
                         self.pnodes, self.parcs,
                         GLOBAL_RELABEL_ALPHA * net.node_count,
                         self.audit_every, self.counters)
        if err != 0:
            raise SolverInvariantError("partial-augment label validity violated")
        preflow = FlowState(self.pair_flow.copy(), self.excess.copy())
        cut = CutSolution.from_source_side(net, self.label >= net.node_count)
        return cut, preflow

    def counter_dict(self):
        c = self.counters
        return {
            "augmentations": int(c[P_AUGMENTATIONS]),
            "retreats": int(c[P_RETREATS]),
            "relabels": int(c[P_RELABELS]),
            "gap_relabels": int(c[P_GAP_RELABELS]),
            "global_relabels": int(c[P_GLOBAL_RELABELS]),
        }


def prepare(net, *, k=None, audit_every=0, **_ignored):
    return ParRun(net, k=k, audit_every=audit_every)


def par_solve(net, k=None, *, audit_every=0, recover=True):
    """Returns (CutSolution, FlowState, counters); the FlowState is the
    recovered feasible maximum flow when recover=True, else the terminal
    preflow."""
    run = ParRun(net, k=k, audit_every=audit_every)
    cut, preflow = run.min_cut()
    if not recover:
        return cut, preflow, run.counter_dict()
    flow = par_recover_flow(net, preflow)
    return cut, flow, run.counter_dict()


def par_recover_flow(net, preflow):
    """Return stranded excess to s; the flow into t is unchanged."""
    if not preflow.is_preflow(net):
        raise ValueError("input is not a preflow")
    value_before = preflow.value(net)
    flow = recover_feasible_flow(net, preflow)
    if flow.value(net) != value_before:
        raise SolverInvariantError("recovery changed the flow value")
    return flow
