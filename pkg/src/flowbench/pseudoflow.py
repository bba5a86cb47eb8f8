"""Hochbaum pseudoflow min-cut solver.

The state is a forest of components: each node has at most one current arc
(par_arc, the arc from its current node into it); following current arcs
leads to the component's root, the only member allowed to hold nonzero
excess or deficit. Initialization saturates all source- and sink-adjacent
arcs, making every node a singleton component. Each iteration selects an
active component (root excess > 0, root label < n), DFS-scans its
lowest-labeled subtree for an admissible arc (d(w) = d(v) + 1 into another
component), and either merges - pushing the root's entire excess along
root(w) -> ... -> w -> v -> ... -> root(v), splitting where residual runs
out - or relabels the exhausted node and retreats. Termination: no active
component with root label < n; nodes then labeled n form the source side
of a minimum cut. A maximum feasible flow is recovered afterwards by
canceling the pseudoflow's imbalances (flow decomposition style peeling).

Two variants differ only in which active component is selected: highest
root label (the default) or lowest.
"""

import numpy as np

from ._jit import kernel
from .errors import SolverInvariantError
from .network import CutSolution, FlowState
from .recovery import recover_feasible_flow

H_MERGERS = 0
H_RELABELS = 1
H_SPLITS = 2
H_GAP_RELABELS = 3
N_COUNTERS = 4


@kernel
def _hpf_init(n, s, t, first, adj, head, cap, pair_flow, d, par, par_arc,
              fchild, nsib, psib, excess, cur, bhead, bnext, bprev, in_bucket,
              pop, lab_head, lab_next, lab_prev):
    for v in range(n):
        d[v] = 0
        par[v] = -1
        par_arc[v] = -1
        fchild[v] = -1
        nsib[v] = -1
        psib[v] = -1
        excess[v] = 0
        cur[v] = first[v]
        bnext[v] = -1
        bprev[v] = -1
        in_bucket[v] = 0
        lab_next[v] = -1
        lab_prev[v] = -1
    for j in range(pair_flow.shape[0]):
        pair_flow[j] = 0
    for lab in range(n + 1):
        bhead[lab] = -1
        pop[lab] = 0
        if lab < n:
            lab_head[lab] = -1
    # all non-terminals start at label 0
    for v in range(n - 1, -1, -1):
        if v != s and v != t:
            pop[0] += 1
            w0 = lab_head[0]
            lab_next[v] = w0
            if w0 >= 0:
                lab_prev[w0] = v
            lab_head[0] = v
    d[s] = n
    d[t] = 0

    # Saturate source-adjacent arcs (pairs touching s always point out of s).
    for p in range(first[s], first[s + 1]):
        a = adj[p]
        if (a & 1) == 0 and cap[a] > 0:
            pair_flow[a >> 1] = cap[a]
            excess[head[a]] += cap[a]
            excess[s] -= cap[a]
    # Saturate sink-adjacent arcs; the (s, t) pair was handled above.
    for p in range(first[t], first[t + 1]):
        a = adj[p]            # odd arc t -> x
        b = a ^ 1             # forward arc x -> t
        x = head[a]
        if x == s:
            continue
        if cap[b] > 0:
            pair_flow[b >> 1] = cap[b]
            excess[x] -= cap[b]
            excess[t] += cap[b]

    for v in range(n - 1, -1, -1):
        if v != s and v != t and excess[v] > 0:
            w0 = bhead[0]
            bnext[v] = w0
            if w0 >= 0:
                bprev[w0] = v
            bhead[0] = v
            in_bucket[v] = 1


@kernel
def _hpf_merger(n, s, t, first, adj, head, cap, pair_flow, d, par, par_arc,
                fchild, nsib, psib, excess, bhead, bnext, bprev, in_bucket,
                bptr, w, arc, pnodes, parcs, counters):
    """Push the entire excess of root(w) along the admissible path through
    (w, v), splitting the forest wherever residual capacity runs out."""
    v0 = head[arc]
    # Collect root(w) .. w into pnodes[0..k].
    cnt = 0
    x = w
    while x >= 0:
        pnodes[cnt] = x
        cnt += 1
        x = par[x]
    i = 0
    j = cnt - 1
    while i < j:
        tmp = pnodes[i]
        pnodes[i] = pnodes[j]
        pnodes[j] = tmp
        i += 1
        j -= 1
    k = cnt - 1
    for i in range(k):
        parcs[i] = par_arc[pnodes[i + 1]]
    parcs[k] = arc
    # Append v .. root(v); the arc from pnodes[i] to pnodes[i+1] on this side
    # is the reverse of pnodes[i]'s current arc.
    idx = k + 1
    x = v0
    while x >= 0:
        pnodes[idx] = x
        idx += 1
        nxt = par[x]
        if nxt >= 0:
            parcs[idx - 1] = par_arc[x] ^ 1
        x = nxt
    last = idx - 1

    rw = pnodes[0]
    carry = excess[rw]
    excess[rw] = 0

    # The old parent links along root(w) .. w all get rewritten; detach them
    # first so child lists stay consistent while relinking.
    for i in range(k):
        c = pnodes[i + 1]
        q = pnodes[i]
        nx = nsib[c]
        pv = psib[c]
        if pv >= 0:
            nsib[pv] = nx
        else:
            fchild[q] = nx
        if nx >= 0:
            psib[nx] = pv
        nsib[c] = -1
        psib[c] = -1
        par[c] = -1
        par_arc[c] = -1

    for i in range(last):
        a = parcs[i]
        j2 = a >> 1
        pf = pair_flow[j2]
        ra = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
        amt = carry if carry < ra else ra
        strand = carry - amt
        if (a & 1) == 0:
            pair_flow[j2] = pf + amt
        else:
            pair_flow[j2] = pf - amt
        node = pnodes[i]
        if i <= k:
            if strand > 0:
                # Undelivered excess roots the upstream piece here.
                excess[node] += strand
                counters[H_SPLITS] += 1
                if node != s and node != t and d[node] < n and in_bucket[node] == 0 and excess[node] > 0:
                    w0 = bhead[d[node]]
                    bnext[node] = w0
                    if w0 >= 0:
                        bprev[w0] = node
                    bprev[node] = -1
                    bhead[d[node]] = node
                    in_bucket[node] = 1
                    if d[node] > bptr[0]:
                        bptr[0] = d[node]
                    if d[node] < bptr[1]:
                        bptr[1] = d[node]
            else:
                q = pnodes[i + 1]
                par[node] = q
                par_arc[node] = a ^ 1
                w0 = fchild[q]
                nsib[node] = w0
                if w0 >= 0:
                    psib[w0] = node
                psib[node] = -1
                fchild[q] = node
        else:
            if strand > 0:
                excess[node] += strand
                counters[H_SPLITS] += 1
                q = par[node]
                nx = nsib[node]
                pv = psib[node]
                if pv >= 0:
                    nsib[pv] = nx
                else:
                    fchild[q] = nx
                if nx >= 0:
                    psib[nx] = pv
                nsib[node] = -1
                psib[node] = -1
                par[node] = -1
                par_arc[node] = -1
                if d[node] < n and in_bucket[node] == 0:
                    w0 = bhead[d[node]]
                    bnext[node] = w0
                    if w0 >= 0:
                        bprev[w0] = node
                    bprev[node] = -1
                    bhead[d[node]] = node
                    in_bucket[node] = 1
                    if d[node] > bptr[0]:
                        bptr[0] = d[node]
                    if d[node] < bptr[1]:
                        bptr[1] = d[node]
        carry = amt

    target = pnodes[last]
    excess[target] += carry
    if (target != s and target != t and excess[target] > 0 and d[target] < n
            and in_bucket[target] == 0 and par[target] < 0):
        w0 = bhead[d[target]]
        bnext[target] = w0
        if w0 >= 0:
            bprev[w0] = target
        bprev[target] = -1
        bhead[d[target]] = target
        in_bucket[target] = 1
        if d[target] > bptr[0]:
            bptr[0] = d[target]
        if d[target] < bptr[1]:
            bptr[1] = d[target]
    counters[H_MERGERS] += 1


@kernel
def _hpf_state_ok(n, s, t, first, adj, tail, head, cap, pair_flow, d, par,
                  par_arc, fchild, nsib, psib, excess):
    """Invariant audit: forest acyclicity, label monotonicity along current
    arcs, residual current arcs, zero excess off the roots, feasibility."""
    for j in range(pair_flow.shape[0]):
        if pair_flow[j] > cap[2 * j] or -pair_flow[j] > cap[2 * j + 1]:
            return False
    for v in range(n):
        if v == s or v == t:
            if par[v] != -1:
                return False
            continue
        q = par[v]
        if q >= 0:
            if excess[v] != 0:
                return False
            a = par_arc[v]
            if a < 0 or head[a] != v or tail[a] != q:
                return False
            pf = pair_flow[a >> 1]
            ra = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
            if ra <= 0:
                return False
            if d[v] < d[q]:
                return False
        steps = 0
        x = v
        while par[x] >= 0:
            x = par[x]
            steps += 1
            if steps > n:
                return False
        # child lists must mirror the parent relation
        c = fchild[v]
        while c >= 0:
            if par[c] != v:
                return False
            c = nsib[c]
    return True


@kernel
def _hpf_min_cut(n, s, t, first, adj, tail, head, cap, pair_flow, d, par,
                 par_arc, fchild, nsib, psib, excess, cur, bhead, bnext,
                 bprev, in_bucket, bptr, pop, lab_head, lab_next, lab_prev,
                 highest, audit_every, counters, pnodes, parcs):
    audit_at = audit_every
    while True:
        # bptr[0]/bptr[1] bound the highest/lowest occupied bucket; every
        # insertion refreshes them, so the scan resumes where it left off
        # instead of sweeping all n labels per selection.
        r = -1
        if highest:
            lab = bptr[0]
            if lab > n - 1:
                lab = n - 1
            while lab >= 0:
                v = bhead[lab]
                if v < 0:
                    lab -= 1
                    continue
                bhead[lab] = bnext[v]
                if bnext[v] >= 0:
                    bprev[bnext[v]] = -1
                bnext[v] = -1
                bprev[v] = -1
                in_bucket[v] = 0
                if par[v] == -1 and excess[v] > 0 and d[v] == lab:
                    r = v
                    break
            bptr[0] = lab
        else:
            lab = bptr[1]
            if lab < 0:
                lab = 0
            while lab < n:
                v = bhead[lab]
                if v < 0:
                    lab += 1
                    continue
                bhead[lab] = bnext[v]
                if bnext[v] >= 0:
                    bprev[bnext[v]] = -1
                bnext[v] = -1
                bprev[v] = -1
                in_bucket[v] = 0
                if par[v] == -1 and excess[v] > 0 and d[v] == lab:
                    r = v
                    break
            bptr[1] = lab
        if r < 0:
            break

        w = r
        while w >= 0:
            p = cur[w]
            pe = first[w + 1]
            found = -1
            while p < pe:
                a = adj[p]
                x = head[a]
                if x != s and x != t:
                    pf = pair_flow[a >> 1]
                    ra = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
                    if ra > 0 and d[w] == d[x] + 1:
                        found = a
                        break
                p += 1
            cur[w] = p
            if found >= 0:
                _hpf_merger(n, s, t, first, adj, head, cap, pair_flow, d, par,
                            par_arc, fchild, nsib, psib, excess, bhead, bnext,
                            bprev, in_bucket, bptr, w, found, pnodes, parcs,
                            counters)
                w = -1
            else:
                pick = -1
                y = fchild[w]
                while y >= 0:
                    if d[y] == d[w]:
                        pick = y
                        break
                    y = nsib[y]
                if pick >= 0:
                    w = pick
                else:
                    old_lab = d[w]
                    d[w] += 1
                    counters[H_RELABELS] += 1
                    cur[w] = first[w]
                    pop[old_lab] -= 1
                    nx = lab_next[w]
                    pv = lab_prev[w]
                    if pv >= 0:
                        lab_next[pv] = nx
                    else:
                        lab_head[old_lab] = nx
                    if nx >= 0:
                        lab_prev[nx] = pv
                    lab_next[w] = -1
                    lab_prev[w] = -1
                    if d[w] < n:
                        pop[d[w]] += 1
                        w0 = lab_head[d[w]]
                        lab_next[w] = w0
                        if w0 >= 0:
                            lab_prev[w0] = w
                        lab_head[d[w]] = w
                    if pop[old_lab] == 0:
                        # Gap: label old_lab is empty, so nothing above it
                        # can deliver excess below any more; lift the whole
                        # band to n (labels stay valid lower bounds).
                        counters[H_GAP_RELABELS] += 1
                        for lab in range(old_lab + 1, n):
                            x = lab_head[lab]
                            while x >= 0:
                                nxt = lab_next[x]
                                d[x] = n
                                lab_next[x] = -1
                                lab_prev[x] = -1
                                x = nxt
                            lab_head[lab] = -1
                            pop[lab] = 0
                    w = par[w]

        if par[r] == -1 and excess[r] > 0 and d[r] < n and in_bucket[r] == 0:
            w0 = bhead[d[r]]
            bnext[r] = w0
            if w0 >= 0:
                bprev[w0] = r
            bprev[r] = -1
            bhead[d[r]] = r
            in_bucket[r] = 1
            if d[r] > bptr[0]:
                bptr[0] = d[r]
            if d[r] < bptr[1]:
                bptr[1] = d[r]

        if audit_every > 0 and counters[H_MERGERS] + counters[H_RELABELS] >= audit_at:
            audit_at += audit_every
            if not _hpf_state_ok(n, s, t, first, adj, tail, head, cap,
                                 pair_flow, d, par, par_arc, fchild, nsib,
                                 psib, excess):
                return 1
    if audit_every > 0 and not _hpf_state_ok(n, s, t, first, adj, tail, head,
                                             cap, pair_flow, d, par, par_arc,
                                             fchild, nsib, psib, excess):
        return 1
    return 0


class HpfRun:
    """Allocated solver state for one run."""

    def __init__(self, net, variant="highest", audit_every=0):
        if variant not in ("highest", "lowest"):
            raise ValueError(f"unknown variant {variant!r}")
        self.net = net
        self.variant = variant
        self.audit_every = int(audit_every)
        n = net.node_count
        self.d = np.empty(n, dtype=np.int64)
        self.par = np.empty(n, dtype=np.int64)
        self.par_arc = np.empty(n, dtype=np.int64)
        self.fchild = np.empty(n, dtype=np.int64)
        self.nsib = np.empty(n, dtype=np.int64)
        self.psib = np.empty(n, dtype=np.int64)
        self.excess = np.empty(n, dtype=np.int64)
        self.cur = np.empty(n, dtype=np.int64)
        self.pair_flow = np.empty(net.pair_count, dtype=np.int64)
        self.bhead = np.empty(n + 1, dtype=np.int64)
        self.bnext = np.empty(n, dtype=np.int64)
        self.bprev = np.empty(n, dtype=np.int64)
        self.in_bucket = np.empty(n, dtype=np.uint8)
        self.pnodes = np.empty(n + 2, dtype=np.int64)
        self.parcs = np.empty(n + 2, dtype=np.int64)
        self.bptr = np.zeros(2, dtype=np.int64)
        self.pop = np.empty(n + 1, dtype=np.int64)
        self.lab_head = np.empty(max(n, 1), dtype=np.int64)
        self.lab_next = np.empty(n, dtype=np.int64)
        self.lab_prev = np.empty(n, dtype=np.int64)
        self.counters = np.zeros(N_COUNTERS, dtype=np.int64)
        self._initialized = False

    def simple_init(self):
        net = self.net
        _hpf_init(net.node_count, net.source, net.sink, net.first, net.adj,
                  net.head, net.cap, self.pair_flow, self.d, self.par,
                  self.par_arc, self.fchild, self.nsib, self.psib, self.excess,
                  self.cur, self.bhead, self.bnext, self.bprev, self.in_bucket,
                  self.pop, self.lab_head, self.lab_next, self.lab_prev)
        self.bptr[0] = 0
        self.bptr[1] = 0
        self._initialized = True
        return FlowState(self.pair_flow.copy(), self.excess.copy())

    def merger(self, w, arc):
        """Apply one merger for the admissible arc (w, head[arc]). Exposed
        for tests; the main loop calls the same kernel."""
        net = self.net
        _hpf_merger(net.node_count, net.source, net.sink, net.first, net.adj,
                    net.head, net.cap, self.pair_flow, self.d, self.par,
                    self.par_arc, self.fchild, self.nsib, self.psib,
                    self.excess, self.bhead, self.bnext, self.bprev,
                    self.in_bucket, self.bptr, w, arc, self.pnodes,
                    self.parcs, self.counters)

    def root_of(self, v):
        x = int(v)
        while self.par[x] >= 0:
            x = int(self.par[x])
        return x

    def min_cut(self):
        net = self.net
        if not self._initialized:
            self.simple_init()
        err = _hpf_min_cut(net.node_count, net.source, net.sink, net.first,
                           net.adj, net.tail, net.head, net.cap,
                           self.pair_flow, self.d, self.par, self.par_arc,
                           self.fchild, self.nsib, self.psib, self.excess,
                           self.cur, self.bhead, self.bnext, self.bprev,
                           self.in_bucket, self.bptr, self.pop,
                           self.lab_head, self.lab_next, self.lab_prev,
                           self.variant == "highest", self.audit_every,
                           self.counters, self.pnodes, self.parcs)
        if err != 0:
            raise SolverInvariantError("pseudoflow forest invariants violated")
        pseudoflow = FlowState(self.pair_flow.copy(), self.excess.copy())
        cut = CutSolution.from_source_side(net, self.d >= net.node_count)
        return cut, pseudoflow

    def state_ok(self):
        net = self.net
        return bool(_hpf_state_ok(net.node_count, net.source, net.sink,
                                  net.first, net.adj, net.tail, net.head,
                                  net.cap, self.pair_flow, self.d, self.par,
                                  self.par_arc, self.fchild, self.nsib,
                                  self.psib, self.excess))

    def counter_dict(self):
        c = self.counters
        return {
            "mergers": int(c[H_MERGERS]),
            "relabels": int(c[H_RELABELS]),
            "splits": int(c[H_SPLITS]),
            "gap_relabels": int(c[H_GAP_RELABELS]),
        }


def prepare(net, *, variant="highest", audit_every=0, **_ignored):
    return HpfRun(net, variant=variant, audit_every=audit_every)


def hpf_simple_init(net):
    """Saturate A_s and A_t; every node becomes a singleton component.

    Returns (HpfRun, FlowState): source-adjacent nodes carry excess,
    sink-adjacent nodes carry deficit, all labels are zero except d(s)=n.
    """
    run = HpfRun(net)
    state = run.simple_init()
    return run, state


def hpf_min_cut(net, variant="highest", *, audit_every=0):
    """Min-cut stage: returns (CutSolution, terminal pseudoflow, counters)."""
    run = HpfRun(net, variant=variant, audit_every=audit_every)
    cut, pseudoflow = run.min_cut()
    return cut, pseudoflow, run.counter_dict()


def hpf_recover_flow(net, pseudoflow):
    """Convert the terminal pseudoflow into a maximum feasible flow."""
    if not pseudoflow.is_pseudoflow(net):
        raise ValueError("input is not a capacity-feasible pseudoflow")
    return recover_feasible_flow(net, pseudoflow)
