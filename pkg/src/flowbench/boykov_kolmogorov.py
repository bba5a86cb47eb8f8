"""Boykov-Kolmogorov dual-search-tree augmenting-path max-flow solver.

Two trees grow from the terminals: in the source tree every parent-to-child
arc is non-saturated, in the sink tree every child-to-parent arc is. Growth
scans active nodes FIFO, acquiring free neighbors; when a scan touches the
other tree an augmenting path is found and the maximum possible flow is
pushed along it. Arcs saturated by the push orphan their tree-child; the
adoption stage reattaches each orphan to a valid same-tree parent (one whose
own parent chain still reaches its terminal, verified by walking the chain
with timestamp memoization) or frees it, orphaning its children and
reactivating neighbors that may re-grow over the freed region.

A feasible flow is maintained throughout; there is no recovery phase. The
algorithm is only pseudo-polynomial: augmentation counts can grow with the
capacity magnitude (see the zigzag instances in the tests).
"""

import numpy as np

from ._jit import kernel
from .errors import SolverInvariantError
from .network import CutSolution, FlowState

FREE = 0
SRC = 1
SNK = 2

B_AUGMENTATIONS = 0
B_ORPHANS = 1
B_GROWTH = 2
N_COUNTERS = 3


@kernel
def _bk_state_ok(n, s, t, first, adj, tail, head, cap, pair_flow, tree,
                 par_arc, scratch):
    # feasibility and conservation: BK maintains a flow at all times
    for j in range(pair_flow.shape[0]):
        if pair_flow[j] > cap[2 * j] or -pair_flow[j] > cap[2 * j + 1]:
            return False
    for v in range(n):
        scratch[v] = 0
    for j in range(pair_flow.shape[0]):
        f = pair_flow[j]
        scratch[head[2 * j]] += f
        scratch[tail[2 * j]] -= f
    for v in range(n):
        if v != s and v != t and scratch[v] != 0:
            return False
    # tree validity: parent arcs residual, same-tag parents, rooted chains
    for v in range(n):
        tr = tree[v]
        if tr == FREE:
            continue
        if v == s or v == t:
            continue
        a = par_arc[v]
        if a < 0:
            return False  # unresolved orphan outside the adoption stage
        pf = pair_flow[a >> 1]
        r = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
        if r <= 0:
            return False
        if tr == SRC:
            if head[a] != v or tree[tail[a]] != SRC:
                return False
        else:
            if tail[a] != v or tree[head[a]] != SNK:
                return False
        steps = 0
        x = v
        while x != s and x != t:
            pa = par_arc[x]
            if pa < 0:
                return False
            x = tail[pa] if tr == SRC else head[pa]
            steps += 1
            if steps > n:
                return False  # parent chain cycles
    if tree[s] != SRC or tree[t] != SNK:
        return False
    return True


@kernel
def _bk_solve(n, s, t, first, adj, tail, head, cap, pair_flow, tree, par_arc,
              qnext, in_active, onext, in_orphan, vtime, scratch,
              audit_every, counters):
    for v in range(n):
        tree[v] = FREE
        par_arc[v] = -1
        qnext[v] = -1
        in_active[v] = 0
        onext[v] = -1
        in_orphan[v] = 0
        vtime[v] = 0
    for j in range(pair_flow.shape[0]):
        pair_flow[j] = 0

    tree[s] = SRC
    tree[t] = SNK
    qh = s
    qt_ = s
    qnext[s] = t
    qt_ = t
    in_active[s] = 1
    in_active[t] = 1
    oh = -1
    ot = -1
    time = 0
    audit_at = audit_every

    while qh >= 0:
        u = qh
        tu = tree[u]
        if tu == FREE:
            qh = qnext[u]
            if qh < 0:
                qt_ = -1
            qnext[u] = -1
            in_active[u] = 0
            continue

        p = first[u]
        pe = first[u + 1]
        crossed = False
        while p < pe:
            a = adj[p]
            if tu == SRC:
                arc_out = a            # u -> x, usable by the source tree
            else:
                arc_out = a ^ 1        # x -> u, usable by the sink tree
            pf = pair_flow[arc_out >> 1]
            r = cap[arc_out] - pf if (arc_out & 1) == 0 else cap[arc_out] + pf
            if r > 0:
                x = head[a]
                if tree[x] == FREE:
                    counters[B_GROWTH] += 1
                    tree[x] = tu
                    par_arc[x] = arc_out
                    if in_active[x] == 0:
                        if qt_ < 0:
                            qh = x
                        else:
                            qnext[qt_] = x
                        qt_ = x
                        qnext[x] = -1
                        in_active[x] = 1
                elif tree[x] != tu:
                    # Augmenting path found through the crossing arc.
                    if tu == SRC:
                        ya = arc_out               # S-side tail, T-side head
                    else:
                        ya = arc_out               # tail x is S-side
                    delta = cap[ya] - pair_flow[ya >> 1] if (ya & 1) == 0 \
                        else cap[ya] + pair_flow[ya >> 1]
                    v = tail[ya]
                    while v != s:
                        pa = par_arc[v]
                        pf2 = pair_flow[pa >> 1]
                        r2 = cap[pa] - pf2 if (pa & 1) == 0 else cap[pa] + pf2
                        if r2 < delta:
                            delta = r2
                        v = tail[pa]
                    v = head[ya]
                    while v != t:
                        pa = par_arc[v]
                        pf2 = pair_flow[pa >> 1]
                        r2 = cap[pa] - pf2 if (pa & 1) == 0 else cap[pa] + pf2
                        if r2 < delta:
                            delta = r2
                        v = head[pa]

                    if (ya & 1) == 0:
                        pair_flow[ya >> 1] += delta
                    else:
                        pair_flow[ya >> 1] -= delta
                    v = tail[ya]
                    while v != s:
                        pa = par_arc[v]
                        if (pa & 1) == 0:
                            pair_flow[pa >> 1] += delta
                            sat = pair_flow[pa >> 1] == cap[pa]
                        else:
                            pair_flow[pa >> 1] -= delta
                            sat = -pair_flow[pa >> 1] == cap[pa]
                        nxt = tail[pa]
                        if sat:
                            par_arc[v] = -1
                            if in_orphan[v] == 0:
                                if ot < 0:
                                    oh = v
                                else:
                                    onext[ot] = v
                                ot = v
                                onext[v] = -1
                                in_orphan[v] = 1
                        v = nxt
                    v = head[ya]
                    while v != t:
                        pa = par_arc[v]
                        if (pa & 1) == 0:
                            pair_flow[pa >> 1] += delta
                            sat = pair_flow[pa >> 1] == cap[pa]
                        else:
                            pair_flow[pa >> 1] -= delta
                            sat = -pair_flow[pa >> 1] == cap[pa]
                        nxt = head[pa]
                        if sat:
                            par_arc[v] = -1
                            if in_orphan[v] == 0:
                                if ot < 0:
                                    oh = v
                                else:
                                    onext[ot] = v
                                ot = v
                                onext[v] = -1
                                in_orphan[v] = 1
                        v = nxt
                    counters[B_AUGMENTATIONS] += 1

                    # Adoption: restore both trees before growing again.
                    while oh >= 0:
                        o = oh
                        oh = onext[o]
                        if oh < 0:
                            ot = -1
                        onext[o] = -1
                        in_orphan[o] = 0
                        counters[B_ORPHANS] += 1
                        tr = tree[o]
                        if tr == FREE:
                            continue
                        time += 1
                        best = -1
                        p2 = first[o]
                        pe2 = first[o + 1]
                        while p2 < pe2:
                            a2 = adj[p2]
                            x2 = head[a2]
                            if tree[x2] == tr:
                                cand = (a2 ^ 1) if tr == SRC else a2
                                pf3 = pair_flow[cand >> 1]
                                r3 = cap[cand] - pf3 if (cand & 1) == 0 \
                                    else cap[cand] + pf3
                                if r3 > 0:
                                    # candidate parent must still reach its
                                    # terminal through its own chain
                                    ok = False
                                    y2 = x2
                                    steps = 0
                                    while True:
                                        if y2 == s or y2 == t or vtime[y2] == time:
                                            ok = True
                                            break
                                        pa2 = par_arc[y2]
                                        if pa2 < 0 or steps > n:
                                            break
                                        y2 = tail[pa2] if tr == SRC else head[pa2]
                                        steps += 1
                                    if ok:
                                        y2 = x2
                                        while y2 != s and y2 != t and vtime[y2] != time:
                                            vtime[y2] = time
                                            pa2 = par_arc[y2]
                                            y2 = tail[pa2] if tr == SRC else head[pa2]
                                        best = cand
                                        break
                            p2 += 1
                        if best >= 0:
                            par_arc[o] = best
                        else:
                            # No valid parent: free o, orphan its children,
                            # reactivate neighbors that may re-grow here.
                            p2 = first[o]
                            while p2 < pe2:
                                a2 = adj[p2]
                                x2 = head[a2]
                                if tree[x2] == tr and x2 != s and x2 != t:
                                    pa2 = par_arc[x2]
                                    if pa2 >= 0:
                                        parent = tail[pa2] if tr == SRC else head[pa2]
                                        if parent == o:
                                            par_arc[x2] = -1
                                            if in_orphan[x2] == 0:
                                                if ot < 0:
                                                    oh = x2
                                                else:
                                                    onext[ot] = x2
                                                ot = x2
                                                onext[x2] = -1
                                                in_orphan[x2] = 1
                                if tree[x2] == tr:
                                    cand = (a2 ^ 1) if tr == SRC else a2
                                    pf3 = pair_flow[cand >> 1]
                                    r3 = cap[cand] - pf3 if (cand & 1) == 0 \
                                        else cap[cand] + pf3
                                    if r3 > 0 and in_active[x2] == 0:
                                        if qt_ < 0:
                                            qh = x2
                                        else:
                                            qnext[qt_] = x2
                                        qt_ = x2
                                        qnext[x2] = -1
                                        in_active[x2] = 1
                                p2 += 1
                            tree[o] = FREE

                    if audit_every > 0 and counters[B_AUGMENTATIONS] >= audit_at:
                        audit_at += audit_every
                        if not _bk_state_ok(n, s, t, first, adj, tail, head,
                                            cap, pair_flow, tree, par_arc,
                                            scratch):
                            return 1
                    crossed = True
                    break
            p += 1

        if crossed:
            continue  # rescan u from its first arc; residuals changed
        qh = qnext[u]
        if qh < 0:
            qt_ = -1
        qnext[u] = -1
        in_active[u] = 0

    if audit_every > 0 and not _bk_state_ok(n, s, t, first, adj, tail, head,
                                            cap, pair_flow, tree, par_arc,
                                            scratch):
        return 1
    return 0


class BkRun:
    def __init__(self, net, audit_every=0):
        self.net = net
        self.audit_every = int(audit_every)
        n = net.node_count
        self.tree = np.empty(n, dtype=np.int8)
        self.par_arc = np.empty(n, dtype=np.int64)
        self.qnext = np.empty(n, dtype=np.int64)
        self.in_active = np.empty(n, dtype=np.uint8)
        self.onext = np.empty(n, dtype=np.int64)
        self.in_orphan = np.empty(n, dtype=np.uint8)
        self.vtime = np.empty(n, dtype=np.int64)
        self.scratch = np.empty(n, dtype=np.int64)
        self.pair_flow = np.empty(net.pair_count, dtype=np.int64)
        self.counters = np.zeros(N_COUNTERS, dtype=np.int64)

    def min_cut(self):
        net = self.net
        err = _bk_solve(net.node_count, net.source, net.sink, net.first,
                        net.adj, net.tail, net.head, net.cap, self.pair_flow,
                        self.tree, self.par_arc, self.qnext, self.in_active,
                        self.onext, self.in_orphan, self.vtime, self.scratch,
                        self.audit_every, self.counters)
        if err != 0:
            raise SolverInvariantError("BK tree invariants violated")
        flow = FlowState.from_pair_flow(net, self.pair_flow.copy())
        cut = CutSolution.from_source_side(net, self.tree == SRC)
        return cut, flow

    def counter_dict(self):
        c = self.counters
        return {
            "augmentations": int(c[B_AUGMENTATIONS]),
            "orphans": int(c[B_ORPHANS]),
            "growth_steps": int(c[B_GROWTH]),
        }


def prepare(net, *, audit_every=0, **_ignored):
    return BkRun(net, audit_every=audit_every)


def bk_solve(net, *, audit_every=0):
    """Returns (CutSolution, feasible maximum FlowState, counters). Free
    nodes at termination sit on the sink side of the cut."""
    run = BkRun(net, audit_every=audit_every)
    cut, flow = run.min_cut()
    return cut, flow, run.counter_dict()
