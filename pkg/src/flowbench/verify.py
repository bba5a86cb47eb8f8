"""Independent correctness oracle.

Everything here is recomputed purely from (network, flow, cut); no solver
state is consulted, and none of the solver kernels are reused. The brute
force enumerates bipartitions rather than flows, so it shares no machinery
with any augmenting-path code it may be asked to judge.
"""

from dataclasses import dataclass

import numpy as np

from .network import recompute_excesses

BRUTE_FORCE_MAX_NODES = 22


@dataclass
class VerificationReport:
    feasible: bool
    violation: str | None
    flow_value: int
    cut_value: int | None = None
    certified: bool = False

    def __bool__(self):
        return self.feasible


def check_feasible_flow(net, flow):
    """Check capacity bounds on every pair and flow balance at every node.

    Passes iff 0 <= f <= u holds for both directions of every stored pair and
    the recomputed excess is zero at all non-terminal nodes. The report names
    the first violated constraint.
    """
    f = flow.pair_flow
    cap_f = net.cap[0::2]
    cap_r = net.cap[1::2]
    over = np.flatnonzero(f > cap_f)
    if over.size:
        j = int(over[0])
        return VerificationReport(
            False, f"arc {2 * j} ({int(net.tail[2 * j])}->{int(net.head[2 * j])}): "
                   f"flow {int(f[j])} exceeds capacity {int(cap_f[j])}", 0)
    under = np.flatnonzero(-f > cap_r)
    if under.size:
        j = int(under[0])
        return VerificationReport(
            False, f"arc {2 * j + 1} ({int(net.head[2 * j])}->{int(net.tail[2 * j])}): "
                   f"flow {int(-f[j])} exceeds capacity {int(cap_r[j])}", 0)
    e = recompute_excesses(net, flow)
    value = int(e[net.sink])
    unbalanced = np.flatnonzero(e != 0)
    for v in unbalanced:
        v = int(v)
        if v not in (net.source, net.sink):
            return VerificationReport(
                False, f"node {v}: excess {int(e[v])} violates flow balance", value)
    return VerificationReport(True, None, value)


def cut_capacity(net, in_source):
    """Sum of capacities of arcs from S to T. Reverse-direction crossings
    are excluded by construction since their capacity belongs to the T->S
    direction."""
    in_source = np.asarray(in_source, dtype=bool)
    if not in_source[net.source]:
        raise ValueError("source must be on the S side")
    if in_source[net.sink]:
        raise ValueError("sink must be on the T side")
    if net.arc_count == 0:
        return 0
    crossing = in_source[net.tail] & ~in_source[net.head]
    return int(net.cap[crossing].sum())


def brute_force_min_cut(net):
    """Global minimum cut by exhaustive bipartition enumeration (n <= 22).

    Ties break toward the lexicographically smallest S (compared as sorted
    node-id sequences).
    """
    n = net.node_count
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force capped at {BRUTE_FORCE_MAX_NODES} nodes, got {n}")
    others = [v for v in range(n) if v not in (net.source, net.sink)]
    kk = len(others)
    masks = np.arange(1 << kk, dtype=np.int64)
    values = np.zeros(1 << kk, dtype=np.int64)
    bit_of = {v: i for i, v in enumerate(others)}
    for a in range(net.arc_count):
        c = int(net.cap[a])
        if c == 0:
            continue
        u = int(net.tail[a])
        v = int(net.head[a])
        if u == net.source:
            u_in = np.ones(masks.shape, dtype=bool)
        elif u == net.sink:
            u_in = np.zeros(masks.shape, dtype=bool)
        else:
            u_in = (masks >> bit_of[u]) & 1 == 1
        if v == net.source:
            v_in = np.ones(masks.shape, dtype=bool)
        elif v == net.sink:
            v_in = np.zeros(masks.shape, dtype=bool)
        else:
            v_in = (masks >> bit_of[v]) & 1 == 1
        values[u_in & ~v_in] += c
    best = int(values.min())
    ties = np.flatnonzero(values == best)
    best_side = None
    best_key = None
    for mask in ties:
        side = tuple(sorted([net.source] + [others[i] for i in range(kk)
                                            if (int(mask) >> i) & 1]))
        if best_key is None or side < best_key:
            best_key = side
            best_side = int(mask)
    in_source = np.zeros(n, dtype=bool)
    in_source[net.source] = True
    for i in range(kk):
        if (best_side >> i) & 1:
            in_source[others[i]] = True
    return best, in_source


def certify(net, flow, cut):
    """Max-flow/min-cut certificate check.

    Passes iff the flow is feasible, its value equals the recomputed cut
    capacity, every S->T crossing arc is saturated, and every T->S crossing
    arc carries no flow (complementary slackness).
    """
    report = check_feasible_flow(net, flow)
    if not report.feasible:
        return report
    value = report.flow_value
    cval = cut_capacity(net, cut.in_source)
    report.cut_value = cval
    if cut.cut_value != cval:
        report.feasible = False
        report.violation = (f"stored cut value {cut.cut_value} != recomputed {cval}")
        return report
    if value != cval:
        report.feasible = False
        report.violation = f"flow value {value} != cut capacity {cval}"
        return report
    in_s = cut.in_source
    f = flow.pair_flow
    t0 = net.tail[0::2]
    h0 = net.head[0::2]
    fwd_cross = in_s[t0] & ~in_s[h0]      # forward direction crosses S->T
    rev_cross = in_s[h0] & ~in_s[t0]      # reverse direction crosses S->T
    bad_fwd = np.flatnonzero(fwd_cross & (f != net.cap[0::2]))
    if bad_fwd.size:
        j = int(bad_fwd[0])
        report.feasible = False
        report.violation = (f"crossing arc {2 * j} not saturated "
                            f"(flow {int(f[j])} < cap {int(net.cap[2 * j])})")
        return report
    bad_rev = np.flatnonzero(rev_cross & (-f != net.cap[1::2]))
    if bad_rev.size:
        j = int(bad_rev[0])
        report.feasible = False
        report.violation = (f"crossing arc {2 * j + 1} not saturated or "
                            f"T->S flow present on pair {j}")
        return report
    report.certified = True
    return report
