"""Flow-network core: immutable arc-pair graph, flow states, cuts.

Storage conventions shared by every solver:

* Directed arcs are created in pairs. Arc ``2j`` is the forward direction of
  pair ``j`` (as first seen in the input), arc ``2j+1`` its reverse partner;
  ``a ^ 1`` is always the partner of ``a``.
* Flow is stored once per pair as a signed net value ``f[j]``, positive in the
  forward direction. The residual capacity of arc ``a`` is then
  ``cap[a] - f[a >> 1]`` for even ``a`` and ``cap[a] + f[a >> 1]`` for odd.
* Adjacency is compressed: ``adj[first[v]:first[v+1]]`` lists the ids of all
  arcs whose tail is ``v``, in input order.

Capacities and flows are 64-bit integers throughout; solvers never touch
floating point.
"""

import numpy as np

from .errors import GraphBuildError

INT64_MAX = np.iinfo(np.int64).max


class FlowNetwork:
    """Immutable directed flow network with paired reverse arcs.

    Attributes
    ----------
    node_count : int
        Number of nodes, including source and sink; ids are dense in [0, n).
    arc_count : int
        Number of directed arcs, reverse partners included (always even).
    source, sink : int
    first : int64[n+1]
        CSR offsets into ``adj``.
    adj : int64[m]
        Arc ids grouped by tail node, input order preserved within a node.
    tail, head, cap : int64[m]
        Per-arc tail, head and capacity.
    """

    __slots__ = ("node_count", "arc_count", "source", "sink",
                 "first", "adj", "tail", "head", "cap")

    def __init__(self, node_count, source, sink, first, adj, tail, head, cap):
        self.node_count = int(node_count)
        self.arc_count = int(head.shape[0])
        self.source = int(source)
        self.sink = int(sink)
        self.first = first
        self.adj = adj
        self.tail = tail
        self.head = head
        self.cap = cap
        for arr in (first, adj, tail, head, cap):
            arr.flags.writeable = False

    @property
    def pair_count(self):
        return self.arc_count // 2

    def reverse_arc(self, arc):
        """Partner id of an arc (involution: partner of partner is identity)."""
        return arc ^ 1

    def arc_pairs(self):
        """Iterate (forward arc id, tail, head, cap_fwd, cap_rev) per pair."""
        for j in range(self.pair_count):
            a = 2 * j
            yield a, int(self.tail[a]), int(self.head[a]), int(self.cap[a]), int(self.cap[a + 1])

    def __repr__(self):
        return (f"FlowNetwork(n={self.node_count}, m={self.arc_count}, "
                f"s={self.source}, t={self.sink})")


def build_network(n, s, t, arcs):
    """Build a FlowNetwork from (tail, head, capacity) triples.

    Parallel arcs between the same ordered pair are merged by summing
    capacities. Self-loops, arcs into the source, and arcs out of the sink
    are dropped: none of them can carry s-t flow. An input arc (u, v, c) is
    stored as a forward arc of capacity c with a zero-capacity reverse
    partner, unless the input also contains (v, u), in which case the pair
    carries both capacities.
    """
    n = int(n)
    s = int(s)
    t = int(t)
    if s == t:
        raise GraphBuildError(f"source and sink must differ (both {s})")
    if not (0 <= s < n) or not (0 <= t < n):
        raise GraphBuildError(f"source {s} or sink {t} out of range [0, {n})")

    pair_of = {}          # (lo, hi) -> pair index
    tail0, head0 = [], [] # stored forward direction per pair
    cap_fwd, cap_rev = [], []
    total = 0

    for u, v, c in arcs:
        u = int(u)
        v = int(v)
        c = int(c)
        if not (0 <= u < n) or not (0 <= v < n):
            raise GraphBuildError(f"arc ({u}, {v}) has node id out of range [0, {n})")
        if c < 0:
            raise GraphBuildError(f"arc ({u}, {v}) has negative capacity {c}")
        if c > INT64_MAX:
            raise GraphBuildError(f"arc ({u}, {v}) capacity exceeds 64-bit range")
        if u == v or v == s or u == t:
            continue
        total += c
        if total > INT64_MAX:
            raise GraphBuildError("total capacity exceeds 64-bit range")
        key = (u, v) if u < v else (v, u)
        j = pair_of.get(key)
        if j is None:
            pair_of[key] = len(tail0)
            tail0.append(u)
            head0.append(v)
            cap_fwd.append(c)
            cap_rev.append(0)
        elif tail0[j] == u:
            cap_fwd[j] += c
            if cap_fwd[j] > INT64_MAX:
                raise GraphBuildError(f"merged capacity of arc ({u}, {v}) exceeds 64-bit range")
        else:
            cap_rev[j] += c
            if cap_rev[j] > INT64_MAX:
                raise GraphBuildError(f"merged capacity of arc ({u}, {v}) exceeds 64-bit range")

    npairs = len(tail0)
    m = 2 * npairs
    tail = np.empty(m, dtype=np.int64)
    head = np.empty(m, dtype=np.int64)
    cap = np.empty(m, dtype=np.int64)
    if npairs:
        t0 = np.asarray(tail0, dtype=np.int64)
        h0 = np.asarray(head0, dtype=np.int64)
        tail[0::2] = t0
        head[0::2] = h0
        tail[1::2] = h0
        head[1::2] = t0
        cap[0::2] = np.asarray(cap_fwd, dtype=np.int64)
        cap[1::2] = np.asarray(cap_rev, dtype=np.int64)

    order = np.argsort(tail, kind="stable").astype(np.int64)
    counts = np.bincount(tail, minlength=n) if m else np.zeros(n, dtype=np.int64)
    first = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=first[1:])
    return FlowNetwork(n, s, t, first, order, tail, head, cap)


class FlowState:
    """Per-pair net flow plus per-node excess.

    The same container represents a flow, preflow, or pseudoflow depending on
    which invariants hold; the ``is_flow``/``is_preflow``/``is_pseudoflow``
    predicates classify a capacity-feasible state by its stored excesses.
    """

    __slots__ = ("pair_flow", "excess")

    def __init__(self, pair_flow, excess):
        self.pair_flow = pair_flow
        self.excess = excess

    @classmethod
    def zeros(cls, net):
        return cls(np.zeros(net.pair_count, dtype=np.int64),
                   np.zeros(net.node_count, dtype=np.int64))

    @classmethod
    def from_pair_flow(cls, net, pair_flow):
        """Wrap a net-flow vector, recomputing excesses from it."""
        return cls(pair_flow, recompute_excesses(net, cls(pair_flow, None)))

    def copy(self):
        return FlowState(self.pair_flow.copy(), self.excess.copy())

    def arc_flow(self, arc):
        """Signed net flow in the direction of ``arc``."""
        f = int(self.pair_flow[arc >> 1])
        return f if (arc & 1) == 0 else -f

    def is_capacity_feasible(self, net):
        f = self.pair_flow
        return bool(np.all(f <= net.cap[0::2]) and np.all(-f <= net.cap[1::2]))

    def _nonterminal_excess(self, net):
        e = self.excess
        mask = np.ones(net.node_count, dtype=bool)
        mask[net.source] = False
        mask[net.sink] = False
        return e[mask]

    def is_flow(self, net):
        return self.is_capacity_feasible(net) and bool(
            np.all(self._nonterminal_excess(net) == 0))

    def is_preflow(self, net):
        return self.is_capacity_feasible(net) and bool(
            np.all(self._nonterminal_excess(net) >= 0))

    def is_pseudoflow(self, net):
        return self.is_capacity_feasible(net)

    def value(self, net):
        """Flow delivered into the sink."""
        return int(self.excess[net.sink])


def residual_capacity(net, flow, arc):
    """Remaining push capacity of a directed arc under the given flow.

    ``cap - f`` for a forward arc, ``cap + f`` (= flow on the forward
    direction plus any intrinsic reverse capacity) for its partner. The arc
    is residual iff the result is positive.
    """
    f = int(flow.pair_flow[arc >> 1])
    if (arc & 1) == 0:
        return int(net.cap[arc]) - f
    return int(net.cap[arc]) + f


def recompute_excesses(net, flow):
    """Exact excess vector e(v) = inflow(v) - outflow(v) from the net flows."""
    f = flow.pair_flow
    n = net.node_count
    e = np.zeros(n, dtype=np.int64)
    if net.pair_count:
        # np.bincount would sum weights in float64; add.at keeps this exact.
        np.add.at(e, net.head[0::2], f)
        np.subtract.at(e, net.tail[0::2], f)
    return e


class CutSolution:
    """A bipartition (S, T) with s in S and t in T, plus its capacity."""

    __slots__ = ("in_source", "cut_value")

    def __init__(self, in_source, cut_value, *, net=None):
        self.in_source = in_source
        self.cut_value = int(cut_value)
        if net is not None:
            if not in_source[net.source] or in_source[net.sink]:
                raise ValueError("cut must place the source in S and the sink in T")

    @classmethod
    def from_source_side(cls, net, in_source):
        """Build a cut from a membership mask, recomputing its capacity."""
        in_source = np.asarray(in_source, dtype=bool)
        crossing = in_source[net.tail] & ~in_source[net.head]
        value = int(net.cap[crossing].sum()) if net.arc_count else 0
        return cls(in_source, value, net=net)

    def source_nodes(self):
        """Sorted node ids on the source side."""
        return [int(v) for v in np.flatnonzero(self.in_source)]

    def __repr__(self):
        return f"CutSolution(value={self.cut_value}, |S|={int(self.in_source.sum())})"
