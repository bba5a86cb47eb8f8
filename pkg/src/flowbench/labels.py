"""Exact distance labeling over the residual graph (global relabeling).

Shared by the push-relabel and partial augment-relabel solvers. Nodes that
still reach the sink get their exact residual BFS distance to t; nodes that
cannot get n plus their residual distance to s; nodes reaching neither get
2n. The source is pinned at n and the sink at 0 throughout.
"""

import numpy as np

from ._jit import kernel


@kernel
def exact_residual_labels(n, s, t, first, adj, head, cap, pair_flow, label):
    for v in range(n):
        label[v] = -1
    queue = np.empty(n, dtype=np.int64)

    # Pass 1: residual BFS distances to t, following arcs into the frontier.
    label[t] = 0
    queue[0] = t
    qh, qt = 0, 1
    while qh < qt:
        v = queue[qh]
        qh += 1
        dv = label[v]
        for p in range(first[v], first[v + 1]):
            a = adj[p]
            u = head[a]
            if u == s or label[u] >= 0:
                continue
            b = a ^ 1  # the arc u -> v
            pf = pair_flow[b >> 1]
            r = cap[b] - pf if (b & 1) == 0 else cap[b] + pf
            if r > 0:
                label[u] = dv + 1
                queue[qt] = u
                qt += 1

    # Pass 2: for nodes cut off from t, n plus residual BFS distance to s.
    label[s] = n
    queue[0] = s
    qh, qt = 0, 1
    while qh < qt:
        v = queue[qh]
        qh += 1
        dv = label[v]
        for p in range(first[v], first[v + 1]):
            a = adj[p]
            u = head[a]
            if label[u] >= 0:
                continue
            b = a ^ 1
            pf = pair_flow[b >> 1]
            r = cap[b] - pf if (b & 1) == 0 else cap[b] + pf
            if r > 0:
                label[u] = dv + 1
                queue[qt] = u
                qt += 1

    for v in range(n):
        if label[v] < 0:
            label[v] = 2 * n
    label[s] = n
    label[t] = 0


@kernel
def labels_are_valid(n, m, tail, head, cap, pair_flow, label):
    """Label-validity sweep: every residual arc (u, v) has l(u) <= l(v) + 1."""
    for a in range(m):
        pf = pair_flow[a >> 1]
        r = cap[a] - pf if (a & 1) == 0 else cap[a] + pf
        if r > 0 and label[tail[a]] > label[head[a]] + 1:
            return False
    return True
