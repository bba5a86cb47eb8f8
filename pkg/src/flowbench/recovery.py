"""Convert a terminal preflow or pseudoflow into a feasible flow.

Imbalances are peeled off the positive-flow graph by walking it:

* each node with positive excess cancels flow backward until the walk hits
  the source (returning the excess to s) or a deficit node;
* each remaining deficit cancels flow forward until the walk reaches the
  sink (un-sending flow the deficit never backed).

Cycles met along a walk are canceled on the spot. Walk cursors only ever
advance: cancellation never turns a non-positive arc flow positive, so a
skipped arc stays skippable. Push-relabel phase 2 is the excess-only case
and leaves the flow into t untouched; pseudoflow recovery uses both phases.
"""

import numpy as np

from ._jit import kernel
from .errors import SolverInvariantError
from .network import FlowState, recompute_excesses


@kernel
def _cancel_imbalances(n, s, t, first, adj, head, pair_flow, excess):
    bcur = first.copy()[:n]     # backward-walk cursors
    fcur = first.copy()[:n]     # forward-walk cursors
    stack = np.empty(n + 1, dtype=np.int64)
    patharc = np.empty(n + 1, dtype=np.int64)   # arc walked to reach stack[i]
    on_walk = np.zeros(n, dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    walk_id = 0

    # Phase B: drain positive excesses backward to s or into deficits.
    for src_v in range(n):
        if src_v == s or src_v == t:
            continue
        while excess[src_v] > 0:
            walk_id += 1
            top = 0
            stack[0] = src_v
            on_walk[src_v] = walk_id
            pos[src_v] = 0
            stop = -1
            while stop < 0:
                x = stack[top]
                p = bcur[x]
                pe = first[x + 1]
                a = -1
                while p < pe:
                    cand = adj[p]
                    b = cand ^ 1            # arc head[cand] -> x
                    pf = pair_flow[b >> 1]
                    fl = pf if (b & 1) == 0 else -pf
                    if fl > 0:
                        a = b
                        break
                    p += 1
                bcur[x] = p
                if a < 0:
                    return 1                # stuck walk: imbalance unaccounted
                y = head[a ^ 1]             # = tail of a
                if y == s or (y != t and excess[y] < 0):
                    stop = y
                    top += 1
                    stack[top] = y
                    patharc[top] = a
                elif on_walk[y] == walk_id:
                    # cancel the cycle y -> ... -> x -> y
                    py = pos[y]
                    delta = pair_flow[a >> 1] if (a & 1) == 0 else -pair_flow[a >> 1]
                    i = py + 1
                    while i <= top:
                        arc = patharc[i]
                        fl = pair_flow[arc >> 1] if (arc & 1) == 0 else -pair_flow[arc >> 1]
                        if fl < delta:
                            delta = fl
                        i += 1
                    i = py + 1
                    while i <= top:
                        arc = patharc[i]
                        if (arc & 1) == 0:
                            pair_flow[arc >> 1] -= delta
                        else:
                            pair_flow[arc >> 1] += delta
                        i += 1
                    if (a & 1) == 0:
                        pair_flow[a >> 1] -= delta
                    else:
                        pair_flow[a >> 1] += delta
                    while top > py:
                        on_walk[stack[top]] = 0
                        top -= 1
                else:
                    top += 1
                    stack[top] = y
                    patharc[top] = a
                    on_walk[y] = walk_id
                    pos[y] = top
            # cancel along src_v <- ... <- stop
            delta = excess[src_v]
            if stop != s:
                cap_stop = -excess[stop]
                if cap_stop < delta:
                    delta = cap_stop
            i = 1
            while i <= top:
                arc = patharc[i]
                fl = pair_flow[arc >> 1] if (arc & 1) == 0 else -pair_flow[arc >> 1]
                if fl < delta:
                    delta = fl
                i += 1
            i = 1
            while i <= top:
                arc = patharc[i]
                if (arc & 1) == 0:
                    pair_flow[arc >> 1] -= delta
                else:
                    pair_flow[arc >> 1] += delta
                i += 1
            excess[src_v] -= delta
            excess[stop] += delta

    # Phase C: cancel remaining deficits forward into t.
    for src_v in range(n):
        if src_v == s or src_v == t:
            continue
        while excess[src_v] < 0:
            walk_id += 1
            top = 0
            stack[0] = src_v
            on_walk[src_v] = walk_id
            pos[src_v] = 0
            reached = False
            while not reached:
                x = stack[top]
                p = fcur[x]
                pe = first[x + 1]
                a = -1
                while p < pe:
                    cand = adj[p]
                    pf = pair_flow[cand >> 1]
                    fl = pf if (cand & 1) == 0 else -pf
                    if fl > 0:
                        a = cand
                        break
                    p += 1
                fcur[x] = p
                if a < 0:
                    return 2
                y = head[a]
                if y == t:
                    reached = True
                    top += 1
                    stack[top] = y
                    patharc[top] = a
                elif on_walk[y] == walk_id:
                    py = pos[y]
                    delta = pair_flow[a >> 1] if (a & 1) == 0 else -pair_flow[a >> 1]
                    i = py + 1
                    while i <= top:
                        arc = patharc[i]
                        fl = pair_flow[arc >> 1] if (arc & 1) == 0 else -pair_flow[arc >> 1]
                        if fl < delta:
                            delta = fl
                        i += 1
                    i = py + 1
                    while i <= top:
                        arc = patharc[i]
                        if (arc & 1) == 0:
                            pair_flow[arc >> 1] -= delta
                        else:
                            pair_flow[arc >> 1] += delta
                        i += 1
                    if (a & 1) == 0:
                        pair_flow[a >> 1] -= delta
                    else:
                        pair_flow[a >> 1] += delta
                    while top > py:
                        on_walk[stack[top]] = 0
                        top -= 1
                else:
                    top += 1
                    stack[top] = y
                    patharc[top] = a
                    on_walk[y] = walk_id
                    pos[y] = top
            delta = -excess[src_v]
            i = 1
            while i <= top:
                arc = patharc[i]
                fl = pair_flow[arc >> 1] if (arc & 1) == 0 else -pair_flow[arc >> 1]
                if fl < delta:
                    delta = fl
                i += 1
            i = 1
            while i <= top:
                arc = patharc[i]
                if (arc & 1) == 0:
                    pair_flow[arc >> 1] -= delta
                else:
                    pair_flow[arc >> 1] += delta
                i += 1
            excess[src_v] += delta
            excess[t] -= delta
    return 0


def recover_feasible_flow(net, state):
    """Peel a capacity-feasible pseudoflow down to a feasible flow."""
    pair_flow = state.pair_flow.copy()
    excess = recompute_excesses(net, FlowState(pair_flow, None))
    err = _cancel_imbalances(net.node_count, net.source, net.sink,
                             net.first, net.adj, net.head, pair_flow, excess)
    if err != 0:
        raise SolverInvariantError(f"flow recovery walk stuck (code {err})")
    return FlowState.from_pair_flow(net, pair_flow)
