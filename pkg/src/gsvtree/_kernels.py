"""Hot kernels for the polynomial-time group attribution walk.

All functions here operate on flat numpy arrays so they compile under
numba unchanged; with ``GSVTREE_BACKEND=python`` the identical code runs
as plain Python.  A path is stored as four parallel arrays (feature,
zero fraction, one fraction, permutation weight) inside a caller-owned
arena; ``s`` is the slice start and ``plen`` the current length.  Entry
0 of every path is a sentinel (feature -1, fractions 1) so the weight
recurrence has a seed; real entries start at index 1.
"""

from __future__ import annotations

import numpy as np

from .backend import jit


@jit
def extend_path(pd, pz, po, pw, s, plen, p_z, p_o, p_i):
    """Append an entry and fold it into the permutation weights.

    ``p_z`` is the cover fraction flowing through when the entry's group
    is out of the coalition, ``p_o`` is 1 or 0 for in-coalition routing,
    ``p_i`` the feature index.  Returns the new length.
    """
    l = plen
    pd[s + l] = p_i
    pz[s + l] = p_z
    po[s + l] = p_o
    pw[s + l] = 1.0 if l == 0 else 0.0
    for i in range(l - 1, -1, -1):
        pw[s + i + 1] += p_o * pw[s + i] * (i + 1) / (l + 1)
        pw[s + i] = p_z * pw[s + i] * (l - i) / (l + 1)
    return l + 1


@jit
def unwind_path(pd, pz, po, pw, s, plen, idx):
    """Remove entry ``idx``, restoring the weights to the shorter path.

    Exact inverse of extend_path for any entry order.  Returns the new
    length.
    """
    L = plen
    one = po[s + idx]
    zero = pz[s + idx]
    n = pw[s + L - 1]
    if one != 0.0:
        for q in range(L - 2, -1, -1):
            t = pw[s + q]
            pw[s + q] = n * L / ((q + 1) * one)
            n = t - pw[s + q] * zero * (L - 1 - q) / L
    else:
        for q in range(L - 2, -1, -1):
            pw[s + q] = pw[s + q] * L / (zero * (L - 1 - q))
    for q in range(idx, L - 1):
        pd[s + q] = pd[s + q + 1]
        pz[s + q] = pz[s + q + 1]
        po[s + q] = po[s + q + 1]
    return L - 1


@jit
def unwound_sum(pz, po, pw, s, plen, idx):
    """Sum of the weights the path would have after unwinding ``idx``.

    Computed without touching the arrays.  A length-1 path (sentinel
    only) unwinds to the empty path, whose seed weight is 1.
    """
    L = plen
    if L == 1:
        return 1.0
    one = po[s + idx]
    zero = pz[s + idx]
    n = pw[s + L - 1]
    total = 0.0
    if one != 0.0:
        for q in range(L - 2, -1, -1):
            t = n * L / ((q + 1) * one)
            total += t
            n = pw[s + q] - t * zero * (L - 1 - q) / L
    else:
        for q in range(L - 2, -1, -1):
            total += pw[s + q] * L / (zero * (L - 1 - q))
    return total


@jit
def find_first_group(pd, s, plen, lookup, group):
    """Index of the first real entry whose feature maps to ``group``, or -1."""
    for i in range(1, plen):
        if lookup[pd[s + i]] == group:
            return i
    return -1


@jit
def tree_contributions(left, right, feature, threshold, value, cover,
                       x, lookup, strict, phi):
    """Accumulate one tree's group contributions for input ``x`` into ``phi``.

    Iterative depth-first walk.  Each depth level owns a fixed arena
    slice one entry longer than its parent's; a child copies the parent
    path into its own slice, so the parent slice survives for the
    sibling.  When a node splits on a group already on the path, that
    entry is unwound and its fractions folded into the new one, keeping
    each group at most once per path.  At a leaf, every path entry
    contributes weight * (one - zero) * leaf value to its group.
    """
    n_nodes = len(left)
    depth = np.zeros(n_nodes, dtype=np.int64)
    maxd = 0
    for j in range(n_nodes):
        if left[j] >= 0:
            depth[left[j]] = depth[j] + 1
            depth[right[j]] = depth[j] + 1
    for j in range(n_nodes):
        if depth[j] > maxd:
            maxd = depth[j]

    # level d owns [off[d], off[d] + d + 2): room for sentinel + d entries + 1
    off = np.zeros(maxd + 2, dtype=np.int64)
    for d in range(1, maxd + 2):
        off[d] = off[d - 1] + d + 1
    arena = off[maxd + 1] + maxd + 2
    pd = np.full(arena, -1, dtype=np.int64)
    pz = np.zeros(arena, dtype=np.float64)
    po = np.zeros(arena, dtype=np.float64)
    pw = np.zeros(arena, dtype=np.float64)

    # frame: node, depth, inherited path length, entry to add (z, o, feature)
    cap = 2 * (maxd + 2)
    st_node = np.zeros(cap, dtype=np.int64)
    st_depth = np.zeros(cap, dtype=np.int64)
    st_plen = np.zeros(cap, dtype=np.int64)
    st_pz = np.zeros(cap, dtype=np.float64)
    st_po = np.zeros(cap, dtype=np.float64)
    st_pi = np.zeros(cap, dtype=np.int64)
    st_node[0] = 0
    st_depth[0] = 0
    st_plen[0] = 0
    st_pz[0] = 1.0
    st_po[0] = 1.0
    st_pi[0] = -1
    top = 1

    while top > 0:
        top -= 1
        j = st_node[top]
        d = st_depth[top]
        plen = st_plen[top]
        s = off[d]
        if d > 0:
            ps = off[d - 1]
            for i in range(plen):
                pd[s + i] = pd[ps + i]
                pz[s + i] = pz[ps + i]
                po[s + i] = po[ps + i]
                pw[s + i] = pw[ps + i]
        plen = extend_path(pd, pz, po, pw, s, plen,
                           st_pz[top], st_po[top], st_pi[top])

        if left[j] < 0:
            leaf = value[j]
            for i in range(1, plen):
                w = unwound_sum(pz, po, pw, s, plen, i)
                g = lookup[pd[s + i]]
                phi[g] += w * (po[s + i] - pz[s + i]) * leaf
            continue

        f = feature[j]
        if strict:
            go_left = x[f] < threshold[j]
        else:
            go_left = x[f] <= threshold[j]
        hot = left[j] if go_left else right[j]
        cold = right[j] if go_left else left[j]

        i_z = 1.0
        i_o = 1.0
        prev = find_first_group(pd, s, plen, lookup, lookup[f])
        if prev >= 0:
            i_z = pz[s + prev]
            i_o = po[s + prev]
            plen = unwind_path(pd, pz, po, pw, s, plen, prev)

        r_j = cover[j]
        # cold first so the hot child pops next
        st_node[top] = cold
        st_depth[top] = d + 1
        st_plen[top] = plen
        st_pz[top] = i_z * cover[cold] / r_j
        st_po[top] = 0.0
        st_pi[top] = f
        top += 1
        st_node[top] = hot
        st_depth[top] = d + 1
        st_plen[top] = plen
        st_pz[top] = i_z * cover[hot] / r_j
        st_po[top] = i_o
        st_pi[top] = f
        top += 1
