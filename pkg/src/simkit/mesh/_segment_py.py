"""Pure-Python graph segmentation kernel (union-find inner loop).

Used when the compiled extension is unavailable. Must produce results
bit-identical to the compiled kernel: both walk the same edge order and
apply the same merge predicate.
"""

from __future__ import annotations

import numpy as np


def segment_graph(
    n_nodes: int,
    edges_a: np.ndarray,
    edges_b: np.ndarray,
    weights: np.ndarray,
    order: np.ndarray,
    k: float,
    min_size: int,
) -> np.ndarray:
    """Felzenszwalb-Huttenlocher segmentation over a pre-sorted edge list.

    `order` gives edge indices in nondecreasing weight with ties broken
    by edge index; returns the union-find root of each node.
    """
    parent = list(range(n_nodes))
    rank = [0] * n_nodes
    size = [1] * n_nodes
    internal = [0.0] * n_nodes  # Int(C), stored at the root

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a: int, b: int) -> int:
        if rank[a] < rank[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        if rank[a] == rank[b]:
            rank[a] += 1
        return a

    for ei in order:
        a = find(int(edges_a[ei]))
        b = find(int(edges_b[ei]))
        if a == b:
            continue
        w = float(weights[ei])
        if w <= min(internal[a] + k / size[a], internal[b] + k / size[b]):
            root = union(a, b)
            internal[root] = w

    # post-pass: merge any component below min_size into a neighbor,
    # visiting edges in the same weight order so the "most similar
    # neighbor" is the lowest-weight adjacent component
    for ei in order:
        a = find(int(edges_a[ei]))
        b = find(int(edges_b[ei]))
        if a != b and (size[a] < min_size or size[b] < min_size):
            union(a, b)

    return np.array([find(i) for i in range(n_nodes)], dtype=np.int64)
