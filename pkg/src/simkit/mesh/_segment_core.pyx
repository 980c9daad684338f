# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph segmentation kernel.

Mirrors _segment_py.segment_graph exactly; results must be bit-identical.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef long _find(long[::1] parent, long x) nogil:
    cdef long root = x
    cdef long nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def segment_graph(
    long n_nodes,
    cnp.ndarray[long, ndim=1] edges_a,
    cnp.ndarray[long, ndim=1] edges_b,
    cnp.ndarray[double, ndim=1] weights,
    cnp.ndarray[long, ndim=1] order,
    double k,
    long min_size,
):
    cdef cnp.ndarray[long, ndim=1] parent_arr = np.arange(n_nodes, dtype=np.int64)
    cdef cnp.ndarray[long, ndim=1] rank_arr = np.zeros(n_nodes, dtype=np.int64)
    cdef cnp.ndarray[long, ndim=1] size_arr = np.ones(n_nodes, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] internal_arr = np.zeros(n_nodes)
    cdef long[::1] parent = parent_arr
    cdef long[::1] rank = rank_arr
    cdef long[::1] size = size_arr
    cdef double[::1] internal = internal_arr
    cdef long[::1] ea = np.ascontiguousarray(edges_a)
    cdef long[::1] eb = np.ascontiguousarray(edges_b)
    cdef double[::1] w = np.ascontiguousarray(weights)
    cdef long[::1] od = np.ascontiguousarray(order)

    cdef long i, ei, a, b, root, tmp
    cdef double wt, ta, tb, thresh

    for i in range(od.shape[0]):
        ei = od[i]
        a = _find(parent, ea[ei])
        b = _find(parent, eb[ei])
        if a == b:
            continue
        wt = w[ei]
        ta = internal[a] + k / size[a]
        tb = internal[b] + k / size[b]
        thresh = ta if ta < tb else tb
        if wt <= thresh:
            if rank[a] < rank[b]:
                tmp = a; a = b; b = tmp
            parent[b] = a
            size[a] += size[b]
            if rank[a] == rank[b]:
                rank[a] += 1
            internal[a] = wt

    for i in range(od.shape[0]):
        ei = od[i]
        a = _find(parent, ea[ei])
        b = _find(parent, eb[ei])
        if a != b and (size[a] < min_size or size[b] < min_size):
            if rank[a] < rank[b]:
                tmp = a; a = b; b = tmp
            parent[b] = a
            size[a] += size[b]
            if rank[a] == rank[b]:
                rank[a] += 1

    cdef cnp.ndarray[long, ndim=1] roots = np.empty(n_nodes, dtype=np.int64)
    for i in range(n_nodes):
        roots[i] = _find(parent, i)
    return roots
