# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot loops: pairwise cosine distances, DBSCAN
label propagation, and bounded Levenshtein distance.

Semantics must stay identical to _pykernels; the test suite asserts
equivalence on random inputs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def cosine_distance_matrix(unit_rows):
    """Pairwise cosine distances for rows already normalized to unit length."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] u = \
        np.ascontiguousarray(unit_rows, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t d = u.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] out = np.empty((n, n), dtype=np.float64)
    cdef Py_ssize_t i, j, k
    cdef double acc, dist
    for i in range(n):
        out[i, i] = 0.0
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(d):
                acc += u[i, k] * u[j, k]
            dist = 1.0 - acc
            if dist < 0.0:
                dist = 0.0
            elif dist > 2.0:
                dist = 2.0
            out[i, j] = dist
            out[j, i] = dist
    return out


def dbscan_labels(dist, double eps, int min_pts):
    """Deterministic DBSCAN over a precomputed distance matrix."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] d = \
        np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] labels = np.full(n, -2, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] core = np.zeros(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, j, q, head, tail, count
    cdef long cluster = 0
    for i in range(n):
        count = 0
        for j in range(n):
            if d[i, j] <= eps:
                count += 1
        if count >= min_pts:
            core[i] = 1
    for i in range(n):
        if labels[i] != -2:
            continue
        if not core[i]:
            labels[i] = -1
            continue
        labels[i] = cluster
        queue[0] = i
        head = 0
        tail = 1
        while head < tail:
            q = queue[head]
            head += 1
            if not core[q]:
                continue
            for j in range(n):
                if d[q, j] <= eps and (labels[j] == -2 or labels[j] == -1):
                    labels[j] = cluster
                    queue[tail] = j
                    tail += 1
        cluster += 1
    return labels


def bounded_edit_distance(bytes a, bytes b, int max_edits):
    """Levenshtein distance capped at max_edits + 1."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la - lb > max_edits or lb - la > max_edits:
        return max_edits + 1
    cdef const unsigned char* pa = a
    cdef const unsigned char* pb = b
    cdef cnp.ndarray[cnp.int64_t, ndim=1] prev = np.arange(lb + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cur = np.empty(lb + 1, dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef long cost, best, row_min
    for i in range(1, la + 1):
        cur[0] = i
        row_min = i
        for j in range(1, lb + 1):
            cost = 0 if pa[i - 1] == pb[j - 1] else 1
            best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            if prev[j - 1] + cost < best:
                best = prev[j - 1] + cost
            cur[j] = best
            if best < row_min:
                row_min = best
        if row_min > max_edits:
            return max_edits + 1
        prev, cur = cur, prev
    return int(prev[lb])
