"""Pure-Python/numpy fallback kernels.

Mirrors the semantics of the compiled extension exactly: same DBSCAN
expansion order, same clamping, same bounded edit distance. Used when the
Cython module is not built or EVENTGRAPH_KERNELS=python is set.
"""

from __future__ import annotations

import numpy as np

UNVISITED = -2
NOISE = -1


def cosine_distance_matrix(unit_rows: np.ndarray) -> np.ndarray:
    """Pairwise cosine distances for rows already normalized to unit length.

    Returns an n x n float64 matrix with zero diagonal, clamped to [0, 2].
    """
    u = np.ascontiguousarray(unit_rows, dtype=np.float64)
    dist = 1.0 - u @ u.T
    np.fill_diagonal(dist, 0.0)
    np.clip(dist, 0.0, 2.0, out=dist)
    return dist


def dbscan_labels(dist: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """Deterministic DBSCAN over a precomputed distance matrix.

    Points are visited in index order; labels are assigned in order of
    cluster discovery. Border points go to the first cluster that reaches
    them. Noise is -1.
    """
    d = np.asarray(dist, dtype=np.float64)
    n = d.shape[0]
    within = d <= eps
    core = within.sum(axis=1) >= min_pts
    labels = np.full(n, UNVISITED, dtype=np.int64)
    cluster = 0
    for i in range(n):
        if labels[i] != UNVISITED:
            continue
        if not core[i]:
            labels[i] = NOISE
            continue
        labels[i] = cluster
        queue = [i]
        head = 0
        while head < len(queue):
            q = queue[head]
            head += 1
            if not core[q]:
                continue
            for j in np.nonzero(within[q])[0]:
                if labels[j] == UNVISITED or labels[j] == NOISE:
                    labels[j] = cluster
                    queue.append(int(j))
        cluster += 1
    return labels


def bounded_edit_distance(a: bytes, b: bytes, max_edits: int) -> int:
    """Levenshtein distance capped at max_edits + 1.

    Returns the exact distance when it is <= max_edits, otherwise any
    value greater than max_edits.
    """
    la, lb = len(a), len(b)
    if abs(la - lb) > max_edits:
        return max_edits + 1
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        cur = [i] + [0] * lb
        row_min = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ca == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            if cur[j] < row_min:
                row_min = cur[j]
        if row_min > max_edits:
            return max_edits + 1
        prev = cur
    return prev[lb]
