"""Per-period DBSCAN over cosine distance, eps search, representative pick."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ZeroVector


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cos(u, v), in [0, 2]. Raises ZeroVector on a zero-length input."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine distance undefined for zero vectors")
    dist = 1.0 - float(np.dot(u, v)) / (nu * nv)
    return min(max(dist, 0.0), 2.0)


@dataclass(frozen=True)
class ClusterAssignment:
    doc_id: str
    label: int  # >= 0 cluster, -1 noise
    period: str  # UTC day, YYYY-MM-DD


@dataclass(frozen=True)
class EventCluster:
    cluster_id: str
    period: str
    member_doc_ids: tuple[str, ...]
    representative_doc_id: str
    centroid: tuple[float, ...]
    source_type: str
    descriptors: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> str:
        return json.dumps(
            {
                "cluster_id": self.cluster_id,
                "period": self.period,
                "source_type": self.source_type,
                "member_doc_ids": list(self.member_doc_ids),
                "representative_doc_id": self.representative_doc_id,
                "centroid": list(self.centroid),
                "w5h1": self.descriptors,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, raw: str) -> "EventCluster":
        data = json.loads(raw)
        return cls(
            cluster_id=data["cluster_id"],
            period=data["period"],
            source_type=data["source_type"],
            member_doc_ids=tuple(data["member_doc_ids"]),
            representative_doc_id=data["representative_doc_id"],
            centroid=tuple(data["centroid"]),
            descriptors=data.get("w5h1", {}),
        )


def _distance_matrix(doc_ids: Sequence[str], vectors: dict[str, np.ndarray]) -> np.ndarray:
    x = np.stack([np.asarray(vectors[d], dtype=np.float64) for d in doc_ids])
    norms = np.linalg.norm(x, axis=1)
    zero = np.nonzero(norms == 0.0)[0]
    if len(zero):
        raise ZeroVector(f"zero vector for doc {doc_ids[int(zero[0])]}")
    return kernels.cosine_distance_matrix(x / norms[:, None])


def dbscan(vectors: dict[str, np.ndarray], eps: float, min_pts: int,
           period: str = "") -> list[ClusterAssignment]:
    """DBSCAN with cosine distance; iteration in ascending doc_id order.

    Core point: >= min_pts neighbors within eps, itself included. Labels
    are assigned in cluster-discovery order, noise gets -1.
    """
    doc_ids = sorted(vectors)
    if not doc_ids:
        return []
    dist = _distance_matrix(doc_ids, vectors)
    labels = kernels.dbscan_labels(dist, float(eps), int(min_pts))
    return [ClusterAssignment(doc_id=d, label=int(lab), period=period)
            for d, lab in zip(doc_ids, labels)]


def _labels_for_grid(dist: np.ndarray, eps_grid: Sequence[float], min_pts: int) -> list[np.ndarray]:
    return [kernels.dbscan_labels(dist, float(eps), int(min_pts)) for eps in eps_grid]


def search_eps(vectors: dict[str, np.ndarray], eps_grid: Sequence[float],
               min_pts: int, period: str = "") -> tuple[float, list[ClusterAssignment]]:
    """Pick the grid eps maximizing the cluster count; ties take the smallest eps."""
    if not eps_grid:
        raise ValueError("eps_grid must be non-empty")
    doc_ids = sorted(vectors)
    if not doc_ids:
        return float(eps_grid[0]), []
    dist = _distance_matrix(doc_ids, vectors)
    best_eps = None
    best_labels = None
    best_count = -1
    for eps, labels in zip(eps_grid, _labels_for_grid(dist, eps_grid, min_pts)):
        count = len({int(x) for x in labels if x >= 0})
        if count > best_count:
            best_eps, best_labels, best_count = float(eps), labels, count
    assignments = [ClusterAssignment(doc_id=d, label=int(lab), period=period)
                   for d, lab in zip(doc_ids, best_labels)]
    return best_eps, assignments


def select_representative(members: dict[str, np.ndarray]) -> tuple[str, np.ndarray]:
    """Member closest to the centroid by cosine distance; ties take the
    lexicographically smallest doc_id."""
    if not members:
        raise ValueError("members must be non-empty")
    doc_ids = sorted(members)
    centroid = np.mean([np.asarray(members[d], dtype=np.float64) for d in doc_ids], axis=0)
    if float(np.linalg.norm(centroid)) == 0.0:
        raise ZeroVector("cluster centroid is the zero vector")
    best_id = None
    best_dist = None
    for doc_id in doc_ids:
        dist = cosine_distance(members[doc_id], centroid)
        if best_dist is None or dist < best_dist:
            best_id, best_dist = doc_id, dist
    return best_id, centroid


def cluster_period(
    vectors: dict[str, np.ndarray],
    eps_grid: Sequence[float],
    min_pts: int,
    period: str,
    source_type: str,
) -> tuple[float, list[ClusterAssignment], list[EventCluster]]:
    """Run the eps search on one (period, source_type) group and build clusters."""
    eps, assignments = search_eps(vectors, eps_grid, min_pts, period=period)
    by_label: dict[int, list[str]] = {}
    for a in assignments:
        if a.label >= 0:
            by_label.setdefault(a.label, []).append(a.doc_id)
    clusters = []
    for label in sorted(by_label):
        member_ids = sorted(by_label[label])
        rep, centroid = select_representative({d: vectors[d] for d in member_ids})
        clusters.append(
            EventCluster(
                cluster_id=f"{source_type}-{period}-{label:03d}",
                period=period,
                source_type=source_type,
                member_doc_ids=tuple(member_ids),
                representative_doc_id=rep,
                centroid=tuple(float(x) for x in centroid),
            )
        )
    return eps, assignments, clusters


def write_clusters(clusters: Iterable[EventCluster], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        for cluster in clusters:
            fh.write(cluster.to_json() + "\n")
    tmp.replace(path)


def load_clusters(path: str | Path) -> list[EventCluster]:
    clusters = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                clusters.append(EventCluster.from_json(line))
    return clusters
