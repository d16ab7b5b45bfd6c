"""Document embedding: mean word vectors and PCA dimensionality reduction."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimsMismatch, EmptyTable, KTooLarge, MalformedLine, TooFewVectors
from .textprep import PreparedDoc

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WordVectorTable:
    dims: int
    entries: dict[str, np.ndarray]

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DocVector:
    doc_id: str
    vector: np.ndarray


def load_vectors(path: str | Path, expected_dims: int) -> WordVectorTable:
    """Parse the `word v1 ... vd` text format, optional `count dims` header."""
    entries: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if line_no == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # header line
                except ValueError:
                    pass
            if len(parts) < 2:
                raise MalformedLine(line_no, "expected word and values")
            word = parts[0]
            if len(parts) - 1 != expected_dims:
                raise DimsMismatch(
                    f"line {line_no}: {len(parts) - 1} values, expected {expected_dims}"
                )
            try:
                vec = np.array([float(p) for p in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise MalformedLine(line_no, str(exc)) from exc
            entries[word] = vec
    if not entries:
        raise EmptyTable(str(path))
    return WordVectorTable(dims=expected_dims, entries=entries)


def embed_document(prepared: PreparedDoc, table: WordVectorTable) -> DocVector | None:
    """Arithmetic mean of in-vocabulary token vectors; None when no overlap."""
    vecs = [table.entries[tok] for tok in prepared.tokens if tok in table.entries]
    if not vecs:
        return None
    return DocVector(doc_id=prepared.doc_id, vector=np.mean(vecs, axis=0))


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray            # (d,)
    components: np.ndarray      # (k, d), orthonormal rows
    k: int
    explained_variance_ratio: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "mean": [float(x) for x in self.mean],
                "components": [[float(x) for x in row] for row in self.components],
                "k": self.k,
                "explained_variance_ratio": float(self.explained_variance_ratio),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, raw: str) -> "PcaModel":
        data = json.loads(raw)
        return cls(
            mean=np.array(data["mean"], dtype=np.float64),
            components=np.array(data["components"], dtype=np.float64),
            k=int(data["k"]),
            explained_variance_ratio=float(data["explained_variance_ratio"]),
        )


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of each component positive."""
    out = components.copy()
    for i, row in enumerate(out):
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            out[i] = -row
    return out


def pca_fit(vectors: list[DocVector], k: int) -> PcaModel:
    """Fit PCA via SVD of the centered matrix.

    Components are the top-k right singular vectors (eigenvalue order,
    descending); the explained variance ratio is the retained share of
    total variance.
    """
    if len(vectors) < 2:
        raise TooFewVectors(f"need >= 2 vectors, got {len(vectors)}")
    x = np.stack([dv.vector for dv in vectors]).astype(np.float64)
    n, d = x.shape
    if k > d or k > n:
        raise KTooLarge(f"k={k} exceeds dims={d} or count={n}")
    mean = x.mean(axis=0)
    centered = x - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    eigvals = (svals**2) / (n - 1)
    total = float(centered.var(axis=0, ddof=1).sum())
    components = _fix_signs(vt[:k])
    if total <= 0.0:
        ratio = 1.0  # all points identical: nothing left to explain
    else:
        ratio = min(1.0, float(eigvals[:k].sum()) / total)
    return PcaModel(mean=mean, components=components, k=k,
                    explained_variance_ratio=ratio)


def pca_transform(model: PcaModel, v: np.ndarray) -> np.ndarray:
    """Project one vector into the retained component space."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != model.mean.shape:
        raise DimsMismatch(f"vector has {v.shape}, model expects {model.mean.shape}")
    return model.components @ (v - model.mean)


def clamp_pca_dims(k: int, n_vectors: int, dims: int) -> int:
    """Shrink k to what the data supports, warning when it happens."""
    limit = min(dims, max(1, n_vectors - 1))
    if k > limit:
        log.warning("pca dims clamped from %d to %d (n=%d, d=%d)", k, limit, n_vectors, dims)
        return limit
    return k
