"""Pipeline and service configuration."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"

LISTEN_ENV_VAR = "EVENTGRAPH_LISTEN"


def _eps_grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    grid = []
    k = 1
    v = lo
    while v <= hi + 1e-12:
        grid.append(round(v, 10))
        v = lo + k * step
        k += 1
    return tuple(grid)


@dataclass(frozen=True)
class PipelineConfig:
    """Numeric knobs of the processing pipeline.

    Defaults: 300-dim word vectors averaged per document, reduced to 100
    dims, clusters represented by up to the top two descriptors per
    question, DBSCAN min_pts 3 with eps searched over [0.01, 0.50] in 0.01
    steps, day-level periods, English stop-word ratio gate at 0.15, and
    fuzzy query matching within 1 edit.
    """

    embed_dims: int = 300
    pca_dims: int = 100
    top_k_descriptors: int = 2
    dbscan_min_pts: int = 3
    eps_grid: tuple[float, ...] = field(default_factory=lambda: _eps_grid(0.01, 0.50, 0.01))
    period_granularity: str = "day"
    english_threshold: float = 0.15
    fuzzy_max_edits: int = 1

    def __post_init__(self) -> None:
        for name in ("embed_dims", "pca_dims", "top_k_descriptors", "dbscan_min_pts",
                     "english_threshold", "fuzzy_max_edits"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.eps_grid:
            raise ValueError("eps_grid must be non-empty")
        if any(b <= a for a, b in zip(self.eps_grid, self.eps_grid[1:])):
            raise ValueError("eps_grid must be strictly ascending")
        if not 0.0 < self.english_threshold < 1.0:
            raise ValueError("english_threshold must be in (0,1)")


@dataclass
class ServiceConfig:
    """HTTP service settings, loadable from a JSON config file."""

    listen_address: str = "127.0.0.1:8040"
    store_dir: str = "store"
    cors_allowed_origin: str = "*"
    page_size: int = 20

    def __post_init__(self) -> None:
        if self.page_size < 1:
            raise ValueError("page_size must be >= 1")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        cfg = cls(**{k: raw[k] for k in ("listen_address", "store_dir",
                                         "cors_allowed_origin", "page_size") if k in raw})
        override = os.environ.get(LISTEN_ENV_VAR)
        if override:
            cfg.listen_address = override
        return cfg

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])
