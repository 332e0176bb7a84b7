"""Seeded geometric-draw streams on top of a counter-based generator.

A GeomStream owns a Philox generator keyed by a sha256 hash of (seed, label),
so independent substreams for parallel Monte Carlo are derived by name rather
than by splitting state: ``stream.spawn("worker-3")`` yields the same
substream no matter how much the parent has already consumed.

Draws map uniforms U in (0,1] through the inverse CDF:

    geometric, P(k) = (1-ratio) * ratio^k:   k = floor(log U / log ratio)
    truncated to {0..limit}:                 same, with U rescaled to the
                                             support's CDF range

both exact and O(1) per draw.
"""
from __future__ import annotations

import hashlib
import math

import numpy as np

from .errors import DomainError


def _philox_key(seed: int, label: str) -> np.ndarray:
    digest = hashlib.sha256(f"mallows:{seed}:{label}".encode()).digest()
    return np.frombuffer(digest[:16], dtype=np.uint64).copy()


class GeomStream:
    """Reproducible stream of geometric draws with ratio q.

    Attributes: ``seed`` (the 64-bit master seed), ``q`` (default ratio of
    geometric draws), ``counter`` (uniforms consumed so far, bookkeeping).
    """

    def __init__(self, seed: int, q: float, _label: str = "root") -> None:
        if not (0.0 < q < 1.0):
            raise DomainError(f"stream ratio q must lie in (0,1), got {q}")
        self.seed = int(seed)
        self.q = float(q)
        self.counter = 0
        self._label = _label
        self._gen = np.random.Generator(np.random.Philox(key=_philox_key(self.seed, _label)))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return (
            f"GeomStream(seed={self.seed}, q={self.q}, counter={self.counter}, "
            f"label={self._label!r})"
        )

    def spawn(self, label: str | int) -> "GeomStream":
        """Independent substream addressed by name, regardless of consumption."""
        return GeomStream(self.seed, self.q, _label=f"{self._label}/{label}")

    # -- uniforms ----------------------------------------------------------
    def uniform(self) -> float:
        """One uniform on (0,1] (never 0, so logs are safe)."""
        self.counter += 1
        return 1.0 - self._gen.random()

    def uniforms(self, n: int) -> np.ndarray:
        self.counter += int(n)
        return 1.0 - self._gen.random(int(n))

    # -- geometric laws ----------------------------------------------------
    def geometric(self, ratio: float | None = None) -> int:
        """Draw from P(k) = (1-ratio) ratio^k on {0,1,2,...}."""
        r = self.q if ratio is None else ratio
        return int(math.log(self.uniform()) / math.log(r))

    def geometrics(self, n: int, ratio: float | None = None) -> np.ndarray:
        r = self.q if ratio is None else ratio
        u = self.uniforms(n)
        return np.floor(np.log(u) / math.log(r)).astype(np.int64)

    def truncated_geometric(self, limit: int) -> int:
        """Draw from P(k) proportional to q^k on {0..limit} (exact inverse CDF)."""
        if limit <= 0:
            return 0
        top = 1.0 - self.q ** (limit + 1)
        w = self.uniform() * top
        k = int(math.log(1.0 - w) / math.log(self.q))
        return min(k, limit)

    def truncated_geometrics(self, n: int, limit: int) -> np.ndarray:
        if limit <= 0:
            return np.zeros(int(n), dtype=np.int64)
        top = 1.0 - self.q ** (limit + 1)
        w = self.uniforms(n) * top
        k = np.floor(np.log(1.0 - w) / math.log(self.q)).astype(np.int64)
        return np.minimum(k, limit)

    def bernoulli(self, prob: float) -> bool:
        return self.uniform() <= prob
