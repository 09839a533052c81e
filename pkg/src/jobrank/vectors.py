"""Pluggable text embedder plus kNN search over 384-dimensional unit vectors.

The default embedder feature-hashes token unigrams and character 3-5-grams
with signed hashing, which keeps the semantic channel fully deterministic
and dependency-free. An external embedding endpoint can be plugged in via
config; its vectors are dimension-checked and re-normalized. Search is exact
brute force by default (microseconds at this corpus scale); a small
navigable-graph approximate index can be enabled by config and must keep
recall@k >= 0.95 against the exact oracle.
"""

from __future__ import annotations

import base64
import hashlib
import json
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, ExternalEmbedderUnavailable, IndexNotFrozen
from .lexical import tokenize
from .models import Channel, RankedList

EMBEDDING_DIM = 384


@dataclass(frozen=True)
class EmbedderSpec:
    kind: str = "hashed"  # hashed | external
    dim: int = EMBEDDING_DIM
    seed: int = 1924
    char_ngram_min: int = 3
    char_ngram_max: int = 5
    external_endpoint: str = ""

    @classmethod
    def from_config(cls, cfg: Mapping[str, Any]) -> "EmbedderSpec":
        emb = cfg["embedding"]
        return cls(
            kind=str(emb.get("kind", "hashed")),
            dim=int(emb.get("dim", EMBEDDING_DIM)),
            seed=int(emb.get("seed", 1924)),
            char_ngram_min=int(emb.get("char_ngram_min", 3)),
            char_ngram_max=int(emb.get("char_ngram_max", 5)),
            external_endpoint=str(emb.get("external_endpoint", "") or ""),
        )


class HashedEmbedder:
    """Deterministic signed feature hashing into ``dim`` buckets.

    Identical text always maps to an identical unit vector. All-empty input
    maps to a fixed unit vector (bucket 0) so downstream cosine math never
    sees a zero vector.
    """

    def __init__(self, spec: EmbedderSpec):
        self.spec = spec
        self._key = spec.seed.to_bytes(8, "little", signed=True)

    def embed(self, text: str) -> np.ndarray:
        spec = self.spec
        vec = np.zeros(spec.dim, dtype=np.float64)
        tokens = tokenize(text)
        if not tokens:
            vec[0] = 1.0
            return vec
        stream = " ".join(tokens)
        features: list[str] = ["w:" + t for t in tokens]
        for n in range(spec.char_ngram_min, spec.char_ngram_max + 1):
            if len(stream) < n:
                break
            features.extend("c:" + stream[i : i + n] for i in range(len(stream) - n + 1))
        for feat in features:
            h = int.from_bytes(
                hashlib.blake2b(feat.encode("utf-8"), digest_size=8, key=self._key).digest(),
                "little",
            )
            bucket = h % spec.dim
            sign = 1.0 if (h >> 62) & 1 else -1.0
            vec[bucket] += sign
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            vec[:] = 0.0
            vec[0] = 1.0
            return vec
        return vec / norm


class ExternalEmbedder:
    """Delegates to a local HTTP endpoint: request {text} -> {vector: [...]}."""

    def __init__(self, spec: EmbedderSpec):
        if not spec.external_endpoint:
            raise ExternalEmbedderUnavailable("no external endpoint configured")
        self.spec = spec

    def embed(self, text: str) -> np.ndarray:
        payload = json.dumps({"text": text}).encode("utf-8")
        req = urllib.request.Request(
            self.spec.external_endpoint,
            data=payload,
            headers={"Content-Type": "application/json"},
        )
        try:
            with urllib.request.urlopen(req, timeout=10) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise ExternalEmbedderUnavailable(str(exc)) from exc
        vector = np.asarray(body.get("vector", ()), dtype=np.float64)
        if vector.shape != (self.spec.dim,):
            raise DimensionMismatch(
                f"expected {self.spec.dim} dims, got {vector.shape}"
            )
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            vector = np.zeros(self.spec.dim)
            vector[0] = 1.0
            return vector
        return vector / norm


def make_embedder(spec: EmbedderSpec):
    if spec.kind == "external":
        return ExternalEmbedder(spec)
    return HashedEmbedder(spec)


class VectorIndex:
    """Cosine kNN over unit vectors; exact by default, NSW graph optionally."""

    def __init__(self, dim: int = EMBEDDING_DIM, ann: Mapping[str, Any] | None = None):
        self.dim = dim
        self.ann_enabled = bool(ann and ann.get("enabled"))
        self._ann_neighbors = int(ann["neighbors"]) if ann and "neighbors" in ann else 16
        self._ann_beam = int(ann["beam_width"]) if ann and "beam_width" in ann else 48
        self._ids: list[str] = []
        self._vectors: list[np.ndarray] = []
        self.matrix: np.ndarray | None = None
        self.frozen = False
        self._graph: list[list[int]] | None = None

    def __len__(self) -> int:
        return len(self._ids)

    @property
    def doc_ids(self) -> list[str]:
        return list(self._ids)

    def add(self, doc_id: str, vector: np.ndarray) -> None:
        if self.frozen:
            raise IndexNotFrozen("index already frozen; no further writes")
        if vector.shape != (self.dim,):
            raise DimensionMismatch(f"expected {self.dim} dims, got {vector.shape}")
        self._ids.append(doc_id)
        self._vectors.append(np.asarray(vector, dtype=np.float64))

    def freeze(self) -> "VectorIndex":
        self.matrix = (
            np.vstack(self._vectors) if self._vectors else np.zeros((0, self.dim))
        )
        self._vectors = []
        if self.ann_enabled and len(self._ids) > 0:
            self._graph = _build_nsw(self.matrix, self._ann_neighbors, self._ann_beam)
        self.frozen = True
        return self

    def vector_for(self, doc_id: str) -> np.ndarray | None:
        try:
            row = self._ids.index(doc_id)
        except ValueError:
            return None
        return self.matrix[row]

    def search(self, query: np.ndarray, k: int) -> RankedList:
        """Top-k by cosine similarity (dot product over unit vectors)."""
        if not self.frozen:
            raise IndexNotFrozen("freeze the index before searching")
        if k <= 0:
            raise ValueError("k must be positive")
        if self.matrix is None or self.matrix.shape[0] == 0:
            return RankedList(Channel.SEMANTIC, (), k)
        if self._graph is not None:
            candidates = _nsw_search(self.matrix, self._graph, query, max(k, self._ann_beam))
            scores = {self._ids[i]: float(self.matrix[i] @ query) for i in candidates}
            return RankedList.from_scores(Channel.SEMANTIC, scores, k)
        sims = self.matrix @ query
        n = sims.shape[0]
        if k < n:
            top = np.argpartition(-sims, k)[: k + 32]
        else:
            top = np.arange(n)
        scores = {self._ids[i]: float(sims[i]) for i in top}
        return RankedList.from_scores(Channel.SEMANTIC, scores, k)

    def to_dict(self) -> dict[str, Any]:
        mat = self.matrix if self.matrix is not None else np.zeros((0, self.dim))
        return {
            "dim": self.dim,
            "ids": self._ids,
            "vectors_b64": base64.b64encode(
                np.ascontiguousarray(mat, dtype=np.float64).tobytes()
            ).decode("ascii"),
            "ann_enabled": self.ann_enabled,
            "ann_neighbors": self._ann_neighbors,
            "ann_beam": self._ann_beam,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "VectorIndex":
        idx = cls(
            dim=int(d["dim"]),
            ann={
                "enabled": bool(d.get("ann_enabled", False)),
                "neighbors": int(d.get("ann_neighbors", 16)),
                "beam_width": int(d.get("ann_beam", 48)),
            },
        )
        ids = list(d["ids"])
        raw = base64.b64decode(d["vectors_b64"])
        mat = np.frombuffer(raw, dtype=np.float64).reshape(len(ids), idx.dim).copy()
        idx._ids = ids
        idx.matrix = mat
        if idx.ann_enabled and ids:
            idx._graph = _build_nsw(mat, idx._ann_neighbors, idx._ann_beam)
        idx.frozen = True
        return idx


def _build_nsw(matrix: np.ndarray, m: int, beam: int) -> list[list[int]]:
    """Incremental navigable-small-world construction.

    Each node is inserted by greedy beam search over the partial graph and
    linked bidirectionally to its ``m`` best candidates.
    """
    n = matrix.shape[0]
    graph: list[list[int]] = [[] for _ in range(n)]
    for i in range(1, n):
        candidates = _nsw_search(matrix, graph, matrix[i], beam, limit=i)
        nearest = candidates[:m]
        for j in nearest:
            graph[i].append(j)
            graph[j].append(i)
    return graph


def _nsw_search(
    matrix: np.ndarray,
    graph: Sequence[Sequence[int]],
    query: np.ndarray,
    beam: int,
    limit: int | None = None,
) -> list[int]:
    """Greedy beam search; returns visited node ids best-first."""
    n = matrix.shape[0] if limit is None else limit
    if n == 0:
        return []
    entry = 0
    visited = {entry}
    frontier = [(float(matrix[entry] @ query), entry)]
    best: list[tuple[float, int]] = list(frontier)
    while frontier:
        frontier.sort(reverse=True)
        sim, node = frontier.pop(0)
        # stop when the current node cannot improve on the beam tail
        tail = sorted(best, reverse=True)[: beam]
        if len(tail) >= beam and sim < tail[-1][0]:
            break
        for nb in graph[node]:
            if nb >= n or nb in visited:
                continue
            visited.add(nb)
            s = float(matrix[nb] @ query)
            frontier.append((s, nb))
            best.append((s, nb))
    best.sort(key=lambda t: (-t[0], t[1]))
    return [i for _, i in best]
