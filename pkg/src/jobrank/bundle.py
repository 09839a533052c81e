"""Immutable index bundle: the dual-indexed corpus handle used by queries.

One ingestion pass populates the lexical index, the vector index (one
embedding per posting over title + skills + description), and the knowledge
graph, then freezes everything. The bundle serializes to a single gzipped
JSON snapshot whose corpus fingerprint lets benchmarks verify they evaluate
the corpus they were built from.
"""

from __future__ import annotations

import gzip
import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .config import default_config
from .errors import BundleMissing, UnreadableFile
from .graph import KnowledgeGraph, build_graph
from .ingest import SkillSynonymTable, load_relations
from .lexical import Bm25Config, InvertedIndex
from .models import CandidateProfile, JobPosting
from .vectors import EmbedderSpec, VectorIndex, make_embedder

BUNDLE_FORMAT_VERSION = 1


def corpus_fingerprint(postings: Iterable[JobPosting]) -> str:
    """Order-independent SHA-256 over the canonical JSON of every posting."""
    canonical = sorted(
        json.dumps(p.to_dict(), sort_keys=True, separators=(",", ":"))
        for p in postings
    )
    digest = hashlib.sha256("\n".join(canonical).encode("utf-8"))
    return digest.hexdigest()


def posting_document_text(posting: JobPosting) -> str:
    """The text embedded per posting: title, then skills, then description."""
    skills = " ".join(s.replace("-", " ") for s in sorted(posting.skills))
    return " ".join(part for part in (posting.title, skills, posting.description) if part)


class IndexBundle:
    def __init__(
        self,
        postings: Mapping[str, JobPosting],
        lexical: InvertedIndex,
        vectors: VectorIndex,
        graph: KnowledgeGraph,
        table: SkillSynonymTable,
        config: Mapping[str, Any],
        fingerprint: str,
    ):
        self.postings = dict(postings)
        self.lexical = lexical
        self.vectors = vectors
        self.graph = graph
        self.table = table
        self.config = dict(config)
        self.fingerprint = fingerprint
        self._embedder = make_embedder(EmbedderSpec.from_config(self.config))

    def __len__(self) -> int:
        return len(self.postings)

    def job(self, job_id: str) -> JobPosting | None:
        return self.postings.get(job_id)

    def embed_query(self, text: str) -> np.ndarray:
        return self._embedder.embed(text)

    def document_counts(self) -> dict[str, int]:
        return {
            "postings": len(self.postings),
            "lexical": self.lexical.doc_count,
            "vectors": len(self.vectors),
            "graph_jobs": len(self.graph.jobs),
        }

    @classmethod
    def build(
        cls,
        postings: Sequence[JobPosting],
        table: SkillSynonymTable | None = None,
        relations: Iterable[tuple[str, str]] | None = None,
        config: Mapping[str, Any] | None = None,
        profiles: Sequence[CandidateProfile] = (),
    ) -> "IndexBundle":
        cfg = dict(config) if config is not None else default_config()
        table = table if table is not None else SkillSynonymTable.packaged()
        relations = list(relations) if relations is not None else load_relations()
        embedder = make_embedder(EmbedderSpec.from_config(cfg))

        lexical = InvertedIndex(Bm25Config.from_config(cfg))
        vectors = VectorIndex(
            dim=int(cfg["embedding"]["dim"]), ann=cfg.get("ann", {})
        )
        by_id: dict[str, JobPosting] = {}
        for posting in postings:
            by_id[posting.job_id] = posting
            lexical.add(posting)
            vectors.add(posting.job_id, embedder.embed(posting_document_text(posting)))
        lexical.freeze()
        vectors.freeze()
        hop_weights = {int(k): float(v) for k, v in cfg["graph"]["hop_weights"].items()}
        graph = build_graph(postings, profiles, relations, hop_weights=hop_weights)
        return cls(
            postings=by_id,
            lexical=lexical,
            vectors=vectors,
            graph=graph,
            table=table,
            config=cfg,
            fingerprint=corpus_fingerprint(postings),
        )

    def save(self, path: str | Path) -> None:
        blob = {
            "format_version": BUNDLE_FORMAT_VERSION,
            "fingerprint": self.fingerprint,
            "config": self.config,
            "postings": [self.postings[j].to_dict() for j in sorted(self.postings)],
            "lexical": self.lexical.to_dict(),
            "vectors": self.vectors.to_dict(),
            "graph": self.graph.to_dict(),
            "synonyms": self.table.to_dict(),
        }
        payload = json.dumps(blob, sort_keys=True, separators=(",", ":"))
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write(payload)

    @classmethod
    def load(cls, path: str | Path) -> "IndexBundle":
        p = Path(path)
        if not p.exists():
            raise BundleMissing(f"no bundle at {p}")
        try:
            with gzip.open(p, "rt", encoding="utf-8") as fh:
                blob = json.loads(fh.read())
        except (OSError, json.JSONDecodeError) as exc:
            raise UnreadableFile(f"cannot read bundle {p}: {exc}") from exc
        postings = {
            d["job_id"]: JobPosting.from_dict(d) for d in blob["postings"]
        }
        lexical = InvertedIndex.from_dict(blob["lexical"])
        lexical.attach_postings(postings.values())
        return cls(
            postings=postings,
            lexical=lexical,
            vectors=VectorIndex.from_dict(blob["vectors"]),
            graph=KnowledgeGraph.from_dict(blob["graph"]),
            table=SkillSynonymTable.from_dict(blob["synonyms"]),
            config=blob["config"],
            fingerprint=blob["fingerprint"],
        )


def build_indexes(
    postings: Sequence[JobPosting],
    table: SkillSynonymTable | None = None,
    relations: Iterable[tuple[str, str]] | None = None,
    config: Mapping[str, Any] | None = None,
    profiles: Sequence[CandidateProfile] = (),
) -> IndexBundle:
    """Single dual-indexing pass over validated postings."""
    return IndexBundle.build(postings, table, relations, config, profiles)
