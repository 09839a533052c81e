"""Embedded BM25 inverted index with field boosts and structured pre-filters.

Fields are scored independently (per-field document frequencies, lengths,
and averages) and combined as ``sum_f boost_f * BM25_f``. Documents failing
the structured filters are excluded before scoring. The index is built once,
frozen, and then serves unlimited concurrent readers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import IndexNotFrozen
from .models import Channel, JobPosting, RankedList

_TOKEN_RE = re.compile(r"[^0-9a-z]+")

FIELDS = ("title", "skills", "description")


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop empties.

    No stemming. ``stopwords`` are filtered when given (the description
    field only, per config). Punctuation-heavy terms collapse ("C++" -> "c"),
    a documented limitation of this analyzer.
    """
    tokens = [t for t in _TOKEN_RE.split(text.lower()) if t]
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return tokens


@dataclass(frozen=True)
class Bm25Config:
    k1: float = 1.2
    b: float = 0.75
    field_boosts: tuple[tuple[str, float], ...] = (
        ("title", 3.0),
        ("skills", 2.0),
        ("description", 1.0),
    )
    stopwords: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise ValueError("k1 must be >= 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")
        if any(boost <= 0 for _, boost in self.field_boosts):
            raise ValueError("field boosts must be positive")

    @property
    def boosts(self) -> dict[str, float]:
        return dict(self.field_boosts)

    @classmethod
    def from_config(cls, cfg: Mapping[str, Any]) -> "Bm25Config":
        lex = cfg["lexical"]
        return cls(
            k1=float(lex["k1"]),
            b=float(lex["b"]),
            field_boosts=tuple((f, float(lex["field_boosts"][f])) for f in FIELDS),
            stopwords=frozenset(lex.get("stopwords") or ()),
        )


@dataclass(frozen=True)
class LexicalFilters:
    """Structured pre-filters applied before scoring.

    Within a group the match is OR; across groups AND. Location filters
    also pass remote-allowed jobs.
    """

    cities: frozenset[str] = frozenset()
    states: frozenset[str] = frozenset()
    companies: frozenset[str] = frozenset()

    @property
    def is_empty(self) -> bool:
        return not (self.cities or self.states or self.companies)

    def passes(self, posting: JobPosting) -> bool:
        if self.cities or self.states:
            loc = posting.location
            ok = (
                loc.city.lower() in self.cities
                or loc.state.lower() in self.states
                or loc.remote_allowed
            )
            if not ok:
                return False
        if self.companies and posting.company.name.lower() not in self.companies:
            return False
        return True


class _FieldIndex:
    """Postings lists plus length statistics for one field."""

    def __init__(self) -> None:
        self.postings: dict[str, list[tuple[str, int]]] = {}
        self.doc_lengths: dict[str, int] = {}
        self.avg_length: float = 0.0

    def add(self, doc_id: str, tokens: Sequence[str]) -> None:
        self.doc_lengths[doc_id] = len(tokens)
        counts: dict[str, int] = {}
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
        for term, tf in counts.items():
            self.postings.setdefault(term, []).append((doc_id, tf))

    def finalize(self) -> None:
        for plist in self.postings.values():
            plist.sort(key=lambda x: x[0])
        n = len(self.doc_lengths)
        self.avg_length = sum(self.doc_lengths.values()) / n if n else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "postings": {t: [[d, tf] for d, tf in pl] for t, pl in self.postings.items()},
            "doc_lengths": self.doc_lengths,
            "avg_length": self.avg_length,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "_FieldIndex":
        fi = cls()
        fi.postings = {t: [(doc, int(tf)) for doc, tf in pl] for t, pl in d["postings"].items()}
        fi.doc_lengths = {k: int(v) for k, v in d["doc_lengths"].items()}
        fi.avg_length = float(d["avg_length"])
        return fi


class InvertedIndex:
    """Field-aware BM25 index over job postings.

    Build phase is single-writer (``add`` then ``freeze``); searching an
    unfrozen index raises :class:`IndexNotFrozen`.
    """

    def __init__(self, config: Bm25Config | None = None):
        self.config = config or Bm25Config()
        self.fields: dict[str, _FieldIndex] = {f: _FieldIndex() for f in FIELDS}
        self.doc_count = 0
        self.frozen = False
        self._postings_meta: dict[str, JobPosting] = {}

    def add(self, posting: JobPosting) -> None:
        if self.frozen:
            raise IndexNotFrozen("index already frozen; no further writes")
        field_text = {
            "title": posting.title,
            "skills": " ".join(sorted(s.replace("-", " ") for s in posting.skills)),
            "description": posting.description,
        }
        for name, fi in self.fields.items():
            stop = self.config.stopwords if name == "description" else None
            fi.add(posting.job_id, tokenize(field_text[name], stop))
        self._postings_meta[posting.job_id] = posting
        self.doc_count += 1

    def freeze(self) -> "InvertedIndex":
        for fi in self.fields.values():
            fi.finalize()
        self.frozen = True
        return self

    def idf(self, field_name: str, term: str) -> float:
        """IDF = ln(1 + (N - df + 0.5) / (df + 0.5)), floored at zero."""
        plist = self.fields[field_name].postings.get(term)
        if not plist:
            return 0.0
        df = len(plist)
        return max(0.0, math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5)))

    def search(
        self,
        query_tokens: Sequence[str],
        k: int,
        filters: LexicalFilters | None = None,
    ) -> RankedList:
        """Top-k postings by field-boosted BM25 over the query token multiset.

        A document scores zero iff no query term appears in any field, and
        zero-scoring documents are excluded from the result.
        """
        if not self.frozen:
            raise IndexNotFrozen("freeze the index before searching")
        if k <= 0:
            raise ValueError("k must be positive")
        scores: dict[str, float] = {}
        k1, b = self.config.k1, self.config.b
        boosts = self.config.boosts
        for field_name in FIELDS:
            fi = self.fields[field_name]
            if fi.avg_length == 0.0:
                continue
            boost = boosts[field_name]
            for term in query_tokens:
                plist = fi.postings.get(term)
                if not plist:
                    continue
                idf = self.idf(field_name, term)
                for doc_id, tf in plist:
                    dl = fi.doc_lengths[doc_id]
                    denom = tf + k1 * (1.0 - b + b * dl / fi.avg_length)
                    scores[doc_id] = scores.get(doc_id, 0.0) + boost * idf * tf * (k1 + 1.0) / denom
        if filters is not None and not filters.is_empty:
            scores = {
                doc_id: s
                for doc_id, s in scores.items()
                if self._postings_meta.get(doc_id) is not None
                and filters.passes(self._postings_meta[doc_id])
            }
        scores = {doc_id: s for doc_id, s in scores.items() if s > 0.0}
        return RankedList.from_scores(Channel.LEXICAL, scores, k)

    def attach_postings(self, postings: Iterable[JobPosting]) -> None:
        """Re-attach posting metadata after deserialization (for filters)."""
        self._postings_meta = {p.job_id: p for p in postings}

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": {
                "k1": self.config.k1,
                "b": self.config.b,
                "field_boosts": {f: b for f, b in self.config.field_boosts},
                "stopwords": sorted(self.config.stopwords),
            },
            "fields": {name: fi.to_dict() for name, fi in self.fields.items()},
            "doc_count": self.doc_count,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "InvertedIndex":
        cfg = d["config"]
        idx = cls(
            Bm25Config(
                k1=float(cfg["k1"]),
                b=float(cfg["b"]),
                field_boosts=tuple((f, float(cfg["field_boosts"][f])) for f in FIELDS),
                stopwords=frozenset(cfg.get("stopwords") or ()),
            )
        )
        idx.fields = {name: _FieldIndex.from_dict(fd) for name, fd in d["fields"].items()}
        idx.doc_count = int(d["doc_count"])
        idx.frozen = True
        return idx
