"""End-to-end query flow: enrichment, concurrent three-channel retrieval,
query-adaptive reciprocal-rank fusion, hard-constraint filtering, and the
reranking handoff.

Queries are stateless and read-only against a frozen bundle, so the three
retrievers can run in parallel while the merged output stays identical to
sequential execution.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .bundle import IndexBundle
from .errors import EmptyQuery
from .lexical import LexicalFilters, tokenize
from .models import CandidateProfile, Channel, ConstraintSet, JobPosting, RankedList
from .rerank import FactorScores, Reranker, RerankSubject, WeightVector

CHANNELS = ("lexical", "semantic", "graph")


@dataclass(frozen=True)
class StructuredQuery:
    """Enriched query: entities, skills, expansion, embedding, residuals."""

    mode: str  # keyword | resume
    text: str
    skills: frozenset[str]
    expanded: Mapping[str, int]  # skill -> minimal hop distance, seeds at 0
    embedding: np.ndarray
    residual_tokens: tuple[str, ...]
    token_count: int
    entities: Mapping[str, tuple[str, ...]] = field(
        default_factory=lambda: {"cities": (), "states": (), "companies": (), "degrees": ()}
    )

    def lexical_tokens(self) -> list[str]:
        """Residual tokens plus the surface forms of extracted skills."""
        tokens = list(self.residual_tokens)
        for skill in sorted(self.skills):
            tokens.extend(skill.split("-"))
        return tokens

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "text": self.text,
            "skills": sorted(self.skills),
            "expanded": {s: d for s, d in sorted(self.expanded.items())},
            "residual_tokens": list(self.residual_tokens),
            "token_count": self.token_count,
            "entities": {k: list(v) for k, v in sorted(self.entities.items())},
        }


def _known_locations(bundle: IndexBundle) -> tuple[set[str], set[str]]:
    cities: set[str] = set()
    states: set[str] = set()
    for posting in bundle.postings.values():
        if posting.location.city:
            cities.add(posting.location.city.lower())
        if posting.location.state:
            states.add(posting.location.state.lower())
    return cities, states


def _extract_entities(
    tokens: list[str], bundle: IndexBundle
) -> dict[str, tuple[str, ...]]:
    """Match known cities, states, companies, and degree words in the query."""
    cities, states = _known_locations(bundle)
    companies = {p.company.name.lower() for p in bundle.postings.values() if p.company.name}
    found_cities: list[str] = []
    found_states: list[str] = []
    found_companies: list[str] = []
    n = len(tokens)
    for width in (3, 2, 1):
        for i in range(n - width + 1):
            phrase = " ".join(tokens[i : i + width])
            if phrase in cities and phrase not in found_cities:
                found_cities.append(phrase)
            if phrase in companies and phrase not in found_companies:
                found_companies.append(phrase)
            if width == 1 and phrase in states and phrase not in found_states:
                found_states.append(phrase)
    degrees = [
        word
        for word in ("bachelor", "master", "doctorate", "phd")
        if word in set(tokens)
    ]
    return {
        "cities": tuple(found_cities),
        "states": tuple(found_states),
        "companies": tuple(found_companies),
        "degrees": tuple(degrees),
    }


def enrich(
    query: str | CandidateProfile, bundle: IndexBundle, cfg: Mapping[str, Any]
) -> StructuredQuery:
    """Build the structured query for keyword text or a candidate profile."""
    depth = int(cfg["graph"]["expansion_depth"])
    if isinstance(query, CandidateProfile):
        skills = frozenset(query.skills)
        expanded = bundle.graph.expand_skills(skills, depth)
        headline_parts = [s.replace("-", " ") for s in sorted(skills)]
        if query.experience_level.value != "unknown":
            headline_parts.append(query.experience_level.value)
        headline = " ".join(headline_parts)
        cities = tuple(
            p.city.lower() for p in query.preferred_locations if p.city
        )
        states = tuple(
            p.state.lower() for p in query.preferred_locations if p.state
        )
        return StructuredQuery(
            mode="resume",
            text=headline,
            skills=skills,
            expanded=expanded,
            embedding=bundle.embed_query(headline),
            residual_tokens=(),
            token_count=len(tokenize(headline)),
            entities={
                "cities": cities,
                "states": states,
                "companies": (),
                "degrees": (),
            },
        )
    text = query or ""
    tokens = tokenize(text)
    if not tokens:
        raise EmptyQuery("query has no tokens")
    skills, residual = bundle.table.extract(tokens)
    expanded = bundle.graph.expand_skills(skills, depth)
    return StructuredQuery(
        mode="keyword",
        text=text,
        skills=frozenset(skills),
        expanded=expanded,
        embedding=bundle.embed_query(text),
        residual_tokens=tuple(residual),
        token_count=len(tokens),
        entities=_extract_entities(tokens, bundle),
    )


def adaptive_weights(sq: StructuredQuery, cfg: Mapping[str, Any]) -> dict[str, float]:
    """Channel weights by query regime: short keyword queries lean on the
    graph, longer queries (and resume mode) lean on text channels."""
    fusion = cfg["fusion"]
    if sq.mode == "keyword" and sq.token_count <= int(fusion["short_query_max_tokens"]):
        raw = fusion["short_query_weights"]
    else:
        raw = fusion["long_query_weights"]
    weights = {ch: float(raw[ch]) for ch in CHANNELS}
    total = sum(weights.values())
    return {ch: w / total for ch, w in weights.items()}


def retrieve_all(
    sq: StructuredQuery,
    bundle: IndexBundle,
    cfg: Mapping[str, Any],
    channels: tuple[str, ...] = CHANNELS,
) -> tuple[dict[str, RankedList], list[str]]:
    """Run the enabled retrieval channels concurrently.

    A failing channel degrades to an empty list with a warning instead of
    failing the query. Results are deterministic because every index is
    frozen and read-only.
    """
    depths = cfg["fusion"]["depths"]
    filters = LexicalFilters(
        cities=frozenset(sq.entities.get("cities", ())),
        states=frozenset(sq.entities.get("states", ())),
        companies=frozenset(sq.entities.get("companies", ())),
    )

    def run_lexical() -> RankedList:
        return bundle.lexical.search(
            sq.lexical_tokens(), int(depths["lexical"]), filters=filters
        )

    def run_semantic() -> RankedList:
        return bundle.vectors.search(sq.embedding, int(depths["semantic"]))

    def run_graph() -> RankedList:
        return bundle.graph.search(sq.expanded, int(depths["graph"]))

    runners = {"lexical": run_lexical, "semantic": run_semantic, "graph": run_graph}
    empty_channel = {
        "lexical": Channel.LEXICAL,
        "semantic": Channel.SEMANTIC,
        "graph": Channel.GRAPH,
    }
    results: dict[str, RankedList] = {}
    warnings: list[str] = []
    with ThreadPoolExecutor(max_workers=len(CHANNELS)) as pool:
        futures = {ch: pool.submit(runners[ch]) for ch in channels}
        for ch in channels:
            try:
                results[ch] = futures[ch].result()
            except Exception as exc:  # degrade, never fail the query
                warnings.append(f"{ch} channel failed: {exc}")
                results[ch] = RankedList(
                    empty_channel[ch], (), int(depths[ch])
                )
    return results, warnings


def fuse_rrf(
    lists: Mapping[str, RankedList],
    weights: Mapping[str, float],
    cfg: Mapping[str, Any],
) -> RankedList:
    """Weighted reciprocal-rank fusion over the channel results.

    score(d) = sum over channels holding d of w_ch / (rrf_k + rank_ch(d)),
    ranks 1-based; ties by job id; union truncated to the candidate cap.
    """
    fusion = cfg["fusion"]
    rrf_k = float(fusion["rrf_k"])
    cap = int(fusion["union_cap"])
    scores: dict[str, float] = {}
    for ch in sorted(lists):
        weight = float(weights.get(ch, 0.0))
        if weight == 0.0:
            continue
        for rank, job_id in enumerate(lists[ch].job_ids(), start=1):
            scores[job_id] = scores.get(job_id, 0.0) + weight / (rrf_k + rank)
    return RankedList.from_scores(Channel.FUSED, scores, cap)


def apply_hard_constraints(
    ranked: RankedList,
    constraints: ConstraintSet,
    postings: Mapping[str, JobPosting],
) -> RankedList:
    """Drop jobs that violate any declared constraint; keep order."""
    if constraints.is_empty:
        return ranked
    kept: list[tuple[str, float]] = []
    for job_id, score in ranked.entries:
        posting = postings.get(job_id)
        if posting is None:
            continue
        if constraints.needs_visa_sponsorship and not posting.visa_sponsorship:
            continue
        if (
            constraints.min_degree is not None
            and posting.degree_required.ordinal > constraints.min_degree.ordinal
        ):
            continue
        if (
            constraints.required_certifications is not None
            and not posting.certifications_required <= constraints.required_certifications
        ):
            continue
        kept.append((job_id, score))
    return RankedList(ranked.channel, tuple(kept), ranked.k_requested)


@dataclass
class SearchOutcome:
    """Everything one query produced, stage by stage."""

    structured: StructuredQuery
    channel_results: dict[str, RankedList]
    channel_weights: dict[str, float]
    fused: RankedList
    filtered: RankedList
    reranked: RankedList
    factor_scores: dict[str, FactorScores]
    weights: WeightVector
    timings_ms: dict[str, float]
    warnings: list[str]


def search(
    query: str | CandidateProfile,
    bundle: IndexBundle,
    cfg: Mapping[str, Any] | None = None,
    profile: CandidateProfile | None = None,
    weights: WeightVector | None = None,
    constraints: ConstraintSet | None = None,
    channels: tuple[str, ...] = CHANNELS,
    reranker: Reranker | None = None,
    rerank_enabled: bool = True,
) -> SearchOutcome:
    """Full pipeline: enrich, retrieve, fuse, filter, rerank.

    ``query`` may be keyword text or a profile (resume mode). A separate
    ``profile`` may accompany a keyword query to enable the preference
    factors and hard constraints.
    """
    cfg = cfg if cfg is not None else bundle.config
    if isinstance(query, CandidateProfile) and profile is None:
        profile = query
    if weights is None:
        weights = WeightVector.defaults(cfg)
    if constraints is None:
        constraints = profile.hard_constraints if profile else ConstraintSet()

    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    sq = enrich(query, bundle, cfg)
    t1 = time.perf_counter()
    timings["enrich"] = (t1 - t0) * 1000.0

    channel_weights = adaptive_weights(sq, cfg)
    if set(channels) != set(CHANNELS):
        # ablation runs: zero out inactive channels, renormalize the rest
        active = {ch: channel_weights[ch] for ch in channels}
        total = sum(active.values())
        channel_weights = {
            ch: (active[ch] / total if ch in active and total > 0 else 0.0)
            for ch in CHANNELS
        }

    results, warnings = retrieve_all(sq, bundle, cfg, channels)
    t2 = time.perf_counter()
    timings["retrieve"] = (t2 - t1) * 1000.0

    fused = fuse_rrf(results, channel_weights, cfg)
    t3 = time.perf_counter()
    timings["fuse"] = (t3 - t2) * 1000.0

    filtered = apply_hard_constraints(fused, constraints, bundle.postings)
    t4 = time.perf_counter()
    timings["filter"] = (t4 - t3) * 1000.0

    factor_scores: dict[str, FactorScores] = {}
    if rerank_enabled:
        if profile is not None:
            subject = RerankSubject.for_profile(profile, bundle)
        else:
            subject = RerankSubject.for_query(sq.skills, sq.embedding)
        reranker = reranker or Reranker(bundle, cfg)
        reranked, factor_scores = reranker.rerank(filtered, subject, weights)
    else:
        reranked = RankedList(
            Channel.RERANKED, filtered.entries, filtered.k_requested
        )
    t5 = time.perf_counter()
    timings["rerank"] = (t5 - t4) * 1000.0
    timings["total"] = (t5 - t0) * 1000.0

    return SearchOutcome(
        structured=sq,
        channel_results=results,
        channel_weights=channel_weights,
        fused=fused,
        filtered=filtered,
        reranked=reranked,
        factor_scores=factor_scores,
        weights=weights,
        timings_ms=timings,
        warnings=warnings,
    )
