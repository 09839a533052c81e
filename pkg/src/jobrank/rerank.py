"""White-box reranking: six normalized factor scores and their weighted
utility.

Every factor maps to [0, 1], falls back to 0.5 when its inputs are missing,
and carries structured evidence (matched skills, relation paths, tier
labels, salary inputs) so explanations never need the raw documents.
Weights renormalize on construction, which makes the utility invariant to
positive scaling of user slider input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

import numpy as np

from .graph import KnowledgeGraph
from .models import CandidateProfile, Channel, JobPosting, Level, RankedList

# Fixed factor order: used for utility accumulation and every tie-break.
FACTOR_ORDER = ("skill", "experience", "location", "salary", "semantic", "company")

DEFAULT_RAW_WEIGHTS = {
    "skill": 0.35,
    "experience": 0.25,
    "location": 0.15,
    "salary": 0.10,
    "semantic": 0.10,
    "company": 0.05,
}

NEUTRAL = 0.5


@dataclass(frozen=True)
class WeightVector:
    """Non-negative factor weights normalized to sum to 1."""

    skill: float
    experience: float
    location: float
    salary: float
    semantic: float
    company: float

    def __post_init__(self) -> None:
        values = self.as_dict()
        if any(v < 0 for v in values.values()):
            raise ValueError("weights must be non-negative")
        total = sum(values.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {total}")

    def as_dict(self) -> dict[str, float]:
        return {f: getattr(self, f) for f in FACTOR_ORDER}

    def __getitem__(self, factor: str) -> float:
        return getattr(self, factor)

    @classmethod
    def from_raw(cls, raw: Mapping[str, float]) -> "WeightVector":
        """Renormalize arbitrary non-negative slider input.

        Unknown factor names are rejected; missing factors default to 0.
        """
        unknown = set(raw) - set(FACTOR_ORDER)
        if unknown:
            raise ValueError(f"unknown factors: {sorted(unknown)}")
        values = {f: float(raw.get(f, 0.0)) for f in FACTOR_ORDER}
        if any(v < 0 for v in values.values()):
            raise ValueError("weights must be non-negative")
        total = sum(values.values())
        if total <= 0:
            raise ValueError("at least one weight must be positive")
        return cls(**{f: v / total for f, v in values.items()})

    @classmethod
    def defaults(cls, cfg: Mapping[str, Any] | None = None) -> "WeightVector":
        raw = dict(DEFAULT_RAW_WEIGHTS)
        if cfg is not None:
            raw = dict(cfg["rerank"]["default_weights"])
        return cls.from_raw(raw)


@dataclass(frozen=True)
class FactorScores:
    """The six factor values for one (candidate, job) pair plus evidence."""

    phi: Mapping[str, float]
    evidence: Mapping[str, Mapping[str, Any]]

    def __post_init__(self) -> None:
        for f in FACTOR_ORDER:
            v = self.phi[f]
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"factor {f} out of range: {v}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "phi": {f: self.phi[f] for f in FACTOR_ORDER},
            "evidence": {f: dict(self.evidence[f]) for f in FACTOR_ORDER},
        }


def utility(phi: Mapping[str, float], weights: WeightVector) -> float:
    """Weighted factor sum; stays in [0, 1] for normalized weights."""
    return sum(weights[f] * phi[f] for f in FACTOR_ORDER)


def top_factor(phi: Mapping[str, float], weights: WeightVector) -> str:
    """Highest-contribution factor, ties broken by the fixed factor order."""
    best = FACTOR_ORDER[0]
    best_value = weights[best] * phi[best]
    for f in FACTOR_ORDER[1:]:
        value = weights[f] * phi[f]
        if value > best_value:
            best, best_value = f, value
    return best


def factor_skill(
    candidate_skills: frozenset[str] | set[str],
    job_skills: frozenset[str] | set[str],
    graph: KnowledgeGraph,
) -> tuple[float, dict[str, Any]]:
    """Jaccard over skill sets plus a reachability bonus.

    Each unmatched job skill reachable from a held skill within two
    RELATED_TO hops contributes hop_weight(distance)/|S_j| on top of the
    Jaccard base. Two empty sets are a vacuous perfect match.
    """
    s_c = set(candidate_skills)
    s_j = set(job_skills)
    if not s_c and not s_j:
        return 1.0, {"matched": [], "paths": [], "jaccard": 1.0, "bonus": 0.0}
    matched = s_c & s_j
    union = s_c | s_j
    base = len(matched) / len(union)
    bonus = 0.0
    paths: list[dict[str, Any]] = []
    if s_c and s_j:
        for skill in sorted(s_j - matched):
            path = graph.best_path(s_c, skill, max_hops=2)
            if path is None or path.hop_count == 0:
                continue
            weight = graph.hop_weights.get(path.hop_count)
            if not weight:
                continue
            bonus += weight / len(s_j)
            paths.append(path.to_dict())
    phi = min(1.0, base + bonus)
    return phi, {
        "matched": sorted(matched),
        "paths": paths,
        "jaccard": base,
        "bonus": bonus,
    }


def factor_experience(
    candidate_level: Level, job_level: Level, max_distance: int = 2
) -> tuple[float, dict[str, Any]]:
    evidence = {
        "candidate_level": candidate_level.value,
        "job_level": job_level.value,
    }
    if candidate_level is Level.UNKNOWN or job_level is Level.UNKNOWN:
        return NEUTRAL, evidence
    distance = candidate_level.distance(job_level)
    return 1.0 - distance / max_distance, evidence


def factor_location(
    profile: CandidateProfile, posting: JobPosting, tiers: Mapping[str, float]
) -> tuple[float, dict[str, Any]]:
    """Tiered fit: exact city > remote > same state > mismatch.

    The highest applicable tier wins; missing location data on either side
    is neutral.
    """
    loc = posting.location
    evidence: dict[str, Any] = {
        "job_city": loc.city,
        "job_state": loc.state,
        "remote_allowed": loc.remote_allowed,
        "remote_preference": profile.remote_preference,
        "preferred": [f"{p.city}, {p.state}".strip(", ") for p in profile.preferred_locations],
    }
    candidate_missing = not profile.preferred_locations and not profile.remote_preference
    job_missing = loc.is_empty and not loc.remote_allowed
    if candidate_missing or job_missing:
        evidence["tier"] = "unknown"
        return NEUTRAL, evidence
    best = ("none", float(tiers["none"]))
    for pref in profile.preferred_locations:
        same_city = (
            pref.city
            and pref.city.lower() == loc.city.lower()
            and (not pref.state or not loc.state or pref.state.lower() == loc.state.lower())
        )
        if same_city and tiers["exact"] > best[1]:
            best = ("exact", float(tiers["exact"]))
        elif (
            pref.state
            and pref.state.lower() == loc.state.lower()
            and tiers["state"] > best[1]
        ):
            best = ("state", float(tiers["state"]))
    if loc.remote_allowed and profile.remote_preference and tiers["remote"] > best[1]:
        best = ("remote", float(tiers["remote"]))
    evidence["tier"] = best[0]
    return best[1], evidence


def factor_salary(
    expectation: float | None, posting: JobPosting
) -> tuple[float, dict[str, Any]]:
    midpoint = posting.salary_midpoint
    evidence: dict[str, Any] = {"expectation": expectation, "midpoint": midpoint}
    if expectation is None or midpoint is None or midpoint <= 0:
        return NEUTRAL, evidence
    phi = 1.0 if expectation <= midpoint else midpoint / expectation
    return phi, evidence


def factor_semantic(
    e_candidate: np.ndarray, e_job: np.ndarray
) -> tuple[float, dict[str, Any]]:
    cosine = float(np.dot(e_candidate, e_job))
    cosine = max(-1.0, min(1.0, cosine))
    return (cosine + 1.0) / 2.0, {"cosine": cosine}


def factor_company(
    profile: CandidateProfile, posting: JobPosting, weights: Mapping[str, float]
) -> tuple[float, dict[str, Any]]:
    industries = profile.preferred_industries
    sizes = profile.preferred_company_sizes
    evidence: dict[str, Any] = {
        "industry": posting.company.industry,
        "size": posting.company.size,
    }
    if not industries and not sizes:
        evidence.update({"industry_match": None, "size_match": None})
        return NEUTRAL, evidence
    industry_match = posting.company.industry in industries
    size_match = posting.company.size in sizes
    evidence.update({"industry_match": industry_match, "size_match": size_match})
    phi = float(weights["industry_weight"]) * industry_match + float(
        weights["size_weight"]
    ) * size_match
    return phi, evidence


@dataclass(frozen=True)
class RerankSubject:
    """What the reranker scores against: a profile, or the query alone.

    ``key`` is a stable cache identity; with no profile, the preference
    factors (experience, location, salary, company) degrade to neutral.
    """

    skills: frozenset[str]
    embedding: np.ndarray
    key: str
    profile: CandidateProfile | None = None

    @classmethod
    def for_profile(cls, profile: CandidateProfile, bundle) -> "RerankSubject":
        return cls(
            skills=profile.skills,
            embedding=profile_embedding(profile, bundle),
            key="p:" + profile.profile_id,
            profile=profile,
        )

    @classmethod
    def for_query(
        cls, skills: Iterable[str], embedding: np.ndarray
    ) -> "RerankSubject":
        skill_set = frozenset(skills)
        key = "q:" + ",".join(sorted(skill_set)) + ":" + _embedding_key(embedding)
        return cls(skills=skill_set, embedding=embedding, key=key)


def compute_factors(
    subject: RerankSubject,
    posting: JobPosting,
    job_embedding: np.ndarray,
    graph: KnowledgeGraph,
    cfg: Mapping[str, Any],
) -> FactorScores:
    """All six factors for one pair; query-only subjects get neutral values
    for the preference factors they cannot support."""
    rcfg = cfg["rerank"]
    phi: dict[str, float] = {}
    evidence: dict[str, dict[str, Any]] = {}

    phi["skill"], evidence["skill"] = factor_skill(subject.skills, posting.skills, graph)
    phi["semantic"], evidence["semantic"] = factor_semantic(
        subject.embedding, job_embedding
    )
    profile = subject.profile
    if profile is None:
        for f in ("experience", "location", "salary", "company"):
            phi[f] = NEUTRAL
            evidence[f] = {"reason": "no profile"}
        return FactorScores(phi=phi, evidence=evidence)

    phi["experience"], evidence["experience"] = factor_experience(
        profile.experience_level,
        posting.seniority,
        int(rcfg["experience_max_distance"]),
    )
    phi["location"], evidence["location"] = factor_location(
        profile, posting, rcfg["location_tiers"]
    )
    phi["salary"], evidence["salary"] = factor_salary(
        profile.salary_expectation, posting
    )
    phi["company"], evidence["company"] = factor_company(
        profile, posting, rcfg["company"]
    )
    return FactorScores(phi=phi, evidence=evidence)


class Reranker:
    """Scores filtered candidates and re-sorts them by utility.

    Factor scores are cached per job id, so adjusting weights re-runs only
    the weighted sum, never the factor functions.
    """

    def __init__(self, bundle, cfg: Mapping[str, Any] | None = None):
        self.bundle = bundle
        self.cfg = dict(cfg) if cfg is not None else bundle.config
        self._cache: dict[tuple[str, str], FactorScores] = {}

    def factors_for(self, subject: RerankSubject, job_id: str) -> FactorScores | None:
        posting = self.bundle.job(job_id)
        if posting is None:
            return None
        key = (subject.key, job_id)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        job_embedding = self.bundle.vectors.vector_for(job_id)
        if job_embedding is None:
            job_embedding = self.bundle.embed_query("")
        factors = compute_factors(
            subject, posting, job_embedding, self.bundle.graph, self.cfg
        )
        self._cache[key] = factors
        return factors

    def rerank(
        self,
        candidates: RankedList,
        subject: RerankSubject,
        weights: WeightVector,
    ) -> tuple[RankedList, dict[str, FactorScores]]:
        scored: dict[str, float] = {}
        factor_map: dict[str, FactorScores] = {}
        for job_id in candidates.job_ids():
            factors = self.factors_for(subject, job_id)
            if factors is None:
                continue
            factor_map[job_id] = factors
            scored[job_id] = utility(factors.phi, weights)
        k = max(candidates.k_requested, 1)
        ranked = RankedList.from_scores(Channel.RERANKED, scored, k)
        return ranked, factor_map


def profile_embedding(profile: CandidateProfile, bundle) -> np.ndarray:
    """Deterministic profile text embedding: sorted skills plus level."""
    parts = [s.replace("-", " ") for s in sorted(profile.skills)]
    if profile.experience_level is not Level.UNKNOWN:
        parts.append(profile.experience_level.value)
    return bundle.embed_query(" ".join(parts))


def _embedding_key(vec: np.ndarray) -> str:
    digest = hash(vec.tobytes()) & 0xFFFFFFFF
    return format(digest, "08x")
