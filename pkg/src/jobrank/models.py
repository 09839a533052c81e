"""Core domain types: postings, profiles, constraints, and ranked lists.

Everything here is an immutable value object, safe to share across
concurrent readers. Each type has a canonical JSON form (snake_case field
names, sets serialized as sorted lists) used by the ingest format, the HTTP
API, and benchmark manifests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .errors import MissingJobId, SalaryBandInverted, UnknownSkillId, ValidationError

SkillId = str


class Level(enum.Enum):
    """Seniority level with a fixed ordinal ladder (junior=0, mid=1, senior=2).

    ``unknown`` has no ordinal; distances involving it are undefined.
    """

    JUNIOR = "junior"
    MID = "mid"
    SENIOR = "senior"
    UNKNOWN = "unknown"

    @property
    def ordinal(self) -> int | None:
        return _LEVEL_ORDINALS[self]

    def distance(self, other: "Level") -> int:
        if self is Level.UNKNOWN or other is Level.UNKNOWN:
            raise ValueError("ordinal distance is undefined for unknown levels")
        return abs(self.ordinal - other.ordinal)


_LEVEL_ORDINALS: dict[Level, int | None] = {
    Level.JUNIOR: 0,
    Level.MID: 1,
    Level.SENIOR: 2,
    Level.UNKNOWN: None,
}


class Degree(enum.Enum):
    """Degree requirement ladder: none < bachelor < master < doctorate."""

    NONE = "none"
    BACHELOR = "bachelor"
    MASTER = "master"
    DOCTORATE = "doctorate"

    @property
    def ordinal(self) -> int:
        return _DEGREE_ORDINALS[self]


_DEGREE_ORDINALS = {
    Degree.NONE: 0,
    Degree.BACHELOR: 1,
    Degree.MASTER: 2,
    Degree.DOCTORATE: 3,
}


class Channel(enum.Enum):
    LEXICAL = "lexical"
    SEMANTIC = "semantic"
    GRAPH = "graph"
    FUSED = "fused"
    RERANKED = "reranked"


@dataclass(frozen=True)
class Location:
    city: str = ""
    state: str = ""
    remote_allowed: bool = False

    @property
    def is_empty(self) -> bool:
        return not self.city and not self.state

    def to_dict(self) -> dict[str, Any]:
        return {
            "city": self.city,
            "state": self.state,
            "remote_allowed": self.remote_allowed,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Location":
        return cls(
            city=str(d.get("city", "") or ""),
            state=str(d.get("state", "") or ""),
            remote_allowed=bool(d.get("remote_allowed", False)),
        )


@dataclass(frozen=True)
class CompanyRef:
    name: str = ""
    industry: str = ""
    size: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "industry": self.industry, "size": self.size}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "CompanyRef":
        return cls(
            name=str(d.get("name", "") or ""),
            industry=str(d.get("industry", "") or ""),
            size=str(d.get("size", "") or ""),
        )


@dataclass(frozen=True)
class JobPosting:
    """One indexed job document with structured metadata."""

    job_id: str
    title: str = ""
    description: str = ""
    required_skills: frozenset[SkillId] = frozenset()
    preferred_skills: frozenset[SkillId] = frozenset()
    location: Location = Location()
    salary_min: float | None = None
    salary_max: float | None = None
    seniority: Level = Level.UNKNOWN
    company: CompanyRef = CompanyRef()
    degree_required: Degree = Degree.NONE
    visa_sponsorship: bool = False
    certifications_required: frozenset[str] = frozenset()

    @property
    def skills(self) -> frozenset[SkillId]:
        """Required and preferred skills together; the job's skill set."""
        return self.required_skills | self.preferred_skills

    @property
    def salary_midpoint(self) -> float | None:
        if self.salary_min is None or self.salary_max is None:
            return None
        return (self.salary_min + self.salary_max) / 2.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "job_id": self.job_id,
            "title": self.title,
            "description": self.description,
            "required_skills": sorted(self.required_skills),
            "preferred_skills": sorted(self.preferred_skills),
            "location": self.location.to_dict(),
            "salary_min": self.salary_min,
            "salary_max": self.salary_max,
            "seniority": self.seniority.value,
            "company": self.company.to_dict(),
            "degree_required": self.degree_required.value,
            "visa_sponsorship": self.visa_sponsorship,
            "certifications_required": sorted(self.certifications_required),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "JobPosting":
        return cls(
            job_id=str(d.get("job_id", "") or ""),
            title=str(d.get("title", "") or ""),
            description=str(d.get("description", "") or ""),
            required_skills=frozenset(d.get("required_skills") or ()),
            preferred_skills=frozenset(d.get("preferred_skills") or ()),
            location=Location.from_dict(d.get("location") or {}),
            salary_min=_opt_number(d.get("salary_min")),
            salary_max=_opt_number(d.get("salary_max")),
            seniority=Level(d.get("seniority", "unknown") or "unknown"),
            company=CompanyRef.from_dict(d.get("company") or {}),
            degree_required=Degree(d.get("degree_required", "none") or "none"),
            visa_sponsorship=bool(d.get("visa_sponsorship", False)),
            certifications_required=frozenset(d.get("certifications_required") or ()),
        )


@dataclass(frozen=True)
class ConstraintSet:
    """Non-negotiable eligibility requirements applied as post-retrieval filters.

    Every field is independently optional. ``min_degree`` is the highest
    degree the candidate holds (jobs requiring more are filtered out);
    ``required_certifications`` is the set of certifications the candidate
    holds, with ``None`` meaning "no certification constraint declared".
    """

    needs_visa_sponsorship: bool = False
    min_degree: Degree | None = None
    required_certifications: frozenset[str] | None = None

    @property
    def is_empty(self) -> bool:
        return (
            not self.needs_visa_sponsorship
            and self.min_degree is None
            and self.required_certifications is None
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "needs_visa_sponsorship": self.needs_visa_sponsorship,
            "min_degree": self.min_degree.value if self.min_degree else None,
            "required_certifications": (
                sorted(self.required_certifications)
                if self.required_certifications is not None
                else None
            ),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ConstraintSet":
        certs = d.get("required_certifications")
        return cls(
            needs_visa_sponsorship=bool(d.get("needs_visa_sponsorship", False)),
            min_degree=Degree(d["min_degree"]) if d.get("min_degree") else None,
            required_certifications=frozenset(certs) if certs is not None else None,
        )


@dataclass(frozen=True)
class CandidateProfile:
    """Extracted resume profile: skills, preferences, and hard constraints."""

    profile_id: str
    skills: frozenset[SkillId] = frozenset()
    experience_level: Level = Level.UNKNOWN
    years_experience: float | None = None
    preferred_locations: tuple[Location, ...] = ()
    remote_preference: bool = False
    salary_expectation: float | None = None
    education: Degree = Degree.NONE
    preferred_industries: frozenset[str] = frozenset()
    preferred_company_sizes: frozenset[str] = frozenset()
    hard_constraints: ConstraintSet = ConstraintSet()

    def to_dict(self) -> dict[str, Any]:
        return {
            "profile_id": self.profile_id,
            "skills": sorted(self.skills),
            "experience_level": self.experience_level.value,
            "years_experience": self.years_experience,
            "preferred_locations": [l.to_dict() for l in self.preferred_locations],
            "remote_preference": self.remote_preference,
            "salary_expectation": self.salary_expectation,
            "education": self.education.value,
            "preferred_industries": sorted(self.preferred_industries),
            "preferred_company_sizes": sorted(self.preferred_company_sizes),
            "hard_constraints": self.hard_constraints.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "CandidateProfile":
        return cls(
            profile_id=str(d.get("profile_id", "") or ""),
            skills=frozenset(d.get("skills") or ()),
            experience_level=Level(d.get("experience_level", "unknown") or "unknown"),
            years_experience=_opt_number(d.get("years_experience")),
            preferred_locations=tuple(
                Location.from_dict(x) for x in d.get("preferred_locations") or ()
            ),
            remote_preference=bool(d.get("remote_preference", False)),
            salary_expectation=_opt_number(d.get("salary_expectation")),
            education=Degree(d.get("education", "none") or "none"),
            preferred_industries=frozenset(d.get("preferred_industries") or ()),
            preferred_company_sizes=frozenset(d.get("preferred_company_sizes") or ()),
            hard_constraints=ConstraintSet.from_dict(d.get("hard_constraints") or {}),
        )


@dataclass(frozen=True)
class RankedList:
    """An ordered retrieval result: (job_id, score) pairs, best first.

    Invariants: sorted by score descending with ties broken by job_id
    ascending, no duplicate job_ids, and at most ``k_requested`` entries.
    Use :meth:`from_scores` to build one from an unordered score map.
    """

    channel: Channel
    entries: tuple[tuple[str, float], ...]
    k_requested: int

    def __post_init__(self) -> None:
        if self.k_requested <= 0:
            raise ValidationError("k_requested", "must be positive")
        if len(self.entries) > self.k_requested:
            raise ValidationError("entries", "more entries than k_requested")
        seen: set[str] = set()
        prev: tuple[float, str] | None = None
        for job_id, score in self.entries:
            if job_id in seen:
                raise ValidationError("entries", f"duplicate job_id {job_id!r}")
            seen.add(job_id)
            key = (-score, job_id)
            if prev is not None and key < prev:
                raise ValidationError("entries", "not sorted by (score desc, job_id asc)")
            prev = key

    @classmethod
    def from_scores(
        cls, channel: Channel, scores: Mapping[str, float], k: int
    ) -> "RankedList":
        ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
        return cls(channel=channel, entries=tuple(ordered), k_requested=k)

    def __len__(self) -> int:
        return len(self.entries)

    def job_ids(self) -> list[str]:
        return [job_id for job_id, _ in self.entries]

    def rank_of(self, job_id: str) -> int | None:
        """1-based rank of ``job_id``, or None if absent."""
        for i, (jid, _) in enumerate(self.entries, start=1):
            if jid == job_id:
                return i
        return None

    def truncated(self, k: int) -> "RankedList":
        return RankedList(self.channel, self.entries[:k], k)

    def to_dict(self) -> dict[str, Any]:
        return {
            "channel": self.channel.value,
            "entries": [[jid, score] for jid, score in self.entries],
            "k_requested": self.k_requested,
        }


def validate_posting(
    posting: JobPosting,
    strict: bool = False,
    known_skills: Iterable[SkillId] | None = None,
) -> JobPosting:
    """Check a posting against its invariants and return it unchanged.

    Raises a :class:`ValidationError` subclass naming the violated field.
    In strict mode, skills outside ``known_skills`` are rejected.
    Idempotent: validating a valid posting is the identity.
    """
    if not posting.job_id or not posting.job_id.strip():
        raise MissingJobId()
    if (
        posting.salary_min is not None
        and posting.salary_max is not None
        and posting.salary_min > posting.salary_max
    ):
        raise SalaryBandInverted(posting.salary_min, posting.salary_max)
    if posting.salary_min is not None and posting.salary_min < 0:
        raise ValidationError("salary_min", "must be non-negative")
    if posting.salary_max is not None and posting.salary_max < 0:
        raise ValidationError("salary_max", "must be non-negative")
    if strict and known_skills is not None:
        known = set(known_skills)
        unknown = (posting.required_skills | posting.preferred_skills) - known
        if unknown:
            raise UnknownSkillId("required_skills", sorted(unknown))
    return posting


def _opt_number(value: Any) -> float | None:
    if value is None or value == "":
        return None
    return float(value)
