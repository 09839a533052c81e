"""Typed in-memory knowledge graph over candidates, jobs, skills, locations,
and companies.

Powers skill expansion, the graph retrieval channel, relatedness lookups for
the skill factor, and neighborhood subgraphs for visualization. Built once
during ingestion and read-only afterwards; traversals are deterministic
regardless of insertion order.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import UnknownSkill
from .models import CandidateProfile, Channel, JobPosting, Location, RankedList

DEFAULT_HOP_WEIGHTS = {0: 1.0, 1: 0.5, 2: 0.25}
DEFAULT_NEIGHBORHOOD_BUDGET = 100


@dataclass(frozen=True)
class DanglingEdge:
    """A curated relation that was skipped because an endpoint is unknown."""

    skill_a: str
    skill_b: str
    missing: tuple[str, ...]


@dataclass(frozen=True)
class SkillPath:
    """Path from a held skill to a required skill through RELATED_TO edges."""

    nodes: tuple[str, ...]

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("SkillPath needs at least one node")

    @property
    def source(self) -> str:
        return self.nodes[0]

    @property
    def target(self) -> str:
        return self.nodes[-1]

    @property
    def hop_count(self) -> int:
        return len(self.nodes) - 1

    def to_dict(self) -> dict[str, Any]:
        return {"nodes": list(self.nodes), "hop_count": self.hop_count}


def location_key(loc: Location) -> str:
    """Canonical node id for a structured location; empty when unusable."""
    city = loc.city.strip().lower()
    state = loc.state.strip().lower()
    if city and state:
        return f"{city}, {state}"
    return city or state


@dataclass
class GraphStats:
    nodes_by_type: dict[str, int] = field(default_factory=dict)
    edges_by_relation: dict[str, int] = field(default_factory=dict)
    dangling_edges: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes_by_type": dict(sorted(self.nodes_by_type.items())),
            "edges_by_relation": dict(sorted(self.edges_by_relation.items())),
            "dangling_edges": self.dangling_edges,
        }


class KnowledgeGraph:
    def __init__(self, hop_weights: Mapping[int, float] | None = None):
        self.hop_weights = dict(hop_weights or DEFAULT_HOP_WEIGHTS)
        self.skills: set[str] = set()
        self.jobs: set[str] = set()
        self.candidates: set[str] = set()
        self.locations: set[str] = set()
        self.companies: set[str] = set()
        # job -> {skill: preferred_only flag}
        self.requires: dict[str, dict[str, bool]] = {}
        # reverse index skill -> job ids
        self.required_by: dict[str, set[str]] = {}
        self.has_skill: dict[str, set[str]] = {}
        self.related: dict[str, set[str]] = {}
        self.located_in: dict[str, set[str]] = {}
        self.dangling: list[DanglingEdge] = []

    # -- construction ------------------------------------------------------

    def add_posting(self, posting: JobPosting) -> None:
        self.jobs.add(posting.job_id)
        edges = self.requires.setdefault(posting.job_id, {})
        for skill in posting.required_skills:
            self.skills.add(skill)
            edges[skill] = False
            self.required_by.setdefault(skill, set()).add(posting.job_id)
        for skill in posting.preferred_skills:
            self.skills.add(skill)
            if skill not in edges:
                edges[skill] = True
                self.required_by.setdefault(skill, set()).add(posting.job_id)
        key = location_key(posting.location)
        if key:
            self.locations.add(key)
            self.located_in.setdefault(posting.job_id, set()).add(key)
        if posting.company.name:
            self.companies.add(posting.company.name)

    def add_profile(self, profile: CandidateProfile) -> None:
        self.candidates.add(profile.profile_id)
        held = self.has_skill.setdefault(profile.profile_id, set())
        for skill in profile.skills:
            self.skills.add(skill)
            held.add(skill)
        for loc in profile.preferred_locations:
            key = location_key(loc)
            if key:
                self.locations.add(key)
                self.located_in.setdefault(profile.profile_id, set()).add(key)

    def add_relation(self, skill_a: str, skill_b: str) -> bool:
        """Add a symmetric RELATED_TO edge; reject self-loops and unknowns."""
        if skill_a == skill_b:
            return False
        missing = tuple(s for s in (skill_a, skill_b) if s not in self.skills)
        if missing:
            self.dangling.append(DanglingEdge(skill_a, skill_b, missing))
            return False
        self.related.setdefault(skill_a, set()).add(skill_b)
        self.related.setdefault(skill_b, set()).add(skill_a)
        return True

    # -- traversal ---------------------------------------------------------

    def expand_skills(self, seeds: Iterable[str], depth: int = 2) -> dict[str, int]:
        """BFS over RELATED_TO; returns skill -> minimal hop distance."""
        if depth < 0:
            raise ValueError("depth must be non-negative")
        distances = {s: 0 for s in sorted(set(seeds))}
        frontier = deque(distances)
        while frontier:
            current = frontier.popleft()
            d = distances[current]
            if d >= depth:
                continue
            for nb in sorted(self.related.get(current, ())):
                if nb not in distances:
                    distances[nb] = d + 1
                    frontier.append(nb)
        return distances

    def search(self, expanded: Mapping[str, int], k: int) -> RankedList:
        """Score jobs by summed hop weights of the expanded skills they require."""
        if k <= 0:
            raise ValueError("k must be positive")
        scores: dict[str, float] = {}
        for skill in sorted(expanded):
            weight = self.hop_weights.get(expanded[skill])
            if not weight:
                continue
            for job_id in self.required_by.get(skill, ()):
                scores[job_id] = scores.get(job_id, 0.0) + weight
        return RankedList.from_scores(Channel.GRAPH, scores, k)

    def relatedness(self, a: str, b: str, max_hops: int = 2) -> float:
        """Minimal RELATED_TO hop count between two skills, capped; inf beyond."""
        if a == b:
            return 0
        if a not in self.skills or b not in self.skills:
            return math.inf
        distances = self.expand_skills({a}, max_hops)
        return distances.get(b, math.inf)

    def best_path(
        self, sources: Iterable[str], target: str, max_hops: int = 2
    ) -> SkillPath | None:
        """Shortest RELATED_TO path from any source skill to the target.

        Ties broken by lexicographic node order so evidence is reproducible.
        """
        source_set = set(sources)
        if target in source_set:
            return SkillPath((target,))
        if target not in self.skills:
            return None
        parents: dict[str, str | None] = {target: None}
        frontier = deque([(target, 0)])
        while frontier:
            current, d = frontier.popleft()
            if d >= max_hops:
                continue
            for nb in sorted(self.related.get(current, ())):
                if nb in parents:
                    continue
                parents[nb] = current
                if nb in source_set:
                    nodes = [nb]
                    step = current
                    while step is not None:
                        nodes.append(step)
                        step = parents[step]
                    return SkillPath(tuple(nodes))
                frontier.append((nb, d + 1))
        return None

    def neighborhood(
        self, skill: str, radius: int, budget: int = DEFAULT_NEIGHBORHOOD_BUDGET
    ) -> dict[str, Any]:
        """Induced subgraph around a skill as node-link JSON, nearest-first."""
        if skill not in self.skills:
            raise UnknownSkill(f"unknown skill: {skill}")
        if radius not in (1, 2):
            raise ValueError("radius must be 1 or 2")
        skill_dist = self.expand_skills({skill}, radius)
        candidates: list[tuple[int, int, str]] = [
            (d, 0, s) for s, d in skill_dist.items()
        ]
        for s in skill_dist:
            for job_id in self.required_by.get(s, ()):
                candidates.append((skill_dist[s] + 1, 1, job_id))
        candidates.sort()
        nodes: list[dict[str, Any]] = []
        included_skills: set[str] = set()
        included_jobs: set[str] = set()
        seen: set[tuple[int, str]] = set()
        for dist, kind, node_id in candidates:
            if len(nodes) >= budget:
                break
            if (kind, node_id) in seen:
                continue
            seen.add((kind, node_id))
            if kind == 0:
                included_skills.add(node_id)
                nodes.append({"id": node_id, "type": "skill", "distance": dist})
            else:
                included_jobs.add(node_id)
                nodes.append({"id": node_id, "type": "job", "distance": dist})
        edges: list[dict[str, Any]] = []
        for a in sorted(included_skills):
            for b in sorted(self.related.get(a, ())):
                if b in included_skills and a < b:
                    edges.append({"source": a, "target": b, "relation": "RELATED_TO"})
        for job_id in sorted(included_jobs):
            for s, preferred in sorted(self.requires.get(job_id, {}).items()):
                if s in included_skills:
                    edges.append(
                        {
                            "source": job_id,
                            "target": s,
                            "relation": "REQUIRES_SKILL",
                            "preferred": preferred,
                        }
                    )
        return {"focus": skill, "radius": radius, "nodes": nodes, "edges": edges}

    # -- introspection and persistence --------------------------------------

    def job_skills(self, job_id: str) -> frozenset[str]:
        return frozenset(self.requires.get(job_id, ()))

    def stats(self) -> GraphStats:
        return GraphStats(
            nodes_by_type={
                "skill": len(self.skills),
                "job": len(self.jobs),
                "candidate": len(self.candidates),
                "location": len(self.locations),
                "company": len(self.companies),
            },
            edges_by_relation={
                "REQUIRES_SKILL": sum(len(v) for v in self.requires.values()),
                "HAS_SKILL": sum(len(v) for v in self.has_skill.values()),
                "RELATED_TO": sum(len(v) for v in self.related.values()) // 2,
                "LOCATED_IN": sum(len(v) for v in self.located_in.values()),
            },
            dangling_edges=len(self.dangling),
        )

    def to_dict(self) -> dict[str, Any]:
        related_pairs = sorted(
            (a, b) for a, nbs in self.related.items() for b in nbs if a < b
        )
        return {
            "hop_weights": {str(k): v for k, v in sorted(self.hop_weights.items())},
            "skills": sorted(self.skills),
            "jobs": sorted(self.jobs),
            "candidates": sorted(self.candidates),
            "locations": sorted(self.locations),
            "companies": sorted(self.companies),
            "requires": {
                job: {s: pref for s, pref in sorted(edges.items())}
                for job, edges in sorted(self.requires.items())
            },
            "has_skill": {c: sorted(v) for c, v in sorted(self.has_skill.items())},
            "related": [[a, b] for a, b in related_pairs],
            "located_in": {n: sorted(v) for n, v in sorted(self.located_in.items())},
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "KnowledgeGraph":
        g = cls(hop_weights={int(k): v for k, v in d["hop_weights"].items()})
        g.skills = set(d["skills"])
        g.jobs = set(d["jobs"])
        g.candidates = set(d["candidates"])
        g.locations = set(d["locations"])
        g.companies = set(d["companies"])
        for job, edges in d["requires"].items():
            g.requires[job] = dict(edges)
            for s in edges:
                g.required_by.setdefault(s, set()).add(job)
        g.has_skill = {c: set(v) for c, v in d["has_skill"].items()}
        for a, b in d["related"]:
            g.related.setdefault(a, set()).add(b)
            g.related.setdefault(b, set()).add(a)
        g.located_in = {n: set(v) for n, v in d["located_in"].items()}
        return g


def build_graph(
    postings: Sequence[JobPosting],
    profiles: Sequence[CandidateProfile] = (),
    relations: Iterable[tuple[str, str]] = (),
    hop_weights: Mapping[int, float] | None = None,
) -> KnowledgeGraph:
    """Assemble the graph from postings, profiles, and curated relations."""
    g = KnowledgeGraph(hop_weights=hop_weights)
    for posting in postings:
        g.add_posting(posting)
    for profile in profiles:
        g.add_profile(profile)
    for a, b in relations:
        g.add_relation(a, b)
    return g
