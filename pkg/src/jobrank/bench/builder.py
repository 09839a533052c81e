"""Benchmark construction: queries, silver labels, and skill-disjoint splits.

Builds are deterministic for a fixed corpus, config, and seed; serializing
the same build twice yields byte-identical JSON. Labels are "silver": they
come from skill-set overlap rather than human judgment, and the manifest
records the resulting caveat explicitly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import yaml

from ..bundle import IndexBundle
from ..config import data_text
from ..errors import InsufficientCorpus
from ..lexical import tokenize
from ..pipeline import enrich
from .synthetic import corpus_token_set

SPLIT_NAMES = ("train", "dev", "test")
BENCHMARK_FORMAT_VERSION = 1


@dataclass(frozen=True)
class BenchmarkConfig:
    queries_per_template: int = 10
    silver_threshold: float = 0.3
    expansion_depth: int = 2
    split_sizes: tuple[int, int, int] = (10, 10, 10)
    random_seed: int = 13

    @classmethod
    def from_config(cls, cfg: Mapping[str, Any]) -> "BenchmarkConfig":
        b = cfg["benchmark"]
        sizes = tuple(int(x) for x in b["split_sizes"])
        if len(sizes) != 3:
            raise ValueError("split_sizes must have three entries")
        return cls(
            queries_per_template=int(b["queries_per_template"]),
            silver_threshold=float(b["silver_threshold"]),
            expansion_depth=int(b["expansion_depth"]),
            split_sizes=sizes,  # type: ignore[arg-type]
            random_seed=int(b["random_seed"]),
        )


@dataclass(frozen=True)
class BenchQuery:
    query_id: str
    template: str  # title | natural | synonym
    text: str
    skills: tuple[str, ...]
    expanded: tuple[str, ...]
    split: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "query_id": self.query_id,
            "template": self.template,
            "text": self.text,
            "skills": list(self.skills),
            "expanded": list(self.expanded),
            "split": self.split,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "BenchQuery":
        return cls(
            query_id=str(d["query_id"]),
            template=str(d["template"]),
            text=str(d["text"]),
            skills=tuple(d.get("skills") or ()),
            expanded=tuple(d.get("expanded") or ()),
            split=str(d.get("split", "")),
        )


def jaccard(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    if not a and not b:
        return 0.0
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


def silver_label(
    expanded_skills: frozenset[str] | set[str],
    job_skills: frozenset[str] | set[str],
    threshold: float,
) -> bool:
    """Positive iff skill-set overlap strictly exceeds the threshold.

    Pairs sitting exactly on the threshold are excluded from the positives,
    so the boundary never depends on float formatting of the threshold.
    """
    return jaccard(expanded_skills, job_skills) > threshold


def _query_templates() -> dict[str, list[str]]:
    return yaml.safe_load(data_text("query_templates.yaml"))


def _holdout_candidates(bundle: IndexBundle) -> list[str]:
    """Synonym surfaces whose canonical skill is indexed but whose own
    tokens never occur in any posting's text."""
    seen = corpus_token_set(list(bundle.postings.values()))
    corpus_skills: set[str] = set()
    for p in bundle.postings.values():
        corpus_skills.update(p.skills)
    out: list[str] = []
    for surface, canonical in bundle.table.to_dict().items():
        if canonical not in corpus_skills:
            continue
        toks = tokenize(surface)
        if not toks or any(t in seen for t in toks):
            continue
        out.append(surface)
    return sorted(set(out))


def generate_queries(bundle: IndexBundle, bcfg: BenchmarkConfig) -> list[BenchQuery]:
    """Three templates, ``queries_per_template`` queries each.

    * title: posting titles verbatim.
    * natural: paraphrase skeletons filled with a skill, role, city, level.
    * synonym: surface forms absent from the corpus vocabulary whose
      canonical skill is present, so keyword search alone cannot match.

    To leave the skill-disjoint split room to generalize, title queries are
    drawn from postings overlapping the synonym targets while natural
    queries prefer skills outside that pool.
    """
    rng = random.Random(bcfg.random_seed)
    qpt = bcfg.queries_per_template
    if qpt <= 0:
        raise ValueError("queries_per_template must be positive")

    holdouts = _holdout_candidates(bundle)
    if len(holdouts) < qpt:
        raise InsufficientCorpus(
            f"need {qpt} out-of-vocabulary synonym surfaces, found {len(holdouts)}"
        )
    surfaces = sorted(rng.sample(holdouts, qpt))
    synonym_targets = {bundle.table.canonicalize(s) for s in surfaces}

    queries: list[BenchQuery] = []
    for i, surface in enumerate(surfaces):
        queries.append(_make_query(f"s{i:02d}", "synonym", surface, bundle, bcfg))

    target_pool = frozenset(synonym_targets)
    in_pool: list[str] = []
    out_pool: list[str] = []
    for job_id in sorted(bundle.postings):
        p = bundle.postings[job_id]
        if not tokenize(p.title):
            continue
        skills, _ = bundle.table.extract(tokenize(p.title))
        if not skills:
            continue
        (in_pool if skills & target_pool else out_pool).append(job_id)
    rng.shuffle(in_pool)
    rng.shuffle(out_pool)
    titles: list[BenchQuery] = []
    seen_titles: set[str] = set()
    covered: set[frozenset[str]] = set()
    for job_id in in_pool + out_pool:
        if len(titles) == qpt:
            break
        title = bundle.postings[job_id].title
        skills, _ = bundle.table.extract(tokenize(title))
        key = frozenset(skills)
        if title in seen_titles or key in covered:
            continue
        seen_titles.add(title)
        covered.add(key)
        titles.append(_make_query(f"t{len(titles):02d}", "title", title, bundle, bcfg))
    if len(titles) < qpt:
        raise InsufficientCorpus(
            f"need {qpt} distinct titles with extractable skills, found {len(titles)}"
        )
    queries.extend(titles)

    templates = _query_templates()
    skeletons = templates["natural"]
    roles = templates["roles"]
    levels = templates["levels"]
    cities = sorted(
        {p.location.city.lower() for p in bundle.postings.values() if p.location.city}
    )
    if not cities:
        cities = ["anywhere"]
    corpus_skills: set[str] = set()
    for p in bundle.postings.values():
        corpus_skills.update(p.skills)
    title_skills = {s for q in titles for s in q.skills}
    preferred = sorted(corpus_skills - target_pool - title_skills)
    fallback = sorted(corpus_skills - set(preferred))
    rng.shuffle(preferred)
    rng.shuffle(fallback)
    naturals: list[BenchQuery] = []
    for skill in preferred + fallback:
        if len(naturals) == qpt:
            break
        skeleton = rng.choice(skeletons)
        text = skeleton.format(
            skill=skill.replace("-", " "),
            role=rng.choice(roles),
            city=rng.choice(cities),
            level=rng.choice(levels),
        )
        q = _make_query(f"n{len(naturals):02d}", "natural", text, bundle, bcfg)
        if skill not in q.skills:
            continue
        naturals.append(q)
    if len(naturals) < qpt:
        raise InsufficientCorpus(
            f"need {qpt} natural queries with extractable skills, built {len(naturals)}"
        )
    queries.extend(naturals)
    return sorted(queries, key=lambda q: q.query_id)


def _make_query(
    query_id: str, template: str, text: str, bundle: IndexBundle, bcfg: BenchmarkConfig
) -> BenchQuery:
    cfg = dict(bundle.config)
    cfg["graph"] = dict(cfg["graph"])
    cfg["graph"]["expansion_depth"] = bcfg.expansion_depth
    sq = enrich(text, bundle, cfg)
    return BenchQuery(
        query_id=query_id,
        template=template,
        text=text,
        skills=tuple(sorted(sq.skills)),
        expanded=tuple(sorted(sq.expanded)),
    )


def label_queries(
    queries: Sequence[BenchQuery], bundle: IndexBundle, threshold: float
) -> dict[str, list[str]]:
    """Silver positives per query over every posting in the corpus."""
    labels: dict[str, list[str]] = {}
    for q in queries:
        expanded = frozenset(q.expanded)
        positives = [
            job_id
            for job_id in sorted(bundle.postings)
            if silver_label(expanded, bundle.postings[job_id].skills, threshold)
        ]
        labels[q.query_id] = positives
    return labels


def split_skill_disjoint(
    queries: Sequence[BenchQuery], split_sizes: tuple[int, int, int]
) -> dict[str, str]:
    """Greedy skill-disjoint assignment of queries to train/dev/test.

    Queries are processed by descending skill-set size (ties by query id)
    and each goes to the unfilled split whose accumulated skill set has the
    lowest Jaccard overlap with the query's skills; ties prefer train, then
    dev, then test.
    """
    if sum(split_sizes) != len(queries):
        raise ValueError(
            f"split sizes {split_sizes} do not cover {len(queries)} queries"
        )
    order = sorted(queries, key=lambda q: (-len(q.skills), q.query_id))
    acc: dict[str, set[str]] = {name: set() for name in SPLIT_NAMES}
    counts = {name: 0 for name in SPLIT_NAMES}
    limits = dict(zip(SPLIT_NAMES, split_sizes))
    assignment: dict[str, str] = {}
    for q in order:
        open_splits = [s for s in SPLIT_NAMES if counts[s] < limits[s]]
        best = min(open_splits, key=lambda s: (jaccard(acc[s], set(q.skills)), SPLIT_NAMES.index(s)))
        assignment[q.query_id] = best
        acc[best].update(q.skills)
        counts[best] += 1
    return assignment


def unseen_skill_fraction(queries: Sequence[BenchQuery]) -> float:
    """Fraction of test-split query skills that never occur in train."""
    train: set[str] = set()
    test: set[str] = set()
    for q in queries:
        if q.split == "train":
            train.update(q.skills)
        elif q.split == "test":
            test.update(q.skills)
    if not test:
        return 0.0
    return len(test - train) / len(test)


def build_benchmark(
    bundle: IndexBundle, bcfg: BenchmarkConfig | None = None
) -> dict[str, Any]:
    """Assemble the full benchmark: queries, splits, labels, manifest."""
    bcfg = bcfg if bcfg is not None else BenchmarkConfig.from_config(bundle.config)
    queries = generate_queries(bundle, bcfg)
    assignment = split_skill_disjoint(queries, bcfg.split_sizes)
    queries = [
        BenchQuery(
            query_id=q.query_id,
            template=q.template,
            text=q.text,
            skills=q.skills,
            expanded=q.expanded,
            split=assignment[q.query_id],
        )
        for q in queries
    ]
    labels = label_queries(queries, bundle, bcfg.silver_threshold)
    positives = sum(len(v) for v in labels.values())
    judged = len(queries) * len(bundle.postings)
    manifest = {
        "corpus_fingerprint": bundle.fingerprint,
        "label_source": "silver",
        "parameters": {
            "queries_per_template": bcfg.queries_per_template,
            "silver_threshold": bcfg.silver_threshold,
            "expansion_depth": bcfg.expansion_depth,
            "split_sizes": list(bcfg.split_sizes),
            "random_seed": bcfg.random_seed,
        },
        "engine": {
            "lexical": {
                "k1": bundle.config["lexical"]["k1"],
                "b": bundle.config["lexical"]["b"],
                "field_boosts": dict(bundle.config["lexical"]["field_boosts"]),
            },
            "embedding": {
                "kind": bundle.config["embedding"]["kind"],
                "dim": bundle.config["embedding"]["dim"],
                "seed": bundle.config["embedding"]["seed"],
            },
            "fusion": {
                "rrf_k": bundle.config["fusion"]["rrf_k"],
                "union_cap": bundle.config["fusion"]["union_cap"],
                "depths": dict(bundle.config["fusion"]["depths"]),
            },
            "graph": {
                "expansion_depth": bundle.config["graph"]["expansion_depth"],
                "hop_weights": {
                    str(k): v for k, v in bundle.config["graph"]["hop_weights"].items()
                },
            },
        },
        "counts": {
            "postings": len(bundle.postings),
            "queries": len(queries),
            "positive_pairs": positives,
            "judged_pairs": judged,
        },
        "split_sizes": {
            name: sum(1 for q in queries if q.split == name) for name in SPLIT_NAMES
        },
        "unseen_skill_fraction": unseen_skill_fraction(queries),
        "caveats": [
            "Labels are silver: derived from skill-set overlap, the same signal "
            "the reranker's skill factor scores. Gains attributed to the skill "
            "factor on these labels are optimistic; prefer human judgments when "
            "available.",
            "positive_pairs counts labeled positives only; judged_pairs counts "
            "every query-posting pair examined during labeling.",
        ],
    }
    return {
        "format_version": BENCHMARK_FORMAT_VERSION,
        "manifest": manifest,
        "queries": [q.to_dict() for q in queries],
        "labels": labels,
    }


def benchmark_to_json(benchmark: Mapping[str, Any]) -> str:
    """Canonical serialized form; identical builds serialize identically."""
    return json.dumps(benchmark, sort_keys=True, indent=2) + "\n"


def save_benchmark(benchmark: Mapping[str, Any], path: str | Path) -> None:
    Path(path).write_text(benchmark_to_json(benchmark), encoding="utf-8")


def load_benchmark(path: str | Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))
