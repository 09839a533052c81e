"""Snapshot and resume ingestion: skill canonicalization, seniority
classification, and posting loaders for the native JSONL format and the
column-mapped NYC CSV snapshot.

Loaders never fail on a bad row; rejects are counted with reasons in the
IngestReport so a noisy snapshot still produces a usable corpus.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import yaml

from .config import data_text
from .errors import EmptyInput, SchemaMismatch, UnknownSkillId, UnreadableFile, ValidationError
from .lexical import tokenize
from .models import (
    CandidateProfile,
    CompanyRef,
    Degree,
    JobPosting,
    Level,
    Location,
    SkillId,
    validate_posting,
)

_SLUG_RE = re.compile(r"[^0-9a-z]+")
_NAME_LINE_RE = re.compile(r"^[A-Z][A-Za-z.'-]*(?:\s+[A-Z][A-Za-z.'-]*){1,3}$")

_DEGREE_PATTERNS: tuple[tuple[Degree, re.Pattern[str]], ...] = (
    (Degree.DOCTORATE, re.compile(r"\b(?:ph\.?\s?d|doctorate|doctoral)\b", re.I)),
    (Degree.MASTER, re.compile(r"\b(?:master(?:'s)?|m\.?s\.?c?|mba)\b", re.I)),
    (Degree.BACHELOR, re.compile(r"\b(?:bachelor(?:'s)?|b\.?s\.?c?|b\.?a\.?)\b", re.I)),
)


def slugify_skill(surface: str) -> str:
    """Canonical id form for a skill surface: lowercase kebab-case."""
    return _SLUG_RE.sub("-", surface.strip().lower()).strip("-")


def _norm_surface(surface: str) -> str:
    return " ".join(surface.strip().lower().split())


class SkillSynonymTable:
    """Maps lowercased surface forms to canonical skill ids.

    Canonical ids always map to themselves, and the space-separated form of
    each canonical id is registered as a surface so canonical skills can be
    spotted in free text. A surface form may not map to two canonical ids.
    """

    def __init__(self, mapping: Mapping[str, str] | None = None):
        self._surface_to_canonical: dict[str, SkillId] = {}
        self._token_map: dict[tuple[str, ...], SkillId] = {}
        self._max_surface_tokens = 0
        if mapping:
            for surface, canonical in mapping.items():
                self.add(surface, canonical)

    def __len__(self) -> int:
        return len(self._surface_to_canonical)

    @property
    def canonical_skills(self) -> frozenset[SkillId]:
        return frozenset(self._surface_to_canonical.values())

    def add(self, surface: str, canonical: str) -> None:
        canonical_id = slugify_skill(canonical)
        if not canonical_id:
            raise SchemaMismatch(f"empty canonical id for surface {surface!r}")
        self._put(_norm_surface(surface), canonical_id)
        self._put(canonical_id, canonical_id)
        self._put(canonical_id.replace("-", " "), canonical_id)

    def _put(self, surface: str, canonical_id: str) -> None:
        if not surface:
            return
        existing = self._surface_to_canonical.get(surface)
        if existing is not None and existing != canonical_id:
            raise SchemaMismatch(
                f"surface {surface!r} maps to both {existing!r} and {canonical_id!r}"
            )
        self._surface_to_canonical[surface] = canonical_id
        tokens = tuple(tokenize(surface))
        if tokens:
            self._token_map[tokens] = canonical_id
            self._max_surface_tokens = max(self._max_surface_tokens, len(tokens))

    def canonicalize(self, surface: str) -> SkillId | None:
        """Canonical id for a surface form, or None when unmapped."""
        return self._surface_to_canonical.get(_norm_surface(surface))

    def surfaces_for(self, canonical_id: str) -> list[str]:
        return sorted(
            s for s, c in self._surface_to_canonical.items() if c == canonical_id
        )

    def extract(self, tokens: Sequence[str]) -> tuple[set[SkillId], list[str]]:
        """Whole-word, longest-match-first skill extraction over tokens.

        Returns the canonical skills found and the residual tokens that were
        not consumed by any match.
        """
        found: set[SkillId] = set()
        residual: list[str] = []
        i = 0
        n = len(tokens)
        while i < n:
            match_len = 0
            for width in range(min(self._max_surface_tokens, n - i), 0, -1):
                canonical = self._token_map.get(tuple(tokens[i : i + width]))
                if canonical is not None:
                    found.add(canonical)
                    match_len = width
                    break
            if match_len:
                i += match_len
            else:
                residual.append(tokens[i])
                i += 1
        return found, residual

    @classmethod
    def from_csv_text(cls, text: str) -> "SkillSynonymTable":
        table = cls()
        reader = csv.reader(io.StringIO(text))
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
        if not rows:
            return table
        start = 1 if [c.strip().lower() for c in rows[0][:2]] == ["surface_form", "canonical_id"] else 0
        for row in rows[start:]:
            if len(row) < 2:
                raise SchemaMismatch(f"synonym row needs 2 columns: {row!r}")
            table.add(row[0], row[1])
        return table

    @classmethod
    def from_csv(cls, path: str | Path) -> "SkillSynonymTable":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise UnreadableFile(str(exc)) from exc
        return cls.from_csv_text(text)

    @classmethod
    def packaged(cls) -> "SkillSynonymTable":
        return cls.from_csv_text(data_text("synonyms.csv"))

    def to_dict(self) -> dict[str, str]:
        return dict(sorted(self._surface_to_canonical.items()))

    @classmethod
    def from_dict(cls, d: Mapping[str, str]) -> "SkillSynonymTable":
        table = cls()
        for surface, canonical in d.items():
            table._put(surface, canonical)
        return table


def load_relations(path: str | Path | None = None) -> list[tuple[str, str]]:
    """RELATED_TO pairs from a two-column CSV (packaged file by default)."""
    if path is None:
        text = data_text("skill_relations.csv")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise UnreadableFile(str(exc)) from exc
    pairs: list[tuple[str, str]] = []
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        return pairs
    start = 1 if [c.strip().lower() for c in rows[0][:2]] == ["skill_a", "skill_b"] else 0
    for row in rows[start:]:
        if len(row) < 2:
            raise SchemaMismatch(f"relation row needs 2 columns: {row!r}")
        pairs.append((slugify_skill(row[0]), slugify_skill(row[1])))
    return pairs


def normalize_skills(
    raw: Iterable[str],
    table: SkillSynonymTable | None = None,
    strict: bool = False,
) -> set[SkillId]:
    """Lowercase, trim, and map surface forms through the synonym table.

    Unmapped forms become self-canonical slugs in lenient mode; strict mode
    rejects them with the full list of offenders.
    """
    skills: set[SkillId] = set()
    unknown: list[str] = []
    for surface in raw:
        stripped = surface.strip()
        if not stripped:
            continue
        mapped = table.canonicalize(stripped) if table is not None else None
        if mapped is not None:
            skills.add(mapped)
        elif strict:
            unknown.append(stripped)
        else:
            slug = slugify_skill(stripped)
            if slug:
                skills.add(slug)
    if unknown:
        raise UnknownSkillId("skills", unknown)
    return skills


def _keyword_level(tokens: Sequence[str], seniority_cfg: Mapping[str, Any]) -> Level:
    token_set = set(tokens)
    if token_set & set(seniority_cfg["senior_title_keywords"]):
        return Level.SENIOR
    if token_set & set(seniority_cfg["junior_title_keywords"]):
        return Level.JUNIOR
    return Level.UNKNOWN


def max_years_mentioned(text: str, seniority_cfg: Mapping[str, Any]) -> int | None:
    pattern = re.compile(seniority_cfg["years_pattern"], re.IGNORECASE)
    matches = [int(m) for m in pattern.findall(text)]
    return max(matches) if matches else None


def _years_level(text: str, seniority_cfg: Mapping[str, Any]) -> Level:
    years = max_years_mentioned(text, seniority_cfg)
    if years is None:
        return Level.UNKNOWN
    if years >= int(seniority_cfg["senior_min_years"]):
        return Level.SENIOR
    if years >= int(seniority_cfg["mid_min_years"]):
        return Level.MID
    return Level.JUNIOR


def classify_seniority(posting: JobPosting, cfg: Mapping[str, Any]) -> Level:
    """Rule-based junior/mid/senior label from title keywords, then a
    years-of-experience scan of the description."""
    seniority_cfg = cfg["seniority"]
    level = _keyword_level(tokenize(posting.title), seniority_cfg)
    if level is not Level.UNKNOWN:
        return level
    return _years_level(posting.description, seniority_cfg)


@dataclass(frozen=True)
class ParsedResume:
    """parse_resume output: the extracted display name plus the profile."""

    name: str
    profile: CandidateProfile

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "profile": self.profile.to_dict()}


def parse_resume(
    text: str, table: SkillSynonymTable, cfg: Mapping[str, Any]
) -> ParsedResume:
    """Extract a structured profile from plain resume text.

    Skill extraction is vocabulary-match only (precision over recall): a
    term becomes a skill only when the synonym table knows it.
    """
    if not text or not text.strip():
        raise EmptyInput("resume text is empty")
    name = ""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if "@" in stripped or any(ch.isdigit() for ch in stripped):
            continue
        if _NAME_LINE_RE.match(stripped):
            name = stripped
            break
    tokens = tokenize(text)
    skills, _ = table.extract(tokens)
    education = Degree.NONE
    for degree, pattern in _DEGREE_PATTERNS:
        if pattern.search(text):
            education = degree
            break
    seniority_cfg = cfg["seniority"]
    level = _keyword_level(tokens, seniority_cfg)
    years = max_years_mentioned(text, seniority_cfg)
    if level is Level.UNKNOWN:
        level = _years_level(text, seniority_cfg)
    profile_id = "r" + hashlib.blake2b(text.encode("utf-8"), digest_size=6).hexdigest()
    profile = CandidateProfile(
        profile_id=profile_id,
        skills=frozenset(skills),
        experience_level=level,
        years_experience=float(years) if years is not None else None,
        education=education,
    )
    return ParsedResume(name=name, profile=profile)


@dataclass
class IngestReport:
    documents_loaded: int = 0
    documents_rejected: int = 0
    rejection_reasons: list[tuple[str, str]] = field(default_factory=list)
    duplicate_ids_dropped: int = 0
    skills_canonicalized: int = 0

    def reject(self, ref: str, reason: str) -> None:
        self.documents_rejected += 1
        self.rejection_reasons.append((ref, reason))

    def to_dict(self) -> dict[str, Any]:
        return {
            "documents_loaded": self.documents_loaded,
            "documents_rejected": self.documents_rejected,
            "rejection_reasons": [list(r) for r in self.rejection_reasons],
            "duplicate_ids_dropped": self.duplicate_ids_dropped,
            "skills_canonicalized": self.skills_canonicalized,
        }


def load_postings(
    path: str | Path,
    fmt: str = "jsonl",
    table: SkillSynonymTable | None = None,
    cfg: Mapping[str, Any] | None = None,
) -> tuple[list[JobPosting], IngestReport]:
    """Load a posting snapshot; bad rows are rejected, not fatal."""
    from .config import default_config

    cfg = cfg or default_config()
    table = table if table is not None else SkillSynonymTable.packaged()
    if fmt == "jsonl":
        rows = _read_jsonl_rows(path)
        parse_row = _posting_from_json
    elif fmt == "nyc":
        rows = _read_nyc_rows(path)
        parse_row = _posting_from_nyc
    else:
        raise SchemaMismatch(f"unknown snapshot format: {fmt!r}")

    report = IngestReport()
    postings: list[JobPosting] = []
    seen_ids: set[str] = set()
    for ref, row, row_error in rows:
        if row_error is not None:
            report.reject(ref, row_error)
            continue
        try:
            posting = parse_row(row, table)
            if posting.seniority is Level.UNKNOWN:
                posting = _with_seniority(posting, classify_seniority(posting, cfg))
            validate_posting(posting)
        except ValidationError as exc:
            report.reject(ref, str(exc))
            continue
        if posting.job_id in seen_ids:
            report.duplicate_ids_dropped += 1
            report.reject(ref, f"duplicate job_id {posting.job_id!r}")
            continue
        seen_ids.add(posting.job_id)
        report.skills_canonicalized += len(posting.skills)
        report.documents_loaded += 1
        postings.append(posting)
    return postings, report


def _with_seniority(posting: JobPosting, level: Level) -> JobPosting:
    d = posting.to_dict()
    d["seniority"] = level.value
    return JobPosting.from_dict(d)


def _read_jsonl_rows(path: str | Path):
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UnreadableFile(str(exc)) from exc
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        ref = f"line {lineno}"
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            rows.append((ref, None, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(row, dict):
            rows.append((ref, None, "row is not a JSON object"))
            continue
        rows.append((ref, row, None))
    return rows


def _posting_from_json(row: Mapping[str, Any], table: SkillSynonymTable) -> JobPosting:
    posting = JobPosting.from_dict(row)
    required = normalize_skills(posting.required_skills, table)
    preferred = normalize_skills(posting.preferred_skills, table) - required
    d = posting.to_dict()
    d["required_skills"] = sorted(required)
    d["preferred_skills"] = sorted(preferred)
    return JobPosting.from_dict(d)


def nyc_column_profile() -> dict[str, Any]:
    return yaml.safe_load(data_text("nyc_profile.yaml"))


def _read_nyc_rows(path: str | Path):
    profile = nyc_column_profile()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UnreadableFile(str(exc)) from exc
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    missing = [
        spec["column"]
        for spec in profile["fields"].values()
        if spec["column"] not in header
    ]
    if missing:
        raise SchemaMismatch(f"snapshot is missing mapped columns: {missing}")
    rows = []
    for rownum, row in enumerate(reader, start=2):
        rows.append((f"row {rownum}", {"_raw": row, "_profile": profile}, None))
    return rows


def _parse_money(value: str) -> float | None:
    cleaned = value.strip().replace("$", "").replace(",", "")
    if not cleaned:
        return None
    try:
        return float(cleaned)
    except ValueError as exc:
        raise ValidationError("salary", f"not a number: {value!r}") from exc


def _posting_from_nyc(row: Mapping[str, Any], table: SkillSynonymTable) -> JobPosting:
    raw: Mapping[str, str] = row["_raw"]
    profile: Mapping[str, Any] = row["_profile"]
    fields_map: Mapping[str, Mapping[str, Any]] = profile["fields"]
    constants: Mapping[str, str] = profile.get("constants", {})

    def cell(field_name: str) -> str:
        spec = fields_map.get(field_name)
        if spec is None:
            return ""
        return (raw.get(spec["column"]) or "").strip()

    def extracted(field_name: str) -> set[str]:
        found, _ = table.extract(tokenize(cell(field_name)))
        return found

    required = extracted("required_skills")
    preferred = extracted("preferred_skills") - required
    level = _keyword_level(tokenize(cell("career_level")), _NYC_LEVEL_KEYWORDS)
    return JobPosting(
        job_id=cell("job_id"),
        title=cell("title"),
        description=cell("description"),
        required_skills=frozenset(required),
        preferred_skills=frozenset(preferred),
        location=Location(
            city=cell("city"), state=str(constants.get("state", "") or "")
        ),
        salary_min=_parse_money(cell("salary_min")),
        salary_max=_parse_money(cell("salary_max")),
        seniority=level,
        company=CompanyRef(name=cell("company_name")),
    )


# Career-level wording in the NYC snapshot differs from title wording.
# Rows left unknown here fall back to the description-based classifier.
_NYC_LEVEL_KEYWORDS: dict[str, Any] = {
    "senior_title_keywords": ["senior", "manager", "executive"],
    "junior_title_keywords": ["entry", "student", "internship", "junior"],
}
