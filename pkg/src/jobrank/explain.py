"""Grounded explanation generation and the three-part faithfulness audit.

Explanations are built strictly from factor scores and their evidence,
never from raw documents. The default generator is a deterministic
template renderer whose output passes the audit by construction; an
external generator can be plugged in, but its output is audited and
replaced by the template rendering when it fails.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import yaml

from .config import data_text
from .rerank import FACTOR_ORDER, FactorScores, WeightVector, top_factor, utility

WEAKNESS_THRESHOLD = 0.5

_TEMPLATES_CACHE: dict[str, Any] | None = None


def default_templates() -> dict[str, Any]:
    global _TEMPLATES_CACHE
    if _TEMPLATES_CACHE is None:
        _TEMPLATES_CACHE = yaml.safe_load(data_text("explain_templates.yaml"))
    return _TEMPLATES_CACHE


@dataclass(frozen=True)
class Evidence:
    """Deterministic projection of FactorScores for one job.

    Contains only values present in the factor evidence; raw posting text
    never flows through here.
    """

    factors: Mapping[str, Mapping[str, Any]]  # phi, contribution, tag, support
    top_factor: str
    utility: float
    match_percentage: int
    weights: Mapping[str, float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "factors": {f: dict(self.factors[f]) for f in FACTOR_ORDER},
            "top_factor": self.top_factor,
            "utility": self.utility,
            "match_percentage": self.match_percentage,
            "weights": dict(self.weights),
        }


@dataclass(frozen=True)
class Explanation:
    """Narrative text plus the structured factor mentions behind it."""

    narrative: str
    structured: tuple[dict[str, Any], ...]
    match_percentage: int
    generator: str = "template"

    def to_dict(self) -> dict[str, Any]:
        return {
            "narrative": self.narrative,
            "structured": [dict(m) for m in self.structured],
            "match_percentage": self.match_percentage,
            "generator": self.generator,
        }


def _tag(phi: float, threshold: float = WEAKNESS_THRESHOLD) -> str:
    if phi < threshold:
        return "weakness"
    if phi > threshold:
        return "strength"
    return "neutral"


def build_evidence(
    factors: FactorScores,
    weights: WeightVector,
    threshold: float = WEAKNESS_THRESHOLD,
) -> Evidence:
    u = utility(factors.phi, weights)
    projected = {
        f: {
            "phi": factors.phi[f],
            "contribution": weights[f] * factors.phi[f],
            "tag": _tag(factors.phi[f], threshold),
            "support": dict(factors.evidence[f]),
        }
        for f in FACTOR_ORDER
    }
    return Evidence(
        factors=projected,
        top_factor=top_factor(factors.phi, weights),
        utility=u,
        match_percentage=round(100.0 * u),
        weights=weights.as_dict(),
    )


def _format_paths(paths: Sequence[Mapping[str, Any]]) -> str:
    parts = []
    for p in paths:
        nodes = p.get("nodes", [])
        hops = p.get("hop_count", len(nodes) - 1)
        parts.append(
            "{} ~ {} ({} hop{})".format(
                nodes[0], nodes[-1], hops, "s" if hops != 1 else ""
            )
        )
    return "; ".join(parts)


def _factor_detail(factor: str, support: Mapping[str, Any], templates: Mapping[str, Any]) -> str:
    """Render the parenthetical evidence clause for one factor."""
    det = templates["details"]
    if support.get("reason") == "no profile":
        return det["no_profile"]
    if factor == "skill":
        matched = support.get("matched") or []
        paths = support.get("paths") or []
        if matched and paths:
            return det["skill_matched_and_paths"].format(
                skills=", ".join(matched), paths=_format_paths(paths)
            )
        if matched:
            return det["skill_matched"].format(skills=", ".join(matched))
        if paths:
            return det["skill_paths"].format(paths=_format_paths(paths))
        return det["skill_none"]
    if factor == "experience":
        if support.get("candidate_level") == "unknown" or support.get("job_level") == "unknown":
            return det["experience_unknown"]
        return det["experience_pair"].format(
            candidate_level=support["candidate_level"], job_level=support["job_level"]
        )
    if factor == "location":
        tier = support.get("tier", "unknown")
        return det.get(f"location_{tier}", det["location_unknown"])
    if factor == "salary":
        if support.get("expectation") is None or support.get("midpoint") is None:
            return det["salary_unknown"]
        return det["salary_known"].format(
            expectation=support["expectation"], midpoint=support["midpoint"]
        )
    if factor == "semantic":
        cosine = support.get("cosine", 0.0)
        return det["semantic_value"].format(similarity_pct=round(100.0 * (cosine + 1.0) / 2.0))
    if factor == "company":
        industry = support.get("industry_match")
        size = support.get("size_match")
        if industry is None and size is None:
            return det["company_unknown"]
        if industry and size:
            return det["company_both"]
        if industry:
            return det["company_industry"]
        if size:
            return det["company_size"]
        return det["company_none"]
    return ""


def render_explanation(
    ev: Evidence,
    templates: Mapping[str, Any] | None = None,
    explain_cfg: Mapping[str, float] | None = None,
) -> Explanation:
    """Deterministic template rendering of the evidence.

    The opening sentence names the top-contribution factor, every factor
    below the weakness threshold gets a weakness sentence, and all template
    placeholders are filled from Evidence values only.
    """
    templates = templates or default_templates()
    labels: Mapping[str, str] = templates["labels"]
    adjectives: Mapping[str, str] = templates["adjectives"]
    strong_min = explain_cfg["strong_match_min"] if explain_cfg else 0.70
    fair_min = explain_cfg["fair_match_min"] if explain_cfg else 0.40
    if ev.utility >= strong_min:
        adjective = adjectives["strong"]
    elif ev.utility >= fair_min:
        adjective = adjectives["fair"]
    else:
        adjective = adjectives["weak"]

    top = ev.top_factor
    top_info = ev.factors[top]
    narrative = templates["opening"].format(
        adjective=adjective,
        match_percentage=ev.match_percentage,
        top_label=labels[top],
        top_detail=_factor_detail(top, top_info["support"], templates),
    )
    strengths = [
        labels[f]
        for f in FACTOR_ORDER
        if f != top and ev.factors[f]["tag"] == "strength"
    ]
    if strengths:
        narrative += templates["strengths"].format(labels=", ".join(strengths))
    for f in FACTOR_ORDER:
        info = ev.factors[f]
        if info["tag"] != "weakness":
            continue
        narrative += templates["weakness"].format(
            label=labels[f],
            phi_pct=round(100.0 * info["phi"]),
            detail=_factor_detail(f, info["support"], templates),
        )

    ordered = [top] + [f for f in FACTOR_ORDER if f != top]
    structured = tuple(
        {
            "factor": f,
            "tag": ev.factors[f]["tag"],
            "phi": ev.factors[f]["phi"],
            "contribution": ev.factors[f]["contribution"],
            "claims": dict(ev.factors[f]["support"]),
        }
        for f in ordered
    )
    return Explanation(
        narrative=narrative,
        structured=structured,
        match_percentage=ev.match_percentage,
    )


def audit_explanation(
    expl: Explanation,
    factors: FactorScores,
    weights: WeightVector,
    threshold: float = WEAKNESS_THRESHOLD,
) -> dict[str, bool]:
    """Check the three faithfulness criteria on the structured mentions.

    c1: the highest-contribution factor is mentioned. c2: every factor
    scoring below the threshold is mentioned and tagged as a weakness.
    c3: every numeric and evidential claim maps back to the factor scores.
    """
    mentions = {m.get("factor"): m for m in expl.structured if isinstance(m, Mapping)}
    top = top_factor(factors.phi, weights)
    c1 = top in mentions

    c2 = True
    for f in FACTOR_ORDER:
        if factors.phi[f] < threshold:
            mention = mentions.get(f)
            if mention is None or mention.get("tag") != "weakness":
                c2 = False
                break

    c3 = expl.match_percentage == round(100.0 * utility(factors.phi, weights))
    if c3:
        for m in expl.structured:
            f = m.get("factor")
            if f not in FACTOR_ORDER:
                c3 = False
                break
            if abs(m.get("phi", -1.0) - factors.phi[f]) > 1e-12:
                c3 = False
                break
            expected = weights[f] * factors.phi[f]
            if abs(m.get("contribution", -1.0) - expected) > 1e-12:
                c3 = False
                break
            support = factors.evidence[f]
            claims = m.get("claims", {})
            if not isinstance(claims, Mapping):
                c3 = False
                break
            for key, value in claims.items():
                if key not in support or support[key] != value:
                    c3 = False
                    break
            if not c3:
                break
    return {"c1": c1, "c2": c2, "c3": c3}


def generate_explanation(
    factors: FactorScores,
    weights: WeightVector,
    templates: Mapping[str, Any] | None = None,
    external: Callable[[Evidence], Explanation] | None = None,
    explain_cfg: Mapping[str, float] | None = None,
) -> Explanation:
    """Render an explanation, preferring an external generator when it
    passes the audit and falling back to the template output otherwise."""
    threshold = explain_cfg["weakness_threshold"] if explain_cfg else WEAKNESS_THRESHOLD
    ev = build_evidence(factors, weights, threshold)
    rendered = render_explanation(ev, templates, explain_cfg)
    if external is None:
        return rendered
    try:
        candidate = external(ev)
    except Exception:
        return dataclasses.replace(rendered, generator="template-fallback")
    verdict = audit_explanation(candidate, factors, weights)
    if all(verdict.values()):
        return dataclasses.replace(candidate, generator="external")
    return dataclasses.replace(rendered, generator="template-fallback")
