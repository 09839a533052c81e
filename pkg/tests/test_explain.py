import dataclasses

import pytest

from jobrank.config import default_config
from jobrank.explain import (
    Evidence,
    Explanation,
    audit_explanation,
    build_evidence,
    default_templates,
    generate_explanation,
    render_explanation,
)
from jobrank.rerank import (
    FACTOR_ORDER,
    FactorScores,
    RerankSubject,
    WeightVector,
    compute_factors,
    top_factor,
    utility,
)

CFG = default_config()
DEFAULTS = WeightVector.defaults(CFG)


def make_scores(*phi_values):
    phi = dict(zip(FACTOR_ORDER, phi_values))
    evidence = {
        "skill": {"matched": ["python"], "paths": [], "jaccard": phi["skill"], "bonus": 0.0},
        "experience": {"candidate_level": "mid", "job_level": "mid"},
        "location": {
            "tier": "exact", "job_city": "Austin", "job_state": "TX",
            "remote_allowed": False, "remote_preference": False,
            "preferred": ["Austin, TX"],
        },
        "salary": {"expectation": 100000.0, "midpoint": 110000.0},
        "semantic": {"cosine": 2 * phi["semantic"] - 1},
        "company": {"industry": "software", "size": "small",
                    "industry_match": True, "size_match": False},
    }
    return FactorScores(phi=phi, evidence=evidence)


class TestBuildEvidence:
    def test_projection_values(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        ev = build_evidence(scores, DEFAULTS)
        assert ev.utility == pytest.approx(0.80, abs=1e-12)
        assert ev.match_percentage == 80
        assert ev.top_factor == top_factor(scores.phi, DEFAULTS)
        for f in FACTOR_ORDER:
            assert ev.factors[f]["phi"] == scores.phi[f]
            assert ev.factors[f]["contribution"] == pytest.approx(
                DEFAULTS[f] * scores.phi[f], abs=1e-12
            )
            assert ev.factors[f]["support"] == dict(scores.evidence[f])

    def test_tags(self):
        ev = build_evidence(make_scores(0.9, 0.5, 0.2, 0.5, 0.6, 0.1), DEFAULTS)
        assert ev.factors["skill"]["tag"] == "strength"
        assert ev.factors["experience"]["tag"] == "neutral"
        assert ev.factors["location"]["tag"] == "weakness"

    def test_match_percentage_rounding(self):
        scores = make_scores(*([0.763] * 6))
        ev = build_evidence(scores, DEFAULTS)
        assert ev.match_percentage == 76


class TestRendering:
    def test_deterministic(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        a = render_explanation(build_evidence(scores, DEFAULTS))
        b = render_explanation(build_evidence(scores, DEFAULTS))
        assert a == b

    def test_opening_names_top_factor_and_percentage(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        labels = default_templates()["labels"]
        top = top_factor(scores.phi, DEFAULTS)
        assert expl.narrative.startswith("This role is a strong match (80%)")
        assert labels[top] in expl.narrative
        assert expl.match_percentage == 80
        assert expl.generator == "template"

    def test_adjective_tiers(self):
        strong = render_explanation(build_evidence(make_scores(*([0.9] * 6)), DEFAULTS))
        fair = render_explanation(build_evidence(make_scores(*([0.55] * 6)), DEFAULTS))
        weak = render_explanation(build_evidence(make_scores(*([0.2] * 6)), DEFAULTS))
        assert "strong match" in strong.narrative
        assert "fair match" in fair.narrative
        assert "weak match" in weak.narrative

    def test_every_weak_factor_gets_a_sentence(self):
        scores = make_scores(0.9, 0.3, 0.1, 0.9, 0.9, 0.9)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        labels = default_templates()["labels"]
        assert f'{labels["experience"]} is a weak spot (30%)' in expl.narrative
        assert f'{labels["location"]} is a weak spot (10%)' in expl.narrative

    def test_structured_covers_all_factors_top_first(self):
        scores = make_scores(0.1, 0.9, 0.5, 0.5, 0.5, 0.5)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        assert len(expl.structured) == 6
        assert expl.structured[0]["factor"] == top_factor(scores.phi, DEFAULTS)
        assert {m["factor"] for m in expl.structured} == set(FACTOR_ORDER)

    def test_claims_copy_support(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        for m in expl.structured:
            assert m["claims"] == dict(scores.evidence[m["factor"]])


class TestAudit:
    def test_template_output_passes(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        assert audit_explanation(expl, scores, DEFAULTS) == {
            "c1": True, "c2": True, "c3": True,
        }

    def test_c1_flips_when_top_factor_dropped(self):
        scores = make_scores(0.9, 0.5, 0.5, 0.5, 0.5, 0.5)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        top = top_factor(scores.phi, DEFAULTS)
        mutated = dataclasses.replace(
            expl,
            structured=tuple(m for m in expl.structured if m["factor"] != top),
        )
        verdict = audit_explanation(mutated, scores, DEFAULTS)
        assert verdict["c1"] is False

    def test_c2_flips_when_weakness_mistagged(self):
        scores = make_scores(0.9, 0.2, 0.5, 0.5, 0.5, 0.5)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        structured = tuple(
            dict(m, tag="strength") if m["factor"] == "experience" else m
            for m in expl.structured
        )
        verdict = audit_explanation(dataclasses.replace(expl, structured=structured), scores, DEFAULTS)
        assert verdict["c2"] is False

    def test_c2_flips_when_weakness_missing(self):
        scores = make_scores(0.9, 0.2, 0.5, 0.5, 0.5, 0.5)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        structured = tuple(m for m in expl.structured if m["factor"] != "experience")
        verdict = audit_explanation(dataclasses.replace(expl, structured=structured), scores, DEFAULTS)
        assert verdict["c2"] is False

    def test_c3_flips_on_wrong_match_percentage(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        mutated = dataclasses.replace(expl, match_percentage=expl.match_percentage + 1)
        assert audit_explanation(mutated, scores, DEFAULTS)["c3"] is False

    def test_c3_flips_on_perturbed_phi(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        structured = tuple(
            dict(m, phi=m["phi"] + 1e-6) if m["factor"] == "skill" else m
            for m in expl.structured
        )
        verdict = audit_explanation(dataclasses.replace(expl, structured=structured), scores, DEFAULTS)
        assert verdict["c3"] is False

    def test_c3_flips_on_perturbed_contribution(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        structured = tuple(
            dict(m, contribution=m["contribution"] + 1e-6) if m["factor"] == "salary" else m
            for m in expl.structured
        )
        verdict = audit_explanation(dataclasses.replace(expl, structured=structured), scores, DEFAULTS)
        assert verdict["c3"] is False

    def test_c3_flips_on_fabricated_claim(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        structured = tuple(
            dict(m, claims=dict(m["claims"], certified=True)) if m["factor"] == "skill" else m
            for m in expl.structured
        )
        verdict = audit_explanation(dataclasses.replace(expl, structured=structured), scores, DEFAULTS)
        assert verdict["c3"] is False

    def test_c3_flips_on_claim_value_mismatch(self):
        scores = make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)
        expl = render_explanation(build_evidence(scores, DEFAULTS))
        structured = tuple(
            dict(m, claims=dict(m["claims"], matched=["rust"])) if m["factor"] == "skill" else m
            for m in expl.structured
        )
        verdict = audit_explanation(dataclasses.replace(expl, structured=structured), scores, DEFAULTS)
        assert verdict["c3"] is False


class TestExternalGenerator:
    def _scores(self):
        return make_scores(0.8, 1.0, 1.0, 0.5, 0.7, 0.0)

    def test_external_accepted_when_faithful(self):
        def external(ev: Evidence) -> Explanation:
            rendered = render_explanation(ev)
            return dataclasses.replace(rendered, narrative="Custom: " + rendered.narrative)

        expl = generate_explanation(self._scores(), DEFAULTS, external=external)
        assert expl.generator == "external"
        assert expl.narrative.startswith("Custom:")

    def test_external_rejected_when_unfaithful(self):
        def external(ev: Evidence) -> Explanation:
            return Explanation(
                narrative="Perfect job, trust me.",
                structured=(),
                match_percentage=99,
            )

        expl = generate_explanation(self._scores(), DEFAULTS, external=external)
        assert expl.generator == "template-fallback"
        scores = self._scores()
        assert audit_explanation(expl, scores, DEFAULTS) == {
            "c1": True, "c2": True, "c3": True,
        }

    def test_external_crash_falls_back(self):
        def external(ev: Evidence) -> Explanation:
            raise RuntimeError("model offline")

        expl = generate_explanation(self._scores(), DEFAULTS, external=external)
        assert expl.generator == "template-fallback"

    def test_no_external_keeps_template_label(self):
        expl = generate_explanation(self._scores(), DEFAULTS)
        assert expl.generator == "template"


class TestEndToEndWithRealFactors:
    def test_bundle_pair_explanation_passes_audit(self, small_bundle, profiles):
        subject = RerankSubject.for_profile(profiles[0], small_bundle)
        for job_id in list(small_bundle.postings)[:25]:
            posting = small_bundle.job(job_id)
            scores = compute_factors(
                subject, posting, small_bundle.vectors.vector_for(job_id),
                small_bundle.graph, small_bundle.config,
            )
            expl = generate_explanation(scores, DEFAULTS)
            verdict = audit_explanation(expl, scores, DEFAULTS)
            assert verdict == {"c1": True, "c2": True, "c3": True}
            assert expl.match_percentage == round(
                100.0 * utility(scores.phi, DEFAULTS)
            )
