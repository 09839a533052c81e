"""HTTP service and the request core it shares with the CLI.

``execute_search`` builds the full search response as a plain dict; the
FastAPI handlers and the ``jobrank search --json`` command both call it, so
the two surfaces return the same payload (timings aside, which measure the
individual run).
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from fastapi import Body, FastAPI, HTTPException, Query

from .bundle import IndexBundle
from .errors import EmptyInput, EmptyQuery, JobRankError, UnknownSkill, ValidationError
from .explain import audit_explanation, generate_explanation
from .ingest import parse_resume
from .models import CandidateProfile, ConstraintSet
from .pipeline import CHANNELS, SearchOutcome, search
from .rerank import FACTOR_ORDER, Reranker, WeightVector, utility


class ProfileStore:
    """File-backed profile storage: one JSON document holding all profiles.

    Writes are atomic (write then rename) and guarded by a lock; ids are
    content-derived when the client does not supply one.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._profiles: dict[str, CandidateProfile] = {}
        if self.path.exists():
            data = json.loads(self.path.read_text(encoding="utf-8"))
            for pid, d in data.items():
                self._profiles[pid] = CandidateProfile.from_dict(d)

    def __len__(self) -> int:
        return len(self._profiles)

    def put(self, profile: CandidateProfile) -> str:
        pid = profile.profile_id
        if not pid:
            canonical = json.dumps(profile.to_dict(), sort_keys=True)
            pid = "p" + hashlib.blake2b(canonical.encode("utf-8"), digest_size=6).hexdigest()
            profile = CandidateProfile.from_dict({**profile.to_dict(), "profile_id": pid})
        with self._lock:
            self._profiles[pid] = profile
            self._flush()
        return pid

    def get(self, profile_id: str) -> CandidateProfile | None:
        return self._profiles.get(profile_id)

    def ids(self) -> list[str]:
        return sorted(self._profiles)

    def _flush(self) -> None:
        payload = json.dumps(
            {pid: p.to_dict() for pid, p in sorted(self._profiles.items())},
            sort_keys=True,
            indent=2,
        )
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(payload + "\n", encoding="utf-8")
        tmp.replace(self.path)


@dataclass
class SearchRequest:
    query: str | None
    profile: CandidateProfile | None
    k: int
    weights: WeightVector
    constraints: ConstraintSet | None
    channels: tuple[str, ...]
    rerank: bool
    explain: bool


def parse_search_request(
    payload: Mapping[str, Any],
    cfg: Mapping[str, Any],
    store: ProfileStore | None = None,
) -> SearchRequest:
    """Validate a search payload; ValueError maps to 400, LookupError to 404."""
    if not isinstance(payload, Mapping):
        raise ValueError("request body must be a JSON object")
    query = payload.get("query")
    if query is not None and not isinstance(query, str):
        raise ValueError("query must be a string")

    profile: CandidateProfile | None = None
    if payload.get("profile") is not None:
        try:
            profile = CandidateProfile.from_dict(payload["profile"])
        except (ValueError, TypeError, KeyError) as exc:
            raise ValueError(f"invalid profile: {exc}") from exc
    elif payload.get("profile_id") is not None:
        if store is None:
            raise ValueError("profile_id given but no profile store is attached")
        profile = store.get(str(payload["profile_id"]))
        if profile is None:
            raise LookupError(f"unknown profile_id {payload['profile_id']!r}")

    if not query and profile is None:
        raise ValueError("request needs a query, a profile, or a profile_id")

    k = payload.get("k", int(cfg["service"]["default_page_size"]))
    if not isinstance(k, int) or isinstance(k, bool) or k <= 0:
        raise ValueError("k must be a positive integer")

    if payload.get("weights") is not None:
        try:
            weights = WeightVector.from_raw(payload["weights"])
        except (ValueError, TypeError) as exc:
            raise ValueError(f"invalid weights: {exc}") from exc
    else:
        weights = WeightVector.defaults(cfg)

    constraints: ConstraintSet | None = None
    if payload.get("constraints") is not None:
        try:
            constraints = ConstraintSet.from_dict(payload["constraints"])
        except (ValueError, TypeError, KeyError) as exc:
            raise ValueError(f"invalid constraints: {exc}") from exc

    channels = tuple(payload.get("channels") or CHANNELS)
    unknown = set(channels) - set(CHANNELS)
    if unknown:
        raise ValueError(f"unknown channels: {sorted(unknown)}")
    if not channels:
        raise ValueError("channels must not be empty")

    return SearchRequest(
        query=query or None,
        profile=profile,
        k=k,
        weights=weights,
        constraints=constraints,
        channels=channels,
        rerank=bool(payload.get("rerank", True)),
        explain=bool(payload.get("explain", True)),
    )


def _result_entry(
    bundle: IndexBundle,
    outcome: SearchOutcome,
    rank: int,
    job_id: str,
    score: float,
    req: SearchRequest,
    cfg: Mapping[str, Any],
) -> dict[str, Any]:
    posting = bundle.job(job_id)
    entry: dict[str, Any] = {
        "rank": rank,
        "job_id": job_id,
        "title": posting.title if posting else "",
        "company": posting.company.to_dict() if posting else {},
        "location": posting.location.to_dict() if posting else {},
        "salary_min": posting.salary_min if posting else None,
        "salary_max": posting.salary_max if posting else None,
        "seniority": posting.seniority.value if posting else "unknown",
        "score": score,
    }
    factors = outcome.factor_scores.get(job_id)
    if factors is None:
        return entry
    u = utility(factors.phi, outcome.weights)
    entry["utility"] = u
    entry["match_percentage"] = int(round(100.0 * u))
    entry["factors"] = {
        f: {
            "phi": factors.phi[f],
            "weight": outcome.weights[f],
            "contribution": outcome.weights[f] * factors.phi[f],
            "evidence": dict(factors.evidence[f]),
        }
        for f in FACTOR_ORDER
    }
    if req.explain:
        explanation = generate_explanation(
            factors, outcome.weights, explain_cfg=cfg.get("explain")
        )
        audit = audit_explanation(
            explanation,
            factors,
            outcome.weights,
            threshold=float(cfg["explain"]["weakness_threshold"]),
        )
        entry["explanation"] = {**explanation.to_dict(), "audit": audit}
    return entry


def execute_search(
    bundle: IndexBundle,
    req: SearchRequest,
    reranker: Reranker | None = None,
    cfg: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """Run the pipeline and shape the full response payload."""
    cfg = cfg if cfg is not None else bundle.config
    outcome = search(
        req.query if req.query is not None else req.profile,
        bundle,
        cfg,
        profile=req.profile,
        weights=req.weights,
        constraints=req.constraints,
        channels=req.channels,
        reranker=reranker,
        rerank_enabled=req.rerank,
    )
    page = outcome.reranked.entries[: req.k]
    results = [
        _result_entry(bundle, outcome, rank, job_id, score, req, cfg)
        for rank, (job_id, score) in enumerate(page, start=1)
    ]
    return {
        "query": outcome.structured.to_dict(),
        "weights": outcome.weights.as_dict(),
        "channel_weights": outcome.channel_weights,
        "results": results,
        "diagnostics": {
            "channel_hits": {ch: len(r) for ch, r in sorted(outcome.channel_results.items())},
            "fused_candidates": len(outcome.fused),
            "filtered_candidates": len(outcome.filtered),
            "returned": len(results),
            "warnings": list(outcome.warnings),
            "documents": bundle.document_counts(),
        },
        "timings_ms": dict(outcome.timings_ms),
    }


def create_app(
    bundle: IndexBundle | None = None,
    bundle_path: str | Path | None = None,
    store_path: str | Path | None = None,
) -> FastAPI:
    """Application factory. The bundle may be passed directly, loaded from
    a path, or left absent, in which case data endpoints answer 503."""
    app = FastAPI(title="jobrank", docs_url=None, redoc_url=None)
    if bundle is None and bundle_path is not None:
        bundle = IndexBundle.load(bundle_path)
    app.state.bundle = bundle
    app.state.reranker = Reranker(bundle) if bundle is not None else None
    app.state.store = ProfileStore(store_path) if store_path is not None else None

    def need_bundle() -> IndexBundle:
        if app.state.bundle is None:
            raise HTTPException(status_code=503, detail="no index bundle is loaded")
        return app.state.bundle

    @app.get("/healthz")
    def healthz() -> dict[str, Any]:
        if app.state.bundle is None:
            return {"status": "no_bundle", "documents": {}}
        return {"status": "ok", "documents": app.state.bundle.document_counts()}

    @app.get("/config")
    def config() -> dict[str, Any]:
        b = need_bundle()
        return {"config": b.config, "fingerprint": b.fingerprint}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str) -> dict[str, Any]:
        b = need_bundle()
        posting = b.job(job_id)
        if posting is None:
            raise HTTPException(status_code=404, detail=f"no job {job_id!r}")
        return posting.to_dict()

    @app.get("/graph/neighborhood")
    def neighborhood(
        skill: str = Query(...), radius: int = Query(1)
    ) -> dict[str, Any]:
        b = need_bundle()
        budget = int(b.config["graph"]["neighborhood_budget"])
        try:
            return b.graph.neighborhood(skill, radius, budget)
        except UnknownSkill as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/profiles")
    def post_profile(payload: dict[str, Any] = Body(...)) -> dict[str, Any]:
        if app.state.store is None:
            raise HTTPException(status_code=503, detail="no profile store attached")
        name = ""
        if "resume_text" in payload:
            b = need_bundle()
            try:
                parsed = parse_resume(str(payload["resume_text"]), b.table, b.config)
            except EmptyInput as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            profile, name = parsed.profile, parsed.name
        elif not payload:
            raise HTTPException(status_code=400, detail="empty profile")
        else:
            try:
                profile = CandidateProfile.from_dict(payload)
            except (ValueError, TypeError, KeyError) as exc:
                raise HTTPException(status_code=400, detail=f"invalid profile: {exc}") from exc
        pid = app.state.store.put(profile)
        stored = app.state.store.get(pid)
        return {"profile_id": pid, "name": name, "profile": stored.to_dict()}

    @app.post("/search")
    def post_search(payload: dict[str, Any] = Body(...)) -> dict[str, Any]:
        b = need_bundle()
        try:
            req = parse_search_request(payload, b.config, app.state.store)
        except LookupError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        try:
            return execute_search(b, req, app.state.reranker)
        except (EmptyQuery, ValidationError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except JobRankError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    return app
