"""Command-line interface: ingest, index, search, bench, serve.

Every data-bearing command accepts ``--json`` for machine-readable output.
``search --json`` prints the same payload the HTTP search endpoint returns,
built by the same request core.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bundle import IndexBundle, build_indexes
from .config import default_config, load_config
from .errors import JobRankError
from .ingest import SkillSynonymTable, load_postings, load_relations, parse_resume
from .models import CandidateProfile, JobPosting
from .pipeline import CHANNELS
from .service import execute_search, parse_search_request


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


def _emit(payload: dict, as_json: bool, text: str) -> None:
    if as_json:
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
    else:
        click.echo(text)


@click.group()
def main() -> None:
    """Hybrid job search: lexical, semantic, and graph retrieval with an
    explainable reranker."""


@main.command()
@click.argument("snapshot", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["jsonl", "nyc"]), default="jsonl")
@click.option("--out", type=click.Path(dir_okay=False), required=True,
              help="Where to write the normalized postings JSONL.")
@click.option("--synonyms", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
def ingest(snapshot: str, fmt: str, out: str, synonyms: str | None, as_json: bool) -> None:
    """Load a posting snapshot, normalize it, and report what was kept."""
    try:
        table = SkillSynonymTable.from_csv(synonyms) if synonyms else None
        postings, report = load_postings(snapshot, fmt=fmt, table=table)
    except JobRankError as exc:
        raise _fail(exc)
    with open(out, "w", encoding="utf-8") as fh:
        for p in postings:
            fh.write(json.dumps(p.to_dict(), sort_keys=True) + "\n")
    payload = {"out": out, "report": report.to_dict()}
    _emit(
        payload,
        as_json,
        f"loaded {report.documents_loaded} postings "
        f"({report.documents_rejected} rejected, "
        f"{report.duplicate_ids_dropped} duplicates) -> {out}",
    )


@main.command()
@click.argument("postings", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--synonyms", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--relations", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
def index(postings: str, out: str, config_path: str | None, synonyms: str | None,
          relations: str | None, as_json: bool) -> None:
    """Build the search bundle (lexical + vector + graph) from a JSONL corpus."""
    try:
        cfg = load_config(config_path) if config_path else default_config()
        table = SkillSynonymTable.from_csv(synonyms) if synonyms else None
        rels = load_relations(relations) if relations else None
        docs = _read_postings_jsonl(postings)
        bundle = build_indexes(docs, table=table, relations=rels, config=cfg)
        bundle.save(out)
    except JobRankError as exc:
        raise _fail(exc)
    payload = {
        "out": out,
        "fingerprint": bundle.fingerprint,
        "documents": bundle.document_counts(),
    }
    _emit(
        payload,
        as_json,
        f"indexed {len(bundle)} postings -> {out}\nfingerprint {bundle.fingerprint}",
    )


def _read_postings_jsonl(path: str) -> list[JobPosting]:
    docs: list[JobPosting] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            docs.append(JobPosting.from_dict(json.loads(line)))
    return docs


@main.command()
@click.option("--bundle", "bundle_path", type=click.Path(dir_okay=False), required=True)
@click.option("--query", default=None, help="Keyword query text.")
@click.option("--profile-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file holding a candidate profile.")
@click.option("--resume-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Plain-text resume; parsed into a profile before searching.")
@click.option("--k", type=int, default=None, help="Results per page.")
@click.option("--weight", "weight_args", multiple=True, metavar="FACTOR=VALUE",
              help="Override a reranker weight; repeatable. Values renormalize.")
@click.option("--channels", default=None, help="Comma-separated channel subset.")
@click.option("--no-rerank", is_flag=True, help="Return fused order without reranking.")
@click.option("--no-explain", is_flag=True, help="Skip explanation rendering.")
@click.option("--json", "as_json", is_flag=True)
def search(bundle_path: str, query: str | None, profile_file: str | None,
           resume_file: str | None, k: int | None, weight_args: tuple[str, ...],
           channels: str | None, no_rerank: bool, no_explain: bool, as_json: bool) -> None:
    """Search the bundle with a query, a profile, or both."""
    try:
        bundle = IndexBundle.load(bundle_path)
        payload: dict = {}
        if query is not None:
            payload["query"] = query
        if profile_file is not None:
            payload["profile"] = json.loads(Path(profile_file).read_text(encoding="utf-8"))
        elif resume_file is not None:
            parsed = parse_resume(
                Path(resume_file).read_text(encoding="utf-8"), bundle.table, bundle.config
            )
            payload["profile"] = parsed.profile.to_dict()
        if k is not None:
            payload["k"] = k
        if weight_args:
            payload["weights"] = _parse_weights(weight_args)
        if channels is not None:
            payload["channels"] = [c.strip() for c in channels.split(",") if c.strip()]
        payload["rerank"] = not no_rerank
        payload["explain"] = not no_explain
        req = parse_search_request(payload, bundle.config)
        response = execute_search(bundle, req)
    except (JobRankError, ValueError, LookupError) as exc:
        raise _fail(exc)
    if as_json:
        click.echo(json.dumps(response, sort_keys=True, indent=2))
        return
    for entry in response["results"]:
        line = f"{entry['rank']:>3}. {entry['job_id']}  {entry['title']}"
        if "match_percentage" in entry:
            line += f"  [{entry['match_percentage']}%]"
        click.echo(line)
        narrative = entry.get("explanation", {}).get("narrative")
        if narrative:
            click.echo(f"     {narrative}")
    diag = response["diagnostics"]
    click.echo(
        f"({diag['returned']} of {diag['filtered_candidates']} candidates, "
        f"channels: {response['channel_weights']})"
    )


def _parse_weights(weight_args: tuple[str, ...]) -> dict[str, float]:
    weights: dict[str, float] = {}
    for arg in weight_args:
        name, _, value = arg.partition("=")
        if not value:
            raise ValueError(f"expected FACTOR=VALUE, got {arg!r}")
        weights[name.strip()] = float(value)
    return weights


@main.group()
def bench() -> None:
    """Benchmark tools: synthesize corpora, build benchmarks, run evaluations."""


@bench.command()
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--n", "n_postings", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=13, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def synth(out_dir: str, n_postings: int, seed: int, as_json: bool) -> None:
    """Generate the synthetic corpus: postings, synonyms, and relations."""
    from .bench.synthetic import synthetic_corpus

    postings, table, relations = synthetic_corpus(n_postings, seed)
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    postings_path = root / "postings.jsonl"
    with open(postings_path, "w", encoding="utf-8") as fh:
        for p in postings:
            fh.write(json.dumps(p.to_dict(), sort_keys=True) + "\n")
    synonyms_path = root / "synonyms.csv"
    with open(synonyms_path, "w", encoding="utf-8") as fh:
        fh.write("surface_form,canonical_id\n")
        for surface, canonical in sorted(table.to_dict().items()):
            fh.write(f"{surface},{canonical}\n")
    relations_path = root / "relations.csv"
    with open(relations_path, "w", encoding="utf-8") as fh:
        fh.write("skill_a,skill_b\n")
        for a, b in relations:
            fh.write(f"{a},{b}\n")
    payload = {
        "postings": str(postings_path),
        "synonyms": str(synonyms_path),
        "relations": str(relations_path),
        "count": len(postings),
    }
    _emit(payload, as_json, f"wrote {len(postings)} postings under {root}")


@bench.command()
@click.option("--bundle", "bundle_path", type=click.Path(dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True)
def build(bundle_path: str, out: str, as_json: bool) -> None:
    """Build the benchmark (queries, splits, silver labels) for a bundle."""
    from .bench.builder import build_benchmark, save_benchmark

    try:
        bundle = IndexBundle.load(bundle_path)
        benchmark = build_benchmark(bundle)
        save_benchmark(benchmark, out)
    except JobRankError as exc:
        raise _fail(exc)
    manifest = benchmark["manifest"]
    payload = {"out": out, "manifest": manifest}
    _emit(
        payload,
        as_json,
        f"built benchmark -> {out}\n"
        f"queries {manifest['counts']['queries']}, "
        f"positives {manifest['counts']['positive_pairs']}, "
        f"unseen skill fraction {manifest['unseen_skill_fraction']:.2f}",
    )


@bench.command()
@click.option("--bundle", "bundle_path", type=click.Path(dir_okay=False), required=True)
@click.option("--benchmark", "benchmark_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True)
def run(bundle_path: str, benchmark_path: str, out_dir: str, as_json: bool) -> None:
    """Evaluate the configuration grid and write tables, CSV, and figures."""
    from .bench.builder import load_benchmark
    from .bench.evaluate import run_eval
    from .bench.report import render_text_table, write_report

    try:
        bundle = IndexBundle.load(bundle_path)
        benchmark = load_benchmark(benchmark_path)
        report = run_eval(bundle, benchmark)
    except JobRankError as exc:
        raise _fail(exc)
    paths = write_report(report, out_dir)
    payload = {
        "out_dir": out_dir,
        "files": {name: str(p) for name, p in sorted(paths.items())},
        "grid": report.grid,
    }
    _emit(payload, as_json, render_text_table(report) + f"\nreport files in {out_dir}")


@main.command()
@click.option("--bundle", "bundle_path", type=click.Path(dir_okay=False), required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--store", "store_path", type=click.Path(dir_okay=False), default=None,
              help="Profile store JSON path; enables POST /profiles.")
def serve(bundle_path: str, host: str, port: int, store_path: str | None) -> None:
    """Serve the HTTP API over a saved bundle."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(bundle_path=bundle_path, store_path=store_path)
    except JobRankError as exc:
        raise _fail(exc)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
