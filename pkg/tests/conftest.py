import pytest

from jobrank.bench.builder import build_benchmark
from jobrank.bench.synthetic import synthetic_corpus, synthetic_profiles
from jobrank.bundle import build_indexes
from jobrank.ingest import SkillSynonymTable
from jobrank.models import CompanyRef, JobPosting, Level, Location


def make_posting(job_id: str, **kwargs) -> JobPosting:
    base = {
        "job_id": job_id,
        "title": "Software Engineer",
        "description": "Build and maintain internal services.",
        "required_skills": frozenset({"python"}),
        "location": Location(city="Austin", state="TX"),
        "seniority": Level.MID,
        "company": CompanyRef(name="Acme", industry="software", size="small"),
    }
    base.update(kwargs)
    return JobPosting(**base)


@pytest.fixture(scope="session")
def small_corpus():
    return synthetic_corpus(120, seed=13)


@pytest.fixture(scope="session")
def small_bundle(small_corpus):
    postings, table, relations = small_corpus
    return build_indexes(postings, table=table, relations=relations)


@pytest.fixture(scope="session")
def bench_corpus():
    return synthetic_corpus(500, seed=13)


@pytest.fixture(scope="session")
def bench_bundle(bench_corpus):
    postings, table, relations = bench_corpus
    return build_indexes(postings, table=table, relations=relations)


@pytest.fixture(scope="session")
def bench_benchmark(bench_bundle):
    return build_benchmark(bench_bundle)


@pytest.fixture(scope="session")
def profiles():
    return synthetic_profiles(10, seed=13)


@pytest.fixture()
def toy_table():
    table = SkillSynonymTable()
    for skill in ("kubernetes", "docker", "container-orchestration", "python", "go"):
        table.add(skill, skill)
    table.add("k8s", "kubernetes")
    return table
