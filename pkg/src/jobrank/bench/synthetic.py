"""Deterministic synthetic corpus for benchmarks and latency tests.

The generator builds postings from twenty hand-written skill families. Each
family carries one "holdout" surface form (an abbreviation such as "k8s")
that maps to a canonical skill through the synonym table but never appears
in any posting's text. Queries written with those surfaces are invisible to
plain keyword search, which is exactly the gap the graph channel is meant
to close; ``synthetic_corpus`` asserts the invariant at build time.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..ingest import SkillSynonymTable
from ..lexical import tokenize
from ..models import CandidateProfile, CompanyRef, Degree, JobPosting, Level, Location


@dataclass(frozen=True)
class SkillFamily:
    key: str
    skills: tuple[str, ...]
    holdout_surface: str
    holdout_target: str
    role_noun: str
    blurb: str
    industry: str
    companies: tuple[str, ...]
    certifications: tuple[str, ...] = ()


FAMILIES: tuple[SkillFamily, ...] = (
    SkillFamily(
        key="containers",
        skills=("kubernetes", "docker", "container-orchestration", "helm", "microservices"),
        holdout_surface="k8s",
        holdout_target="kubernetes",
        role_noun="Platform Engineer",
        blurb="You will keep our container fleet healthy and roll out cluster upgrades without downtime.",
        industry="cloud software",
        companies=("Harborline Systems", "Quayside Compute", "Bollard Cloud"),
        certifications=("certified-kubernetes-administrator",),
    ),
    SkillFamily(
        key="learning-systems",
        skills=("machine-learning", "deep-learning", "pytorch", "feature-engineering", "model-serving"),
        holdout_surface="ml",
        holdout_target="machine-learning",
        role_noun="Research Engineer",
        blurb="You will train ranking models and ship them behind well tested prediction services.",
        industry="applied research",
        companies=("Gradient Harbor", "Northloop Labs", "Tensorpine"),
    ),
    SkillFamily(
        key="language-tech",
        skills=("natural-language-processing", "transformers", "text-mining", "speech-recognition"),
        holdout_surface="nlp",
        holdout_target="natural-language-processing",
        role_noun="Language Engineer",
        blurb="You will build text understanding components for search and routing products.",
        industry="applied research",
        companies=("Lexicraft", "Parsewell", "Tokenbridge"),
    ),
    SkillFamily(
        key="frontend",
        skills=("javascript", "typescript", "react", "css", "web-accessibility"),
        holdout_surface="js",
        holdout_target="javascript",
        role_noun="Frontend Developer",
        blurb="You will own customer facing screens from design handoff to production rollout.",
        industry="consumer web",
        companies=("Brightpane", "Viewforge", "Pixelharbor"),
    ),
    SkillFamily(
        key="relational-data",
        skills=("postgresql", "sql", "database-tuning", "data-modeling"),
        holdout_surface="pg",
        holdout_target="postgresql",
        role_noun="Database Engineer",
        blurb="You will keep transactional stores fast, safe, and boring under heavy write load.",
        industry="financial services",
        companies=("Ledgerstone", "Rowhaven", "Tablegate"),
    ),
    SkillFamily(
        key="cloud-foundation",
        skills=("terraform", "infrastructure-as-code", "amazon-web-services", "cloud-networking"),
        holdout_surface="iac",
        holdout_target="infrastructure-as-code",
        role_noun="Cloud Engineer",
        blurb="You will codify our environments so every region can be rebuilt from a clean checkout.",
        industry="cloud software",
        companies=("Substrate Works", "Plainsail Cloud", "Foundry North"),
        certifications=("cloud-architect-associate",),
    ),
    SkillFamily(
        key="delivery",
        skills=("ci-cd", "build-automation", "release-engineering", "git"),
        holdout_surface="cicd",
        holdout_target="ci-cd",
        role_noun="Release Engineer",
        blurb="You will shorten the path from merge to production and keep the pipelines green.",
        industry="developer tools",
        companies=("Shipwright Digital", "Mergefield", "Cadence Tooling"),
    ),
    SkillFamily(
        key="data-platform",
        skills=("spark", "data-pipelines", "kafka", "stream-processing", "warehouse-design"),
        holdout_surface="etl",
        holdout_target="data-pipelines",
        role_noun="Data Engineer",
        blurb="You will move event data from producers to the warehouse with clear contracts at each hop.",
        industry="logistics",
        companies=("Freightline Data", "Cartographer", "Palletworks"),
    ),
    SkillFamily(
        key="analytics",
        skills=("business-intelligence", "dashboard-design", "reporting-automation", "data-visualization"),
        holdout_surface="bi",
        holdout_target="business-intelligence",
        role_noun="Analytics Developer",
        blurb="You will turn raw operational tables into dashboards leadership actually reads.",
        industry="retail",
        companies=("Storefront Metrics", "Aislewise", "Countinghouse"),
    ),
    SkillFamily(
        key="vision",
        skills=("computer-vision", "image-processing", "object-detection", "video-analytics"),
        holdout_surface="cv",
        holdout_target="computer-vision",
        role_noun="Vision Engineer",
        blurb="You will build perception features that hold up outside the lab.",
        industry="robotics",
        companies=("Aperture Motion", "Sightline Robotics", "Framefield"),
    ),
    SkillFamily(
        key="reliability",
        skills=("site-reliability-engineering", "incident-response", "observability", "capacity-planning"),
        holdout_surface="sre",
        holdout_target="site-reliability-engineering",
        role_noun="Reliability Engineer",
        blurb="You will set error budgets, tune alerts, and run calm incident reviews.",
        industry="cloud software",
        companies=("Steadfast Ops", "Uptime Guild", "Greenboard"),
    ),
    SkillFamily(
        key="quality",
        skills=("quality-assurance", "test-automation", "selenium", "performance-testing"),
        holdout_surface="qa",
        holdout_target="quality-assurance",
        role_noun="Test Engineer",
        blurb="You will design regression suites that catch defects before customers do.",
        industry="developer tools",
        companies=("Checkpoint Labs", "Verigate", "Proofline"),
    ),
    SkillFamily(
        key="security",
        skills=("information-security", "threat-detection", "penetration-testing", "network-security"),
        holdout_surface="infosec",
        holdout_target="information-security",
        role_noun="Security Engineer",
        blurb="You will harden our perimeter and rehearse the response before the breach.",
        industry="financial services",
        companies=("Bastion Rowe", "Keyward", "Palisade Security"),
        certifications=("security-plus",),
    ),
    SkillFamily(
        key="mobile",
        skills=("swift", "kotlin", "mobile-development", "app-performance"),
        holdout_surface="ios",
        holdout_target="swift",
        role_noun="Mobile Developer",
        blurb="You will ship native app releases that stay fast on old handsets.",
        industry="consumer web",
        companies=("Pocketforge", "Handset Harbor", "Thumbline"),
    ),
    SkillFamily(
        key="service-backends",
        skills=("go", "grpc", "distributed-systems", "service-mesh"),
        holdout_surface="golang",
        holdout_target="go",
        role_noun="Backend Engineer",
        blurb="You will design service boundaries and keep tail latency predictable.",
        industry="logistics",
        companies=("Relay Forge", "Portcall Systems", "Lanternworks"),
    ),
    SkillFamily(
        key="python-platform",
        skills=("python", "api-design", "rest-services", "asynchronous-programming"),
        holdout_surface="py",
        holdout_target="python",
        role_noun="Software Engineer",
        blurb="You will build internal services other teams depend on daily.",
        industry="developer tools",
        companies=("Indigo Stack", "Carraway Software", "Milldam"),
    ),
    SkillFamily(
        key="embedded",
        skills=("embedded-systems", "firmware", "real-time-operating-systems", "hardware-integration"),
        holdout_surface="rtos",
        holdout_target="real-time-operating-systems",
        role_noun="Firmware Engineer",
        blurb="You will bring new boards up and keep the control loop on schedule.",
        industry="robotics",
        companies=("Copperwolf Devices", "Boardwalk Embedded", "Signalhouse"),
    ),
    SkillFamily(
        key="experimentation",
        skills=("statistics", "causal-inference", "experiment-design", "forecasting"),
        holdout_surface="stats",
        holdout_target="statistics",
        role_noun="Data Scientist",
        blurb="You will design experiments that separate real product wins from noise.",
        industry="retail",
        companies=("Splitlight", "Evenhand Analytics", "Quartergate"),
    ),
    SkillFamily(
        key="search",
        skills=("information-retrieval", "search-relevance", "ranking-systems", "query-understanding"),
        holdout_surface="ir",
        holdout_target="information-retrieval",
        role_noun="Search Engineer",
        blurb="You will tune relevance for queries nobody on the team predicted.",
        industry="consumer web",
        companies=("Findhollow", "Rankery", "Lanternsearch"),
    ),
    SkillFamily(
        key="experience-design",
        skills=("user-experience", "interaction-design", "prototyping", "usability-testing"),
        holdout_surface="ux",
        holdout_target="user-experience",
        role_noun="Product Designer",
        blurb="You will turn fuzzy workflows into interfaces people stop noticing.",
        industry="consumer web",
        companies=("Clearform Studio", "Wayfinder Design", "Softgrid"),
    ),
)

CITIES: tuple[tuple[str, str], ...] = (
    ("New York", "NY"),
    ("Brooklyn", "NY"),
    ("Austin", "TX"),
    ("Seattle", "WA"),
    ("Denver", "CO"),
    ("Chicago", "IL"),
    ("Boston", "MA"),
    ("Atlanta", "GA"),
)

LEVEL_TITLE_PREFIX = {
    Level.JUNIOR: ("Junior",),
    Level.MID: ("",),
    Level.SENIOR: ("Senior", "Staff", "Lead"),
}

SALARY_BANDS = {
    Level.JUNIOR: (70_000, 95_000),
    Level.MID: (95_000, 130_000),
    Level.SENIOR: (125_000, 175_000),
}

YEARS_BY_LEVEL = {Level.JUNIOR: (0, 1), Level.MID: (2, 4), Level.SENIOR: (5, 8)}

COMPANY_SIZES = ("small", "medium", "large")

BENEFITS = (
    "flexible hours and a hardware budget",
    "a clear promotion ladder and yearly training stipend",
    "quarterly planning offsites and generous parental leave",
    "a four day focus week each month",
)


def skill_words(skill_id: str) -> str:
    return skill_id.replace("-", " ")


def title_for(family: SkillFamily, level: Level, rng: random.Random) -> str:
    prefix = rng.choice(LEVEL_TITLE_PREFIX[level])
    primary = skill_words(family.skills[0]).title()
    base = f"{primary} {family.role_noun}"
    return f"{prefix} {base}".strip()


def _description(
    family: SkillFamily,
    title: str,
    required: list[str],
    preferred: list[str],
    years: int,
    city: str,
    remote: bool,
    rng: random.Random,
) -> str:
    req_words = ", ".join(skill_words(s) for s in required)
    lines = [
        f"We are hiring a {title.lower()} to join our {family.key.replace('-', ' ')} group in {city}.",
        family.blurb,
        f"You will work with {req_words} every week.",
        f"{years}+ years of related experience is expected for this role.",
    ]
    if preferred:
        pref_words = ", ".join(skill_words(s) for s in preferred)
        lines.append(f"Familiarity with {pref_words} is a plus.")
    if remote:
        lines.append("Remote work is supported for this position.")
    lines.append(f"Benefits include {rng.choice(BENEFITS)}.")
    return " ".join(lines)


def holdout_surfaces() -> dict[str, str]:
    """Surface forms guaranteed absent from synthetic posting text."""
    return {f.holdout_surface: f.holdout_target for f in FAMILIES}


def family_relations() -> list[tuple[str, str]]:
    """Within each family, a star from the primary skill plus one chain edge."""
    pairs: list[tuple[str, str]] = []
    for family in FAMILIES:
        primary = family.skills[0]
        for other in family.skills[1:]:
            pairs.append((primary, other))
        if len(family.skills) >= 3:
            pairs.append((family.skills[1], family.skills[2]))
    return pairs


def synthetic_table() -> SkillSynonymTable:
    table = SkillSynonymTable()
    for family in FAMILIES:
        for skill in family.skills:
            table.add(skill, skill)
        table.add(family.holdout_surface, family.holdout_target)
    return table


def corpus_token_set(postings: list[JobPosting]) -> set[str]:
    tokens: set[str] = set()
    for p in postings:
        text = " ".join(
            [
                p.title,
                p.description,
                " ".join(skill_words(s) for s in sorted(p.skills)),
                p.company.name if p.company else "",
                p.location.city or "",
                p.location.state or "",
            ]
        )
        tokens.update(tokenize(text))
    return tokens


def synthetic_corpus(
    n_postings: int = 500, seed: int = 13
) -> tuple[list[JobPosting], SkillSynonymTable, list[tuple[str, str]]]:
    """Build ``n_postings`` postings plus the synonym table and skill relations.

    Postings are assigned to families round-robin so every family keeps a
    similar share of the corpus regardless of size.
    """
    rng = random.Random(seed)
    levels = (Level.JUNIOR, Level.MID, Level.SENIOR)
    postings: list[JobPosting] = []
    for i in range(n_postings):
        family = FAMILIES[i % len(FAMILIES)]
        level = levels[(i // len(FAMILIES)) % len(levels)]
        rest = list(family.skills[1:])
        rng.shuffle(rest)
        n_req = rng.randint(1, min(3, len(rest)))
        required = [family.skills[0]] + sorted(rest[:n_req])
        leftover = sorted(rest[n_req:])
        preferred = leftover[: rng.randint(0, min(2, len(leftover)))]
        city, state = rng.choice(CITIES)
        remote = rng.random() < 0.25
        title = title_for(family, level, rng)
        years = rng.randint(*YEARS_BY_LEVEL[level])
        lo_band, hi_band = SALARY_BANDS[level]
        if rng.random() < 0.10:
            salary_min = salary_max = None
        else:
            salary_min = float(rng.randrange(lo_band, hi_band - 10_000, 1_000))
            salary_max = float(salary_min + rng.randrange(10_000, 30_000, 1_000))
        degree_pool = (Degree.NONE, Degree.BACHELOR, Degree.BACHELOR, Degree.MASTER)
        certs = family.certifications if family.certifications and rng.random() < 0.3 else ()
        posting = JobPosting(
            job_id=f"j{i:04d}",
            title=title,
            description=_description(family, title, required, list(preferred), years, city, remote, rng),
            required_skills=frozenset(required),
            preferred_skills=frozenset(preferred),
            location=Location(city=city, state=state, remote_allowed=remote),
            salary_min=salary_min,
            salary_max=salary_max,
            seniority=level,
            company=CompanyRef(
                name=rng.choice(family.companies),
                industry=family.industry,
                size=rng.choice(COMPANY_SIZES),
            ),
            visa_sponsorship=rng.random() < 0.5,
            degree_required=rng.choice(degree_pool),
            certifications_required=frozenset(certs),
        )
        postings.append(posting)

    table = synthetic_table()
    holdouts = set(holdout_surfaces())
    seen = corpus_token_set(postings)
    leaked = holdouts & seen
    assert not leaked, f"holdout surfaces leaked into corpus text: {sorted(leaked)}"
    return postings, table, family_relations()


def synthetic_profiles(n: int = 10, seed: int = 13) -> list[CandidateProfile]:
    """Candidate profiles spanning the skill families, for reranking tests."""
    rng = random.Random(seed)
    levels = (Level.JUNIOR, Level.MID, Level.SENIOR)
    profiles: list[CandidateProfile] = []
    for i in range(n):
        family = FAMILIES[i % len(FAMILIES)]
        pick = list(family.skills)
        rng.shuffle(pick)
        skills = frozenset(sorted(pick[: rng.randint(2, len(pick))]))
        level = levels[i % len(levels)]
        city, state = rng.choice(CITIES)
        lo_band, hi_band = SALARY_BANDS[level]
        profiles.append(
            CandidateProfile(
                profile_id=f"p{i:03d}",
                skills=skills,
                experience_level=level,
                years_experience=float(rng.randint(*YEARS_BY_LEVEL[level])),
                preferred_locations=(Location(city=city, state=state),),
                remote_preference=rng.random() < 0.5,
                salary_expectation=float(rng.randrange(lo_band, hi_band, 1_000)),
                education=rng.choice((Degree.BACHELOR, Degree.MASTER)),
                preferred_industries=frozenset([family.industry]) if rng.random() < 0.6 else frozenset(),
                preferred_company_sizes=frozenset([rng.choice(COMPANY_SIZES)]) if rng.random() < 0.4 else frozenset(),
            )
        )
    return profiles
