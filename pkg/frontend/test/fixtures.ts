/** Hand-built API payloads for tests.
 *
 * Numbers are deliberately awkward: full-precision floats, and one
 * contribution that does NOT equal phi × weight — if the UI ever
 * recomputed instead of displaying the payload, tests would catch it.
 */

import type {
  FactorDetail,
  FactorName,
  NeighborhoodResponse,
  ProfileResponse,
  ResultEntry,
  SearchResponse,
} from "../src/types.js";
import { FACTOR_ORDER } from "../src/types.js";

export function factorDetail(overrides: Partial<FactorDetail> = {}): FactorDetail {
  return {
    phi: 0.5,
    weight: 0.1,
    contribution: 0.05,
    evidence: {},
    ...overrides,
  };
}

const BASE_FACTORS: Record<FactorName, FactorDetail> = {
  skill: factorDetail({
    phi: 0.8333333333333334,
    weight: 0.35,
    // off by 1 ulp from phi*weight on purpose: display must not recompute
    contribution: 0.29166666666666674,
    evidence: { matched: ["kubernetes"], paths: [], jaccard: 0.5, bonus: 0.25 },
  }),
  experience: factorDetail({
    phi: 1,
    weight: 0.25,
    contribution: 0.25,
    evidence: { candidate_level: "senior", job_level: "senior" },
  }),
  location: factorDetail({
    phi: 0.5,
    weight: 0.15,
    contribution: 0.075,
    evidence: { tier: "unknown" },
  }),
  salary: factorDetail({
    phi: 0.5,
    weight: 0.1,
    contribution: 0.05,
    evidence: { expectation: null, midpoint: null },
  }),
  semantic: factorDetail({
    phi: 0.7070196678027063,
    weight: 0.1,
    contribution: 0.07070196678027063,
    evidence: { cosine: 0.4140393356054125 },
  }),
  company: factorDetail({
    phi: 0.5,
    weight: 0.05,
    contribution: 0.025,
    evidence: { industry_match: null, size_match: null },
  }),
};

export function makeResult(
  jobId: string,
  rank: number,
  overrides: Partial<ResultEntry> = {},
): ResultEntry {
  const factors: Record<FactorName, FactorDetail> = {} as Record<FactorName, FactorDetail>;
  for (const f of FACTOR_ORDER) factors[f] = { ...BASE_FACTORS[f] };
  return {
    rank,
    job_id: jobId,
    title: `Role ${jobId}`,
    company: { name: "Acme", industry: "software", size: "small" },
    location: { city: "Austin", state: "TX", remote_allowed: false },
    salary_min: 120000,
    salary_max: 150000,
    seniority: "senior",
    score: 0.7120196678027063,
    utility: 0.7120196678027063,
    match_percentage: 71,
    factors,
    explanation: {
      narrative: `This role is a good match (71%), led by experience fit.`,
      structured: FACTOR_ORDER.map((f) => ({
        factor: f,
        phi: factors[f].phi,
        contribution: factors[f].contribution,
        tag: factors[f].phi > 0.6 ? "strength" : "neutral",
        claims: { ...factors[f].evidence },
      })),
      match_percentage: 71,
      generator: "template",
      audit: { c1: true, c2: true, c3: true },
    },
    ...overrides,
  };
}

export function makeResponse(
  jobIds: string[],
  overrides: Partial<SearchResponse> = {},
): SearchResponse {
  return {
    query: { mode: "keyword", text: "kubernetes platform", skills: ["kubernetes"] },
    weights: {
      skill: 0.35,
      experience: 0.25,
      location: 0.15,
      salary: 0.1,
      semantic: 0.1,
      company: 0.05,
    },
    channel_weights: { lexical: 0.6, semantic: 0.25, graph: 0.15 },
    results: jobIds.map((id, i) => makeResult(id, i + 1)),
    diagnostics: {
      channel_hits: { lexical: 3, semantic: 3, graph: 1 },
      fused_candidates: 3,
      filtered_candidates: 3,
      returned: jobIds.length,
      warnings: [],
      documents: { postings: 3, lexical: 3, vectors: 3, graph_jobs: 3 },
    },
    timings_ms: { total: 4.2 },
    ...overrides,
  };
}

export function makeProfileResponse(
  overrides: Partial<ProfileResponse> = {},
): ProfileResponse {
  return {
    profile_id: "r49d1f06d24a3",
    name: "Jordan Avery",
    profile: {
      profile_id: "r49d1f06d24a3",
      skills: ["docker", "kubernetes"],
      experience_level: "senior",
      years_experience: 8,
      education: "none",
      salary_expectation: null,
      remote_preference: false,
      preferred_locations: [],
      preferred_industries: [],
      preferred_company_sizes: [],
      hard_constraints: {},
    },
    ...overrides,
  };
}

export function makeNeighborhood(
  overrides: Partial<NeighborhoodResponse> = {},
): NeighborhoodResponse {
  return {
    focus: "kubernetes",
    radius: 1,
    nodes: [
      { id: "kubernetes", type: "skill", distance: 0 },
      { id: "docker", type: "skill", distance: 1 },
      { id: "helm", type: "skill", distance: 1 },
      { id: "austin-k8s", type: "job", distance: 1 },
    ],
    edges: [
      { source: "docker", target: "kubernetes", relation: "RELATED_TO" },
      { source: "helm", target: "kubernetes", relation: "RELATED_TO" },
      { source: "austin-k8s", target: "kubernetes", relation: "REQUIRES_SKILL", preferred: false },
    ],
    ...overrides,
  };
}
