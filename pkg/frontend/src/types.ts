/** Payload shapes of the jobrank HTTP API, mirrored field for field.
 *
 * The UI never derives a score from these values; everything numeric is
 * displayed exactly as received.
 */

export const FACTOR_ORDER = [
  "skill",
  "experience",
  "location",
  "salary",
  "semantic",
  "company",
] as const;

export type FactorName = (typeof FACTOR_ORDER)[number];

export interface FactorDetail {
  phi: number;
  weight: number;
  contribution: number;
  evidence: Record<string, unknown>;
}

export interface FactorMention {
  factor: string;
  phi: number;
  contribution: number;
  tag: string;
  claims: Record<string, unknown>;
}

export interface ExplanationPayload {
  narrative: string;
  structured: FactorMention[];
  match_percentage: number;
  generator: string;
  audit: { c1: boolean; c2: boolean; c3: boolean };
}

export interface CompanyPayload {
  name?: string;
  industry?: string;
  size?: string;
}

export interface LocationPayload {
  city?: string;
  state?: string;
  remote_allowed?: boolean;
}

export interface ResultEntry {
  rank: number;
  job_id: string;
  title: string;
  company: CompanyPayload;
  location: LocationPayload;
  salary_min: number | null;
  salary_max: number | null;
  seniority: string;
  score: number;
  utility?: number;
  match_percentage?: number;
  factors?: Record<FactorName, FactorDetail>;
  explanation?: ExplanationPayload;
}

export interface SearchResponse {
  query: Record<string, unknown>;
  weights: Record<FactorName, number>;
  channel_weights: Record<string, number>;
  results: ResultEntry[];
  diagnostics: {
    channel_hits: Record<string, number>;
    fused_candidates: number;
    filtered_candidates: number;
    returned: number;
    warnings: string[];
    documents: Record<string, number>;
  };
  timings_ms: Record<string, number>;
}

export interface SearchRequestBody {
  query?: string;
  profile_id?: string;
  k?: number;
  weights?: Record<string, number>;
  channels?: string[];
  constraints?: Record<string, unknown>;
  rerank?: boolean;
  explain?: boolean;
}

export interface ProfilePayload {
  profile_id: string;
  skills: string[];
  experience_level: string;
  years_experience: number | null;
  education: string;
  salary_expectation: number | null;
  remote_preference: boolean;
  preferred_locations: unknown[];
  preferred_industries: string[];
  preferred_company_sizes: string[];
  hard_constraints: Record<string, unknown>;
}

export interface ProfileResponse {
  profile_id: string;
  name: string;
  profile: ProfilePayload;
}

export interface GraphNode {
  id: string;
  type: "skill" | "job";
  distance: number;
}

export interface GraphEdge {
  source: string;
  target: string;
  relation: string;
  preferred?: boolean;
}

export interface NeighborhoodResponse {
  focus: string;
  radius: number;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface HealthResponse {
  status: string;
  documents: Record<string, number>;
}
