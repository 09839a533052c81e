/** Thin typed client over fetch. Every method resolves to the parsed JSON
 * body untouched, so callers render values exactly as the server sent them.
 */

import type {
  HealthResponse,
  NeighborhoodResponse,
  ProfileResponse,
  ResultEntry,
  SearchRequestBody,
  SearchResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function readDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string" && body.detail) return body.detail;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `request failed with status ${res.status}`;
}

export interface Api {
  health(): Promise<HealthResponse>;
  createProfile(resumeText: string): Promise<ProfileResponse>;
  search(body: SearchRequestBody): Promise<SearchResponse>;
  neighborhood(skill: string, radius: number): Promise<NeighborhoodResponse>;
  job(jobId: string): Promise<ResultEntry>;
}

export class HttpApi implements Api {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) throw new ApiError(res.status, await readDetail(res));
    return (await res.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("/healthz");
  }

  createProfile(resumeText: string): Promise<ProfileResponse> {
    return this.post<ProfileResponse>("/profiles", { resume_text: resumeText });
  }

  search(body: SearchRequestBody): Promise<SearchResponse> {
    return this.post<SearchResponse>("/search", body);
  }

  neighborhood(skill: string, radius: number): Promise<NeighborhoodResponse> {
    const q = new URLSearchParams({ skill, radius: String(radius) });
    return this.request<NeighborhoodResponse>(`/graph/neighborhood?${q}`);
  }

  job(jobId: string): Promise<ResultEntry> {
    return this.request<ResultEntry>(`/jobs/${encodeURIComponent(jobId)}`);
  }
}
