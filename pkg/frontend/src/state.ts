/** Client-side state: what the user is looking at, never how things score.
 *
 * Concurrent searches are resolved by monotonically increasing sequence
 * numbers: a response may only be rendered when it answers the most
 * recently issued request, so an out-of-order arrival can never put a
 * stale ranking on screen.
 */

import type { FactorName, SearchResponse } from "./types.js";
import { FACTOR_ORDER } from "./types.js";

export const DEFAULT_SLIDERS: Record<FactorName, number> = {
  skill: 0.35,
  experience: 0.25,
  location: 0.15,
  salary: 0.1,
  semantic: 0.1,
  company: 0.05,
};

export class RequestSequencer {
  private issued = 0;
  private accepted = 0;

  /** Stamp a new outgoing request. */
  begin(): number {
    return ++this.issued;
  }

  /** True when `seq` answers the latest request; marks it rendered. */
  accept(seq: number): boolean {
    if (seq !== this.issued) return false;
    this.accepted = seq;
    return true;
  }

  get latestIssued(): number {
    return this.issued;
  }

  get lastAccepted(): number {
    return this.accepted;
  }
}

export class UiState {
  profileId: string | null = null;
  query = "";
  sliders: Record<FactorName, number> = { ...DEFAULT_SLIDERS };
  latestResponse: SearchResponse | null = null;
  expandedExplanations = new Set<string>();
  graphFocus: string | null = null;
  graphRadius: 1 | 2 = 1;

  readonly sequencer = new RequestSequencer();

  /** Raw (unnormalized) weight vector for the next /search call. */
  weightVector(): Record<string, number> {
    const out: Record<string, number> = {};
    for (const f of FACTOR_ORDER) out[f] = this.sliders[f];
    return out;
  }

  setSlider(factor: FactorName, value: number): void {
    this.sliders[factor] = Math.max(0, value);
  }

  toggleExplanation(jobId: string): void {
    if (this.expandedExplanations.has(jobId)) {
      this.expandedExplanations.delete(jobId);
    } else {
      this.expandedExplanations.add(jobId);
    }
  }

  /** RELATED_TO edges (as sorted "a|b" keys) that carried skill-path
   * evidence in the latest results; the graph view highlights them. */
  contributedEdgeKeys(): Set<string> {
    const keys = new Set<string>();
    const results = this.latestResponse?.results ?? [];
    for (const entry of results) {
      const evidence = entry.factors?.skill.evidence;
      const paths = (evidence?.paths ?? []) as { nodes: string[] }[];
      for (const path of paths) {
        for (let i = 0; i + 1 < path.nodes.length; i++) {
          keys.add(edgeKey(path.nodes[i]!, path.nodes[i + 1]!));
        }
      }
    }
    return keys;
  }
}

export function edgeKey(a: string, b: string): string {
  return a < b ? `${a}|${b}` : `${b}|${a}`;
}
