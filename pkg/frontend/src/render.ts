/** DOM builders for every view. All data lands via textContent, and every
 * number from the API is displayed through verbatim() — the UI never
 * reformats, rounds, or recomputes a score.
 */

import type {
  FactorDetail,
  ProfileResponse,
  ResultEntry,
  SearchResponse,
} from "./types.js";
import { FACTOR_ORDER } from "./types.js";

/** The one way a server number becomes screen text. */
export function verbatim(value: number | null | undefined): string {
  return value === null || value === undefined ? "—" : String(value);
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderBanner(host: HTMLElement, message: string): HTMLElement {
  const banner = el("div", "banner");
  banner.setAttribute("role", "alert");
  banner.append(el("span", "banner-text", message));
  const dismiss = el("button", "banner-dismiss", "dismiss");
  dismiss.addEventListener("click", () => banner.remove());
  banner.append(dismiss);
  host.append(banner);
  return banner;
}

export function renderProfileCard(
  host: HTMLElement,
  response: ProfileResponse,
): void {
  host.replaceChildren();
  const card = el("div", "profile-card");
  const p = response.profile;
  card.append(el("h3", "profile-name", response.name || "Unnamed candidate"));
  const list = el("dl", "profile-fields");
  const row = (label: string, value: string) => {
    list.append(el("dt", undefined, label), el("dd", undefined, value));
  };
  row("profile id", response.profile_id);
  row("skills", p.skills.length ? p.skills.join(", ") : "none recognized");
  row("experience", p.experience_level);
  row("years", verbatim(p.years_experience));
  row("education", p.education);
  row("salary expectation", verbatim(p.salary_expectation));
  row("remote preference", p.remote_preference ? "yes" : "no");
  card.append(list);
  card.append(
    el(
      "p",
      "profile-hint",
      "Check the extracted profile above, then run a search with it.",
    ),
  );
  host.append(card);
}

function factorRow(name: string, detail: FactorDetail): HTMLElement {
  const li = el("li", "factor");
  li.dataset.factor = name;
  li.append(el("span", "factor-name", name));
  const bar = el("span", "factor-bar");
  const fill = el("span", "factor-fill");
  // Bar length reuses the server's phi directly (the stylesheet multiplies
  // the custom property by 100%); no client arithmetic.
  fill.style.setProperty("--phi", verbatim(detail.phi));
  bar.append(fill);
  li.append(bar);
  li.append(el("span", "factor-value", verbatim(detail.phi)));
  li.append(el("span", "factor-weight", verbatim(detail.weight)));
  li.append(el("span", "factor-contribution", verbatim(detail.contribution)));
  return li;
}

function explanationPanel(entry: ResultEntry): HTMLElement {
  const panel = el("section", "explanation");
  const ex = entry.explanation;
  if (!ex) {
    panel.append(el("p", "narrative", "No explanation was requested."));
    return panel;
  }
  panel.append(el("p", "narrative", ex.narrative));
  const mentions = el("ul", "mentions");
  for (const m of ex.structured) {
    const li = el("li", `mention tag-${m.tag}`);
    li.dataset.factor = m.factor;
    li.append(el("span", "mention-factor", m.factor));
    li.append(el("span", "mention-tag", m.tag));
    li.append(el("span", "mention-phi", verbatim(m.phi)));
    li.append(el("span", "mention-claims", JSON.stringify(m.claims)));
    mentions.append(li);
  }
  panel.append(mentions);
  const audit = el("div", "audit");
  for (const c of ["c1", "c2", "c3"] as const) {
    audit.append(
      el("span", `audit-check ${ex.audit[c] ? "pass" : "fail"}`, `${c} ${ex.audit[c] ? "✓" : "✗"}`),
    );
  }
  panel.append(audit);
  return panel;
}

function locationText(entry: ResultEntry): string {
  const parts: string[] = [];
  const { city, state, remote_allowed } = entry.location;
  if (city || state) parts.push([city, state].filter(Boolean).join(", "));
  if (remote_allowed) parts.push("remote ok");
  return parts.length ? parts.join(" · ") : "location unlisted";
}

function salaryText(entry: ResultEntry): string {
  if (entry.salary_min === null && entry.salary_max === null) {
    return "salary unlisted";
  }
  return `${verbatim(entry.salary_min)} – ${verbatim(entry.salary_max)}`;
}

export interface ResultHandlers {
  onToggleExplanation(jobId: string): void;
}

function resultCard(
  entry: ResultEntry,
  expanded: boolean,
  handlers: ResultHandlers,
): HTMLElement {
  const card = el("article", "result-card");
  card.dataset.jobId = entry.job_id;

  const header = el("header", "result-header");
  header.append(el("span", "result-rank", verbatim(entry.rank)));
  header.append(el("h3", "result-title", entry.title || entry.job_id));
  if (entry.company.name) {
    header.append(el("span", "result-company", entry.company.name));
  }
  if (entry.match_percentage !== undefined) {
    const match = el("span", "result-match", `${verbatim(entry.match_percentage)}%`);
    match.dataset.value = verbatim(entry.match_percentage);
    header.append(match);
  }
  card.append(header);

  card.append(
    el(
      "p",
      "result-meta",
      `${locationText(entry)} · ${entry.seniority} · ${salaryText(entry)}`,
    ),
  );

  if (entry.factors) {
    const factors = el("ul", "factors");
    for (const f of FACTOR_ORDER) factors.append(factorRow(f, entry.factors[f]));
    card.append(factors);
  }

  const toggle = el("button", "explain-toggle", expanded ? "Hide explanation" : "Why this match?");
  toggle.addEventListener("click", () => handlers.onToggleExplanation(entry.job_id));
  card.append(toggle);
  if (expanded) card.append(explanationPanel(entry));
  return card;
}

export function renderResults(
  host: HTMLElement,
  response: SearchResponse,
  expandedIds: ReadonlySet<string>,
  handlers: ResultHandlers,
): void {
  host.replaceChildren();
  if (response.results.length === 0) {
    host.append(el("p", "no-results", "No postings matched."));
    return;
  }
  for (const entry of response.results) {
    host.append(resultCard(entry, expandedIds.has(entry.job_id), handlers));
  }
}

/** The renormalized weights the server actually used, echoed verbatim. */
export function renderWeightsEcho(host: HTMLElement, response: SearchResponse): void {
  host.replaceChildren();
  for (const f of FACTOR_ORDER) {
    const chip = el("span", "weight-chip");
    chip.dataset.factor = f;
    chip.append(el("span", "weight-chip-name", f));
    chip.append(el("span", "weight-chip-value", verbatim(response.weights[f])));
    host.append(chip);
  }
}

export function renderDiagnostics(host: HTMLElement, response: SearchResponse): void {
  host.replaceChildren();
  const d = response.diagnostics;
  const hits = Object.entries(d.channel_hits)
    .map(([ch, n]) => `${ch} ${verbatim(n)}`)
    .join(", ");
  host.append(
    el(
      "p",
      "diagnostics-line",
      `${verbatim(d.returned)} shown of ${verbatim(d.filtered_candidates)} eligible ` +
        `(${verbatim(d.fused_candidates)} fused; channel hits: ${hits})`,
    ),
  );
  for (const warning of d.warnings) {
    host.append(el("p", "diagnostics-warning", warning));
  }
}
