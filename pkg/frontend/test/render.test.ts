import { beforeEach, describe, expect, it, vi } from "vitest";

import {
  renderBanner,
  renderDiagnostics,
  renderProfileCard,
  renderResults,
  renderWeightsEcho,
  verbatim,
} from "../src/render.js";
import { FACTOR_ORDER } from "../src/types.js";
import { makeProfileResponse, makeResponse, makeResult } from "./fixtures.js";

let host: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  host = document.createElement("div");
  document.body.append(host);
});

const NO_HANDLERS = { onToggleExplanation: () => {} };

describe("verbatim", () => {
  it("is String() for numbers and a dash for missing values", () => {
    expect(verbatim(0.7070196678027063)).toBe("0.7070196678027063");
    expect(verbatim(0)).toBe("0");
    expect(verbatim(null)).toBe("—");
    expect(verbatim(undefined)).toBe("—");
  });
});

describe("renderResults", () => {
  it("renders cards in exactly the response order", () => {
    renderResults(host, makeResponse(["j3", "j1", "j2"]), new Set(), NO_HANDLERS);
    const ids = [...host.querySelectorAll<HTMLElement>(".result-card")].map(
      (c) => c.dataset.jobId,
    );
    expect(ids).toEqual(["j3", "j1", "j2"]);
  });

  it("displays every factor number verbatim from the payload", () => {
    const response = makeResponse(["j1"]);
    renderResults(host, response, new Set(), NO_HANDLERS);
    const entry = response.results[0]!;
    for (const f of FACTOR_ORDER) {
      const row = host.querySelector<HTMLElement>(`.factor[data-factor="${f}"]`)!;
      const detail = entry.factors![f];
      expect(row.querySelector(".factor-value")!.textContent).toBe(String(detail.phi));
      expect(row.querySelector(".factor-weight")!.textContent).toBe(String(detail.weight));
      expect(row.querySelector(".factor-contribution")!.textContent).toBe(
        String(detail.contribution),
      );
    }
  });

  it("never recomputes contribution from phi and weight", () => {
    const response = makeResponse(["j1"]);
    const skill = response.results[0]!.factors!.skill;
    // the fixture's contribution intentionally differs from phi * weight
    expect(skill.contribution).not.toBe(skill.phi * skill.weight);
    renderResults(host, response, new Set(), NO_HANDLERS);
    expect(
      host.querySelector(`.factor[data-factor="skill"] .factor-contribution`)!
        .textContent,
    ).toBe(String(skill.contribution));
  });

  it("shows the match percentage as sent", () => {
    renderResults(host, makeResponse(["j1"]), new Set(), NO_HANDLERS);
    const match = host.querySelector<HTMLElement>(".result-match")!;
    expect(match.textContent).toBe("71%");
    expect(match.dataset.value).toBe("71");
  });

  it("feeds factor bars the server value as an untouched custom property", () => {
    renderResults(host, makeResponse(["j1"]), new Set(), NO_HANDLERS);
    const fill = host.querySelector<HTMLElement>(
      `.factor[data-factor="semantic"] .factor-fill`,
    )!;
    expect(fill.style.getPropertyValue("--phi")).toBe("0.7070196678027063");
  });

  it("hides the explanation until its card is expanded", () => {
    const response = makeResponse(["j1", "j2"]);
    renderResults(host, response, new Set(), NO_HANDLERS);
    expect(host.querySelector(".explanation")).toBeNull();
    renderResults(host, response, new Set(["j2"]), NO_HANDLERS);
    const cards = [...host.querySelectorAll<HTMLElement>(".result-card")];
    expect(cards[0]!.querySelector(".explanation")).toBeNull();
    const panel = cards[1]!.querySelector(".explanation")!;
    expect(panel.querySelector(".narrative")!.textContent).toBe(
      response.results[1]!.explanation!.narrative,
    );
  });

  it("lists structured mentions with verbatim phi and claims", () => {
    const response = makeResponse(["j1"]);
    renderResults(host, response, new Set(["j1"]), NO_HANDLERS);
    const mentions = [...host.querySelectorAll<HTMLElement>(".mention")];
    const structured = response.results[0]!.explanation!.structured;
    expect(mentions.map((m) => m.dataset.factor)).toEqual(
      structured.map((m) => m.factor),
    );
    structured.forEach((m, i) => {
      expect(mentions[i]!.querySelector(".mention-phi")!.textContent).toBe(String(m.phi));
      expect(mentions[i]!.querySelector(".mention-claims")!.textContent).toBe(
        JSON.stringify(m.claims),
      );
    });
  });

  it("marks audit checks pass or fail", () => {
    const response = makeResponse(["j1"]);
    response.results[0]!.explanation!.audit = { c1: true, c2: false, c3: true };
    renderResults(host, response, new Set(["j1"]), NO_HANDLERS);
    const checks = [...host.querySelectorAll<HTMLElement>(".audit-check")];
    expect(checks.map((c) => c.classList.contains("pass"))).toEqual([true, false, true]);
  });

  it("invokes the toggle handler with the card's job id", () => {
    const onToggleExplanation = vi.fn();
    renderResults(host, makeResponse(["j1", "j2"]), new Set(), { onToggleExplanation });
    const buttons = host.querySelectorAll<HTMLButtonElement>(".explain-toggle");
    buttons[1]!.click();
    expect(onToggleExplanation).toHaveBeenCalledWith("j2");
  });

  it("renders fused-only entries without factor rows", () => {
    const response = makeResponse([]);
    const bare = makeResult("j9", 1);
    delete bare.factors;
    delete bare.explanation;
    delete bare.utility;
    delete bare.match_percentage;
    response.results = [bare];
    renderResults(host, response, new Set(), NO_HANDLERS);
    expect(host.querySelector(".result-card")).not.toBeNull();
    expect(host.querySelector(".factor")).toBeNull();
    expect(host.querySelector(".result-match")).toBeNull();
  });

  it("says so when nothing matched", () => {
    renderResults(host, makeResponse([]), new Set(), NO_HANDLERS);
    expect(host.querySelector(".no-results")!.textContent).toBe("No postings matched.");
  });

  it("labels unlisted salary and location", () => {
    const response = makeResponse([]);
    response.results = [
      makeResult("j1", 1, {
        salary_min: null,
        salary_max: null,
        location: { remote_allowed: true },
      }),
    ];
    renderResults(host, response, new Set(), NO_HANDLERS);
    const meta = host.querySelector(".result-meta")!.textContent!;
    expect(meta).toContain("salary unlisted");
    expect(meta).toContain("remote ok");
  });
});

describe("renderWeightsEcho", () => {
  it("echoes the server's renormalized weights verbatim", () => {
    const response = makeResponse(["j1"]);
    response.weights = {
      skill: 0.6666666666666666,
      experience: 0,
      location: 0,
      salary: 0.3333333333333333,
      semantic: 0,
      company: 0,
    };
    renderWeightsEcho(host, response);
    const chip = host.querySelector<HTMLElement>(`.weight-chip[data-factor="skill"]`)!;
    expect(chip.querySelector(".weight-chip-value")!.textContent).toBe(
      "0.6666666666666666",
    );
    expect(host.querySelectorAll(".weight-chip")).toHaveLength(6);
  });
});

describe("renderDiagnostics", () => {
  it("summarizes counts and surfaces warnings", () => {
    const response = makeResponse(["j1"]);
    response.diagnostics.warnings = ["graph channel disabled: no relations loaded"];
    renderDiagnostics(host, response);
    expect(host.querySelector(".diagnostics-line")!.textContent).toContain(
      "1 shown of 3 eligible",
    );
    expect(host.querySelector(".diagnostics-warning")!.textContent).toBe(
      "graph channel disabled: no relations loaded",
    );
  });
});

describe("renderProfileCard", () => {
  it("shows the extracted profile for verification", () => {
    renderProfileCard(host, makeProfileResponse());
    expect(host.querySelector(".profile-name")!.textContent).toBe("Jordan Avery");
    const text = host.querySelector(".profile-fields")!.textContent!;
    expect(text).toContain("docker, kubernetes");
    expect(text).toContain("senior");
    expect(text).toContain("8");
  });

  it("handles empty extraction gracefully", () => {
    const response = makeProfileResponse({ name: "" });
    response.profile.skills = [];
    response.profile.years_experience = null;
    renderProfileCard(host, response);
    expect(host.querySelector(".profile-name")!.textContent).toBe("Unnamed candidate");
    expect(host.querySelector(".profile-fields")!.textContent).toContain(
      "none recognized",
    );
  });
});

describe("renderBanner", () => {
  it("appends a dismissible alert", () => {
    renderBanner(host, "unknown skill: ghost-skill");
    const banner = host.querySelector(".banner")!;
    expect(banner.getAttribute("role")).toBe("alert");
    expect(banner.querySelector(".banner-text")!.textContent).toBe(
      "unknown skill: ghost-skill",
    );
    banner.querySelector<HTMLButtonElement>(".banner-dismiss")!.click();
    expect(host.querySelector(".banner")).toBeNull();
  });

  it("stacks multiple banners independently", () => {
    renderBanner(host, "first");
    renderBanner(host, "second");
    expect(host.querySelectorAll(".banner")).toHaveLength(2);
  });
});
