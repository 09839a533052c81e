/** Application wiring: one page, four panels (onboarding, search + sliders,
 * ranked results, graph), one backend.
 *
 * Ranking truth lives entirely on the server. Slider moves are debounced
 * into POST /search with the raw weight vector; each request carries a
 * sequence number and only the answer to the newest request is rendered,
 * so stale responses can never overwrite fresher rankings.
 */

import type { Api } from "./api.js";
import { debounce, type Debounced } from "./debounce.js";
import {
  renderBanner,
  renderDiagnostics,
  renderProfileCard,
  renderResults,
  renderWeightsEcho,
} from "./render.js";
import { renderNeighborhood } from "./graphview.js";
import { UiState } from "./state.js";
import type { FactorName, NeighborhoodResponse, SearchRequestBody } from "./types.js";
import { FACTOR_ORDER } from "./types.js";

const SKELETON = `
  <div id="banners"></div>
  <section class="panel" id="onboarding-panel">
    <h2>Resume onboarding</h2>
    <textarea id="resume-text" rows="6"
      placeholder="Paste resume text; skills, level, and preferences are extracted for you."></textarea>
    <button id="resume-submit">Extract profile</button>
    <div id="profile-view"></div>
  </section>
  <section class="panel" id="search-panel">
    <h2>Search</h2>
    <div class="search-row">
      <input id="query-input" type="text" placeholder="e.g. kubernetes platform engineer" />
      <button id="search-button">Search</button>
    </div>
    <div id="sliders"></div>
    <div id="weights-echo" title="Weights the server actually applied"></div>
  </section>
  <section class="panel" id="results-panel">
    <h2>Results</h2>
    <div id="results"></div>
    <div id="diagnostics"></div>
  </section>
  <section class="panel" id="graph-panel">
    <h2>Skill neighborhood</h2>
    <div class="graph-controls">
      <input id="graph-focus" type="text" placeholder="skill, e.g. kubernetes" />
      <select id="graph-radius">
        <option value="1" selected>1 hop</option>
        <option value="2">2 hops</option>
      </select>
      <button id="graph-load">Show</button>
    </div>
    <div id="graph-canvas-host"></div>
  </section>
`;

export interface AppOptions {
  debounceMs?: number;
  pageSize?: number;
}

export interface AppHandles {
  state: UiState;
  /** Immediate search (explicit user action; cancels any pending debounce). */
  searchNow(): void;
  root: HTMLElement;
}

function sliderRow(factor: FactorName, value: number): HTMLElement {
  const row = document.createElement("label");
  row.className = "slider-row";
  row.dataset.factor = factor;
  const name = document.createElement("span");
  name.className = "slider-name";
  name.textContent = factor;
  const input = document.createElement("input");
  input.type = "range";
  input.className = "slider";
  input.min = "0";
  input.max = "1";
  input.step = "0.01";
  input.value = String(value);
  input.dataset.factor = factor;
  const echo = document.createElement("span");
  echo.className = "slider-raw";
  echo.dataset.factor = factor;
  echo.textContent = input.value;
  row.append(name, input, echo);
  return row;
}

export function mountApp(root: HTMLElement, api: Api, options: AppOptions = {}): AppHandles {
  const debounceMs = options.debounceMs ?? 150;
  const pageSize = options.pageSize ?? 10;
  const state = new UiState();
  let lastNeighborhood: NeighborhoodResponse | null = null;

  root.innerHTML = SKELETON;
  const pick = <T extends HTMLElement>(selector: string): T => {
    const node = root.querySelector<T>(selector);
    if (!node) throw new Error(`missing element: ${selector}`);
    return node;
  };

  const banners = pick<HTMLDivElement>("#banners");
  const resumeText = pick<HTMLTextAreaElement>("#resume-text");
  const resumeSubmit = pick<HTMLButtonElement>("#resume-submit");
  const profileView = pick<HTMLDivElement>("#profile-view");
  const queryInput = pick<HTMLInputElement>("#query-input");
  const searchButton = pick<HTMLButtonElement>("#search-button");
  const slidersHost = pick<HTMLDivElement>("#sliders");
  const weightsEcho = pick<HTMLDivElement>("#weights-echo");
  const resultsHost = pick<HTMLDivElement>("#results");
  const diagnosticsHost = pick<HTMLDivElement>("#diagnostics");
  const graphFocus = pick<HTMLInputElement>("#graph-focus");
  const graphRadius = pick<HTMLSelectElement>("#graph-radius");
  const graphLoad = pick<HTMLButtonElement>("#graph-load");
  const graphHost = pick<HTMLDivElement>("#graph-canvas-host");

  const fail = (err: unknown) => {
    renderBanner(banners, err instanceof Error ? err.message : String(err));
  };

  const redrawGraph = () => {
    if (lastNeighborhood) {
      renderNeighborhood(graphHost, lastNeighborhood, state.contributedEdgeKeys());
    }
  };

  const redrawResults = () => {
    if (!state.latestResponse) return;
    renderResults(resultsHost, state.latestResponse, state.expandedExplanations, {
      onToggleExplanation(jobId) {
        state.toggleExplanation(jobId);
        redrawResults();
      },
    });
    renderWeightsEcho(weightsEcho, state.latestResponse);
    renderDiagnostics(diagnosticsHost, state.latestResponse);
  };

  const searchNow = () => {
    state.query = queryInput.value.trim();
    if (!state.query && !state.profileId) return;
    const body: SearchRequestBody = {
      k: pageSize,
      weights: state.weightVector(),
      rerank: true,
      explain: true,
    };
    if (state.query) body.query = state.query;
    if (state.profileId) body.profile_id = state.profileId;
    const seq = state.sequencer.begin();
    api.search(body).then(
      (response) => {
        if (!state.sequencer.accept(seq)) return;
        state.latestResponse = response;
        redrawResults();
        redrawGraph();
      },
      (err) => {
        if (!state.sequencer.accept(seq)) return;
        fail(err);
      },
    );
  };

  const debouncedSearch: Debounced<[]> = debounce(searchNow, debounceMs);

  for (const factor of FACTOR_ORDER) {
    slidersHost.append(sliderRow(factor, state.sliders[factor]));
  }
  slidersHost.addEventListener("input", (event) => {
    const input = event.target as HTMLInputElement;
    const factor = input.dataset.factor as FactorName | undefined;
    if (!factor || !FACTOR_ORDER.includes(factor)) return;
    state.setSlider(factor, Number(input.value));
    const echo = slidersHost.querySelector<HTMLElement>(`.slider-raw[data-factor="${factor}"]`);
    if (echo) echo.textContent = input.value;
    debouncedSearch();
  });

  searchButton.addEventListener("click", () => {
    debouncedSearch.cancel();
    searchNow();
  });
  queryInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      debouncedSearch.cancel();
      searchNow();
    }
  });

  resumeSubmit.addEventListener("click", () => {
    api.createProfile(resumeText.value).then((response) => {
      state.profileId = response.profile_id;
      renderProfileCard(profileView, response);
      const firstSkill = response.profile.skills[0];
      if (firstSkill && !graphFocus.value) graphFocus.value = firstSkill;
    }, fail);
  });

  graphLoad.addEventListener("click", () => {
    const skill = graphFocus.value.trim();
    if (!skill) return;
    state.graphFocus = skill;
    state.graphRadius = graphRadius.value === "2" ? 2 : 1;
    api.neighborhood(skill, state.graphRadius).then((neighborhood) => {
      lastNeighborhood = neighborhood;
      redrawGraph();
    }, fail);
  });

  return { state, searchNow, root };
}
