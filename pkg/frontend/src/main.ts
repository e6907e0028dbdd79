// Controller: phase tabs, board/error tabs, polling, search, history
// drill-down, metric dropdown. All data manipulation is server-delegated;
// this file only wires events to refetches and re-renders.

import { fetchBoard, fetchErrors, fetchHistory, fetchPhases } from "./api.js";
import { decodeState, defaultState, encodeState, nextSort, ViewState } from "./state.js";
import { renderBoard, renderErrors, renderMetricDropdown } from "./table.js";
import type { Phase } from "./types.js";

const POLL_INTERVAL_MS = 10_000;
const SEARCH_DEBOUNCE_MS = 250;

export class BoardApp {
  private state: ViewState;
  private phases: Phase[] = [];
  private fetchSerial = 0; // latest-wins: stale responses are dropped
  private metricsByPhase = new Map<string, string[] | null>();
  private searchTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(private root: HTMLElement) {
    this.state = decodeState(window.location.search.replace(/^\?/, ""), "attack");
  }

  async start(): Promise<void> {
    this.phases = (await fetchPhases()).phases;
    if (!this.phases.some((p) => p.name === this.state.phase) && this.phases.length > 0) {
      this.state = defaultState(this.phases[0].name);
    }
    this.buildChrome();
    await this.refresh();
    setInterval(() => void this.refresh(), POLL_INTERVAL_MS);
  }

  private setState(next: ViewState): void {
    this.state = next;
    const query = encodeState(next);
    window.history.replaceState(null, "", query ? `?${query}` : window.location.pathname);
    void this.refresh();
  }

  private buildChrome(): void {
    this.root.innerHTML = `
      <header>
        <h1>Maestro Leaderboard</h1>
        <nav class="phase-tabs"></nav>
      </header>
      <section class="controls">
        <nav class="view-tabs">
          <button data-tab="board" class="tab">Results</button>
          <button data-tab="errors" class="tab">Errors</button>
        </nav>
        <input type="search" class="search" placeholder="Search submitters" />
        <details class="metric-picker"><summary>Metrics</summary>
          <div class="metric-list"></div>
        </details>
        <a class="csv-link" download>CSV</a>
      </section>
      <div class="breadcrumb" hidden></div>
      <main class="table-host"></main>
    `;
    const tabs = this.root.querySelector(".phase-tabs") as HTMLElement;
    for (const phase of this.phases) {
      const button = document.createElement("button");
      button.className = "phase-tab";
      button.dataset.phase = phase.name;
      button.textContent = phase.name;
      button.addEventListener("click", () =>
        this.setState({ ...defaultState(phase.name), metrics: this.metricsByPhase.get(phase.name) ?? null })
      );
      tabs.appendChild(button);
    }
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".view-tabs .tab")) {
      button.addEventListener("click", () =>
        this.setState({ ...this.state, tab: button.dataset.tab === "errors" ? "errors" : "board" })
      );
    }
    const search = this.root.querySelector(".search") as HTMLInputElement;
    search.value = this.state.search;
    search.addEventListener("input", () => {
      if (this.searchTimer !== null) clearTimeout(this.searchTimer);
      this.searchTimer = setTimeout(
        () => this.setState({ ...this.state, search: search.value, submitter: null }),
        SEARCH_DEBOUNCE_MS
      );
    });
  }

  private async refresh(): Promise<void> {
    const serial = ++this.fetchSerial;
    const state = this.state;
    this.syncChrome(state);
    const host = this.root.querySelector(".table-host") as HTMLElement;
    try {
      if (state.tab === "errors") {
        const doc = await fetchErrors(state.phase, {
          sort: state.sort ?? undefined,
          dir: state.dir ?? undefined,
          search: state.search || undefined,
        });
        if (serial !== this.fetchSerial) return;
        renderErrors(host, doc.rows);
        return;
      }
      const doc = state.submitter
        ? await fetchHistory(state.phase, state.submitter)
        : await fetchBoard(state.phase, {
            sort: state.sort ?? undefined,
            dir: state.dir ?? undefined,
            search: state.search || undefined,
          });
      if (serial !== this.fetchSerial) return;
      renderBoard(host, doc, state.metrics, { key: state.sort, dir: state.dir ?? "desc" }, {
        onHeaderClick: (column) => this.setState(nextSort(this.state, column)),
        onNameClick: (submitterId) => this.setState({ ...this.state, submitter: submitterId }),
      });
      const picker = this.root.querySelector(".metric-list") as HTMLElement;
      renderMetricDropdown(picker, doc.columns, state.metrics, (selected) => {
        this.metricsByPhase.set(this.state.phase, selected);
        this.setState({ ...this.state, metrics: selected });
      });
    } catch (error) {
      if (serial !== this.fetchSerial) return;
      host.textContent = `Failed to load: ${String(error)}`;
    }
  }

  private syncChrome(state: ViewState): void {
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".phase-tab")) {
      button.classList.toggle("active", button.dataset.phase === state.phase);
    }
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".view-tabs .tab")) {
      button.classList.toggle("active", button.dataset.tab === state.tab);
    }
    const csv = this.root.querySelector(".csv-link") as HTMLAnchorElement;
    csv.href = `/api/boards/${encodeURIComponent(state.phase)}/csv`;
    const crumb = this.root.querySelector(".breadcrumb") as HTMLElement;
    if (state.submitter) {
      crumb.hidden = false;
      crumb.textContent = "";
      const back = document.createElement("a");
      back.href = "#";
      back.className = "breadcrumb-back";
      back.textContent = `← All submitters`;
      back.addEventListener("click", (event) => {
        event.preventDefault();
        this.setState({ ...this.state, submitter: null });
      });
      crumb.appendChild(back);
      crumb.appendChild(document.createTextNode(` / history of ${state.submitter}`));
    } else {
      crumb.hidden = true;
    }
  }
}

export function mount(): void {
  const root = document.getElementById("app");
  if (root) void new BoardApp(root).start();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount();
}
