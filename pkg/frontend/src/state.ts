// View state <-> URL query string, so every view is deep-linkable and the
// whole UI state can be reconstructed from the address bar.

export interface ViewState {
  phase: string;
  tab: "board" | "errors";
  sort: string | null;
  dir: "asc" | "desc" | null;
  search: string;
  submitter: string | null; // non-null means history drill-down
  metrics: string[] | null; // null means server defaults
}

export function defaultState(phase: string): ViewState {
  return { phase, tab: "board", sort: null, dir: null, search: "", submitter: null, metrics: null };
}

export function encodeState(state: ViewState): string {
  const query = new URLSearchParams();
  query.set("phase", state.phase);
  if (state.tab !== "board") query.set("tab", state.tab);
  if (state.sort) query.set("sort", state.sort);
  if (state.dir) query.set("dir", state.dir);
  if (state.search) query.set("search", state.search);
  if (state.submitter) query.set("submitter", state.submitter);
  if (state.metrics !== null) query.set("metrics", state.metrics.join(","));
  return query.toString();
}

export function decodeState(queryString: string, fallbackPhase: string): ViewState {
  const query = new URLSearchParams(queryString);
  const dir = query.get("dir");
  const metrics = query.get("metrics");
  return {
    phase: query.get("phase") ?? fallbackPhase,
    tab: query.get("tab") === "errors" ? "errors" : "board",
    sort: query.get("sort"),
    dir: dir === "asc" || dir === "desc" ? dir : null,
    search: query.get("search") ?? "",
    submitter: query.get("submitter"),
    metrics: metrics === null ? null : metrics.split(",").filter((m) => m.length > 0),
  };
}

// Header-click semantics: first click sorts descending, repeat clicks toggle.
export function nextSort(state: ViewState, column: string): ViewState {
  if (state.sort === column) {
    return { ...state, dir: state.dir === "desc" ? "asc" : "desc" };
  }
  return { ...state, sort: column, dir: "desc" };
}
