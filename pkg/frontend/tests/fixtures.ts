// Fixture server: canned API responses plus a fetch stub that routes by URL
// and records every request the UI makes.

import type {
  BoardResponse,
  BoardRow,
  Column,
  ErrorBoardResponse,
  PhaseListResponse,
} from "../src/types.js";

export const COLUMNS: Column[] = [
  {
    name: "clean_acc", display_name: "Clean Acc", min: 0, max: 1, threshold: 0.8,
    higher_is_better: true, visible_by_default: true,
  },
  {
    name: "mean_l2", display_name: "Mean L2", min: 0, max: 2.4, threshold: 1.2,
    higher_is_better: false, visible_by_default: true,
  },
  {
    name: "queries", display_name: "Queries", min: 0, max: 5000, threshold: 2500,
    higher_is_better: false, visible_by_default: false,
  },
  {
    name: "overall_score", display_name: "Overall", min: 0, max: 1, threshold: 0.5,
    higher_is_better: true, visible_by_default: true,
  },
];

function row(submitter: string, display: string, id: number, ts: number, overall: number): BoardRow {
  return {
    submitter_id: submitter,
    display_name: display,
    submission_id: id,
    eval_timestamp: ts,
    metrics: { clean_acc: 1.0, mean_l2: 1.2, queries: 0, overall_score: overall },
    colors: {
      clean_acc: { band: "green", intensity: 1.0, valid: true },
      mean_l2: { band: "neutral", intensity: 0.0, valid: true },
      queries: { band: "green", intensity: 1.0, valid: true },
      overall_score: { band: overall >= 0.5 ? "green" : "red", intensity: Math.abs(overall - 0.5) * 2, valid: true },
    },
  };
}

export const PHASES: PhaseListResponse = {
  phases: [
    { name: "attack", kind: "attack", deadline: 2e9, submissions: 6, evaluations: 5, errors: 1 },
    { name: "defense", kind: "defense", deadline: 2e9, submissions: 1, evaluations: 1, errors: 0 },
  ],
};

export const DEFAULT_BOARD: BoardResponse = {
  phase: "attack",
  columns: COLUMNS,
  rows: [
    row("bob", "Bob", 5, 500.0, 0.9),
    row("alice", "Alice", 3, 300.0, 0.5),
    row("ali-team", "ALI-team", 2, 200.0, 0.2),
  ],
};

export const SORTED_ASC_BOARD: BoardResponse = {
  phase: "attack",
  columns: COLUMNS,
  rows: [...DEFAULT_BOARD.rows].reverse(),
};

export const SEARCH_BOARD: BoardResponse = {
  phase: "attack",
  columns: COLUMNS,
  rows: DEFAULT_BOARD.rows.filter((r) => r.submitter_id !== "bob"),
};

export const HISTORY_BOARD: BoardResponse = {
  phase: "attack",
  columns: COLUMNS,
  rows: [
    row("alice", "Alice", 1, 100.0, 0.2),
    row("alice", "Alice", 2, 200.0, 0.4),
    row("alice", "Alice", 3, 300.0, 0.5),
  ],
};

export const ERRORS: ErrorBoardResponse = {
  phase: "attack",
  rows: [
    {
      submitter_id: "carol", display_name: "Carol", submission_id: 6,
      eval_timestamp: 600.0, category: "crash", message: "exited with status 3",
    },
  ],
};

export interface FixtureServer {
  requests: string[];
  fetch: typeof fetch;
}

export function fixtureServer(): FixtureServer {
  const requests: string[] = [];
  const respond = (doc: unknown) =>
    new Response(JSON.stringify(doc), { status: 200, headers: { "content-type": "application/json" } });
  const stub = (async (input: RequestInfo | URL) => {
    const url = String(input);
    requests.push(url);
    if (url.startsWith("/api/phases")) return respond(PHASES);
    if (url.includes("/history/alice")) return respond(HISTORY_BOARD);
    if (url.includes("/errors")) return respond(ERRORS);
    if (url.includes("dir=asc")) return respond(SORTED_ASC_BOARD);
    if (url.includes("search=ali")) return respond(SEARCH_BOARD);
    if (url.startsWith("/api/boards/attack")) return respond(DEFAULT_BOARD);
    return new Response("not found", { status: 404 });
  }) as typeof fetch;
  return { requests, fetch: stub };
}
