// DOM rendering for the results board and the error board. Rows render in
// exactly the order the API returned them; values print verbatim.

import { tintClass, tintStyle } from "./color.js";
import type { BoardResponse, BoardRow, Column, ErrorRow } from "./types.js";

export interface TableCallbacks {
  onHeaderClick: (column: string) => void;
  onNameClick: (submitterId: string) => void;
}

function formatValue(value: number | null): string {
  if (value === null) return "";
  return Number.isInteger(value) ? String(value) : value.toFixed(6);
}

function formatTimestamp(ts: number): string {
  return ts.toFixed(3);
}

export function visibleColumns(columns: Column[], selected: string[] | null): Column[] {
  if (selected === null) {
    return columns.filter((c) => c.visible_by_default);
  }
  const wanted = new Set(selected);
  return columns.filter((c) => wanted.has(c.name));
}

export function renderBoard(
  container: HTMLElement,
  board: BoardResponse,
  selected: string[] | null,
  sort: { key: string | null; dir: string | null },
  callbacks: TableCallbacks
): void {
  const columns = visibleColumns(board.columns, selected);
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "board";
  const head = table.createTHead().insertRow();
  for (const base of ["submitter", "submission", "evaluated"]) {
    const th = document.createElement("th");
    th.textContent = base;
    if (base === "evaluated") {
      th.dataset.column = "eval_timestamp";
      th.classList.add("sortable");
      if (sort.key === "eval_timestamp" || sort.key === null) {
        th.textContent += sort.dir === "asc" ? " ▲" : " ▼";
      }
      th.addEventListener("click", () => callbacks.onHeaderClick("eval_timestamp"));
    }
    head.appendChild(th);
  }
  for (const column of columns) {
    const th = document.createElement("th");
    th.dataset.column = column.name;
    th.classList.add("sortable");
    th.textContent = column.display_name + (sort.key === column.name ? (sort.dir === "asc" ? " ▲" : " ▼") : "");
    th.addEventListener("click", () => callbacks.onHeaderClick(column.name));
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of board.rows) {
    body.appendChild(renderRow(row, columns, callbacks));
  }
  if (board.rows.length === 0) {
    const tr = body.insertRow();
    const td = tr.insertCell();
    td.colSpan = 3 + columns.length;
    td.className = "empty-state";
    td.textContent = "No matching rows";
  }
  container.appendChild(table);
}

function renderRow(row: BoardRow, columns: Column[], callbacks: TableCallbacks): HTMLTableRowElement {
  const tr = document.createElement("tr");
  tr.dataset.submitter = row.submitter_id;
  const name = tr.insertCell();
  const link = document.createElement("a");
  link.href = "#";
  link.className = "submitter-link";
  link.textContent = row.display_name;
  link.addEventListener("click", (event) => {
    event.preventDefault();
    callbacks.onNameClick(row.submitter_id);
  });
  name.appendChild(link);
  tr.insertCell().textContent = String(row.submission_id);
  tr.insertCell().textContent = formatTimestamp(row.eval_timestamp);
  for (const column of columns) {
    const td = tr.insertCell();
    const value = row.metrics[column.name] ?? null;
    const cell = row.colors[column.name];
    td.textContent = formatValue(value);
    td.dataset.metric = column.name;
    td.className = `cell ${tintClass(cell)}`;
    const style = tintStyle(cell);
    if (style) td.setAttribute("style", style);
    if (cell && !cell.valid) td.textContent = `⚠ ${td.textContent}`;
  }
  return tr;
}

export function renderErrors(container: HTMLElement, rows: ErrorRow[]): void {
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "board errors";
  const head = table.createTHead().insertRow();
  for (const label of ["submitter", "submission", "evaluated", "category", "message"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    tr.insertCell().textContent = row.display_name;
    tr.insertCell().textContent = String(row.submission_id);
    tr.insertCell().textContent = formatTimestamp(row.eval_timestamp);
    const category = tr.insertCell();
    category.textContent = row.category;
    category.className = `category category-${row.category}`;
    const message = tr.insertCell();
    message.textContent = row.message;
    message.className = "error-message";
  }
  if (rows.length === 0) {
    const tr = body.insertRow();
    const td = tr.insertCell();
    td.colSpan = 5;
    td.className = "empty-state";
    td.textContent = "No errors";
  }
  container.appendChild(table);
}

export function renderMetricDropdown(
  container: HTMLElement,
  columns: Column[],
  selected: string[] | null,
  onChange: (selected: string[]) => void
): void {
  container.textContent = "";
  const active = new Set(
    selected === null ? columns.filter((c) => c.visible_by_default).map((c) => c.name) : selected
  );
  for (const column of columns) {
    const label = document.createElement("label");
    label.className = "metric-option";
    const box = document.createElement("input");
    box.type = "checkbox";
    box.value = column.name;
    box.checked = active.has(column.name);
    box.addEventListener("change", () => {
      const next = new Set(active);
      if (box.checked) next.add(column.name);
      else next.delete(column.name);
      onChange(columns.filter((c) => next.has(c.name)).map((c) => c.name));
    });
    label.appendChild(box);
    label.appendChild(document.createTextNode(column.display_name));
    container.appendChild(label);
  }
}
