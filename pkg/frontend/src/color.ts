// Cell tinting from server-computed bands. Intensity 0 leaves the cell
// untinted; intensity 1 is the full tone. The alpha channel is capped so
// the numeric text keeps a readable contrast against the tint.

import type { ColorCell } from "./types.js";

const MAX_ALPHA = 0.8;
const GREEN = "34, 170, 68";
const RED = "221, 68, 51";

export function tintClass(cell: ColorCell | undefined): string {
  if (!cell || !cell.valid) return "tint-invalid";
  return `tint-${cell.band}`;
}

export function tintStyle(cell: ColorCell | undefined): string {
  if (!cell || !cell.valid || cell.band === "neutral" || cell.intensity <= 0) {
    return "";
  }
  const alpha = Math.min(1, Math.max(0, cell.intensity)) * MAX_ALPHA;
  const rgb = cell.band === "green" ? GREEN : RED;
  return `background-color: rgba(${rgb}, ${alpha.toFixed(3)})`;
}
