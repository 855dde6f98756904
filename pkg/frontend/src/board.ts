/** Pure board view-model: turns a service candidate into grid cells and
 * SVG markup. The UI never computes holds itself; every circle drawn here
 * comes verbatim from the service's `holds` field. */

import type { Candidate, Report, Role } from "./types.js";

export const COLS = 11;
export const ROWS = 18;
export const COLUMN_LETTERS = "ABCDEFGHIJK";

export const ROLE_COLORS: Record<Role, string> = {
  start: "#2ea043",
  mid: "#1f6feb",
  finish: "#f85149",
};

export interface Cell {
  col: number; // 0..10, A..K
  row: number; // 0..17, bottom row = 0
}

/** Parse a position label like "B7" (column letter, 1-based row). */
export function parseLabel(pos: string): Cell {
  const m = /^([A-K])(1[0-8]|[1-9])$/.exec(pos);
  if (!m) throw new Error(`bad position label: ${pos}`);
  return { col: COLUMN_LETTERS.indexOf(m[1]), row: parseInt(m[2], 10) - 1 };
}

/** Map "col,row" -> role for every hold of the candidate. */
export function cellRoles(candidate: Candidate | null): Map<string, Role> {
  const out = new Map<string, Role>();
  if (!candidate) return out;
  for (const hold of candidate.holds) {
    const { col, row } = parseLabel(hold.pos);
    out.set(`${col},${row}`, hold.role);
  }
  return out;
}

/** The hold set as position labels, for fidelity checks and exports. */
export function holdSet(candidate: Candidate | null): Set<string> {
  return new Set((candidate?.holds ?? []).map((h) => h.pos));
}

/** Human-readable badges for every failed validity rule. */
export function failedRules(candidate: Candidate | null): string[] {
  if (!candidate) return [];
  const report: Report = candidate.report;
  const badges: string[] = [];
  if (!report.min_holds_ok) badges.push("too few holds");
  if (!report.finish_ok) {
    const finishes = candidate.holds.filter((h) => parseLabel(h.pos).row === ROWS - 1);
    badges.push(finishes.length === 0 ? "missing finish hold" : "too many finish holds");
  }
  if (!report.start_ok) badges.push("missing start hold");
  if (!report.reachable_ok) badges.push("finish unreachable");
  if (report.duplicate_of) badges.push(`duplicate of ${report.duplicate_of}`);
  return badges;
}

const CELL = 34;
const MARGIN = 28;

/** SVG markup for the board. Circles correspond one-to-one with the
 * candidate's holds; an empty candidate renders the bare grid. */
export function boardSvg(candidate: Candidate | null): string {
  const width = MARGIN + COLS * CELL + 8;
  const height = 12 + ROWS * CELL + MARGIN;
  const x = (col: number) => MARGIN + (col + 0.5) * CELL;
  const y = (row: number) => 12 + (ROWS - 1 - row + 0.5) * CELL;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">`,
    `<rect x="${MARGIN}" y="12" width="${COLS * CELL}" height="${ROWS * CELL}" fill="#f6f8fa" stroke="#57606a"/>`,
  ];
  for (let row = 0; row < ROWS; row++) {
    for (let col = 0; col < COLS; col++) {
      parts.push(
        `<rect x="${MARGIN + col * CELL}" y="${12 + (ROWS - 1 - row) * CELL}" ` +
          `width="${CELL}" height="${CELL}" fill="none" stroke="#d8dee4"/>`,
      );
    }
  }
  for (let col = 0; col < COLS; col++) {
    parts.push(
      `<text x="${x(col)}" y="${height - 8}" text-anchor="middle" font-size="12" ` +
        `fill="#57606a">${COLUMN_LETTERS[col]}</text>`,
    );
  }
  for (let row = 0; row < ROWS; row++) {
    parts.push(
      `<text x="${MARGIN - 6}" y="${y(row) + 4}" text-anchor="end" font-size="11" ` +
        `fill="#57606a">${row + 1}</text>`,
    );
  }
  for (const [key, role] of cellRoles(candidate)) {
    const [col, row] = key.split(",").map(Number);
    parts.push(
      `<circle cx="${x(col)}" cy="${y(row)}" r="${CELL * 0.38}" fill="none" ` +
        `stroke="${ROLE_COLORS[role]}" stroke-width="3" data-pos="${COLUMN_LETTERS[col]}${row + 1}"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Positions of the circles present in rendered SVG markup (test hook). */
export function circledPositions(svg: string): Set<string> {
  const out = new Set<string>();
  const re = /data-pos="([A-K]\d{1,2})"/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(svg)) !== null) out.add(m[1]);
  return out;
}
