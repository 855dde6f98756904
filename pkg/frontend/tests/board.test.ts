import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  boardSvg,
  cellRoles,
  circledPositions,
  failedRules,
  holdSet,
  parseLabel,
} from "../src/board.js";
import type { Candidate } from "../src/types.js";

function fixture(name: string): Candidate {
  const raw = readFileSync(join(__dirname, "fixtures", name), "utf-8");
  return JSON.parse(raw) as Candidate;
}

describe("parseLabel", () => {
  it("maps the corners", () => {
    expect(parseLabel("A1")).toEqual({ col: 0, row: 0 });
    expect(parseLabel("K18")).toEqual({ col: 10, row: 17 });
    expect(parseLabel("B7")).toEqual({ col: 1, row: 6 });
  });

  it("rejects labels off the board", () => {
    for (const bad of ["L3", "A19", "a5", "", "A0"]) {
      expect(() => parseLabel(bad)).toThrow();
    }
  });
});

describe("board rendering fidelity", () => {
  it("circles exactly the hold set of a recorded /decode response", () => {
    const candidate = fixture("decode_response.json");
    const expected = holdSet(candidate);
    expect(expected.size).toBe(candidate.holds.length);

    const circled = circledPositions(boardSvg(candidate));
    expect(circled).toEqual(expected);

    const roles = cellRoles(candidate);
    expect(roles.size).toBe(candidate.holds.length);
    for (const hold of candidate.holds) {
      const { col, row } = parseLabel(hold.pos);
      expect(roles.get(`${col},${row}`)).toBe(hold.role);
    }
  });

  it("renders a placeholder grid for an empty candidate", () => {
    const svg = boardSvg(null);
    expect(svg).toContain("<svg");
    expect(svg).not.toContain("<circle");
    expect(circledPositions(svg).size).toBe(0);
  });

  it("does not invent or drop holds on any fixture", () => {
    for (const name of ["decode_response.json", "missing_finish.json",
                        "valid_candidate.json"]) {
      const candidate = fixture(name);
      expect(circledPositions(boardSvg(candidate))).toEqual(holdSet(candidate));
    }
  });
});

describe("failedRules badges", () => {
  it("flags a missing finish hold", () => {
    const candidate = fixture("missing_finish.json");
    expect(candidate.report.finish_ok).toBe(false);
    expect(failedRules(candidate)).toContain("missing finish hold");
  });

  it("shows nothing for a fully valid candidate", () => {
    const candidate = fixture("valid_candidate.json");
    expect(candidate.report.valid).toBe(true);
    expect(failedRules(candidate)).toEqual([]);
  });

  it("is empty for the placeholder board", () => {
    expect(failedRules(null)).toEqual([]);
  });
});
