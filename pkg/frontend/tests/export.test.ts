import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { exportJsonl } from "../src/export.js";
import type { Candidate } from "../src/types.js";

function fixture(name: string): Candidate {
  return JSON.parse(readFileSync(join(__dirname, "fixtures", name), "utf-8"));
}

describe("exportJsonl", () => {
  it("writes one corpus-format line per pinned candidate", () => {
    const pinned = [
      fixture("valid_candidate.json"),
      fixture("decode_response.json"),
      fixture("missing_finish.json"),
    ];
    const text = exportJsonl(pinned);
    const lines = text.trimEnd().split("\n");
    expect(lines.length).toBe(3);
    lines.forEach((line, i) => {
      const rec = JSON.parse(line);
      expect(rec.name).toBe(`pinned-${String(i + 1).padStart(4, "0")}`);
      expect(rec.holds).toEqual(pinned[i].holds);
      expect(rec.latent).toEqual(pinned[i].latent);
      expect(rec.report).toEqual(pinned[i].report);
    });
    expect(text.endsWith("\n")).toBe(true);
  });

  it("keeps position labels and roles verbatim", () => {
    const candidate = fixture("valid_candidate.json");
    const rec = JSON.parse(exportJsonl([candidate]).trim());
    for (const hold of rec.holds) {
      expect(hold.pos).toMatch(/^[A-K](1[0-8]|[1-9])$/);
      expect(["start", "mid", "finish"]).toContain(hold.role);
    }
  });
});
