/** Export pinned candidates in the corpus JSONL format (with the extra
 * `latent` and `report` fields the generator CLI writes), so an export can
 * be re-validated or re-rendered with the command-line tools. */

import type { Candidate } from "./types.js";

export function exportJsonl(pinned: readonly Candidate[]): string {
  return pinned
    .map((candidate, i) =>
      JSON.stringify({
        name: `pinned-${String(i + 1).padStart(4, "0")}`,
        holds: candidate.holds,
        latent: candidate.latent,
        report: candidate.report,
      }),
    )
    .join("\n") + "\n";
}

export function exportFilename(): string {
  return "pinned-routes.jsonl";
}
