"""Sample new routes from the latent prior and filter them by the rules.

Candidates are drawn by sampling the 16-dim latent space, decoding to
per-cell probabilities, and keeping the top-k cells where k is the
decoder's own expected hold count. Each candidate then passes through the
validity rules: enough holds, a finish on the top row, a start low down,
and start-to-finish reachability.
"""

import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import routegen as rg
from _common import OUT_DIR, ensure_demo_model

model, corpus = ensure_demo_model()

config = rg.GenConfig(count=50, seed=2024)
candidates = rg.generate_batch(model, corpus, config)

failures = Counter()
for c in candidates:
    r = c.report
    if not r.min_holds_ok:
        failures["too few holds"] += 1
    if not r.finish_ok:
        failures["finish hold missing/extra"] += 1
    if not r.start_ok:
        failures["start hold missing"] += 1
    if not r.reachable_ok:
        failures["finish unreachable"] += 1
    if r.duplicate_of:
        failures[f"duplicate of corpus route"] += 1

valid = [c for c in candidates if c.report.valid]
print(f"{len(valid)}/{len(candidates)} candidates pass every check")
for reason, n in failures.most_common():
    print(f"  {n:2d} failed: {reason}")

if valid:
    best = valid[0]
    print(f"\nfirst valid candidate ({best.problem.hold_count} holds):\n")
    print(rg.render_ascii(best.problem))
    svg_path = OUT_DIR / "candidate.svg"
    svg_path.write_text(rg.render_svg(best.problem), encoding="utf-8")
    print(f"\nSVG -> {svg_path}")

out_path = OUT_DIR / "generated.jsonl"
from routegen.generation import write_candidates
write_candidates(candidates, out_path)
print(f"all candidates (with latents and reports) -> {out_path}")
