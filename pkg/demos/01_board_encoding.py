"""Board geometry and the binary encoding.

The MoonBoard 2017 layout is an 11x18 grid (columns A..K, rows 1..18 from
the floor). A route is just a set of occupied cells, which we pack into a
198-bit vector, row-major from the bottom-left corner.
"""

from pathlib import Path

import routegen as rg

REPO_ROOT = Path(__file__).resolve().parent.parent

# position labels <-> coordinates
for label in ("A1", "K18", "F7"):
    coord = rg.parse_position(label)
    print(f"{label} -> col {coord.col}, row {coord.row} -> bit {rg.coord_to_index(coord)}")

# the top row occupies the last 11 bits, which keeps finish-hold checks cheap
top_row_bits = [rg.coord_to_index(rg.GridCoord(col, 17)) for col in range(11)]
print("top-row bit indices:", top_row_bits)

# a problem round-trips through its vector
sample = rg.load_corpus(REPO_ROOT / "data" / "sample_corpus.jsonl")
problem = sample[1]
print(f"\n{problem.name} ({problem.grade}), {problem.hold_count} holds")
bits = rg.problem_to_vector(problem)
print("popcount:", int(bits.sum()), "— equals the hold count")

back = rg.vector_to_problem(bits, name=problem.name)
assert set(back.coords) == set(problem.coords)
print("round trip recovers the same cells; roles are re-inferred from rows:")
for coord, role in back.holds:
    print(f"  {coord.label:>3} -> {role.value}")

print("\n" + rg.render_ascii(problem))
