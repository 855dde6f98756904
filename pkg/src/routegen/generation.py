"""Route generation: latent sampling, top-k hold selection, validity rules,
and duplicate detection.

The validity rules come from how generated routes actually fail in
practice: too few holds, no finish hold on the top row, no start hold low
enough, or a finish hold nobody can reach. Reachability is modeled as
graph connectivity: holds are nodes, and two holds are joined when their
Euclidean grid distance is at most ``reach_limit``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .board import (
    GridCoord,
    NUM_HOLDS,
    Problem,
    START_ROW_LIMIT,
    TOP_ROW,
    grid_distance,
    problem_to_vector,
    vector_to_problem,
)
from .data import Corpus, problem_to_record
from .errors import DataError, InvalidK
from .vae import VaeModel, decode

DEFAULT_MIN_HOLDS = 6
DEFAULT_REACH_LIMIT = 5.0
#: Hamming distance at or below which an existing problem is flagged as a
#: near-duplicate (informational only, never blocks).
NEAR_DUPLICATE_DISTANCE = 2


@dataclass(frozen=True)
class GenConfig:
    """Generation parameters.

    ``k_fixed=None`` selects as many holds as the decoder's expected count
    (the sum of output probabilities, rounded); a fixed integer overrides
    that per candidate.
    """

    count: int = 50
    seed: int = 0
    min_holds: int = DEFAULT_MIN_HOLDS
    k_fixed: int | None = None
    reach_limit: float = DEFAULT_REACH_LIMIT

    def __post_init__(self):
        if self.count < 1:
            raise DataError(f"count must be >= 1, got {self.count}")
        if self.min_holds < 2:
            raise DataError(f"min_holds must be >= 2, got {self.min_holds}")
        if self.reach_limit <= 0:
            raise DataError(f"reach_limit must be > 0, got {self.reach_limit}")
        if self.k_fixed is not None and not (1 <= self.k_fixed <= NUM_HOLDS):
            raise InvalidK(f"fixed k must lie in [1, {NUM_HOLDS}], got {self.k_fixed}")


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the four validity rules plus duplicate detection."""

    min_holds_ok: bool
    finish_ok: bool
    start_ok: bool
    reachable_ok: bool
    duplicate_of: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return (self.min_holds_ok and self.finish_ok and self.start_ok
                and self.reachable_ok and self.duplicate_of is None)

    def to_record(self) -> dict:
        return {
            "min_holds_ok": self.min_holds_ok,
            "finish_ok": self.finish_ok,
            "start_ok": self.start_ok,
            "reachable_ok": self.reachable_ok,
            "duplicate_of": self.duplicate_of,
            "valid": self.valid,
            "details": dict(self.details),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ValidationReport":
        return cls(
            min_holds_ok=bool(rec["min_holds_ok"]),
            finish_ok=bool(rec["finish_ok"]),
            start_ok=bool(rec["start_ok"]),
            reachable_ok=bool(rec["reachable_ok"]),
            duplicate_of=rec.get("duplicate_of"),
            details=dict(rec.get("details", {})),
        )


@dataclass(frozen=True)
class Candidate:
    """One generated route with its provenance: the latent vector that
    produced it, the decoder probabilities, and the validity report."""

    problem: Problem
    latent: np.ndarray
    probs: np.ndarray
    report: ValidationReport


def sample_latent(seed: int, index: int = 0, dim: int = 16) -> np.ndarray:
    """Standard-normal latent draw, addressed by ``(seed, index)``.

    Each index gets an independently seeded stream, so candidates can be
    produced in any order (or in parallel) with identical results.
    """
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    return rng.standard_normal(dim)


def select_holds(probs: np.ndarray, k: int) -> np.ndarray:
    """Binary vector marking exactly the ``k`` most probable cells.

    Ties break toward the lower index (stable sort on descending
    probability), so selection is fully deterministic.
    """
    probs = np.asarray(probs)
    if probs.shape != (NUM_HOLDS,):
        raise DataError(f"probs must have shape ({NUM_HOLDS},), got {probs.shape}")
    if not (1 <= k <= NUM_HOLDS):
        raise InvalidK(f"k must lie in [1, {NUM_HOLDS}], got {k}")
    order = np.argsort(-probs, kind="stable")
    bits = np.zeros(NUM_HOLDS, dtype=np.uint8)
    bits[order[:k]] = 1
    return bits


def choose_k(probs: np.ndarray, min_holds: int = DEFAULT_MIN_HOLDS,
             k_fixed: int | None = None) -> int:
    """Hold count for a decoded candidate.

    Expected-count mode rounds the sum of output probabilities (the
    decoder's own length estimate) and clamps to ``[min_holds, 198]``;
    fixed mode returns the override untouched.
    """
    if k_fixed is not None:
        if not (1 <= k_fixed <= NUM_HOLDS):
            raise InvalidK(f"fixed k must lie in [1, {NUM_HOLDS}], got {k_fixed}")
        return k_fixed
    expected = float(np.sum(probs))
    k = int(np.floor(expected + 0.5))
    return max(min_holds, min(k, NUM_HOLDS))


def _reach_components(coords: tuple[GridCoord, ...], reach_limit: float) -> bool:
    """True when some start-eligible hold reaches some top-row hold."""
    starts = [i for i, c in enumerate(coords) if c.row < START_ROW_LIMIT]
    finishes = {i for i, c in enumerate(coords) if c.row == TOP_ROW}
    if not starts or not finishes:
        return False
    n = len(coords)
    adjacency = [
        [j for j in range(n)
         if j != i and grid_distance(coords[i], coords[j]) <= reach_limit]
        for i in range(n)
    ]
    seen = set(starts)
    frontier = list(starts)
    while frontier:
        i = frontier.pop()
        if i in finishes:
            return True
        for j in adjacency[i]:
            if j not in seen:
                seen.add(j)
                frontier.append(j)
    return bool(seen & finishes)


def validate_route(problem: Problem, min_holds: int = DEFAULT_MIN_HOLDS,
                   reach_limit: float = DEFAULT_REACH_LIMIT) -> ValidationReport:
    """Apply the four validity rules to a problem.

    * ``min_holds_ok``: at least ``min_holds`` holds.
    * ``finish_ok``: one or two holds on the top row.
    * ``start_ok``: at least one hold below row 7 (1-based).
    * ``reachable_ok``: a start-eligible hold reaches a top-row hold through
      moves of at most ``reach_limit`` grid units.
    """
    coords = problem.coords
    n_finish = sum(1 for c in coords if c.row == TOP_ROW)
    n_start = sum(1 for c in coords if c.row < START_ROW_LIMIT)
    min_holds_ok = len(coords) >= min_holds
    finish_ok = n_finish in (1, 2)
    start_ok = n_start >= 1
    reachable_ok = _reach_components(coords, reach_limit)
    details = {
        "min_holds": f"{len(coords)} holds (need >= {min_holds})",
        "finish": f"{n_finish} hold(s) on the top row (need 1 or 2)",
        "start": f"{n_start} hold(s) below row {START_ROW_LIMIT + 1}",
        "reachable": (
            f"start-to-finish {'connected' if reachable_ok else 'not connected'} "
            f"at reach {reach_limit:g}"
        ),
    }
    return ValidationReport(
        min_holds_ok=min_holds_ok,
        finish_ok=finish_ok,
        start_ok=start_ok,
        reachable_ok=reachable_ok,
        details=details,
    )


def is_duplicate(problem: Problem, corpus: Corpus) -> str | None:
    """Name of the first corpus problem with the identical hold set.

    Roles are ignored; only the occupied cells matter.
    """
    target = frozenset(problem.coords)
    for existing in corpus:
        if frozenset(existing.coords) == target:
            return existing.name
    return None


def find_near_duplicates(problem: Problem, corpus: Corpus,
                         max_distance: int = NEAR_DUPLICATE_DISTANCE) -> list[tuple[str, int]]:
    """Corpus problems within ``max_distance`` Hamming bits (informational)."""
    bits = problem_to_vector(problem).astype(np.int16)
    hits = []
    for existing in corpus:
        d = int(np.sum(bits != problem_to_vector(existing)))
        if 0 < d <= max_distance:
            hits.append((existing.name, d))
    return hits


def generate_batch(model: VaeModel, corpus: Corpus | None,
                   config: GenConfig) -> list[Candidate]:
    """Sample ``config.count`` candidates from the latent prior.

    Each candidate records its latent vector (so the UI can replay or nudge
    it), the decoder probabilities, and a full validity report including
    duplicate checks against ``corpus`` when one is supplied. Deterministic
    for a given seed, independent of generation order.
    """
    out: list[Candidate] = []
    for i in range(config.count):
        z = sample_latent(config.seed, i, dim=model.latent_dim)
        probs = decode(model, z)
        k = choose_k(probs, min_holds=config.min_holds, k_fixed=config.k_fixed)
        bits = select_holds(probs, k)
        problem = vector_to_problem(bits, name=f"gen-{config.seed}-{i + 1:04d}")
        report = validate_route(problem, min_holds=config.min_holds,
                                reach_limit=config.reach_limit)
        if corpus is not None and len(corpus) > 0:
            dup = is_duplicate(problem, corpus)
            details = dict(report.details)
            if dup is not None:
                details["duplicate"] = f"identical hold set to {dup!r}"
            else:
                near = find_near_duplicates(problem, corpus)
                if near:
                    name, d = near[0]
                    details["duplicate"] = f"near duplicate of {name!r} ({d} bits)"
            report = ValidationReport(
                min_holds_ok=report.min_holds_ok,
                finish_ok=report.finish_ok,
                start_ok=report.start_ok,
                reachable_ok=report.reachable_ok,
                duplicate_of=dup,
                details=details,
            )
        out.append(Candidate(problem=problem, latent=z, probs=probs, report=report))
    return out


def candidate_to_record(candidate: Candidate) -> dict:
    """Corpus-format record extended with ``latent`` and ``report`` fields."""
    rec = problem_to_record(candidate.problem)
    rec["latent"] = [float(v) for v in candidate.latent]
    rec["report"] = candidate.report.to_record()
    return rec


def write_candidates(candidates: list[Candidate], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for c in candidates:
            fh.write(json.dumps(candidate_to_record(c), sort_keys=True) + "\n")
