"""Corpus ingestion, splitting, statistics, and synthetic fixtures.

Corpus files are UTF-8 JSON lines, one problem per line:

    {"name": "Crimp City", "grade": "6B+",
     "holds": [{"pos": "A5", "role": "start"}, {"pos": "C9", "role": "mid"}, ...]}

``grade`` is optional. Unknown extra keys (``latent``, ``report`` on
generated files) are ignored on load, so generated-route files round-trip
through the same loader.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .board import (
    COLS,
    GridCoord,
    HoldRole,
    Problem,
    START_ROW_LIMIT,
    TOP_ROW,
    parse_position,
)
from .errors import DegenerateSplit, DuplicateName, EmptyCorpus, ParseError, RouteGenError


@dataclass(frozen=True)
class Corpus:
    """An immutable list of problems with unique names."""

    problems: tuple[Problem, ...]
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "problems", tuple(self.problems))
        seen: set[str] = set()
        for p in self.problems:
            if p.name in seen:
                raise DuplicateName(f"duplicate problem name {p.name!r} in corpus {self.source!r}")
            seen.add(p.name)

    def __len__(self) -> int:
        return len(self.problems)

    def __iter__(self):
        return iter(self.problems)

    def __getitem__(self, i: int) -> Problem:
        return self.problems[i]


@dataclass(frozen=True)
class SplitSpec:
    """Train/test split parameters. ``test_fraction`` must lie in (0, 1)."""

    test_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.test_fraction < 1.0):
            raise DegenerateSplit(f"test_fraction must be in (0,1), got {self.test_fraction}")


def problem_from_record(obj: dict, line: int = 0) -> Problem:
    """Build a Problem from one decoded JSON record.

    Raises :class:`ParseError` carrying ``line`` on any malformed field.
    """
    try:
        name = obj["name"]
        if not isinstance(name, str) or not name:
            raise RouteGenError("field 'name' must be a non-empty string")
        grade = obj.get("grade")
        if grade is not None and not isinstance(grade, str):
            raise RouteGenError("field 'grade' must be a string when present")
        raw_holds = obj["holds"]
        if not isinstance(raw_holds, list):
            raise RouteGenError("field 'holds' must be a list")
        holds = []
        for h in raw_holds:
            holds.append((parse_position(h["pos"]), HoldRole.from_label(h["role"])))
        return Problem(name=name, holds=tuple(holds), grade=grade)
    except ParseError:
        raise
    except KeyError as e:
        raise ParseError(line, f"missing field {e.args[0]!r}") from None
    except RouteGenError as e:
        raise ParseError(line, str(e)) from None
    except TypeError as e:
        raise ParseError(line, f"malformed record: {e}") from None


def problem_to_record(problem: Problem) -> dict:
    rec: dict = {"name": problem.name}
    if problem.grade is not None:
        rec["grade"] = problem.grade
    rec["holds"] = [{"pos": c.label, "role": r.value} for c, r in problem.holds]
    return rec


def load_corpus(path: str | Path) -> Corpus:
    """Load a JSONL corpus file. Parse failures cite the 1-based line number."""
    path = Path(path)
    problems: list[Problem] = []
    names: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as e:
                raise ParseError(lineno, f"invalid JSON: {e.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(lineno, "record must be a JSON object")
            p = problem_from_record(obj, line=lineno)
            if p.name in names:
                raise DuplicateName(f"line {lineno}: duplicate problem name {p.name!r}")
            names.add(p.name)
            problems.append(p)
    return Corpus(problems=tuple(problems), source=str(path))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for p in corpus:
            fh.write(json.dumps(problem_to_record(p), sort_keys=True) + "\n")


def split_corpus(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Disjoint train/test partition, deterministic for a given seed.

    ``|test| = round(test_fraction * |corpus|)``. Raises
    :class:`DegenerateSplit` if rounding would leave the training half
    empty, and :class:`EmptyCorpus` on an empty input.
    """
    n = len(corpus)
    if n == 0:
        raise EmptyCorpus("cannot split an empty corpus")
    n_test = int(round(spec.test_fraction * n))
    if n - n_test < 1:
        raise DegenerateSplit(
            f"split would leave {n - n_test} training problems (n={n}, "
            f"test_fraction={spec.test_fraction})"
        )
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(n)
    test_idx = set(int(i) for i in perm[:n_test])
    train = [corpus[i] for i in range(n) if i not in test_idx]
    test = [corpus[i] for i in range(n) if i in test_idx]
    return (
        Corpus(problems=tuple(train), source=f"{corpus.source}#train"),
        Corpus(problems=tuple(test), source=f"{corpus.source}#test"),
    )


def synth_corpus(seed: int, n: int, name_prefix: str = "synth") -> Corpus:
    """Generate ``n`` deterministic synthetic problems for desk-scale tests.

    Each problem is a bottom-to-top chain of 6..12 holds: one start hold
    below row 7 (1-based), exactly one finish hold on the top row, and every
    consecutive pair within 5.0 grid units, so the whole corpus passes the
    validity rules out of the box.
    """
    if n < 1:
        raise EmptyCorpus(f"synthetic corpus needs n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    problems = []
    for i in range(n):
        m = int(rng.integers(6, 13))
        start_row = int(rng.integers(0, START_ROW_LIMIT))
        # Row gaps in [1, 4] summing to the full climb; combined with column
        # steps of at most 2 this keeps each move within sqrt(4^2 + 2^2) < 5.
        span = TOP_ROW - start_row
        steps = m - 1
        rows = [start_row]
        remaining = span
        for s in range(steps):
            left = steps - s - 1
            lo = max(1, remaining - 4 * left)
            hi = min(4, remaining - left)
            gap = int(rng.integers(lo, hi + 1))
            rows.append(rows[-1] + gap)
            remaining -= gap
        col = int(rng.integers(0, COLS))
        cols = [col]
        for _ in range(steps):
            col = int(np.clip(col + rng.integers(-2, 3), 0, COLS - 1))
            cols.append(col)
        holds = []
        for j, (r, c) in enumerate(zip(rows, cols)):
            if j == 0:
                role = HoldRole.START
            elif j == len(rows) - 1:
                role = HoldRole.FINISH
            else:
                role = HoldRole.MID
            holds.append((GridCoord(col=c, row=r), role))
        problems.append(Problem(name=f"{name_prefix}-{i + 1:04d}", holds=tuple(holds)))
    return Corpus(problems=tuple(problems), source=f"synth(seed={seed},n={n})")


@dataclass(frozen=True)
class CorpusStats:
    n_problems: int
    hold_count_min: int
    hold_count_mean: float
    hold_count_max: int
    hold_frequency: np.ndarray  # (198,) occupation frequency per cell
    grades: dict[str, int]


def corpus_stats(corpus: Corpus) -> CorpusStats:
    if len(corpus) == 0:
        raise EmptyCorpus("no statistics for an empty corpus")
    from .board import problem_to_vector

    vecs = np.stack([problem_to_vector(p) for p in corpus]).astype(np.float64)
    counts = vecs.sum(axis=1)
    grades: dict[str, int] = {}
    for p in corpus:
        if p.grade is not None:
            grades[p.grade] = grades.get(p.grade, 0) + 1
    return CorpusStats(
        n_problems=len(corpus),
        hold_count_min=int(counts.min()),
        hold_count_mean=float(counts.mean()),
        hold_count_max=int(counts.max()),
        hold_frequency=vecs.mean(axis=0),
        grades=grades,
    )
