"""Membership-query learning of a target join over a predicate family.

The search walks the representative lattice top-down: each round queries
one witness per not-yet-eliminated immediate descendant of the current
candidate. An answer on the child's side intersects the candidate set with
the child; an answer on the parent's side eliminates the child's whole
downset. The round recurses on the shrunken candidate until a round ends
with no shrink.

The same state machine backs three drivers: blocking `learn` with a
Teacher, the re-entrant step/submit session used by the service, and
scripted replay.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    Assignment,
    Mode,
    PredSet,
    PredicateFamily,
    as_assignment,
    canon_set,
    check_mode,
    evaluate_set,
)
from .lattice import (
    GuardExceeded,
    Representative,
    all_imm_de,
    build_hasse,
    closure,
    find_witness,
)


class TeacherError(RuntimeError):
    """The teacher misbehaved: divergence, exhaustion, or non-bit answers."""


class ScriptedDivergence(TeacherError):
    """A scripted replay was asked something the script did not expect."""


class TargetNotInClass(TeacherError):
    """The transcript contradicts every function in the class."""


# ---------------------------------------------------------------------------
# teachers
# ---------------------------------------------------------------------------

class Teacher:
    def answer(self, a: Assignment) -> int:
        raise NotImplementedError


class SimulatedTeacher(Teacher):
    """Answers from a declared target set over the same family."""

    def __init__(self, family: PredicateFamily, target: PredSet, mode: Mode):
        check_mode(mode)
        self.family = family
        self.target = family.validate_set(target)
        self.mode = mode

    def answer(self, a: Assignment) -> int:
        return evaluate_set(self.family, self.target, a, self.mode)


class ScriptedTeacher(Teacher):
    """Replays a fixed answer sequence; fails loudly on divergence.

    Entries are either bare bits or (assignment, bit) pairs; when the
    assignment is present it must match the query exactly.
    """

    def __init__(self, entries: Sequence):
        self._entries = list(entries)
        self._pos = 0

    def answer(self, a: Assignment) -> int:
        if self._pos >= len(self._entries):
            raise ScriptedDivergence(f"script exhausted at query {a}")
        entry = self._entries[self._pos]
        self._pos += 1
        if isinstance(entry, (int, bool)):
            return int(entry)
        expect, bit = entry
        if tuple(expect) != tuple(a):
            raise ScriptedDivergence(
                f"script expected query {tuple(expect)} but the learner asked {tuple(a)}"
            )
        return int(bit)


class CallbackTeacher(Teacher):
    def __init__(self, fn):
        self._fn = fn

    def answer(self, a: Assignment) -> int:
        return int(self._fn(a))


# ---------------------------------------------------------------------------
# the round engine
# ---------------------------------------------------------------------------

@dataclass
class _Stats:
    rounds: int = 0
    max_de: int = 0
    candidate_size: int = 0


class _Eliminated:
    """Subset-query index over eliminated sets, as bitmasks."""

    def __init__(self):
        self._masks: list[int] = []

    @staticmethod
    def mask(s: PredSet) -> int:
        m = 0
        for i in s:
            m |= 1 << i
        return m

    def add(self, s: PredSet) -> None:
        self._masks.append(self.mask(s))

    def covers(self, s: PredSet) -> bool:
        m = self.mask(s)
        return any(m & ~r == 0 for r in self._masks)


def _query_rounds(family: PredicateFamily, mode: Mode, stats: _Stats):
    """Generator: yields query assignments, receives bits, returns the set."""
    act = 1 if mode == "or" else 0
    cur = closure(family, canon_set(range(family.size)), mode)
    eliminated = _Eliminated()
    stats.candidate_size = len(cur.members)
    while True:
        stats.rounds += 1
        if stats.rounds > family.size + 2:  # pragma: no cover
            raise AssertionError("round count exceeded the lattice height bound")
        children = all_imm_de(family, cur, mode)
        stats.max_de = max(stats.max_de, len(children))
        s = set(cur.members)
        flag = True
        for child in children:
            if eliminated.covers(child.members):
                continue
            a = find_witness(family, cur, child, mode)
            bit = yield a
            if bit == 1 - act:
                s &= set(child.members)
                flag = False
                stats.candidate_size = len(s)
            else:
                eliminated.add(child.members)
        if flag:
            return cur.members
        cur = Representative(canon_set(s), mode)
        stats.candidate_size = len(cur.members)


# ---------------------------------------------------------------------------
# sessions
# ---------------------------------------------------------------------------

@dataclass
class TranscriptEntry:
    seq: int
    assignment: Assignment
    answer: int
    size_before: int
    size_after: int

    def to_jsonable(self) -> dict:
        return {
            "seq": self.seq,
            "assignment": [str(v) for v in self.assignment],
            "answer": self.answer,
            "size_before": self.size_before,
            "size_after": self.size_after,
        }


@dataclass
class BoundReport:
    queries_used: int
    bound_upper: int
    bound_lower_info: Optional[int] = None
    opt_exact: Optional[int] = None

    def to_jsonable(self) -> dict:
        return {
            "queries_used": self.queries_used,
            "bound_upper": self.bound_upper,
            "bound_lower_info": self.bound_lower_info,
            "opt_exact": self.opt_exact,
        }


class LearnSession:
    """Re-entrant learning run: step() exposes the pending query, submit_answer
    feeds one bit. Repeated witnesses are served from the answer cache and
    recorded only once."""

    def __init__(self, family: PredicateFamily, mode: Mode):
        check_mode(mode)
        self.family = family
        self.mode = mode
        self.status = "running"
        self.transcript: list[TranscriptEntry] = []
        self.result: Optional[Representative] = None
        self.class_mismatch = False
        self._stats = _Stats()
        self._gen = _query_rounds(family, mode, self._stats)
        self._cache: dict[Assignment, int] = {}
        self._pending: Optional[Assignment] = None
        self._advance(first=True)

    @property
    def query_count(self) -> int:
        return len(self.transcript)

    @property
    def rounds(self) -> int:
        return self._stats.rounds

    @property
    def max_descendants_seen(self) -> int:
        return self._stats.max_de

    def _advance(self, bit: Optional[int] = None, first: bool = False) -> None:
        while True:
            try:
                a = next(self._gen) if first else self._gen.send(bit)
            except StopIteration as done:
                self.result = Representative(done.value, self.mode)
                self.status = "done"
                self._pending = None
                self.class_mismatch = not self._consistent()
                return
            first = False
            if a in self._cache:
                bit = self._cache[a]
                continue
            self._pending = a
            return

    def _consistent(self) -> bool:
        assert self.result is not None
        return all(
            evaluate_set(self.family, self.result.members, e.assignment, self.mode)
            == e.answer
            for e in self.transcript
        )

    def step(self):
        """('query', assignment) while running, ('done', Representative) after."""
        if self.status == "done":
            return ("done", self.result)
        return ("query", self._pending)

    def submit_answer(self, bit: int) -> None:
        if self.status == "done":
            raise TeacherError("session is already done")
        if self._pending is None:  # pragma: no cover - cannot happen while running
            raise TeacherError("no pending query")
        if bit not in (0, 1):
            raise TeacherError(f"answer must be 0 or 1, got {bit!r}")
        a = self._pending
        before = self._stats.candidate_size
        self._cache[a] = int(bit)
        self._advance(int(bit))
        self.transcript.append(
            TranscriptEntry(
                seq=len(self.transcript),
                assignment=a,
                answer=int(bit),
                size_before=before,
                size_after=self._stats.candidate_size,
            )
        )

    def bound_report(self, with_lattice: bool = False, lattice_cap: int = 10_000) -> BoundReport:
        report = BoundReport(
            queries_used=self.query_count,
            bound_upper=self.family.size * max(self.max_descendants_seen, 1),
        )
        if with_lattice:
            diagram = build_hasse(self.family, self.mode, cap=lattice_cap)
            import math

            report.bound_lower_info = max(
                math.ceil(math.log2(len(diagram.nodes))) if diagram.nodes else 0,
                diagram.max_out_degree(),
            )
        return report


def learn(family: PredicateFamily, teacher: Teacher, mode: Mode) -> Representative:
    """Run a full learning session against a teacher and return the result."""
    session = run_session(family, teacher, mode)
    if session.class_mismatch:
        raise TargetNotInClass(
            "target not in class: the transcript contradicts the learned function"
        )
    return session.result


def run_session(family: PredicateFamily, teacher: Teacher, mode: Mode) -> LearnSession:
    session = LearnSession(family, mode)
    while True:
        kind, payload = session.step()
        if kind == "done":
            return session
        bit = teacher.answer(payload)
        if bit not in (0, 1):
            raise TeacherError(f"teacher returned non-bit {bit!r}")
        session.submit_answer(bit)


# ---------------------------------------------------------------------------
# transcript persistence
# ---------------------------------------------------------------------------

def save_transcript(entries: Sequence[TranscriptEntry], path) -> None:
    with open(path, "w") as fh:
        for e in entries:
            fh.write(json.dumps(e.to_jsonable()) + "\n")


def load_transcript(path) -> list[TranscriptEntry]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            out.append(
                TranscriptEntry(
                    seq=int(d["seq"]),
                    assignment=as_assignment(d["assignment"]),
                    answer=int(d["answer"]),
                    size_before=int(d.get("size_before", -1)),
                    size_after=int(d.get("size_after", -1)),
                )
            )
    return out


def scripted_from_transcript(entries: Sequence[TranscriptEntry]) -> ScriptedTeacher:
    return ScriptedTeacher([(e.assignment, e.answer) for e in entries])


# ---------------------------------------------------------------------------
# exact OPT by game-tree minimax (test oracle for tiny families)
# ---------------------------------------------------------------------------

def opt_bruteforce(
    family: PredicateFamily,
    mode: Mode,
    max_reps: int = 8,
    max_points: int = 8,
) -> int:
    """Minimum worst-case membership queries over adaptive strategies.

    State: the set of still-consistent representatives. Querying a point
    splits it by answer; the adversary picks the worse half. Points are
    the family's cell covers, deduplicated by their answer column, which
    loses no power because functions in the class are cell-constant.
    """
    check_mode(mode)
    diagram = build_hasse(family, mode, cap=max_reps)
    reps = [r.members for r in diagram.nodes]
    columns: dict[tuple[int, ...], Assignment] = {}
    for a in family.scan_points(mode):
        col = tuple(evaluate_set(family, r, a, mode) for r in reps)
        if len(set(col)) > 1 and col not in columns:
            columns[col] = a
    if len(columns) > max_points:
        raise GuardExceeded(
            f"query pool of {len(columns)} points exceeds the cap {max_points}"
        )
    cols = list(columns.keys())
    memo: dict[frozenset, int] = {}

    def value(state: frozenset) -> int:
        if len(state) <= 1:
            return 0
        if state in memo:
            return memo[state]
        best = None
        for col in cols:
            s0 = frozenset(i for i in state if col[i] == 0)
            s1 = state - s0
            if not s0 or not s1:
                continue
            v = 1 + max(value(s0), value(s1))
            if best is None or v < best:
                best = v
        if best is None:  # pragma: no cover - cells always separate reps
            raise AssertionError("representatives indistinguishable by the pool")
        memo[state] = best
        return best

    return value(frozenset(range(len(reps))))
