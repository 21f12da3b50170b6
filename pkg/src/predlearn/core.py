"""Predicate families and the shared value types.

Everything downstream works with three currencies:

* an *assignment* -- a tuple of exact rationals, one per domain dimension;
* a *predicate set* -- a sorted, duplicate-free tuple of indices into a
  family (set equality is tuple equality);
* a *family* -- an immutable object that evaluates its predicates and
  supplies the structure hooks (equality strategy, candidate points for
  witness search, optional fast paths) the lattice machinery needs.

All arithmetic is exact; there is no floating point anywhere.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

Assignment = tuple[Fraction, ...]
PredSet = tuple[int, ...]

Mode = str  # "or" | "and"
MODES = ("or", "and")


class FamilyError(ValueError):
    """Invalid family definition, index, assignment, or mode."""


class GuardExceeded(RuntimeError):
    """A configured size guard (dimension, edge count, lattice cap) was hit."""


def as_rational(value) -> Fraction:
    """Parse a number-like value into an exact Fraction.

    Strings may be fractions ("3/2") or decimals ("1.5"); decimals are read
    as exact decimal fractions, never binary floats.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FamilyError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise FamilyError(f"cannot parse rational {value!r}: {e}") from e
    if isinstance(value, float):
        # Floats in JSON payloads are re-parsed via their shortest repr so
        # "1.5" round-trips to 3/2, not to the binary float.
        return Fraction(repr(value))
    raise FamilyError(f"not a rational: {value!r}")


def as_assignment(values: Iterable) -> Assignment:
    return tuple(as_rational(v) for v in values)


def canon_set(indices: Iterable[int]) -> PredSet:
    """Canonical form of a predicate set: sorted, duplicate-free tuple."""
    return tuple(sorted(set(int(i) for i in indices)))


def check_mode(mode: Mode) -> None:
    if mode not in MODES:
        raise FamilyError(f"mode must be 'or' or 'and', got {mode!r}")


class PredicateFamily:
    """Contract every predicate family implements.

    Subclasses must be immutable after construction and must provide pure
    evaluation; the lattice and learner layers rely on both.
    """

    kind: str = "abstract"
    size: int
    domain_dim: int

    # -- evaluation ---------------------------------------------------

    def evaluate(self, idx: int, a: Assignment) -> int:
        if not 0 <= idx < self.size:
            raise FamilyError(f"predicate index {idx} out of range [0, {self.size})")
        if len(a) != self.domain_dim:
            raise FamilyError(
                f"assignment has {len(a)} values, family dimension is {self.domain_dim}"
            )
        return self._eval(idx, a)

    def _eval(self, idx: int, a: Assignment) -> int:
        raise NotImplementedError

    # -- structure hooks ----------------------------------------------

    def sets_equal(self, s1: PredSet, s2: PredSet, mode: Mode) -> bool:
        """Whether the join of s1 equals the join of s2 as a function."""
        raise FamilyError(f"family kind {self.kind!r}: equality undecidable")

    def scan_points(self, mode: Mode) -> Sequence[Assignment]:
        """Candidate points for witness and counterexample search.

        Must cover every realizable sign-condition cell of the family so
        that scanning them is as good as scanning the whole domain.
        """
        raise FamilyError(f"family kind {self.kind!r}: no point source configured")

    def sign_condition_witness(self, pos: PredSet, neg: PredSet):
        """A point where every pos predicate is 1 and every neg is 0, or None."""
        raise FamilyError(f"family kind {self.kind!r}: no feasibility tester")

    def imm_descendant_sets(self, g: PredSet, mode: Mode):
        """Optional constructive immediate-descendant computation.

        Returns a list of predicate sets, or None to fall back to the
        generic counterexample-driven loop.
        """
        return None

    def witness_point(self, g: PredSet, child: PredSet, mode: Mode):
        """Optional constructive witness. None falls back to point scan."""
        return None

    def descriptor(self) -> dict:
        raise NotImplementedError

    def validate_set(self, s: PredSet) -> PredSet:
        s = canon_set(s)
        if s and (s[0] < 0 or s[-1] >= self.size):
            raise FamilyError(f"predicate set {s} out of range for family of size {self.size}")
        return s


def evaluate_set(family: PredicateFamily, s: PredSet, a: Assignment, mode: Mode) -> int:
    """OR (or AND) of the member predicates at a.

    The empty disjunction is the zero function; the empty conjunction is 1.
    """
    check_mode(mode)
    if mode == "or":
        return int(any(family.evaluate(i, a) for i in s))
    return int(all(family.evaluate(i, a) for i in s))


def set_equal(family: PredicateFamily, s1: PredSet, s2: PredSet, mode: Mode) -> bool:
    check_mode(mode)
    s1 = family.validate_set(s1)
    s2 = family.validate_set(s2)
    if s1 == s2:
        return True
    return family.sets_equal(s1, s2, mode)


class TableFamily(PredicateFamily):
    """Explicit truth-table family over a finite, listed domain."""

    kind = "table"

    def __init__(self, points: Sequence[Assignment], rows: Sequence[Sequence[int]]):
        points = [tuple(as_rational(v) for v in p) for p in points]
        if not points:
            raise FamilyError("table family needs at least one domain point")
        dim = len(points[0])
        if dim < 1:
            raise FamilyError("domain dimension must be >= 1")
        if any(len(p) != dim for p in points):
            raise FamilyError("all domain points must share one dimension")
        if len(set(points)) != len(points):
            raise FamilyError("duplicate domain points")
        if not rows:
            raise FamilyError("table family needs at least one predicate")
        for r in rows:
            if len(r) != len(points):
                raise FamilyError("each truth row must have one bit per domain point")
            if any(b not in (0, 1) for b in r):
                raise FamilyError("truth rows must be 0/1")
        self.points: tuple[Assignment, ...] = tuple(points)
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(int(b) for b in r) for r in rows)
        self.size = len(self.rows)
        self.domain_dim = dim
        self._point_index = {p: i for i, p in enumerate(self.points)}

    def _eval(self, idx: int, a: Assignment) -> int:
        try:
            col = self._point_index[tuple(a)]
        except KeyError:
            raise FamilyError(f"assignment {a} is not a domain point of this table family")
        return self.rows[idx][col]

    def sets_equal(self, s1, s2, mode):
        return all(
            evaluate_set(self, s1, p, mode) == evaluate_set(self, s2, p, mode)
            for p in self.points
        )

    def scan_points(self, mode):
        return self.points

    def sign_condition_witness(self, pos, neg):
        for col, p in enumerate(self.points):
            if all(self.rows[i][col] == 1 for i in pos) and all(
                self.rows[i][col] == 0 for i in neg
            ):
                return p
        return None

    def descriptor(self) -> dict:
        return {
            "kind": "table",
            "points": [[str(v) for v in p] for p in self.points],
            "rows": [list(r) for r in self.rows],
        }


def ray22_family() -> TableFamily:
    """The four-ray family over {1,2}^2: predicates [x_i >= j] for i,j in {1,2}.

    Index order: f11, f12, f21, f22.
    """
    points = [as_assignment(p) for p in ((1, 1), (1, 2), (2, 1), (2, 2))]
    preds = [(1, 1), (1, 2), (2, 1), (2, 2)]
    rows = [[int(p[i - 1] >= j) for p in points] for (i, j) in preds]
    return TableFamily(points, rows)


def load_family(data: dict) -> PredicateFamily:
    """Build a family from its JSON-compatible definition dict."""
    from . import halfspace, varineq  # local import: families depend on core

    if not isinstance(data, dict) or "kind" not in data:
        raise FamilyError("family definition must be an object with a 'kind' key")
    kind = data["kind"]
    if kind == "table":
        try:
            return TableFamily(data["points"], data["rows"])
        except KeyError as e:
            raise FamilyError(f"table family definition missing key {e}") from e
    if kind == "halfspace":
        try:
            return halfspace.HalfspaceFamily.from_rows(data["d"], data["rows"])
        except KeyError as e:
            raise FamilyError(f"halfspace family definition missing key {e}") from e
    if kind == "var_ineq":
        try:
            return varineq.VarIneqFamily(
                data["n"], data["pairs"], strict=bool(data.get("strict", True))
            )
        except KeyError as e:
            raise FamilyError(f"var_ineq family definition missing key {e}") from e
    raise FamilyError(f"unknown family kind {kind!r}")


def load_family_file(path) -> PredicateFamily:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise FamilyError(f"{path}: not valid JSON: {e}") from e
    return load_family(data)
