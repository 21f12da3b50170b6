"""Halfspace predicate families in fixed low dimension.

A predicate is [a_1 x_1 + ... + a_d x_d >= b] with exact rational
coefficients. Sign-condition feasibility (closed positives, strict
negatives) is decided by exact Fourier-Motzkin elimination, which powers
critical-point construction; equality and witness search then run on the
critical points, one per realizable cell of the arrangement.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    Assignment,
    FamilyError,
    GuardExceeded,
    Mode,
    PredSet,
    PredicateFamily,
    as_rational,
    evaluate_set,
)
from .linfeas import Constraint, feasible_point

DEFAULT_DIM_CAP = 3


class HalfspaceFamily(PredicateFamily):
    kind = "halfspace"

    def __init__(
        self,
        d: int,
        halfspaces: Sequence[tuple[tuple[Fraction, ...], Fraction]],
        dim_cap: int = DEFAULT_DIM_CAP,
    ):
        d = int(d)
        if d < 1:
            raise FamilyError("dimension must be >= 1")
        if d > dim_cap:
            raise GuardExceeded(f"dimension {d} exceeds the configured cap {dim_cap}")
        if not halfspaces:
            raise FamilyError("halfspace family needs at least one predicate")
        hs = []
        for coeffs, b in halfspaces:
            coeffs = tuple(as_rational(c) for c in coeffs)
            if len(coeffs) != d:
                raise FamilyError(f"halfspace has {len(coeffs)} coefficients, expected {d}")
            hs.append((coeffs, as_rational(b)))
        self.halfspaces: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = tuple(hs)
        self.size = len(hs)
        self.domain_dim = d
        self._critical = None

    @classmethod
    def from_rows(cls, d: int, rows: Sequence[Sequence], **kw) -> "HalfspaceFamily":
        """Rows of [a_1, ..., a_d, b] in rational-string form."""
        hs = []
        for row in rows:
            row = list(row)
            if len(row) != int(d) + 1:
                raise FamilyError(f"halfspace row {row} should have d+1={int(d)+1} entries")
            hs.append((tuple(row[:-1]), row[-1]))
        return cls(d, hs, **kw)

    def _eval(self, idx: int, a: Assignment) -> int:
        coeffs, b = self.halfspaces[idx]
        total = sum((c * v for c, v in zip(coeffs, a)), Fraction(0))
        return int(total >= b)

    # -- feasibility and critical points ------------------------------

    def sign_condition_witness(self, pos: PredSet, neg: PredSet) -> Optional[Assignment]:
        if set(pos) & set(neg):
            return None
        constraints: list[Constraint] = []
        for i in pos:
            coeffs, b = self.halfspaces[i]
            constraints.append((coeffs, b, False))
        for i in neg:
            coeffs, b = self.halfspaces[i]
            # a.x < b  <=>  -a.x > -b
            constraints.append((tuple(-c for c in coeffs), -b, True))
        return feasible_point(constraints, self.domain_dim)

    def critical_points(self):
        """Critical point set for the family, built once and cached.

        Size is certified against the |F|^(d+1) bound.
        """
        if self._critical is None:
            from .lattice import build_critical_points

            cps = build_critical_points(self)
            # |F|^(d+1) is vacuous for a singleton family, which still has
            # its two sides; a lone halfspace never has more than 2 cells.
            bound = max(self.size ** (self.domain_dim + 1), 2)
            if len(cps.points) > bound:  # pragma: no cover - construction bug
                raise AssertionError(
                    f"critical point set of size {len(cps.points)} exceeds |F|^(d+1)={bound}"
                )
            self._critical = cps
        return self._critical

    # -- lattice hooks -------------------------------------------------

    def scan_points(self, mode: Mode) -> Sequence[Assignment]:
        return self.critical_points().points

    def sets_equal(self, s1: PredSet, s2: PredSet, mode: Mode) -> bool:
        # Every boolean combination of family members is constant on each
        # arrangement cell, and the critical points hit every cell.
        return all(
            evaluate_set(self, s1, p, mode) == evaluate_set(self, s2, p, mode)
            for p in self.critical_points().points
        )

    def descriptor(self) -> dict:
        return {
            "kind": "halfspace",
            "d": self.domain_dim,
            "rows": [
                [str(c) for c in coeffs] + [str(b)] for coeffs, b in self.halfspaces
            ],
        }


def learn_halfspace_union(family: HalfspaceFamily, teacher, mode: Mode = "or"):
    """Build critical points, then learn the target union (or intersection)."""
    from .learner import learn

    family.critical_points()
    return learn(family, teacher, mode)
