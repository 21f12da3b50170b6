"""Exact rational linear feasibility via Fourier-Motzkin elimination.

Handles mixed strict/non-strict inequalities natively, which is exactly
what sign conditions over halfspaces need (a negated closed halfspace is a
strict inequality). Instance sizes here are tiny (dimension <= 3, a handful
of constraints), so the elimination blowup is irrelevant and exactness wins.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

# A constraint is (coeffs, bound, strict) meaning  coeffs . x >= bound,
# or > bound when strict.
Constraint = tuple[tuple[Fraction, ...], Fraction, bool]

ZERO = Fraction(0)
ONE = Fraction(1)


def _eliminate_last(constraints: list[Constraint]) -> list[Constraint]:
    """Project out the last variable, returning constraints on the rest."""
    lowers = []  # x_k >= expr  (c_k > 0)
    uppers = []  # x_k <= expr  (c_k < 0)
    rest: list[Constraint] = []
    for coeffs, b, strict in constraints:
        c = coeffs[-1]
        head = coeffs[:-1]
        if c == 0:
            rest.append((head, b, strict))
        elif c > 0:
            # x_k >= (b - head.x)/c
            lowers.append((tuple(-h / c for h in head), b / c, strict))
        else:
            # x_k <= (b - head.x)/c  with flipped division sign
            uppers.append((tuple(-h / c for h in head), b / c, strict))
    for lo_coeffs, lo_b, lo_s in lowers:
        for up_coeffs, up_b, up_s in uppers:
            # upper_expr >= lower_expr
            coeffs = tuple(u - l for u, l in zip(up_coeffs, lo_coeffs))
            rest.append((coeffs, lo_b - up_b, lo_s or up_s))
    return rest


def _bounds(constraints: list[Constraint], prefix: tuple[Fraction, ...]):
    """Lower/upper bounds on the next variable given fixed prefix values.

    Every constraint must involve only prefix variables plus one more.
    Returns (lo, lo_strict, hi, hi_strict, consistent_constants).
    """
    lo = lo_s = hi = hi_s = None
    for coeffs, b, strict in constraints:
        fixed = sum((c * v for c, v in zip(coeffs, prefix)), ZERO)
        c = coeffs[len(prefix)] if len(coeffs) > len(prefix) else ZERO
        if c == 0:
            residual = fixed - b
            if residual < 0 or (strict and residual == 0):
                return None
            continue
        bound = (b - fixed) / c
        if c > 0:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_s = bound, strict
        else:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_s = bound, strict
    return lo, lo_s, hi, hi_s


def _pick(lo, lo_s, hi, hi_s) -> Optional[Fraction]:
    if lo is None and hi is None:
        return ZERO
    if lo is None:
        return hi - ONE if hi_s else hi
    if hi is None:
        return lo + ONE if lo_s else lo
    if lo < hi:
        return (lo + hi) / 2
    if lo == hi and not lo_s and not hi_s:
        return lo
    return None


def feasible_point(constraints: list[Constraint], dim: int) -> Optional[tuple[Fraction, ...]]:
    """A rational point satisfying every constraint, or None if infeasible."""
    stages = [list(constraints)]
    for _ in range(dim):
        stages.append(_eliminate_last(stages[-1]))
    # stages[dim] is variable-free: each says 0 >= b (or 0 > b).
    for _coeffs, b, strict in stages[dim]:
        if b > 0 or (strict and b >= 0):
            return None
    values: tuple[Fraction, ...] = ()
    # Assign x_1 from the most-projected stage outward.
    for k in range(dim - 1, -1, -1):
        res = _bounds(stages[k], values)
        if res is None:
            return None
        v = _pick(*res)
        if v is None:
            return None
        values = values + (v,)
    for coeffs, b, strict in constraints:
        total = sum((c * v for c, v in zip(coeffs, values)), ZERO)
        ok = total > b if strict else total >= b
        if not ok:  # pragma: no cover - would indicate an elimination bug
            raise AssertionError("Fourier-Motzkin produced an invalid point")
    return values
