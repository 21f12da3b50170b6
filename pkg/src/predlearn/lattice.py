"""Representative sets, the implication lattice, and its local machinery.

A representative is the maximal predicate set whose join (OR in or-mode,
AND in and-mode) equals a given function. The learner only ever needs a
node's immediate descendants and a witness per edge, both computed locally;
materializing the whole diagram is an optional, capped export path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    Assignment,
    FamilyError,
    GuardExceeded,
    Mode,
    PredSet,
    PredicateFamily,
    canon_set,
    check_mode,
    evaluate_set,
    set_equal,
)

DEFAULT_HASSE_CAP = 10_000


@dataclass(frozen=True)
class Representative:
    """A closed predicate set: adding any outside predicate changes the function."""

    members: PredSet
    mode: Mode

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


@dataclass
class HasseDiagram:
    nodes: list[Representative]
    edges: list[tuple[PredSet, PredSet]]  # (parent, child)
    mode: Mode

    def max_out_degree(self) -> int:
        counts: dict[PredSet, int] = {}
        for parent, _child in self.edges:
            counts[parent] = counts.get(parent, 0) + 1
        return max(counts.values(), default=0)

    def to_dot(self) -> str:
        def label(s: PredSet) -> str:
            return "{" + ",".join(str(i) for i in s) + "}" if s else "{}"

        lines = ["digraph hasse {"]
        for node in self.nodes:
            lines.append(f'  "{label(node.members)}";')
        for parent, child in self.edges:
            lines.append(f'  "{label(parent)}" -> "{label(child)}";')
        lines.append("}")
        return "\n".join(lines)


@dataclass
class CriticalPointSet:
    points: list[Assignment]
    signatures: list[tuple[int, ...]]

    def to_jsonable(self) -> list[dict]:
        return [
            {"point": [str(v) for v in p], "signature": list(sig)}
            for p, sig in zip(self.points, self.signatures)
        ]


def _act(mode: Mode) -> int:
    """The 'parent side' bit of a witness: parent evaluates to this value."""
    return 1 if mode == "or" else 0


# ---------------------------------------------------------------------------
# closure and order operations
# ---------------------------------------------------------------------------

def closure(family: PredicateFamily, s: PredSet, mode: Mode) -> Representative:
    """The maximal superset of s with the same join."""
    check_mode(mode)
    s = family.validate_set(s)
    if hasattr(family, "closure_set"):
        return Representative(family.closure_set(s, mode), mode)
    extra = [
        f
        for f in range(family.size)
        if f not in s and set_equal(family, canon_set(s + (f,)), s, mode)
    ]
    return Representative(canon_set(s + tuple(extra)), mode)


def is_representative(family: PredicateFamily, s: PredSet, mode: Mode) -> bool:
    return closure(family, s, mode).members == family.validate_set(s)


def lca(family: PredicateFamily, g1: Representative, g2: Representative) -> Representative:
    """Lowest common ascendant: closure of the union."""
    if g1.mode != g2.mode:
        raise FamilyError("representatives from different modes")
    return closure(family, canon_set(g1.members + g2.members), g1.mode)


def gcd_rep(family: PredicateFamily, g1: Representative, g2: Representative) -> Representative:
    """Greatest common descendant: the set intersection is itself closed."""
    if g1.mode != g2.mode:
        raise FamilyError("representatives from different modes")
    inter = canon_set(set(g1.members) & set(g2.members))
    return Representative(inter, g1.mode)


# ---------------------------------------------------------------------------
# immediate descendants
# ---------------------------------------------------------------------------

def get_imm_de(
    family: PredicateFamily, g: Representative, seed: PredSet, mode: Mode
) -> Representative:
    """Climb from a descendant seed to an immediate descendant of g.

    Greedily adds every predicate of g (ascending index) whose addition
    keeps the join strictly below g. Once a predicate's addition reaches
    g's join it stays there as the set grows, so one pass suffices.
    """
    seed = family.validate_set(seed)
    if not set(seed) <= set(g.members):
        raise FamilyError("seed must be a subset of the parent's members")
    if set_equal(family, seed, g.members, mode):
        raise FamilyError("seed already joins to the parent; not a strict descendant")
    s = list(seed)
    for f in g.members:
        if f in seed:
            continue
        if not set_equal(family, canon_set(s + [f]), g.members, mode):
            s.append(f)
    return Representative(canon_set(s), mode)


def z_set(family: PredicateFamily, g: Representative, pts: Sequence[Assignment]) -> PredSet:
    """Members of g that take the child-side value on every given point."""
    if not pts:
        raise FamilyError("z_set needs at least one point")
    side = 1 - _act(g.mode)
    for a in pts:
        if evaluate_set(family, g.members, a, g.mode) != _act(g.mode):
            raise FamilyError("z_set points must lie on the parent's active side")
    return canon_set(
        f for f in g.members if all(family.evaluate(f, a) == side for a in pts)
    )


def _cover_rhs(
    family: PredicateFamily, g: Representative, des: list[Representative], a: Assignment
) -> int:
    """The cover identity's right side at a: join over children of the
    meet of the dropped predicates (meet/join swap in and-mode)."""
    parent = set(g.members)
    if g.mode == "or":
        return int(
            any(
                all(family.evaluate(f, a) for f in parent - set(d.members))
                for d in des
            )
        )
    return int(
        all(
            any(family.evaluate(f, a) for f in parent - set(d.members))
            for d in des
        )
    )


def all_imm_de(family: PredicateFamily, g: Representative, mode: Mode) -> list[Representative]:
    """Complete immediate-descendant list of g.

    Families with constructive characterizations supply them via the
    imm_descendant_sets hook; otherwise run the counterexample loop:
    guess one descendant, test the cover identity, and climb from the
    vanishing set of each counterexample point until the identity holds.
    """
    check_mode(mode)
    fast = family.imm_descendant_sets(g.members, mode)
    if fast is not None:
        return [Representative(s, mode) for s in fast]

    bottom = closure(family, (), mode)
    if set_equal(family, g.members, bottom.members, mode):
        return []
    des = [get_imm_de(family, g, (), mode)]
    points = family.scan_points(mode)
    while True:
        counter = None
        for a in points:
            lhs = evaluate_set(family, g.members, a, mode)
            if lhs == _act(mode) and _cover_rhs(family, g, des, a) != lhs:
                counter = a
                break
        if counter is None:
            return des
        seed = z_set(family, g, [counter])
        new = get_imm_de(family, g, closure(family, seed, mode).members, mode)
        if any(new.members == d.members for d in des):  # pragma: no cover
            raise AssertionError("counterexample climb revisited a known descendant")
        des.append(new)


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

def find_witness(
    family: PredicateFamily, g: Representative, child: Representative, mode: Mode
) -> Assignment:
    """A point separating parent from immediate descendant.

    Parent evaluates to the mode's active bit, the child to its negation;
    the per-predicate consequences are asserted before returning.
    """
    check_mode(mode)
    a = family.witness_point(g.members, child.members, mode)
    if a is None:
        act = _act(mode)
        for p in family.scan_points(mode):
            if (
                evaluate_set(family, g.members, p, mode) == act
                and evaluate_set(family, child.members, p, mode) != act
            ):
                a = p
                break
    if a is None:
        raise AssertionError(
            f"no witness for {g.members} -> {child.members}; not a descendant pair?"
        )
    act = _act(mode)
    side = 1 - act
    assert all(family.evaluate(f, a) == side for f in child.members)
    assert all(
        family.evaluate(f, a) == act for f in set(g.members) - set(child.members)
    )
    return a


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------

def build_critical_points(family: PredicateFamily) -> CriticalPointSet:
    """One witness point per realizable sign-condition cell.

    Inductive split: cells over the first i predicates are each refined by
    predicate i+1 and its negation, keeping the nonempty branches.
    """
    cells: list[tuple[PredSet, PredSet, Assignment]] = []
    w = family.sign_condition_witness((), ())
    if w is None:
        raise FamilyError("family domain is empty")
    cells.append(((), (), w))
    for f in range(family.size):
        nxt: list[tuple[PredSet, PredSet, Assignment]] = []
        for pos, neg, point in cells:
            bit = family.evaluate(f, point)
            same = (canon_set(pos + (f,)), neg) if bit else (pos, canon_set(neg + (f,)))
            nxt.append((same[0], same[1], point))
            flip_pos, flip_neg = (
                (pos, canon_set(neg + (f,))) if bit else (canon_set(pos + (f,)), neg)
            )
            other = family.sign_condition_witness(flip_pos, flip_neg)
            if other is not None:
                nxt.append((flip_pos, flip_neg, other))
        cells = nxt
    points = [c[2] for c in cells]
    signatures = [tuple(family.evaluate(f, p) for f in range(family.size)) for p in points]
    if len(set(signatures)) != len(signatures):  # pragma: no cover
        raise AssertionError("critical-point construction produced duplicate cells")
    for (pos, neg, _p), sig in zip(cells, signatures):
        expect = tuple(1 if f in pos else 0 for f in range(family.size))
        if sig != expect:  # pragma: no cover
            raise AssertionError("critical point signature does not match its cell")
    return CriticalPointSet(points=points, signatures=signatures)


# ---------------------------------------------------------------------------
# full diagram (export / teaching only)
# ---------------------------------------------------------------------------

def build_hasse(
    family: PredicateFamily, mode: Mode, cap: int = DEFAULT_HASSE_CAP
) -> HasseDiagram:
    """Materialize the whole diagram by repeated descendant expansion."""
    check_mode(mode)
    top = closure(family, canon_set(range(family.size)), mode)
    nodes: dict[PredSet, Representative] = {top.members: top}
    edges: list[tuple[PredSet, PredSet]] = []
    frontier = [top]
    while frontier:
        nxt: list[Representative] = []
        for g in frontier:
            for child in all_imm_de(family, g, mode):
                edges.append((g.members, child.members))
                if child.members not in nodes:
                    nodes[child.members] = child
                    nxt.append(child)
                    if len(nodes) > cap:
                        raise GuardExceeded(f"lattice exceeds the cap of {cap} nodes")
        frontier = nxt
    return HasseDiagram(nodes=list(nodes.values()), edges=edges, mode=mode)
