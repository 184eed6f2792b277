"""Partial orders between walk specifications.

Four order kinds:

* QUADRANT_PRECEQ — X goes down and left at least as much as Y at every
  state. Defined for quadrant specs and, with the same literal inequalities,
  for slab specs of equal thickness.
* SLAB_TRIANGLELEFTEQ — X goes left at least as much as Y, right at most as
  much, with up and down probabilities equal statewise.
* TREE_WEAK — parent-edge probabilities dominate: P_X(v, parent) >= P_Y.
* TREE_STRONG — additionally P_X(v, child) <= P_Y(v, child) per child slot.

A comparison is *forced* when no pair of valid specs could make it strict:
forbidden directions (both zero by validation), regions whose allowed moves
all point up/right under the quadrant order (row sums then force equality,
e.g. the origin), the right comparison in left-forbidden slab regions, leaf
parent probabilities, and root child rows under the strong tree order.
``strict`` reports whether every non-forced comparison holds strictly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ShapeMismatch
from .models import (
    Direction,
    QUADRANT_REGIONS,
    QuadrantWalkSpec,
    SLAB_REGIONS,
    SlabWalkSpec,
)
from .trees import ExplicitTreeWalk, RuleTreeWalk


class OrderKind(Enum):
    QUADRANT_PRECEQ = "quadrant_preceq"
    SLAB_TRIANGLELEFTEQ = "slab_trianglelefteq"
    TREE_WEAK = "tree_weak"
    TREE_STRONG = "tree_strong"


@dataclass(frozen=True)
class Comparison:
    """One defining inequality of an order check."""

    site: str
    quantity: str
    relation: str
    lhs: Fraction
    rhs: Fraction
    forced: bool

    @property
    def holds(self) -> bool:
        if self.relation == ">=":
            return self.lhs >= self.rhs
        if self.relation == "<=":
            return self.lhs <= self.rhs
        return self.lhs == self.rhs

    @property
    def strict(self) -> bool:
        return self.relation in (">=", "<=") and self.holds and self.lhs != self.rhs

    def describe(self) -> str:
        return f"{self.site}: {self.quantity} {self.lhs} {self.relation} {self.rhs}"


@dataclass(frozen=True)
class OrderCheck:
    holds: bool
    strict: bool
    witnesses: tuple[Comparison, ...]

    def __bool__(self) -> bool:
        return self.holds


# Directions where X must dominate Y / Y must dominate X under preceq.
_X_SIDE = (Direction.DOWN, Direction.LEFT)
_Y_SIDE = (Direction.UP, Direction.RIGHT)


def _preceq_comparisons(X, Y, region_catalog) -> list[Comparison]:
    comps = []
    x_regions, y_regions = X.regions(), Y.regions()
    for name, allowed in region_catalog.items():
        rx, ry = x_regions[name], y_regions[name]
        # If no allowed move points down or left, stochasticity forces the
        # up/right inequalities into equalities.
        region_forced = not any(d in allowed for d in _X_SIDE)
        for d in Direction:
            forced = d not in allowed or region_forced
            if d in _X_SIDE:
                comps.append(
                    Comparison(name, d.value, ">=", rx.get(d), ry.get(d), forced)
                )
            else:
                comps.append(
                    Comparison(name, d.value, ">=", ry.get(d), rx.get(d), forced)
                )
    return comps


def _slab_order_comparisons(X: SlabWalkSpec, Y: SlabWalkSpec) -> list[Comparison]:
    comps = []
    for name, allowed in SLAB_REGIONS.items():
        rx, ry = X.regions()[name], Y.regions()[name]
        left_allowed = Direction.LEFT in allowed
        comps.append(
            Comparison(
                name, "left", ">=", rx.left, ry.left, forced=not left_allowed
            )
        )
        comps.append(
            Comparison(
                name, "right", ">=", ry.right, rx.right, forced=not left_allowed
            )
        )
        for d in (Direction.UP, Direction.DOWN):
            comps.append(
                Comparison(name, d.value, "==", rx.get(d), ry.get(d), forced=True)
            )
    return comps


def _rule_tree_comparisons(X: RuleTreeWalk, Y: RuleTreeWalk, strong: bool) -> list[Comparison]:
    if set(X.classes) != set(Y.classes) or X.root_class != Y.root_class:
        raise ShapeMismatch("rule trees use different class structures")
    comps = []
    for name in X.classes:
        rx, ry = X.classes[name], Y.classes[name]
        if rx.arity() != ry.arity() or [c for c, _ in rx.children] != [
            c for c, _ in ry.children
        ]:
            raise ShapeMismatch(f"class {name!r} has mismatched children")
        is_root = name == X.root_class
        if not is_root:
            comps.append(Comparison(name, "up", ">=", rx.up, ry.up, forced=False))
        if strong:
            for slot, ((_, px), (_, py)) in enumerate(zip(rx.children, ry.children)):
                label = f"child {X.label_for_slot(slot)}"
                comps.append(Comparison(name, label, "<=", px, py, forced=is_root))
    return comps


def _explicit_tree_comparisons(
    X: ExplicitTreeWalk, Y: ExplicitTreeWalk, strong: bool
) -> list[Comparison]:
    if X.parent != Y.parent:
        raise ShapeMismatch("explicit trees have different shapes")
    comps = []
    for v in range(X.n_vertices):
        is_root = v == 0
        is_leaf = not X.child_probs[v]
        if not is_root:
            comps.append(
                Comparison(f"vertex {v}", "up", ">=", X.up[v], Y.up[v], forced=is_leaf)
            )
        if strong:
            for (c, px), (_, py) in zip(X.child_probs[v], Y.child_probs[v]):
                comps.append(
                    Comparison(f"vertex {v}", f"child {c}", "<=", px, py, forced=is_root)
                )
    return comps


def check_order(X, Y, kind: OrderKind) -> OrderCheck:
    """Decide whether X precedes Y under the given order kind.

    Returns whether every defining inequality holds, whether every non-forced
    one is strict, and the failing comparisons as witnesses.
    """
    if kind is OrderKind.QUADRANT_PRECEQ:
        if isinstance(X, QuadrantWalkSpec) and isinstance(Y, QuadrantWalkSpec):
            comps = _preceq_comparisons(X, Y, QUADRANT_REGIONS)
        elif isinstance(X, SlabWalkSpec) and isinstance(Y, SlabWalkSpec):
            if X.thickness != Y.thickness:
                raise ShapeMismatch(
                    f"slab thickness {X.thickness} != {Y.thickness}"
                )
            comps = _preceq_comparisons(X, Y, SLAB_REGIONS)
        else:
            raise ShapeMismatch("quadrant order needs two quadrant or two slab specs")
    elif kind is OrderKind.SLAB_TRIANGLELEFTEQ:
        if not (isinstance(X, SlabWalkSpec) and isinstance(Y, SlabWalkSpec)):
            raise ShapeMismatch("slab order needs two slab specs")
        if X.thickness != Y.thickness:
            raise ShapeMismatch(f"slab thickness {X.thickness} != {Y.thickness}")
        comps = _slab_order_comparisons(X, Y)
    elif kind in (OrderKind.TREE_WEAK, OrderKind.TREE_STRONG):
        strong = kind is OrderKind.TREE_STRONG
        if isinstance(X, RuleTreeWalk) and isinstance(Y, RuleTreeWalk):
            comps = _rule_tree_comparisons(X, Y, strong)
        elif isinstance(X, ExplicitTreeWalk) and isinstance(Y, ExplicitTreeWalk):
            comps = _explicit_tree_comparisons(X, Y, strong)
        else:
            raise ShapeMismatch("tree order needs two tree specs of the same flavor")
    else:
        raise ValueError(f"unknown order kind {kind}")

    failures = tuple(c for c in comps if not c.holds)
    holds = not failures
    strict = holds and all(c.strict for c in comps if not c.forced)
    return OrderCheck(holds=holds, strict=strict, witnesses=failures)
