"""Rooted-tree walk specifications.

Two flavors:

* ExplicitTreeWalk — a finite rooted tree with per-vertex outgoing
  distributions over {parent, children}.
* RuleTreeWalk — an infinite tree described by finitely many vertex classes.
  The class of a child is a function of its parent's class and the child
  slot, which keeps simulation lazy and lets conductance recursions collapse
  to per-class dynamic programs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import SpecValidationError, Violation
from .models import SCHEMA_VERSION, as_rational


@dataclass(frozen=True)
class ClassRule:
    """Outgoing behavior of one vertex class.

    up: probability of stepping to the parent (0 for the root class).
    children: per-slot (child class name, probability).
    """

    up: Fraction
    children: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "up", as_rational(self.up, "up"))
        object.__setattr__(
            self,
            "children",
            tuple((str(c), as_rational(p, f"child {c}")) for c, p in self.children),
        )

    def total(self) -> Fraction:
        return self.up + sum(p for _, p in self.children)

    def arity(self) -> int:
        return len(self.children)


@dataclass(frozen=True)
class RuleTreeWalk:
    """Infinite rooted tree walk with finitely many vertex classes."""

    classes: Mapping[str, ClassRule]
    root_class: str
    child_labels: tuple[str, ...] = ()

    kind = "rule_tree"

    def __post_init__(self):
        object.__setattr__(self, "classes", dict(self.classes))
        violations = []
        if self.root_class not in self.classes:
            violations.append(
                Violation("NonStochastic", "root", f"unknown root class {self.root_class!r}")
            )
        for name, rule in self.classes.items():
            if rule.total() != 1:
                violations.append(
                    Violation("NonStochastic", name, f"row sums to {rule.total()}")
                )
            if rule.up < 0 or any(p < 0 for _, p in rule.children):
                violations.append(Violation("NegativeProbability", name, "negative entry"))
            for child_class, _ in rule.children:
                if child_class not in self.classes:
                    violations.append(
                        Violation("NonStochastic", name, f"unknown child class {child_class!r}")
                    )
        root = self.classes.get(self.root_class)
        if root is not None and root.up != 0:
            violations.append(
                Violation("ForbiddenMove", self.root_class, f"root up-probability {root.up} != 0")
            )
        if violations:
            raise SpecValidationError(violations)

    def validate(self) -> "RuleTreeWalk":
        return self

    def class_names(self) -> tuple[str, ...]:
        return tuple(self.classes)

    def label_for_slot(self, slot: int) -> str:
        if slot < len(self.child_labels):
            return self.child_labels[slot]
        return str(slot)

    def path_string(self, slots: Sequence[int]) -> str:
        """Encode a vertex as the concatenation of its child labels."""
        return "".join(self.label_for_slot(s) for s in slots)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "rule_tree",
            "root_class": self.root_class,
            "child_labels": list(self.child_labels),
            "classes": {
                name: {
                    "up": str(rule.up),
                    "children": [[c, str(p)] for c, p in rule.children],
                }
                for name, rule in self.classes.items()
            },
        }


@dataclass(frozen=True)
class ExplicitTreeWalk:
    """Finite rooted tree walk.

    Vertices are 0..n-1 with vertex 0 the root. parent[v] gives the parent of
    v (parent[0] == -1). up[v] is the probability of moving to parent[v] and
    child_probs[v] lists (child vertex, probability) pairs in slot order.
    """

    parent: tuple[int, ...]
    up: tuple[Fraction, ...]
    child_probs: tuple[tuple[tuple[int, Fraction], ...], ...]

    kind = "explicit_tree"

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(int(p) for p in self.parent))
        object.__setattr__(
            self, "up", tuple(as_rational(p, f"up[{v}]") for v, p in enumerate(self.up))
        )
        object.__setattr__(
            self,
            "child_probs",
            tuple(
                tuple((int(c), as_rational(p, f"edge {v}->{c}")) for c, p in kids)
                for v, kids in enumerate(self.child_probs)
            ),
        )
        n = len(self.parent)
        violations = []
        if len(self.up) != n or len(self.child_probs) != n:
            raise ValueError("parent, up, child_probs must have equal length")
        if n == 0 or self.parent[0] != -1:
            violations.append(Violation("NonStochastic", "root", "vertex 0 must be the root"))
        if n and self.up[0] != 0:
            violations.append(
                Violation("ForbiddenMove", "root", f"root up-probability {self.up[0]} != 0")
            )
        for v in range(n):
            total = self.up[v] + sum(p for _, p in self.child_probs[v])
            if total != 1:
                violations.append(
                    Violation("NonStochastic", f"vertex {v}", f"row sums to {total}")
                )
            if self.up[v] < 0 or any(p < 0 for _, p in self.child_probs[v]):
                violations.append(
                    Violation("NegativeProbability", f"vertex {v}", "negative entry")
                )
            for c, _ in self.child_probs[v]:
                if not (0 <= c < n) or self.parent[c] != v:
                    violations.append(
                        Violation("ForbiddenMove", f"vertex {v}", f"{c} is not a child of {v}")
                    )
        if violations:
            raise SpecValidationError(violations)

    def validate(self) -> "ExplicitTreeWalk":
        return self

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> tuple[int, ...]:
        return tuple(c for c, _ in self.child_probs[v])

    def depth_of(self, v: int) -> int:
        d = 0
        while self.parent[v] != -1:
            v = self.parent[v]
            d += 1
        return d

    def depth(self) -> int:
        return max(self.depth_of(v) for v in range(self.n_vertices))

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "explicit_tree",
            "parent": list(self.parent),
            "up": [str(p) for p in self.up],
            "children": [
                [[c, str(p)] for c, p in kids] for kids in self.child_probs
            ],
        }


TreeWalkSpec = RuleTreeWalk | ExplicitTreeWalk


def expand_rule_tree(spec: RuleTreeWalk, depth: int) -> tuple[ExplicitTreeWalk, list[str]]:
    """Truncate a rule tree to a finite depth.

    Vertices at the truncation depth become leaves with their whole mass on
    the parent edge. Conductance and order computations that ground at the
    cut only read rows strictly above it, so the fold-up is invisible to
    them. Returns the explicit walk and each vertex's class name.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    parents = [-1]
    ups = [Fraction(0)]
    child_lists: list[list[tuple[int, Fraction]]] = [[]]
    classes = [spec.root_class]
    frontier = [(0, spec.root_class, 0)]
    while frontier:
        v, cls, d = frontier.pop()
        rule = spec.classes[cls]
        ups[v] = rule.up
        if d == depth:
            # Grounded level: fold child mass into up so the row still sums
            # to one without materializing children.
            ups[v] = Fraction(1) if v != 0 else Fraction(0)
            if v == 0:
                child_lists[v] = []
            continue
        for child_class, p in rule.children:
            c = len(parents)
            parents.append(v)
            ups.append(Fraction(0))
            child_lists.append([])
            classes.append(child_class)
            child_lists[v].append((c, p))
            frontier.append((c, child_class, d + 1))
    walk = ExplicitTreeWalk(
        parent=tuple(parents),
        up=tuple(ups),
        child_probs=tuple(tuple(kids) for kids in child_lists),
    )
    return walk, classes


def tree_from_json_dict(data: Mapping) -> TreeWalkSpec:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("bad or missing schema_version")
    if data["kind"] == "rule_tree":
        classes = {
            name: ClassRule(
                up=Fraction(entry["up"]),
                children=tuple((c, Fraction(p)) for c, p in entry["children"]),
            )
            for name, entry in data["classes"].items()
        }
        return RuleTreeWalk(
            classes=classes,
            root_class=data["root_class"],
            child_labels=tuple(data.get("child_labels", ())),
        )
    if data["kind"] == "explicit_tree":
        return ExplicitTreeWalk(
            parent=tuple(data["parent"]),
            up=tuple(Fraction(p) for p in data["up"]),
            child_probs=tuple(
                tuple((c, Fraction(p)) for c, p in kids) for kids in data["children"]
            ),
        )
    raise ValueError(f"unknown tree kind {data['kind']!r}")


def tree_from_json(text: str) -> TreeWalkSpec:
    return tree_from_json_dict(json.loads(text))
