"""Electrical networks for reversible tree walks.

Conductances are assigned so the network's chain reproduces the walk: root
edges get the root's transition probabilities (total root conductance 1,
fixing the scale), and each deeper edge multiplies the parent edge by the
child/parent probability ratio. Effective conductance to level n then
decides recurrence: it is non-increasing in n and vanishes exactly for
recurrent walks; Rayleigh monotonicity (edgewise-larger conductances give
larger effective conductance) transfers that between ordered walks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DeltaOutOfRange,
    NonSummable,
    OrderViolation,
    ShapeMismatch,
    ZeroParentProbability,
)
from .ratlinalg import solve
from .trees import ClassRule, ExplicitTreeWalk, RuleTreeWalk, expand_rule_tree


@dataclass(frozen=True)
class ConductanceNetwork:
    """Explicit rooted tree with per-edge conductances.

    parent[v] is -1 for the root; edge_conductance[v] is the conductance of
    the edge (parent[v], v), unused at the root.
    """

    parent: tuple[int, ...]
    edge_conductance: tuple[Fraction, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.edge_conductance):
            raise ValueError("conductances must be nonnegative")

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return kids

    def depths(self) -> list[int]:
        d = [0] * self.n_vertices
        for v in range(1, self.n_vertices):
            d[v] = d[self.parent[v]] + 1
        return d

    def depth(self) -> int:
        return max(self.depths())

    def vertex_conductances(self) -> list[Fraction]:
        """c_v = sum of conductances of edges incident to v."""
        total = [Fraction(0)] * self.n_vertices
        for v in range(1, self.n_vertices):
            c = self.edge_conductance[v]
            total[v] += c
            total[self.parent[v]] += c
        return total

    def total_conductance(self) -> Fraction:
        """sum_v c_v, i.e. twice the total edge conductance."""
        return 2 * sum(self.edge_conductance[v] for v in range(1, self.n_vertices))

    def scaled(self, factor: Fraction) -> "ConductanceNetwork":
        factor = Fraction(factor)
        return ConductanceNetwork(
            parent=self.parent,
            edge_conductance=tuple(
                c * factor for c in self.edge_conductance
            ),
        )

    def normalized(self) -> "ConductanceNetwork":
        """Rescale so the total root conductance is 1."""
        root_total = self.vertex_conductances()[0]
        if root_total == 0:
            raise ValueError("root has zero conductance")
        return self.scaled(1 / root_total)

    def reconstructed_walk(self) -> ExplicitTreeWalk:
        """The reversible chain of this network: P(v,w) = c_vw / c_v."""
        totals = self.vertex_conductances()
        kids = self.children()
        ups = []
        child_probs = []
        for v in range(self.n_vertices):
            if totals[v] == 0:
                raise ValueError(f"vertex {v} is isolated")
            up = self.edge_conductance[v] / totals[v] if v != 0 else Fraction(0)
            ups.append(up)
            child_probs.append(
                tuple((w, self.edge_conductance[w] / totals[v]) for w in kids[v])
            )
        return ExplicitTreeWalk(
            parent=self.parent, up=tuple(ups), child_probs=tuple(child_probs)
        )

    def effective_conductance(self, n: int) -> Fraction:
        """Effective conductance between the root and the level-n vertices.

        Series-parallel recursion with level-n vertices grounded; branches
        not reaching level n contribute nothing. Exact.
        """
        depths = self.depths()
        if n < 1 or n > max(depths):
            raise ValueError(f"need 1 <= n <= network depth, got {n}")
        kids = self.children()
        # G[v]: conductance from v to ground inside v's subtree; None = v is
        # itself grounded (level n).
        G: list[Fraction | None] = [Fraction(0)] * self.n_vertices
        order = sorted(range(self.n_vertices), key=lambda v: -depths[v])
        for v in order:
            if depths[v] == n:
                G[v] = None
                continue
            if depths[v] > n:
                G[v] = Fraction(0)
                continue
            acc = Fraction(0)
            for w in kids[v]:
                c = self.edge_conductance[w]
                gw = G[w]
                if gw is None:
                    acc += c
                elif gw > 0 and c > 0:
                    acc += c * gw / (c + gw)
            G[v] = acc
        result = G[0]
        assert result is not None
        return result

    def to_dot(self) -> str:
        lines = ["graph conductance_network {"]
        for v in range(1, self.n_vertices):
            lines.append(
                f'  {self.parent[v]} -- {v} [label="{self.edge_conductance[v]}"];'
            )
        lines.append("}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "parent": list(self.parent),
            "edge_conductance": [str(c) for c in self.edge_conductance],
        }


def conductances_from_walk(spec, depth: int) -> ConductanceNetwork:
    """Assign edge conductances reproducing the walk, truncated at depth.

    Root edges carry the root's transition probabilities; each deeper edge
    (v,w) carries c(parent(v),v) * P(v,w) / P(v,parent(v)). Vertices with
    children but zero parent probability make the recursion meaningless and
    raise ZeroParentProbability.
    """
    if isinstance(spec, RuleTreeWalk):
        walk, _ = expand_rule_tree(spec, depth)
    elif isinstance(spec, ExplicitTreeWalk):
        walk = spec
    else:
        raise TypeError(f"not a tree walk: {type(spec).__name__}")
    conductance = [Fraction(0)] * walk.n_vertices
    for v in range(walk.n_vertices):
        if walk.depth_of(v) >= depth:
            continue
        if v == 0:
            for w, p in walk.child_probs[v]:
                conductance[w] = p
            continue
        if not walk.child_probs[v]:
            continue
        if walk.up[v] == 0:
            raise ZeroParentProbability(
                f"vertex {v} has children but zero parent probability"
            )
        for w, p in walk.child_probs[v]:
            conductance[w] = conductance[v] * p / walk.up[v]
    # Drop vertices beyond the cut (explicit walks deeper than requested).
    keep = [v for v in range(walk.n_vertices) if walk.depth_of(v) <= depth]
    if len(keep) != walk.n_vertices:
        remap = {v: i for i, v in enumerate(keep)}
        parent = tuple(
            -1 if walk.parent[v] == -1 else remap[walk.parent[v]] for v in keep
        )
        cond = tuple(conductance[v] for v in keep)
        return ConductanceNetwork(parent=parent, edge_conductance=cond)
    return ConductanceNetwork(
        parent=walk.parent, edge_conductance=tuple(conductance)
    )


def _reachable_classes(spec: RuleTreeWalk) -> set[str]:
    seen: set[str] = set()
    frontier = [child for child, _ in spec.classes[spec.root_class].children]
    while frontier:
        name = frontier.pop()
        if name in seen:
            continue
        seen.add(name)
        frontier.extend(child for child, _ in spec.classes[name].children)
    return seen


def _class_ratios(spec: RuleTreeWalk) -> dict[str, list[tuple[str, Fraction]]]:
    """Child conductance ratios P(v,child)/P(v,parent) per reachable class."""
    ratios = {}
    for name in _reachable_classes(spec):
        rule = spec.classes[name]
        if name == spec.root_class:
            raise NonSummable("root class reappears below the root")
        if rule.up == 0:
            raise ZeroParentProbability(f"class {name!r} has zero parent probability")
        ratios[name] = [(child, p / rule.up) for child, p in rule.children]
    return ratios


def effective_conductance(net, n: int) -> Fraction:
    """Effective conductance root -> level n.

    Accepts an explicit ConductanceNetwork (vertex recursion) or a
    RuleTreeWalk (per-class dynamic program, exact at any depth without
    materializing the tree).
    """
    if isinstance(net, ConductanceNetwork):
        return net.effective_conductance(n)
    if isinstance(net, ExplicitTreeWalk):
        return conductances_from_walk(net, net.depth()).effective_conductance(n)
    if isinstance(net, RuleTreeWalk):
        return _rule_effective_conductance(net, n)
    raise TypeError(f"cannot compute effective conductance of {type(net).__name__}")


def _rule_effective_conductance(spec: RuleTreeWalk, n: int) -> Fraction:
    if n < 1:
        raise ValueError("depth must be >= 1")
    ratios = _class_ratios(spec)
    # gamma[(cls, d)]: conductance to ground d levels below a class-cls
    # vertex, per unit of entering edge conductance; None encodes "grounded
    # here" (infinite).
    memo: dict[tuple[str, int], Fraction | None] = {}

    def gamma(cls: str, d: int) -> Fraction | None:
        if d == 0:
            return None
        key = (cls, d)
        if key in memo:
            return memo[key]
        acc = Fraction(0)
        for child, ratio in ratios[cls]:
            g = gamma(child, d - 1)
            if g is None:
                acc += ratio
            elif g > 0:
                acc += ratio * g / (1 + g)
        memo[key] = acc
        return acc

    root_rule = spec.classes[spec.root_class]
    total = Fraction(0)
    for child, p in root_rule.children:
        g = gamma(child, n - 1)
        if g is None:
            total += p
        elif g > 0:
            total += p * g / (1 + g)
    return total


@dataclass(frozen=True)
class RayleighReport:
    dominated: bool
    effective_dominated: bool
    first_edge_violation: int | None
    effective_values: tuple[tuple[int, Fraction, Fraction], ...]


def rayleigh_check(net_a: ConductanceNetwork, net_b: ConductanceNetwork) -> RayleighReport:
    """Edgewise and effective-conductance domination of two networks.

    Conductances are compared as given (domination is scale-sensitive, so
    nothing is silently rescaled). Rayleigh monotonicity guarantees
    dominated implies effective_dominated; both are computed honestly.
    """
    if net_a.parent != net_b.parent:
        raise ShapeMismatch("networks live on different trees")
    first_violation = None
    for v in range(1, net_a.n_vertices):
        if net_a.edge_conductance[v] > net_b.edge_conductance[v]:
            first_violation = v
            break
    dominated = first_violation is None
    values = []
    effective_dominated = True
    for d in range(1, net_a.depth() + 1):
        ca, cb = net_a.effective_conductance(d), net_b.effective_conductance(d)
        values.append((d, ca, cb))
        if ca > cb:
            effective_dominated = False
    return RayleighReport(
        dominated=dominated,
        effective_dominated=effective_dominated,
        first_edge_violation=first_violation,
        effective_values=tuple(values),
    )


# ---------------------------------------------------------------------------
# Expected return time comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReturnTimeComparison:
    """Total conductance masses and root stationary weights of two walks.

    pi_root = c_root / sum_v c_v; the expected return time to the root is
    its reciprocal, so pi_root_x >= pi_root_y reproduces the expected-return
    monotonicity under the strong tree order.
    """

    sum_x: Fraction
    sum_y: Fraction
    pi_root_x: Fraction
    pi_root_y: Fraction

    @property
    def expected_return_x(self) -> Fraction:
        return 1 / self.pi_root_x

    @property
    def expected_return_y(self) -> Fraction:
        return 1 / self.pi_root_y

    def to_json_dict(self) -> dict:
        return {
            "sum_x": str(self.sum_x),
            "sum_y": str(self.sum_y),
            "pi_root_x": str(self.pi_root_x),
            "pi_root_y": str(self.pi_root_y),
            "expected_return_x": str(self.expected_return_x),
            "expected_return_y": str(self.expected_return_y),
        }


def _rule_total_conductance(spec: RuleTreeWalk) -> Fraction:
    """Exact sum_v c_v for a rule tree, certified finite or NonSummable.

    Per unit of entering edge conductance, the total edge mass of a class-c
    subtree satisfies g_c = 1 + sum_children ratio * g_child. The linear
    system (I - R) g = 1 is solved exactly; a solution with g >= 1 on the
    classes reachable below the root bounds the partial sums (the series is
    nonnegative), hence certifies summability with exact value. Anything
    else is reported NonSummable, never guessed.
    """
    ratios = _class_ratios(spec)
    names = sorted(ratios)
    index = {n: i for i, n in enumerate(names)}
    m = len(names)
    rows = [[Fraction(0)] * m for _ in range(m)]
    for name in names:
        i = index[name]
        rows[i][i] += 1
        for child, ratio in ratios[name]:
            rows[i][index[child]] -= ratio
    g = solve(rows, [Fraction(1)] * m)
    if g is None or any(x < 1 for x in g):
        raise NonSummable("no positive solution to the subtree-mass equations")
    root_rule = spec.classes[spec.root_class]
    edge_total = sum((p * g[index[child]] for child, p in root_rule.children), Fraction(0))
    return 2 * edge_total


def total_conductance(spec) -> Fraction:
    """sum_v c_v of the walk's network, normalized to unit root conductance."""
    if isinstance(spec, RuleTreeWalk):
        return _rule_total_conductance(spec)
    if isinstance(spec, ExplicitTreeWalk):
        net = conductances_from_walk(spec, spec.depth())
        return net.total_conductance()
    raise TypeError(f"not a tree walk: {type(spec).__name__}")


def return_time_compare(X, Y, depth: int = 24) -> ReturnTimeComparison:
    """Compare root stationary weights of two strongly ordered tree walks.

    Preconditions: X below Y in the strong tree order (OrderViolation
    otherwise) and both networks summable (NonSummable otherwise). depth
    bounds the explicit expansion used for rule-tree order diagnostics.
    """
    from .orders import OrderKind, check_order

    order = check_order(X, Y, OrderKind.TREE_STRONG)
    if not order.holds:
        raise OrderViolation(
            "strong tree order fails: "
            + "; ".join(c.describe() for c in order.witnesses[:4])
        )
    del depth  # sums are exact; kept for interface stability
    sum_x = total_conductance(X)
    sum_y = total_conductance(Y)
    pi_x = 1 / sum_x  # root conductance is 1 by normalization
    pi_y = 1 / sum_y
    if pi_x < pi_y:
        raise RuntimeError(
            "return-time monotonicity violated; conductance comparison is broken"
        )
    return ReturnTimeComparison(sum_x=sum_x, sum_y=sum_y, pi_root_x=pi_x, pi_root_y=pi_y)


# ---------------------------------------------------------------------------
# The binary-tree counterexample pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeCounterexamplePair:
    """Weak-order-comparable pair on the binary tree with an all-left spine.

    X sits strictly below Y in the weak order yet X is transient while Y is
    positive recurrent; the strong order fails on the spine children.
    """

    delta: Fraction
    X: RuleTreeWalk
    Y: RuleTreeWalk


def tree_counterexample(delta) -> TreeCounterexamplePair:
    """Construct the spine counterexample pair for 0 < delta < 1/7.

    Spine = all-left vertices. Y: spine rows (up 2d, left d, right 1-3d),
    off-spine rows (up 1-2d, left d, right d). X: spine rows (up 3d, left
    1-4d, right d), off-spine rows (up 1-d, d/2, d/2). Both split the root
    evenly. All transitions are positive (elliptic) on the stated range.
    """
    d = Fraction(delta)
    if not (0 < d < Fraction(1, 7)):
        raise DeltaOutOfRange(f"need 0 < delta < 1/7, got {d}")
    half = Fraction(1, 2)
    root = ClassRule(up=Fraction(0), children=(("spine", half), ("offspine", half)))
    Y = RuleTreeWalk(
        classes={
            "root": root,
            "spine": ClassRule(
                up=2 * d, children=(("spine", d), ("offspine", 1 - 3 * d))
            ),
            "offspine": ClassRule(
                up=1 - 2 * d, children=(("offspine", d), ("offspine", d))
            ),
        },
        root_class="root",
        child_labels=("L", "R"),
    )
    X = RuleTreeWalk(
        classes={
            "root": root,
            "spine": ClassRule(
                up=3 * d, children=(("spine", 1 - 4 * d), ("offspine", d))
            ),
            "offspine": ClassRule(
                up=1 - d, children=(("offspine", d / 2), ("offspine", d / 2))
            ),
        },
        root_class="root",
        child_labels=("L", "R"),
    )
    return TreeCounterexamplePair(delta=d, X=X, Y=Y)
