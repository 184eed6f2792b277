"""Parameter space of homogeneous walks on finitely generated abelian groups.

A group Z^n x H (H finite, given by torsion orders), a finite generator list
S (duplicates permitted), and a simplex point a define a homogeneous walk.
Recurrence is decided exactly: project away the torsion part, then the walk
is recurrent iff the projected support spans dimension at most 2 and the
mean drift vanishes; positive recurrence requires span dimension 0. The
recurrent region R of the simplex decomposes into finitely many closed
convex polytopes indexed by feasible support spans; this module enumerates
them exactly and answers the convexity and topology questions that are
decidable from that decomposition, returning "unknown" (None) where the
underlying questions are open.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

from .errors import TooManyGenerators
from .models import SCHEMA_VERSION, as_rational
from .ratlinalg import join_dim, rank as mat_rank, solve, span_canonical, span_dim

Span = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^rank x Z_{m_1} x ... x Z_{m_k}; elements are int tuples."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be >= 0")
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if any(m < 2 for m in self.torsion):
            raise ValueError("torsion orders must be >= 2")

    @property
    def n_coords(self) -> int:
        return self.rank + len(self.torsion)

    def normalize(self, element: Sequence[int]) -> tuple[int, ...]:
        element = tuple(int(x) for x in element)
        if len(element) != self.n_coords:
            raise ValueError(
                f"element length {len(element)} != rank+torsion {self.n_coords}"
            )
        free = element[: self.rank]
        tors = tuple(x % m for x, m in zip(element[self.rank :], self.torsion))
        return free + tors

    def neg(self, element: Sequence[int]) -> tuple[int, ...]:
        return self.normalize(tuple(-x for x in element))

    def scalar_mul(self, c: int, element: Sequence[int]) -> tuple[int, ...]:
        return self.normalize(tuple(c * x for x in element))

    def project(self, element: Sequence[int]) -> tuple[int, ...]:
        """Drop the torsion coordinates."""
        return tuple(int(x) for x in element[: self.rank])

    def exponent(self) -> int:
        return lcm(*self.torsion) if self.torsion else 1

    def to_json_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


class Classification(Enum):
    POSITIVE_RECURRENT = "positive_recurrent"
    NULL_RECURRENT = "null_recurrent"
    TRANSIENT = "transient"

    @property
    def recurrent(self) -> bool:
        return self is not Classification.TRANSIENT


@dataclass(frozen=True)
class GroupWalkInstance:
    group: FGAbelianGroup
    generators: tuple[tuple[int, ...], ...]
    a: tuple[Fraction, ...]

    def __post_init__(self):
        gens = tuple(self.group.normalize(s) for s in self.generators)
        object.__setattr__(self, "generators", gens)
        weights = tuple(as_rational(x, "a") for x in self.a)
        object.__setattr__(self, "a", weights)
        if len(weights) != len(gens):
            raise ValueError("a must have one entry per generator")
        if any(w < 0 for w in weights):
            raise ValueError("a must be nonnegative")
        if sum(weights) != 1:
            raise ValueError(f"a sums to {sum(weights)} != 1")

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.a) if w > 0)

    def projected_support(self) -> tuple[tuple[int, ...], ...]:
        """T_a: distinct projections of the supported generators (recomputed)."""
        seen = []
        for i in self.support():
            v = self.group.project(self.generators[i])
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    def mean_drift(self) -> tuple[Fraction, ...]:
        drift = [Fraction(0)] * self.group.rank
        for w, s in zip(self.a, self.generators):
            for c, x in enumerate(self.group.project(s)):
                drift[c] += w * x
        return tuple(drift)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "group": self.group.to_json_dict(),
            "generators": [list(s) for s in self.generators],
            "a": [str(w) for w in self.a],
        }


def instance_from_json_dict(data) -> GroupWalkInstance:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("bad or missing schema_version")
    group = FGAbelianGroup(
        rank=int(data["group"]["rank"]),
        torsion=tuple(data["group"].get("torsion", ())),
    )
    return GroupWalkInstance(
        group=group,
        generators=tuple(tuple(s) for s in data["generators"]),
        a=tuple(Fraction(x) for x in data["a"]),
    )


def instance_from_json(text: str) -> GroupWalkInstance:
    return instance_from_json_dict(json.loads(text))


def classify(instance: GroupWalkInstance) -> Classification:
    """Exact recurrence type of a homogeneous group walk.

    Span dimension 0 of the projected support gives positive recurrence
    (the projection never moves and the torsion part returns by finiteness);
    dimensions 1 and 2 with zero mean drift give null recurrence; everything
    else is transient.
    """
    dim = span_dim([list(v) for v in instance.projected_support()])
    if dim == 0:
        return Classification.POSITIVE_RECURRENT
    if dim <= 2 and all(x == 0 for x in instance.mean_drift()):
        return Classification.NULL_RECURRENT
    return Classification.TRANSIENT


# ---------------------------------------------------------------------------
# Feasible supports and the polytope decomposition of R
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportClass:
    """One span class of the decomposition of R.

    indices: the union of all supports U feasible for this span (a itself
    feasible: the witness is strictly positive exactly there). span: the
    canonical (reduced row-echelon) form of span(projected generators).
    """

    indices: tuple[int, ...]
    span: Span
    witness: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.span)

    def to_json_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "span": [[str(x) for x in row] for row in self.span],
            "dim": self.dim,
            "witness": [str(w) for w in self.witness],
        }


def _polytope_vertices(
    columns: list[tuple[int, ...]], support: tuple[int, ...]
) -> list[tuple[Fraction, ...]]:
    """Vertices of {x >= 0, sum x = 1, sum x_i columns[i] = 0} on the support.

    Basic feasible solutions of the equality system; exact.
    """
    n_rows = (len(columns[0]) if columns else 0) + 1
    u = len(support)
    matrix = [[Fraction(columns[i][r]) for i in support] for r in range(n_rows - 1)]
    matrix.append([Fraction(1)] * u)
    rhs = [Fraction(0)] * (n_rows - 1) + [Fraction(1)]
    r = mat_rank(matrix)
    vertices: set[tuple[Fraction, ...]] = set()
    for basis in combinations(range(u), r):
        sub = [[matrix[row][c] for c in basis] for row in range(n_rows)]
        x = solve(sub, rhs)
        if x is None:
            continue
        # solve() zero-fills free variables; verify the candidate exactly.
        if any(
            sum(sub[row][k] * x[k] for k in range(r)) != rhs[row]
            for row in range(n_rows)
        ):
            continue
        if any(v < 0 for v in x):
            continue
        full = [Fraction(0)] * u
        for k, c in enumerate(basis):
            full[c] = x[k]
        vertices.add(tuple(full))
    return sorted(vertices)


def _strict_positive_point(
    columns: list[tuple[int, ...]], support: tuple[int, ...], n_total: int
) -> tuple[Fraction, ...] | None:
    """A zero-drift simplex point strictly positive exactly on the support.

    Averages the polytope's vertices; a strictly positive average exists iff
    every supported coordinate is positive at some vertex.
    """
    vertices = _polytope_vertices(columns, support)
    if not vertices:
        return None
    m = len(vertices)
    avg = [sum(v[k] for v in vertices) / m for k in range(len(support))]
    if any(x == 0 for x in avg):
        return None
    full = [Fraction(0)] * n_total
    for k, i in enumerate(support):
        full[i] = avg[k]
    return tuple(full)


def feasible_supports(
    group: FGAbelianGroup,
    generators: Sequence[Sequence[int]],
    max_generators: int = 20,
) -> list[SupportClass]:
    """All span classes of R, with exact interior witnesses.

    Depth-first subset enumeration over generator indices; a branch is cut
    as soon as its projected span reaches dimension 3 (supersets only grow
    the span). Feasible supports sharing a span are merged: the union of
    their supports is again feasible (average the witnesses).
    """
    gens = [group.normalize(s) for s in generators]
    if len(gens) > max_generators:
        raise TooManyGenerators(f"{len(gens)} generators > guard {max_generators}")
    projected = [group.project(s) for s in gens]
    n = len(gens)
    by_span: dict[Span, tuple[list[int], list[tuple[Fraction, ...]]]] = {}

    def visit(prefix: list[int], span_rows: list[list[Fraction]], start: int):
        if prefix:
            support = tuple(prefix)
            witness = _strict_positive_point(projected, support, n)
            if witness is not None:
                key = span_canonical(span_rows)
                indices, witnesses = by_span.setdefault(key, ([], []))
                for i in support:
                    if i not in indices:
                        indices.append(i)
                witnesses.append(witness)
        for i in range(start, n):
            new_rows = span_rows + [[Fraction(x) for x in projected[i]]]
            if span_dim(new_rows) >= 3:
                continue
            visit(prefix + [i], new_rows, i + 1)

    visit([], [], 0)

    classes = []
    for span, (indices, witnesses) in sorted(by_span.items()):
        m = len(witnesses)
        merged = tuple(
            sum((w[i] for w in witnesses), Fraction(0)) / m for i in range(n)
        )
        classes.append(
            SupportClass(indices=tuple(sorted(indices)), span=span, witness=merged)
        )
    return classes


# ---------------------------------------------------------------------------
# Convexity of R
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexityReport:
    convex: bool
    witness_subspace: Span | None
    violating_pair: tuple[SupportClass, SupportClass] | None

    def to_json_dict(self) -> dict:
        return {
            "convex": self.convex,
            "witness_subspace": None
            if self.witness_subspace is None
            else [[str(x) for x in row] for row in self.witness_subspace],
            "violating_pair": None
            if self.violating_pair is None
            else [c.to_json_dict() for c in self.violating_pair],
        }


def is_R_convex(
    group: FGAbelianGroup,
    generators: Sequence[Sequence[int]],
    max_generators: int = 20,
) -> ConvexityReport:
    """R is convex iff all feasible spans fit in one subspace of dim <= 2.

    When they do not, produces two points of R whose midpoint has projected
    span of dimension 3 and is therefore transient. One of the pair may be a
    synthesized class (the midpoint of two listed classes); it is itself a
    legitimate support class of R.
    """
    classes = feasible_supports(group, generators, max_generators)
    if not classes:
        return ConvexityReport(convex=True, witness_subspace=(), violating_pair=None)
    joint = span_canonical([list(row) for c in classes for row in c.span])
    if len(joint) <= 2:
        return ConvexityReport(convex=True, witness_subspace=joint, violating_pair=None)

    by_span = {c.span: c for c in classes}
    running = classes[0]
    for nxt in classes[1:]:
        if join_dim(running.span, nxt.span) >= 3:
            return ConvexityReport(
                convex=False, witness_subspace=None, violating_pair=(running, nxt)
            )
        merged_span = span_canonical(
            [list(r) for r in running.span] + [list(r) for r in nxt.span]
        )
        if merged_span in by_span:
            running = by_span[merged_span]
        else:
            # Midpoint of two classes: feasible for the merged span.
            witness = tuple(
                (x + y) / 2 for x, y in zip(running.witness, nxt.witness)
            )
            running = SupportClass(
                indices=tuple(sorted(set(running.indices) | set(nxt.indices))),
                span=merged_span,
                witness=witness,
            )
    raise RuntimeError("joint span had dim >= 3 but no violating pair emerged")


# ---------------------------------------------------------------------------
# Symmetry detection
# ---------------------------------------------------------------------------


def is_symmetric(group: FGAbelianGroup, generators: Sequence[Sequence[int]]) -> bool:
    gens = {group.normalize(s) for s in generators}
    return all(group.neg(s) in gens for s in gens)


def scaled_symmetry_factor(
    group: FGAbelianGroup, generators: Sequence[Sequence[int]]
) -> int | None:
    """Smallest c >= 1 with S = T u (-c)T for some T, None if there is none.

    c = 1 is plain symmetry. The search range is bounded by the coordinate
    magnitudes (scaling grows nonzero projections) plus the torsion exponent
    (scaling cycles torsion parts).
    """
    gens = {group.normalize(s) for s in generators}
    coords = [abs(x) for s in gens for x in group.project(s)]
    max_abs = max(coords, default=0)
    c_max = max(1, max_abs) + group.exponent()
    for c in range(1, c_max + 1):
        candidates = {s for s in gens if group.neg(group.scalar_mul(c, s)) in gens}
        image = {group.neg(group.scalar_mul(c, s)) for s in candidates}
        if candidates | image == gens:
            return c
    return None


# ---------------------------------------------------------------------------
# Topology of R and of its complement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RTopologyReport:
    closed: bool
    pathconnected: bool | None
    components_lower_bound: int
    n_span_classes: int
    symmetric_like_factor: int | None

    def to_json_dict(self) -> dict:
        return {
            "closed": self.closed,
            "pathconnected": self.pathconnected,
            "components_lower_bound": self.components_lower_bound,
            "n_span_classes": self.n_span_classes,
            "symmetric_like_factor": self.symmetric_like_factor,
        }


def _span_intersection_components(classes: list[SupportClass]) -> int:
    """Components of the graph joining classes with nontrivially meeting spans."""
    n = len(classes)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            meet_dim = (
                classes[i].dim + classes[j].dim - join_dim(classes[i].span, classes[j].span)
            )
            if meet_dim > 0:
                parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


def R_topology(
    group: FGAbelianGroup,
    generators: Sequence[Sequence[int]],
    max_generators: int = 20,
) -> RTopologyReport:
    """Closedness (always) and decidable path-connectivity facts about R.

    Path-connected is True for symmetric or scaled-symmetric generator sets,
    for a single span class, or when some generator projects to zero (its
    simplex vertex lies in every class polytope). It is False when the
    span-intersection graph is disconnected: classes whose spans meet only
    at 0 have disjoint polytopes then, so distinct graph components are
    topologically separated, giving the components lower bound. Everything
    else is unknown (None): the general asymmetric case is open.
    """
    classes = feasible_supports(group, generators, max_generators)
    gens = [group.normalize(s) for s in generators]
    factor = scaled_symmetry_factor(group, generators)
    has_zero_projection = any(
        all(x == 0 for x in group.project(s)) for s in gens
    )
    if not classes:
        return RTopologyReport(True, True, 0, 0, factor)
    components = _span_intersection_components(classes)
    if len(classes) == 1 or has_zero_projection:
        return RTopologyReport(True, True, 1, len(classes), factor)
    if factor is not None:
        return RTopologyReport(True, True, 1, len(classes), factor)
    if components > 1:
        return RTopologyReport(True, False, components, len(classes), factor)
    return RTopologyReport(True, None, 1, len(classes), factor)


@dataclass(frozen=True)
class RcReport:
    pathconnected: bool | None
    convex: bool | None
    interior_transient_witness: tuple[Fraction, ...] | None
    nonconvex_witness: tuple[int, int] | None

    def to_json_dict(self) -> dict:
        return {
            "pathconnected": self.pathconnected,
            "convex": self.convex,
            "interior_transient_witness": None
            if self.interior_transient_witness is None
            else [str(x) for x in self.interior_transient_witness],
            "nonconvex_witness": self.nonconvex_witness,
        }


def _zero_drift_support_dim3(
    group: FGAbelianGroup, gens: list[tuple[int, ...]], max_generators: int
) -> tuple[Fraction, ...] | None:
    """A strictly positive zero-drift point whose projected span has dim >= 3."""
    if len(gens) > max_generators:
        raise TooManyGenerators(f"{len(gens)} generators > guard {max_generators}")
    projected = [group.project(s) for s in gens]
    n = len(gens)
    indices = list(range(n))
    # Try large supports first: the full support usually decides it.
    for size in range(n, 0, -1):
        for support in combinations(indices, size):
            if span_dim([list(projected[i]) for i in support]) < 3:
                continue
            witness = _strict_positive_point(projected, support, n)
            if witness is not None:
                return witness
    return None


def Rc_properties(
    group: FGAbelianGroup,
    generators: Sequence[Sequence[int]],
    max_generators: int = 20,
) -> RcReport:
    """Decidable facts about the transient region R^c = A \\ R.

    pathconnected: True when R^c is empty (all projections zero), when R is
    empty, or when some zero-drift support spans dimension >= 3 (the
    sufficient criterion); False for the one-dimensional case |S| = 2 with R
    a single interior point; otherwise unknown. convex: True vacuously when
    R^c is empty or R is empty; False for symmetric S with a nonzero
    projection (two opposite simplex vertices are transient, their midpoint
    recurrent); otherwise unknown.
    """
    gens = [group.normalize(s) for s in generators]
    projected = [group.project(s) for s in gens]
    if all(all(x == 0 for x in v) for v in projected):
        return RcReport(True, True, None, None)

    classes = feasible_supports(group, generators, max_generators)
    if not classes:
        # R empty: the complement is the whole simplex.
        return RcReport(True, True, None, None)

    pathconnected: bool | None = None
    witness3 = _zero_drift_support_dim3(group, gens, max_generators)
    if witness3 is not None:
        pathconnected = True
    elif len(gens) == 2:
        vertices = _polytope_vertices(projected, (0, 1))
        if len(vertices) == 1 and all(x > 0 for x in vertices[0]):
            pathconnected = False

    convex: bool | None = None
    nonconvex_witness = None
    if is_symmetric(group, generators):
        for i, s in enumerate(gens):
            if any(x != 0 for x in projected[i]):
                j = gens.index(group.neg(s))
                convex = False
                nonconvex_witness = (i, j)
                break

    return RcReport(
        pathconnected=pathconnected,
        convex=convex,
        interior_transient_witness=witness3,
        nonconvex_witness=nonconvex_witness,
    )


@dataclass(frozen=True)
class PRegionReport:
    """The positive recurrent region: the face over zero-projection indices."""

    indices: tuple[int, ...]
    closed: bool
    convex: bool

    @property
    def is_empty(self) -> bool:
        return not self.indices

    def to_json_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "empty": self.is_empty,
            "closed": self.closed,
            "convex": self.convex,
        }


def P_region(
    group: FGAbelianGroup, generators: Sequence[Sequence[int]]
) -> PRegionReport:
    gens = [group.normalize(s) for s in generators]
    indices = tuple(
        i for i, s in enumerate(gens) if all(x == 0 for x in group.project(s))
    )
    return PRegionReport(indices=indices, closed=True, convex=True)


# ---------------------------------------------------------------------------
# Mesh export
# ---------------------------------------------------------------------------


def mesh_classification(
    group: FGAbelianGroup,
    generators: Sequence[Sequence[int]],
    axes: tuple[int, int, int],
    resolution: int = 20,
) -> list[tuple[Fraction, Fraction, Fraction, str]]:
    """Classify a barycentric grid on a 2-simplex slice of the simplex.

    Mass is spread over the three chosen generator indices only; rows are
    (a_i, a_j, a_k, classification value).
    """
    gens = tuple(group.normalize(s) for s in generators)
    i, j, k = axes
    rows = []
    for p in range(resolution + 1):
        for q in range(resolution + 1 - p):
            r = resolution - p - q
            a = [Fraction(0)] * len(gens)
            a[i] += Fraction(p, resolution)
            a[j] += Fraction(q, resolution)
            a[k] += Fraction(r, resolution)
            inst = GroupWalkInstance(group=group, generators=gens, a=tuple(a))
            rows.append(
                (Fraction(p, resolution), Fraction(q, resolution), Fraction(r, resolution),
                 classify(inst).value)
            )
    return rows
