"""Lattice walk specifications: the positive quadrant and the slab.

All probabilities are exact rationals end to end. Floats are rejected at
construction, never rounded: downstream certificate and region modules rely
on exact feasibility tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import SpecValidationError, Violation

SCHEMA_VERSION = 1

RationalLike = Union[int, Fraction, str]


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"
    UP = "up"
    DOWN = "down"

    @property
    def delta(self) -> tuple[int, int]:
        return _DELTAS[self]

    @property
    def diag_increment(self) -> int:
        """Change of x - y caused by this move."""
        dx, dy = _DELTAS[self]
        return dx - dy


_DELTAS = {
    Direction.LEFT: (-1, 0),
    Direction.RIGHT: (1, 0),
    Direction.UP: (0, 1),
    Direction.DOWN: (0, -1),
}

DIRECTIONS = (Direction.LEFT, Direction.RIGHT, Direction.UP, Direction.DOWN)

# Fixed numeric codes shared with the simulation kernels.
DIR_INDEX = {Direction.LEFT: 0, Direction.RIGHT: 1, Direction.UP: 2, Direction.DOWN: 3}
STAY_INDEX = 4


def as_rational(value: RationalLike, where: str = "probability") -> Fraction:
    """Convert to an exact Fraction; floats are rejected, not rounded."""
    if isinstance(value, bool):
        raise TypeError(f"{where}: bool is not a probability")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(
            f"{where}: floating-point input {value!r} rejected; pass a Fraction, "
            'int, or exact string like "3/8" or "0.375"'
        )
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"{where}: cannot interpret {type(value).__name__} as a rational")


@dataclass(frozen=True)
class Row:
    """One state's outgoing distribution over the four lattice directions."""

    left: Fraction = Fraction(0)
    right: Fraction = Fraction(0)
    up: Fraction = Fraction(0)
    down: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("left", "right", "up", "down"):
            object.__setattr__(self, name, as_rational(getattr(self, name), name))

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "Row":
        probs = {}
        for key, value in mapping.items():
            direction = key.value if isinstance(key, Direction) else str(key)
            if direction not in ("left", "right", "up", "down"):
                raise ValueError(f"unknown direction name {direction!r}")
            probs[direction] = as_rational(value, direction)
        return cls(**probs)

    def get(self, direction: Direction) -> Fraction:
        return getattr(self, direction.value)

    def items(self) -> Iterable[tuple[Direction, Fraction]]:
        return ((d, self.get(d)) for d in DIRECTIONS)

    def total(self) -> Fraction:
        return self.left + self.right + self.up + self.down

    def support(self) -> tuple[Direction, ...]:
        return tuple(d for d in DIRECTIONS if self.get(d) > 0)

    def as_dict(self) -> dict[str, str]:
        return {d.value: str(self.get(d)) for d in DIRECTIONS if self.get(d) != 0}


# Region catalogs: name -> directions that may carry positive probability.

QUADRANT_REGIONS = {
    "origin": (Direction.RIGHT, Direction.UP),
    "x_axis": (Direction.LEFT, Direction.RIGHT, Direction.UP),
    "y_axis": (Direction.RIGHT, Direction.UP, Direction.DOWN),
    "interior": DIRECTIONS,
}

SLAB_REGIONS = {
    "center": DIRECTIONS,
    "lower_boundary": (Direction.LEFT, Direction.RIGHT, Direction.UP),
    "upper_boundary": (Direction.LEFT, Direction.RIGHT, Direction.DOWN),
    "left_boundary": (Direction.RIGHT, Direction.UP, Direction.DOWN),
    "origin": (Direction.RIGHT, Direction.UP),
    "upper_corner": (Direction.RIGHT, Direction.DOWN),
}


def _validate_regions(regions: Mapping[str, Row], allowed: Mapping[str, tuple]) -> list[Violation]:
    violations = []
    for name, row in regions.items():
        allowed_dirs = allowed[name]
        for direction, p in row.items():
            if p < 0:
                violations.append(
                    Violation("NegativeProbability", name, f"{direction.value} = {p}")
                )
            elif p > 0 and direction not in allowed_dirs:
                violations.append(
                    Violation(
                        "ForbiddenMove",
                        name,
                        f"{direction.value} = {p} would leave the state space",
                    )
                )
        if row.total() != 1:
            violations.append(Violation("NonStochastic", name, f"row sums to {row.total()}"))
    return violations


@dataclass(frozen=True)
class QuadrantWalkSpec:
    """Nearest-neighbor walk on N^2 with region-constant transition rows.

    Regions: the origin, the positive x-axis, the positive y-axis, and the
    interior. Validation happens at construction; instances are immutable.
    """

    origin: Row
    x_axis: Row
    y_axis: Row
    interior: Row

    def __post_init__(self):
        violations = _validate_regions(self.regions(), QUADRANT_REGIONS)
        if violations:
            raise SpecValidationError(violations)

    kind = "quadrant"

    def regions(self) -> dict[str, Row]:
        return {
            "origin": self.origin,
            "x_axis": self.x_axis,
            "y_axis": self.y_axis,
            "interior": self.interior,
        }

    @staticmethod
    def region_of(i: int, j: int) -> str:
        if i == 0 and j == 0:
            return "origin"
        if j == 0:
            return "x_axis"
        if i == 0:
            return "y_axis"
        return "interior"

    def row_at(self, i: int, j: int) -> Row:
        return self.regions()[self.region_of(i, j)]

    @classmethod
    def from_tables(cls, tables: Mapping[str, Mapping]) -> "QuadrantWalkSpec":
        missing = set(QUADRANT_REGIONS) - set(tables)
        if missing:
            raise ValueError(f"missing regions: {sorted(missing)}")
        return cls(**{name: Row.from_mapping(tables[name]) for name in QUADRANT_REGIONS})

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "quadrant",
            "regions": {name: row.as_dict() for name, row in self.regions().items()},
        }


@dataclass(frozen=True)
class SlabWalkSpec:
    """Nearest-neighbor walk on the slab {i >= 0, 0 <= j <= k}, k >= 2.

    Six region rows: center, lower boundary (j=0, i>=1), upper boundary
    (j=k, i>=1), left boundary (i=0, 0<j<k), origin, and upper corner (0,k).
    """

    thickness: int
    center: Row
    lower_boundary: Row
    upper_boundary: Row
    left_boundary: Row
    origin: Row
    upper_corner: Row

    def __post_init__(self):
        if not isinstance(self.thickness, int) or self.thickness < 2:
            raise SpecValidationError(
                [Violation("NonStochastic", "thickness", f"thickness {self.thickness} < 2")]
            )
        violations = _validate_regions(self.regions(), SLAB_REGIONS)
        if violations:
            raise SpecValidationError(violations)

    kind = "slab"

    def regions(self) -> dict[str, Row]:
        return {
            "center": self.center,
            "lower_boundary": self.lower_boundary,
            "upper_boundary": self.upper_boundary,
            "left_boundary": self.left_boundary,
            "origin": self.origin,
            "upper_corner": self.upper_corner,
        }

    def region_of(self, i: int, j: int) -> str:
        k = self.thickness
        if not (i >= 0 and 0 <= j <= k):
            raise ValueError(f"({i},{j}) outside slab of thickness {k}")
        if i == 0:
            if j == 0:
                return "origin"
            if j == k:
                return "upper_corner"
            return "left_boundary"
        if j == 0:
            return "lower_boundary"
        if j == k:
            return "upper_boundary"
        return "center"

    def row_at(self, i: int, j: int) -> Row:
        return self.regions()[self.region_of(i, j)]

    @classmethod
    def from_tables(cls, thickness: int, tables: Mapping[str, Mapping]) -> "SlabWalkSpec":
        missing = set(SLAB_REGIONS) - set(tables)
        if missing:
            raise ValueError(f"missing regions: {sorted(missing)}")
        rows = {name: Row.from_mapping(tables[name]) for name in SLAB_REGIONS}
        return cls(thickness=thickness, **rows)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "slab",
            "thickness": self.thickness,
            "regions": {name: row.as_dict() for name, row in self.regions().items()},
        }


LatticeSpec = Union[QuadrantWalkSpec, SlabWalkSpec]


def validate(spec):
    """Re-run invariant checks on an already-constructed spec.

    Specs validate at construction, so this is primarily a named entry point
    for callers holding objects of uncertain provenance. Returns the spec.
    """
    if isinstance(spec, QuadrantWalkSpec):
        violations = _validate_regions(spec.regions(), QUADRANT_REGIONS)
    elif isinstance(spec, SlabWalkSpec):
        violations = _validate_regions(spec.regions(), SLAB_REGIONS)
    else:
        # Tree specs carry their own validate(); duck-type through it.
        return spec.validate() if hasattr(spec, "validate") else spec
    if violations:
        raise SpecValidationError(violations)
    return spec


def spec_from_json_dict(data: Mapping) -> LatticeSpec:
    if "schema_version" not in data:
        raise ValueError("spec JSON missing required schema_version field")
    if data["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {data['schema_version']}")
    kind = data.get("kind")
    regions = data.get("regions", {})
    if kind == "quadrant":
        extra = set(regions) - set(QUADRANT_REGIONS)
        if extra:
            raise ValueError(f"unknown quadrant regions: {sorted(extra)}")
        return QuadrantWalkSpec.from_tables(regions)
    if kind == "slab":
        extra = set(regions) - set(SLAB_REGIONS)
        if extra:
            raise ValueError(f"unknown slab regions: {sorted(extra)}")
        return SlabWalkSpec.from_tables(int(data["thickness"]), regions)
    raise ValueError(f"unknown spec kind {kind!r}")


def spec_from_json(text: str) -> LatticeSpec:
    return spec_from_json_dict(json.loads(text))


def spec_to_json(spec: LatticeSpec, indent: int | None = None) -> str:
    return json.dumps(spec.to_json_dict(), indent=indent, sort_keys=True)
