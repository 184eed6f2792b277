"""Named walk constructions used throughout the test and certificate suites.

The quadrant pair is the canonical order-related counterexample: the
transient walk precedes the positive recurrent one in the quadrant order.
The slab pair plays the same role on slabs of any thickness k >= 2.
"""

from __future__ import annotations

from fractions import Fraction as F

from .errors import UnknownExample
from .models import QuadrantWalkSpec, Row, SlabWalkSpec


def quadrant_recurrent() -> QuadrantWalkSpec:
    """Positive recurrent quadrant walk with a product-form stationary law."""
    return QuadrantWalkSpec(
        origin=Row(right=F(9, 14), up=F(5, 14)),
        x_axis=Row(up=F(1, 2), right=F(5, 12), left=F(1, 12)),
        y_axis=Row(down=F(89, 120), up=F(5, 24), right=F(1, 20)),
        interior=Row(up=F(3, 8), down=F(3, 8), left=F(5, 24), right=F(1, 24)),
    )


def quadrant_transient() -> QuadrantWalkSpec:
    """Transient quadrant walk lying strictly below the recurrent one."""
    return QuadrantWalkSpec(
        origin=Row(right=F(9, 14), up=F(5, 14)),
        x_axis=Row(up=F(49, 100), right=F(41, 100), left=F(1, 10)),
        y_axis=Row(down=F(19, 25), up=F(5, 25), right=F(1, 25)),
        interior=Row(up=F(1, 100), down=F(74, 100), left=F(21, 100), right=F(4, 100)),
    )


def slab_recurrent(k: int) -> SlabWalkSpec:
    """Positive recurrent slab walk (outward lower boundary, inward upper)."""
    return SlabWalkSpec(
        thickness=k,
        center=Row(up=F("0.65"), right=F("0.33"), left=F("0.01"), down=F("0.01")),
        lower_boundary=Row(right=F("0.52"), up=F("0.47"), left=F("0.01")),
        upper_boundary=Row(down=F("0.49"), left=F("0.48"), right=F("0.03")),
        left_boundary=Row(up=F("0.97"), right=F("0.02"), down=F("0.01")),
        origin=Row(right=F("0.99"), up=F("0.01")),
        upper_corner=Row(down=F("0.50"), right=F("0.50")),
    )


def slab_transient(k: int) -> SlabWalkSpec:
    """Transient slab walk strictly below the recurrent one statewise."""
    return SlabWalkSpec(
        thickness=k,
        center=Row(up=F("0.01"), right=F("0.32"), left=F("0.02"), down=F("0.65")),
        lower_boundary=Row(right=F("0.51"), up=F("0.46"), left=F("0.03")),
        upper_boundary=Row(down=F("0.50"), left=F("0.49"), right=F("0.01")),
        left_boundary=Row(up=F("0.01"), right=F("0.01"), down=F("0.98")),
        origin=Row(right=F("0.99"), up=F("0.01")),
        upper_corner=Row(down=F("0.51"), right=F("0.49")),
    )


_QUADRANT = {
    "quadrant_recurrent": quadrant_recurrent,
    "quadrant_transient": quadrant_transient,
}
_SLAB = {
    "slab_recurrent": slab_recurrent,
    "slab_transient": slab_transient,
}

NAMES = tuple(sorted(_QUADRANT) + sorted(_SLAB))


def get(name: str, k: int | None = None):
    """Look up a named construction; slab entries require thickness k >= 2.

    Raises UnknownExample for unrecognized names; slab constructors raise
    SpecValidationError for k < 2.
    """
    if name in _QUADRANT:
        return _QUADRANT[name]()
    if name in _SLAB:
        if k is None:
            raise UnknownExample(f"{name} requires thickness k")
        return _SLAB[name](k)
    raise UnknownExample(f"unknown catalog name {name!r}; known: {NAMES}")
