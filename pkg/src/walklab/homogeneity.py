"""Homogeneity predicates and the redirection-rule algebra behind them.

A quadrant walk in region-constant form can be *inward-homogeneous* (boundary
rows arise from the interior row by redirecting forbidden moves, never toward
the boundary's outward direction) or *weakly inward-homogeneous* (the ratio
relaxation that also allows suppress-and-renormalize boundaries, equivalently
a lazy redirection). The slab has its own homogeneity with chains tying all
six regions to the center row.

This module evaluates those predicates exactly and derives the explicit
redirection kernels (stage two of the coupled simulation): for each boundary
region and each forbidden proposed direction, an ordered outcome table over
{move, stay}. Ratios with zero denominators follow the documented convention:
n/0 with n > 0 is +infinity, 0/0 is vacuous and satisfies every inequality it
appears in; both are flagged in the ratio report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionFailed
from .models import Direction, QuadrantWalkSpec, Row, SlabWalkSpec

# Extended ratio kinds
FINITE = "finite"
INFINITE = "infinite"
VACUOUS = "vacuous"  # 0/0: constraint involving it is vacuously satisfied


@dataclass(frozen=True)
class Ratio:
    """Boundary-to-interior probability ratio with zero-denominator handling."""

    name: str
    numerator: Fraction
    denominator: Fraction

    @property
    def kind(self) -> str:
        if self.denominator != 0:
            return FINITE
        return INFINITE if self.numerator > 0 else VACUOUS

    @property
    def value(self) -> Fraction | None:
        return self.numerator / self.denominator if self.denominator != 0 else None

    def __str__(self) -> str:
        v = {FINITE: str(self.value), INFINITE: "+inf", VACUOUS: "0/0 (vacuous)"}
        return f"{self.name} = {self.numerator}/{self.denominator} = {v[self.kind]}"


def ratio_geq(a: Ratio | int, b: Ratio | int) -> bool:
    """a >= b over extended ratios; vacuous terms satisfy everything."""
    ka = a.kind if isinstance(a, Ratio) else FINITE
    kb = b.kind if isinstance(b, Ratio) else FINITE
    if VACUOUS in (ka, kb):
        return True
    if ka == INFINITE:
        return True
    if kb == INFINITE:
        return False
    va = a.value if isinstance(a, Ratio) else Fraction(a)
    vb = b.value if isinstance(b, Ratio) else Fraction(b)
    return va >= vb


@dataclass(frozen=True)
class HomogeneityReport:
    inward: bool
    weakly_inward: bool
    ratios: tuple[Ratio, ...]
    failed_conditions: tuple[str, ...]

    def ratio_report(self) -> tuple[str, ...]:
        return tuple(str(r) for r in self.ratios)


def homogeneity_class(spec: QuadrantWalkSpec) -> HomogeneityReport:
    """Classify a quadrant spec as inward / weakly inward homogeneous.

    Inward-homogeneity checks the equality-and-inequality conditions tying
    the boundary rows to the interior row; weak inward-homogeneity checks the
    two ratio chains. Inward implies weakly inward.
    """
    q, x, y, o = spec.interior, spec.x_axis, spec.y_axis, spec.origin

    inward = (
        o.right >= x.right
        and x.right == q.right
        and x.left >= q.left
        and x.up >= q.up
        and o.up >= y.up
        and y.up == q.up
        and y.down >= q.down
        and y.right >= q.right
    )

    lx = Ratio("left_x/left_q", x.left, q.left)
    ux = Ratio("up_x/up_q", x.up, q.up)
    rx = Ratio("right_x/right_q", x.right, q.right)
    dy = Ratio("down_y/down_q", y.down, q.down)
    ry = Ratio("right_y/right_q", y.right, q.right)
    uy = Ratio("up_y/up_q", y.up, q.up)

    conditions = [
        ("left_x/left_q >= right_x/right_q", ratio_geq(lx, rx)),
        ("up_x/up_q >= right_x/right_q", ratio_geq(ux, rx)),
        ("right_x/right_q >= 1", ratio_geq(rx, 1)),
        ("down_y/down_q >= up_y/up_q", ratio_geq(dy, uy)),
        ("right_y/right_q >= up_y/up_q", ratio_geq(ry, uy)),
        ("up_y/up_q >= 1", ratio_geq(uy, 1)),
    ]
    failed = tuple(name for name, ok in conditions if not ok)
    return HomogeneityReport(
        inward=inward,
        weakly_inward=not failed,
        ratios=(lx, ux, rx, dy, ry, uy),
        failed_conditions=failed,
    )


def slab_homogeneity(spec: SlabWalkSpec) -> bool:
    return not slab_homogeneity_failures(spec)


def slab_homogeneity_failures(spec: SlabWalkSpec) -> tuple[str, ...]:
    """Inequality chains tying the five boundary rows to the center row."""
    q = spec.center
    x, u = spec.lower_boundary, spec.upper_boundary
    y, o, c = spec.left_boundary, spec.origin, spec.upper_corner
    chains = [
        ("right_corner >= right_upper", c.right >= u.right),
        ("right_upper >= right_center", u.right >= q.right),
        ("right_center <= right_lower", q.right <= x.right),
        ("right_lower <= right_origin", x.right <= o.right),
        ("right_left_boundary >= right_center", y.right >= q.right),
        ("left_upper >= left_center", u.left >= q.left),
        ("left_center <= left_lower", q.left <= x.left),
        ("down_upper >= down_center", u.down >= q.down),
        ("down_left_boundary >= down_center", y.down >= q.down),
        ("down_corner >= down_center", c.down >= q.down),
        ("up_lower >= up_center", x.up >= q.up),
        ("up_left_boundary >= up_center", y.up >= q.up),
        ("up_origin >= up_center", o.up >= q.up),
    ]
    return tuple(name for name, ok in chains if not ok)


# ---------------------------------------------------------------------------
# Redirection kernels.
#
# An outcome is a Direction or None (stay put). Each rule is an ordered tuple
# of (outcome, probability) with probabilities summing to 1; order matters
# because coupled simulations drive several rules with one shared uniform and
# rely on RIGHT occupying a common prefix.
# ---------------------------------------------------------------------------

RedirectRule = tuple[tuple[Direction | None, Fraction], ...]


def _check_rule(rule: RedirectRule, context: str) -> RedirectRule:
    total = sum(p for _, p in rule)
    if total != 1 or any(p < 0 for _, p in rule):
        raise PreconditionFailed(f"{context}: redirection masses invalid ({rule})")
    return rule


def quadrant_redirect_rules(spec: QuadrantWalkSpec) -> dict[tuple[str, Direction], RedirectRule]:
    """Stage-two kernels for a weakly inward-homogeneous quadrant walk.

    Keys are (region, proposed forbidden direction). The x-axis rule for a
    proposed DOWN is lazy with probability (1 - right_q/right_x)/down_q and
    otherwise redistributes the scaled surpluses to LEFT and UP; the y-axis
    rule mirrors it. The origin splits its surplus proportionally between
    RIGHT and UP for either forbidden proposal.

    Raises PreconditionFailed when the spec is not weakly inward-homogeneous
    or its origin row cannot be written as a redirection of the interior row
    (right_o >= right_q and up_o >= up_q).
    """
    report = homogeneity_class(spec)
    if not report.weakly_inward:
        raise PreconditionFailed(
            "weakly_inward(X) is false: " + ", ".join(report.failed_conditions)
        )
    q, x, y, o = spec.interior, spec.x_axis, spec.y_axis, spec.origin
    if o.right < q.right or o.up < q.up:
        raise PreconditionFailed(
            "origin redirection inexpressible: needs right_o >= right_q and up_o >= up_q"
        )

    rules: dict[tuple[str, Direction], RedirectRule] = {}

    if q.down > 0:
        scale = q.right / x.right if x.right > 0 else Fraction(1)
        lazy = 1 - scale
        extra_left = scale * x.left - q.left
        extra_up = scale * x.up - q.up
        rules[("x_axis", Direction.DOWN)] = _check_rule(
            (
                (Direction.LEFT, extra_left / q.down),
                (Direction.UP, extra_up / q.down),
                (None, lazy / q.down),
            ),
            "x_axis",
        )
    if q.left > 0:
        scale = q.up / y.up if y.up > 0 else Fraction(1)
        lazy = 1 - scale
        extra_down = scale * y.down - q.down
        extra_right = scale * y.right - q.right
        rules[("y_axis", Direction.LEFT)] = _check_rule(
            (
                (Direction.RIGHT, extra_right / q.left),
                (Direction.DOWN, extra_down / q.left),
                (None, lazy / q.left),
            ),
            "y_axis",
        )
    blocked = q.left + q.down
    if blocked > 0:
        to_right = (o.right - q.right) / blocked
        to_up = (o.up - q.up) / blocked
        rule = _check_rule(
            ((Direction.RIGHT, to_right), (Direction.UP, to_up)), "origin"
        )
        rules[("origin", Direction.LEFT)] = rule
        rules[("origin", Direction.DOWN)] = rule
    return rules


def slab_redirect_rules(spec: SlabWalkSpec) -> dict[tuple[str, Direction], RedirectRule]:
    """Stage-two kernels for a homogeneous slab walk.

    RIGHT always occupies the leading uniform interval. The origin's DOWN
    rule and the upper corner's UP rule are right-maximal, which makes the
    boundary/corner redirection events nested under a shared uniform: if the
    lower boundary redirects a DOWN to the right, so does the origin, and
    likewise for the upper boundary and corner on UP.
    """
    failures = slab_homogeneity_failures(spec)
    if failures:
        raise PreconditionFailed("slab homogeneity fails: " + ", ".join(failures))
    q = spec.center
    x, u = spec.lower_boundary, spec.upper_boundary
    y, o, c = spec.left_boundary, spec.origin, spec.upper_corner

    rules: dict[tuple[str, Direction], RedirectRule] = {}

    if q.down > 0:
        rules[("lower_boundary", Direction.DOWN)] = _check_rule(
            (
                (Direction.RIGHT, (x.right - q.right) / q.down),
                (Direction.LEFT, (x.left - q.left) / q.down),
                (Direction.UP, (x.up - q.up) / q.down),
            ),
            "lower_boundary",
        )
    if q.up > 0:
        rules[("upper_boundary", Direction.UP)] = _check_rule(
            (
                (Direction.RIGHT, (u.right - q.right) / q.up),
                (Direction.LEFT, (u.left - q.left) / q.up),
                (Direction.DOWN, (u.down - q.down) / q.up),
            ),
            "upper_boundary",
        )
    if q.left > 0:
        rules[("left_boundary", Direction.LEFT)] = _check_rule(
            (
                (Direction.RIGHT, (y.right - q.right) / q.left),
                (Direction.UP, (y.up - q.up) / q.left),
                (Direction.DOWN, (y.down - q.down) / q.left),
            ),
            "left_boundary",
        )

    # Origin: surplus right mass r_o - r_q (up mass follows by
    # complementarity), fed by the forbidden LEFT and DOWN proposals.
    # Right-maximal on DOWN.
    r_extra = o.right - q.right
    if q.down > 0 or q.left > 0:
        alpha = min(Fraction(1), r_extra / q.down) if q.down > 0 else Fraction(0)
        rest_right = r_extra - alpha * q.down
        beta = rest_right / q.left if q.left > 0 else Fraction(0)
        if q.down > 0:
            rules[("origin", Direction.DOWN)] = _check_rule(
                ((Direction.RIGHT, alpha), (Direction.UP, 1 - alpha)), "origin down"
            )
        if q.left > 0:
            rules[("origin", Direction.LEFT)] = _check_rule(
                ((Direction.RIGHT, beta), (Direction.UP, 1 - beta)), "origin left"
            )

    # Upper corner: surplus right r_c - r_q and down d_c - d_q fed by UP and
    # LEFT proposals. Right-maximal on UP.
    rc_extra = c.right - q.right
    if q.up > 0 or q.left > 0:
        alpha = min(Fraction(1), rc_extra / q.up) if q.up > 0 else Fraction(0)
        rest_right = rc_extra - alpha * q.up
        beta = rest_right / q.left if q.left > 0 else Fraction(0)
        if q.up > 0:
            rules[("upper_corner", Direction.UP)] = _check_rule(
                ((Direction.RIGHT, alpha), (Direction.DOWN, 1 - alpha)), "corner up"
            )
        if q.left > 0:
            rules[("upper_corner", Direction.LEFT)] = _check_rule(
                ((Direction.RIGHT, beta), (Direction.DOWN, 1 - beta)), "corner left"
            )
    return rules


def inward_shift_plan(
    proposal: Row, target: Row, mode: str
) -> dict[tuple[Direction, Direction], Fraction]:
    """Stage-three transport plan turning a proposal row into the target row.

    Recurrence mode moves surplus UP/RIGHT mass to DOWN/LEFT (the target goes
    down and left more); transience mode mirrors it. The split is
    proportional; any plan with these marginals preserves the coupling
    invariant. Raises PreconditionFailed when the rows are not ordered the
    right way around.
    """
    if mode == "recurrence":
        sources = (Direction.UP, Direction.RIGHT)
        sinks = (Direction.DOWN, Direction.LEFT)
    elif mode == "transience":
        sources = (Direction.DOWN, Direction.LEFT)
        sinks = (Direction.UP, Direction.RIGHT)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    excess = {d: proposal.get(d) - target.get(d) for d in sources}
    deficit = {d: target.get(d) - proposal.get(d) for d in sinks}
    if any(v < 0 for v in excess.values()) or any(v < 0 for v in deficit.values()):
        raise PreconditionFailed(f"rows are not {mode}-ordered: {proposal} vs {target}")
    total = sum(deficit.values())
    plan = {}
    if total == 0:
        return plan
    for src in sources:
        for dst in sinks:
            amount = excess[src] * deficit[dst] / total
            if amount > 0:
                plan[(src, dst)] = amount
    return plan
