"""Exact rational certificates: stationarity, dominated increments,
concentration-based transience, and slab drift / hitting-time bounds.

Everything here is exact Fraction arithmetic; floats appear only in
display-oriented fields and are tagged as such. Certificates carry full
machine-checkable transcripts (every enumerated state with its exact value)
so they can be re-verified without this package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoCertificate, NonPositiveDrift, NotSummable
from .models import DIRECTIONS, QuadrantWalkSpec, SlabWalkSpec


# ---------------------------------------------------------------------------
# Stationary verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StationaryCandidate:
    """Product-form candidate measure on the quadrant, unnormalized.

    weight(i,j) = ratio^(i+j) in the interior, axis_x_multiplier * ratio^i on
    the x-axis, axis_y_multiplier * ratio^j on the y-axis, origin_weight at
    the origin. Summability needs ratio in (0,1); all weights positive.
    """

    ratio: Fraction
    axis_x_multiplier: Fraction
    axis_y_multiplier: Fraction
    origin_weight: Fraction

    def __post_init__(self):
        for name in ("ratio", "axis_x_multiplier", "axis_y_multiplier", "origin_weight"):
            value = getattr(self, name)
            object.__setattr__(self, name, Fraction(value))
            if Fraction(value) <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.ratio >= 1:
            raise NotSummable(f"ratio {self.ratio} >= 1: total mass diverges")

    def weight(self, i: int, j: int) -> Fraction:
        if i == 0 and j == 0:
            return self.origin_weight
        if j == 0:
            return self.axis_x_multiplier * self.ratio**i
        if i == 0:
            return self.axis_y_multiplier * self.ratio**j
        return self.ratio ** (i + j)

    def normalizer(self) -> Fraction:
        g = self.ratio / (1 - self.ratio)
        return (
            self.origin_weight
            + (self.axis_x_multiplier + self.axis_y_multiplier) * g
            + g * g
        )

    def probability(self, i: int, j: int) -> Fraction:
        return self.weight(i, j) / self.normalizer()


@dataclass(frozen=True)
class StationaryReport:
    verified: bool
    window: int
    failures: tuple[tuple[tuple[int, int], Fraction, Fraction], ...]
    checked_states: int

    def to_json_dict(self) -> dict:
        return {
            "verified": self.verified,
            "window": self.window,
            "checked_states": self.checked_states,
            "failures": [
                {"state": list(s), "expected": str(e), "inflow": str(a)}
                for s, e, a in self.failures
            ],
        }


def verify_stationary(
    spec: QuadrantWalkSpec, candidate: StationaryCandidate, window: int = 5
) -> StationaryReport:
    """Check the balance equations exactly at every state with i, j <= window.

    Both the walk and the candidate are region-homogeneous, so for window
    >= 3 the finitely many balance-equation shapes (origin, axis-adjacent,
    deep axis, interior) all occur within the window; a fully verified
    window therefore asserts global stationarity of the product form.
    """
    if window < 3:
        raise ValueError("window must be >= 3 so every balance-equation shape appears")
    failures = []
    checked = 0
    for i in range(window + 1):
        for j in range(window + 1):
            inflow = Fraction(0)
            for d in DIRECTIONS:
                dx, dy = d.delta
                zi, zj = i - dx, j - dy
                if zi < 0 or zj < 0:
                    continue
                inflow += candidate.weight(zi, zj) * spec.row_at(zi, zj).get(d)
            expected = candidate.weight(i, j)
            checked += 1
            if inflow != expected:
                failures.append(((i, j), expected, inflow))
    return StationaryReport(
        verified=not failures,
        window=window,
        failures=tuple(failures),
        checked_states=checked,
    )


# ---------------------------------------------------------------------------
# Two-step diagonal increments and domination
# ---------------------------------------------------------------------------


def _in_space(spec, i: int, j: int) -> bool:
    if i < 0 or j < 0:
        return False
    if isinstance(spec, SlabWalkSpec):
        return j <= spec.thickness
    return True


def two_step_increment_law(spec, state: tuple[int, int]) -> dict[int, Fraction]:
    """Exact law of the two-step change of S = x - y from a given state."""
    law: dict[int, Fraction] = {}
    i0, j0 = state
    row1 = spec.row_at(i0, j0)
    for d1 in DIRECTIONS:
        p1 = row1.get(d1)
        if p1 == 0:
            continue
        i1, j1 = i0 + d1.delta[0], j0 + d1.delta[1]
        row2 = spec.row_at(i1, j1)
        for d2 in DIRECTIONS:
            p2 = row2.get(d2)
            if p2 == 0:
                continue
            ds = d1.diag_increment + d2.diag_increment
            law[ds] = law.get(ds, Fraction(0)) + p1 * p2
    return law


def _representative_states(spec, parity: int):
    """States covering every two-step region pattern at the given parity.

    Region membership only depends on whether each coordinate is 0 (or equals
    the slab thickness), and two steps move a coordinate by at most 2, so
    coordinates are capped at 4; both cap parities are included. Slab columns
    are enumerated in full.
    """
    if isinstance(spec, SlabWalkSpec):
        j_range = range(spec.thickness + 1)
    else:
        j_range = range(5)
    return [
        (i, j)
        for i in range(5)
        for j in j_range
        if (i + j) % 2 == parity
    ]


@dataclass(frozen=True)
class IncrementDominator:
    """An i.i.d. lower bound for the two-step diagonal increment.

    From every even-parity state, the exact two-step law A of S = x - y
    satisfies P(A = -2) <= p_minus2 and P(A = +2) >= p_plus2, so A
    stochastically dominates the three-point law below, independently of the
    state. Tightness records the region types attaining each bound.
    """

    p_minus2: Fraction
    p_zero: Fraction
    p_plus2: Fraction
    tight_minus2: tuple[str, ...]
    tight_plus2: tuple[str, ...]
    transcript: tuple[tuple[tuple[int, int], str, Fraction, Fraction], ...]

    @property
    def mean(self) -> Fraction:
        return 2 * (self.p_plus2 - self.p_minus2)

    def to_json_dict(self) -> dict:
        return {
            "p_minus2": str(self.p_minus2),
            "p_zero": str(self.p_zero),
            "p_plus2": str(self.p_plus2),
            "mean": str(self.mean),
            "tight_minus2": list(self.tight_minus2),
            "tight_plus2": list(self.tight_plus2),
            "transcript": [
                {
                    "state": list(s),
                    "region": region,
                    "p_minus2": str(pm),
                    "p_plus2": str(pp),
                }
                for s, region, pm, pp in self.transcript
            ],
        }


def dominated_increments(spec) -> IncrementDominator:
    """Tightest state-independent three-point dominator of two-step increments.

    Enumerates all two-step region patterns reachable from even-parity
    states and takes the exact max of P(-2) and min of P(+2).
    """
    reps = _representative_states(spec, parity=0)
    transcript = []
    p_m2 = Fraction(0)
    p_p2 = Fraction(1)
    for state in reps:
        law = two_step_increment_law(spec, state)
        pm = law.get(-2, Fraction(0))
        pp = law.get(2, Fraction(0))
        region = spec.region_of(*state)
        transcript.append((state, region, pm, pp))
        p_m2 = max(p_m2, pm)
        p_p2 = min(p_p2, pp)
    tight_m2 = tuple(sorted({r for (_, r, pm, _) in transcript if pm == p_m2}))
    tight_p2 = tuple(sorted({r for (_, r, _, pp) in transcript if pp == p_p2}))
    return IncrementDominator(
        p_minus2=p_m2,
        p_zero=1 - p_m2 - p_p2,
        p_plus2=p_p2,
        tight_minus2=tight_m2,
        tight_plus2=tight_p2,
        transcript=tuple(transcript),
    )


# ---------------------------------------------------------------------------
# Concentration-based transience certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransienceCertificate:
    """Summable bound on return probabilities from a positive-drift dominator.

    The partial sums T_k of k i.i.d. copies of the dominator sit below the
    diagonal coordinate S_k, so P(walk is back at its start after 2k steps)
    <= P(T_k <= 0) <= exp(-per_step_exponent * k) with per_step_exponent =
    2 (k mean)^2 / (16 k) / k = mean^2 / 8 (increment range 4). Since
    exp(-e) <= 1/(1+e), the series is bounded by the exact rational 8/mean^2;
    the float geometric value is display-only. A finite bound on the expected
    number of returns implies transience.
    """

    dominator: IncrementDominator
    mean: Fraction
    per_step_exponent: Fraction
    series_bound: Fraction
    series_value_float: float
    note: str

    def bound_at(self, k: int) -> float:
        """exp(-per_step_exponent * k), display-only float."""
        return math.exp(-float(self.per_step_exponent) * k)

    def to_json_dict(self) -> dict:
        return {
            "mean": str(self.mean),
            "per_step_exponent": str(self.per_step_exponent),
            "series_bound": str(self.series_bound),
            "series_value_float_display_only": self.series_value_float,
            "note": self.note,
            "dominator": self.dominator.to_json_dict(),
        }


def hoeffding_certificate(dom: IncrementDominator) -> TransienceCertificate:
    """Issue a transience certificate from a positive-mean dominator."""
    mu = dom.mean
    if mu <= 0:
        raise NonPositiveDrift(f"dominator mean {mu} <= 0")
    exponent = mu * mu / 8  # = 2*mu^2/16, increments ranging over [-2, 2]
    series_bound = Fraction(8) / (mu * mu)
    e = float(exponent)
    series_float = 1.0 / math.expm1(e)
    return TransienceCertificate(
        dominator=dom,
        mean=mu,
        per_step_exponent=exponent,
        series_bound=series_bound,
        series_value_float=series_float,
        note=(
            "per-step exponent recomputed from (mean, range=4); "
            "rational series bound uses exp(-e) <= 1/(1+e)"
        ),
    )


# ---------------------------------------------------------------------------
# Slab drift certificate
# ---------------------------------------------------------------------------


def slab_stopping_set(k: int) -> tuple[tuple[int, int], ...]:
    """Corner stopping set excluded from the drift supremum.

    Even thickness stops at both corners; odd thickness stops at the upper
    corner and the two states adjacent to the origin (the odd-parity class
    does not contain the origin itself).
    """
    if k % 2 == 0:
        return ((0, 0), (0, k))
    return ((0, k), (1, 0), (0, 1))


def expected_two_step_drift(spec: SlabWalkSpec, state: tuple[int, int]) -> Fraction:
    law = two_step_increment_law(spec, state)
    return sum((Fraction(ds) * p for ds, p in law.items()), Fraction(0))


def sup_two_step_drift(
    spec: SlabWalkSpec, exclude_stopping: bool = True
) -> tuple[Fraction, tuple[str, ...], tuple]:
    """Exact sup of E[two-step diagonal drift | state] over one parity class.

    The parity class is the one containing trajectories of even index
    started from the origin side (even states for even k, odd states for odd
    k). Returns (sup, regions attaining it, transcript).
    """
    k = spec.thickness
    parity = 0 if k % 2 == 0 else 1
    stopped = set(slab_stopping_set(k)) if exclude_stopping else set()
    transcript = []
    best: Fraction | None = None
    for state in _representative_states(spec, parity):
        if state in stopped:
            continue
        drift = expected_two_step_drift(spec, state)
        transcript.append((state, spec.region_of(*state), drift))
        if best is None or drift > best:
            best = drift
    if best is None:
        raise ValueError("no states to enumerate")
    regions = tuple(sorted({r for (_, r, d) in transcript if d == best}))
    return best, regions, tuple(transcript)


@dataclass(frozen=True)
class SlabDriftCertificate:
    """Negative two-step drift away from the corner stopping set.

    Issued only when sup_drift < 0. The walk stopped on the corner set then
    has expected hitting time E[tau] <= (k + x0 - y0 + 2)/(-sup_drift/2) + 2
    from any admissible start (tau is even, hence the halving).
    """

    thickness: int
    sup_drift: Fraction
    tight_regions: tuple[str, ...]
    stopping_set: tuple[tuple[int, int], ...]
    transcript: tuple

    def hitting_time_bound(self, x0: int, y0: int) -> Fraction:
        return Fraction(self.thickness + x0 - y0 + 2) / (-self.sup_drift / 2) + 2

    def to_json_dict(self) -> dict:
        return {
            "thickness": self.thickness,
            "sup_drift": str(self.sup_drift),
            "tight_regions": list(self.tight_regions),
            "stopping_set": [list(s) for s in self.stopping_set],
            "transcript": [
                {"state": list(s), "region": r, "drift": str(d)}
                for s, r, d in self.transcript
            ],
        }


def slab_drift_certificate(spec: SlabWalkSpec) -> SlabDriftCertificate:
    """Certify negative two-step drift off the stopping set, exactly.

    Raises NoCertificate (carrying the exact sup) when the sup is
    nonnegative.
    """
    sup, regions, transcript = sup_two_step_drift(spec, exclude_stopping=True)
    if sup >= 0:
        raise NoCertificate(f"sup two-step drift {sup} >= 0", value=sup)
    return SlabDriftCertificate(
        thickness=spec.thickness,
        sup_drift=sup,
        tight_regions=regions,
        stopping_set=slab_stopping_set(spec.thickness),
        transcript=transcript,
    )


def certificate_to_json(cert, indent: int | None = None) -> str:
    return json.dumps(cert.to_json_dict(), indent=indent, sort_keys=True)
