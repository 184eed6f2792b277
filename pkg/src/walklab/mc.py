"""Deterministic-seeded Monte Carlo engine.

Single-walk first-return runs, the three-stage coupled simulations with
online invariant monitors, tree walks, and the generic integer-lattice
stepper used as a classification oracle. All randomness is counter-based
(see walklab.rng): identical seeds give bit-identical outputs regardless of
worker count.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import PreconditionFailed
from .homogeneity import (
    inward_shift_plan,
    quadrant_redirect_rules,
    slab_redirect_rules,
)
from .models import (
    DIR_INDEX,
    DIRECTIONS,
    Direction,
    QUADRANT_REGIONS,
    QuadrantWalkSpec,
    Row,
    SLAB_REGIONS,
    SlabWalkSpec,
    STAY_INDEX,
)
from .rng import resolve_seed
from .trees import ExplicitTreeWalk, RuleTreeWalk

QUADRANT_REGION_ORDER = ("origin", "x_axis", "y_axis", "interior")
SLAB_REGION_ORDER = (
    "origin",
    "lower_boundary",
    "upper_boundary",
    "left_boundary",
    "upper_corner",
    "center",
)


def set_workers(count: int) -> int:
    """Clamp and apply the numba thread count; results never depend on it."""
    import numba

    count = max(1, min(int(count), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(count)
    return count


def _region_order(spec) -> tuple[str, ...]:
    return QUADRANT_REGION_ORDER if isinstance(spec, QuadrantWalkSpec) else SLAB_REGION_ORDER


def _cum_rows(spec) -> np.ndarray:
    order = _region_order(spec)
    out = np.empty((len(order), 4), dtype=np.float64)
    regions = spec.regions()
    for r, name in enumerate(order):
        row = regions[name]
        acc = 0.0
        for d in DIRECTIONS:
            acc += float(row.get(d))
            out[r, DIR_INDEX[d]] = acc
    out[:, 3] = 1.1  # swallow float rounding at the tail
    return out


@dataclass
class TrajectoryStats:
    """First-return statistics for one batch of seeded trajectories.

    Censored trajectories (no return by the horizon) are counted separately
    and never enter the return-time samples.
    """

    n_trajectories: int
    horizon: int
    seed: int
    start: str
    returns_observed: int
    empirical_return_probability: float
    return_time_samples: np.ndarray
    censored_count: int

    @classmethod
    def from_return_times(cls, times: np.ndarray, horizon, seed, start) -> "TrajectoryStats":
        returned = times[times > 0]
        return cls(
            n_trajectories=int(times.size),
            horizon=int(horizon),
            seed=int(seed),
            start=str(start),
            returns_observed=int(returned.size),
            empirical_return_probability=float(returned.size / times.size),
            return_time_samples=returned.copy(),
            censored_count=int(times.size - returned.size),
        )

    def return_time_mean(self) -> float | None:
        """Mean over uncensored observations only; None when there are none."""
        if self.return_time_samples.size == 0:
            return None
        return float(self.return_time_samples.mean())

    def histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.return_time_samples, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def to_json_dict(self) -> dict:
        return {
            "n_trajectories": self.n_trajectories,
            "horizon": self.horizon,
            "seed": self.seed,
            "start": self.start,
            "returns_observed": self.returns_observed,
            "empirical_return_probability": self.empirical_return_probability,
            "censored_count": self.censored_count,
            "return_time_mean_uncensored": self.return_time_mean(),
        }

    def write_histogram_csv(self, path) -> None:
        """Columns: t, count, censored_count.

        Censored trajectories appear on a single final row at t = horizon
        with count 0, since their return times are only known to exceed it.
        """
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "count", "censored_count"])
            for t, c in sorted(self.histogram().items()):
                writer.writerow([t, c, 0])
            writer.writerow([self.horizon, 0, self.censored_count])

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(
            json.dumps(self.to_json_dict(), sort_keys=True).encode()
        )
        h.update(np.ascontiguousarray(self.return_time_samples).tobytes())
        return h.hexdigest()


def run_trajectories(
    spec,
    start: tuple[int, int] = (0, 0),
    horizon: int = 10_000,
    n: int = 1_000,
    seed: int | None = None,
) -> TrajectoryStats:
    """Simulate n first-return trajectories of a quadrant or slab walk."""
    if horizon < 1 or n < 1:
        raise ValueError("horizon and n must be >= 1")
    seed = resolve_seed(seed)
    cum = _cum_rows(spec)
    thickness = spec.thickness if isinstance(spec, SlabWalkSpec) else -1
    if isinstance(spec, SlabWalkSpec):
        spec.region_of(*start)  # bounds check
    out = np.empty(n, dtype=np.int64)
    _kernels.lattice_first_return(
        seed, n, horizon, int(start[0]), int(start[1]), cum, thickness, out
    )
    return TrajectoryStats.from_return_times(out, horizon, seed, start)


# ---------------------------------------------------------------------------
# Coupled runs
# ---------------------------------------------------------------------------

_SINKS = {
    "recurrence": (Direction.DOWN, Direction.LEFT),
    "transience": (Direction.UP, Direction.RIGHT),
}


@dataclass
class CoupledStats:
    n_trajectories: int
    horizon: int
    seed: int
    mode: str
    slack_violations: int
    parity_violations: int
    functional_violations: int
    functional_max: int
    functional_bound: int | None
    first_violation: tuple[int, int] | None
    x_move_counts: np.ndarray  # (regions, 5): L,R,U,D,stay per region
    y_move_counts: np.ndarray
    region_order: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "n_trajectories": self.n_trajectories,
            "horizon": self.horizon,
            "seed": self.seed,
            "mode": self.mode,
            "slack_violations": self.slack_violations,
            "parity_violations": self.parity_violations,
            "functional_violations": self.functional_violations,
            "functional_max": self.functional_max,
            "functional_bound": self.functional_bound,
            "first_violation": self.first_violation,
            "x_move_counts": self.x_move_counts.tolist(),
            "y_move_counts": self.y_move_counts.tolist(),
            "region_order": list(self.region_order),
        }

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_json_dict(), sort_keys=True).encode()
        ).hexdigest()


@dataclass
class CoupledResult:
    stats: CoupledStats
    violations: list[dict]


def _pack_redirects(rules, region_order, forbidden_catalog):
    n_regions = len(region_order)
    max_len = max((len(r) for r in rules.values()), default=1)
    red_cum = np.full((n_regions, 4, max_len), 1.1, dtype=np.float64)
    red_out = np.zeros((n_regions, 4, max_len), dtype=np.int8)
    forbidden = np.zeros((n_regions, 4), dtype=np.bool_)
    for r, name in enumerate(region_order):
        allowed = forbidden_catalog[name]
        for d in Direction:
            if d not in allowed:
                forbidden[r, DIR_INDEX[d]] = True
    for (region_name, d), rule in rules.items():
        r = region_order.index(region_name)
        di = DIR_INDEX[d]
        acc = 0.0
        for slot, (outcome, p) in enumerate(rule):
            acc += float(p)
            red_cum[r, di, slot] = acc
            red_out[r, di, slot] = STAY_INDEX if outcome is None else DIR_INDEX[outcome]
        red_cum[r, di, len(rule) - 1] = 1.1
    return forbidden, red_cum, red_out


def _pack_shifts(X, Y, region_order, mode):
    sink_a, sink_b = _SINKS[mode]
    n_regions = len(region_order)
    shift_cum = np.zeros((n_regions, 4, 2), dtype=np.float64)
    x_regions, y_regions = X.regions(), Y.regions()
    for r, name in enumerate(region_order):
        p_row, q_row = x_regions[name], y_regions[name]
        plan = inward_shift_plan(p_row, q_row, mode)
        for d in DIRECTIONS:
            p = p_row.get(d)
            if p == 0:
                continue
            t1 = plan.get((d, sink_a), Fraction(0)) / p
            t2 = t1 + plan.get((d, sink_b), Fraction(0)) / p
            shift_cum[r, DIR_INDEX[d], 0] = float(t1)
            shift_cum[r, DIR_INDEX[d], 1] = float(t2)
    return shift_cum, DIR_INDEX[sink_a], DIR_INDEX[sink_b]


def _coupled_common(
    X,
    Y,
    horizon,
    n,
    seed,
    mode,
    x_start,
    y_start,
    rules,
    region_order,
    region_catalog,
    thickness,
    functional_bound,
):
    seed = resolve_seed(seed)
    stage1 = np.empty(4, dtype=np.float64)
    base_row = X.interior if thickness < 0 else X.center
    acc = 0.0
    for d in DIRECTIONS:
        acc += float(base_row.get(d))
        stage1[DIR_INDEX[d]] = acc
    stage1[3] = 1.1
    forbidden, red_cum, red_out = _pack_redirects(rules, region_order, region_catalog)
    shift_cum, sink_a, sink_b = _pack_shifts(X, Y, region_order, mode)

    n_regions = len(region_order)
    slack_viol = np.zeros(n, dtype=np.int64)
    parity_viol = np.zeros(n, dtype=np.int64)
    func_viol = np.zeros(n, dtype=np.int64)
    first_viol = np.full(n, -1, dtype=np.int64)
    func_max = np.zeros(n, dtype=np.int64)
    x_counts = np.zeros((n, n_regions * 5), dtype=np.int64)
    y_counts = np.zeros((n, n_regions * 5), dtype=np.int64)

    _kernels.coupled_lattice(
        seed,
        n,
        horizon,
        thickness,
        mode == "transience",
        int(x_start[0]),
        int(x_start[1]),
        int(y_start[0]),
        int(y_start[1]),
        stage1,
        forbidden,
        red_cum,
        red_out,
        shift_cum,
        sink_a,
        sink_b,
        functional_bound if functional_bound is not None else 0,
        slack_viol,
        parity_viol,
        func_viol,
        first_viol,
        func_max,
        x_counts,
        y_counts,
    )

    bad = np.flatnonzero((slack_viol + parity_viol + func_viol) > 0)
    violations = [
        {
            "trajectory": int(traj),
            "first_step": int(first_viol[traj]),
            "slack": int(slack_viol[traj]),
            "parity": int(parity_viol[traj]),
            "functional": int(func_viol[traj]),
        }
        for traj in bad[:100]
    ]
    first = None
    if bad.size:
        steps = first_viol[bad]
        k = int(np.argmin(steps))
        first = (int(bad[k]), int(steps[k]))
    stats = CoupledStats(
        n_trajectories=n,
        horizon=horizon,
        seed=seed,
        mode=mode,
        slack_violations=int(slack_viol.sum()),
        parity_violations=int(parity_viol.sum()),
        functional_violations=int(func_viol.sum()),
        functional_max=int(func_max.max(initial=0)),
        functional_bound=functional_bound,
        first_violation=first,
        x_move_counts=x_counts.sum(axis=0).reshape(n_regions, 5),
        y_move_counts=y_counts.sum(axis=0).reshape(n_regions, 5),
        region_order=tuple(region_order),
    )
    return CoupledResult(stats=stats, violations=violations)


def coupled_run(
    X: QuadrantWalkSpec,
    Y: QuadrantWalkSpec,
    horizon: int = 1000,
    n: int = 1000,
    seed: int | None = None,
    mode: str = "recurrence",
    x_start: tuple[int, int] = (0, 0),
    y_start: tuple[int, int] = (0, 0),
) -> CoupledResult:
    """Couple a weakly inward-homogeneous X with an ordered Y on the quadrant.

    Recurrence mode requires Y below X in the quadrant order and monitors
    the slack containment Y_t <= X_t + s_t, s_t in {(2,0),(1,1),(0,2)};
    transience mode requires X below Y and monitors the mirrored bound.
    Both monitor movement parity. The invariant guarantee is contractual for
    origin starts; other starts are simulated and monitored as requested.
    """
    from .orders import OrderKind, check_order

    if mode not in _SINKS:
        raise ValueError(f"unknown mode {mode!r}")
    rules = quadrant_redirect_rules(X)  # raises PreconditionFailed if not weakly inward
    lo, hi = (Y, X) if mode == "recurrence" else (X, Y)
    order = check_order(lo, hi, OrderKind.QUADRANT_PRECEQ)
    if not order.holds:
        name = "check_order(Y, X)" if mode == "recurrence" else "check_order(X, Y)"
        raise PreconditionFailed(
            f"{name} fails: " + "; ".join(c.describe() for c in order.witnesses[:4])
        )
    return _coupled_common(
        X,
        Y,
        horizon,
        n,
        seed,
        mode,
        x_start,
        y_start,
        rules,
        QUADRANT_REGION_ORDER,
        QUADRANT_REGIONS,
        thickness=-1,
        functional_bound=None,
    )


def slab_coupled_run(
    X: SlabWalkSpec,
    Y: SlabWalkSpec,
    horizon: int = 1000,
    n: int = 1000,
    seed: int | None = None,
    mode: str = "recurrence",
    x_start: tuple[int, int] = (0, 0),
    y_start: tuple[int, int] = (0, 0),
) -> CoupledResult:
    """Couple a homogeneous slab X with Y ordered by the left-right order.

    Monitors |j_Y - j_X| + max(i_Y - i_X, 0) <= 2*ceil(k/2) (roles swapped in
    transience mode) plus movement parity.
    """
    from .orders import OrderKind, check_order

    if mode not in _SINKS:
        raise ValueError(f"unknown mode {mode!r}")
    if X.thickness != Y.thickness:
        raise PreconditionFailed("thickness mismatch")
    rules = slab_redirect_rules(X)
    lo, hi = (Y, X) if mode == "recurrence" else (X, Y)
    order = check_order(lo, hi, OrderKind.SLAB_TRIANGLELEFTEQ)
    if not order.holds:
        name = "check_order(Y, X)" if mode == "recurrence" else "check_order(X, Y)"
        raise PreconditionFailed(
            f"{name} fails: " + "; ".join(c.describe() for c in order.witnesses[:4])
        )
    k = X.thickness
    bound = 2 * ((k + 1) // 2)
    return _coupled_common(
        X,
        Y,
        horizon,
        n,
        seed,
        mode,
        x_start,
        y_start,
        rules,
        SLAB_REGION_ORDER,
        SLAB_REGIONS,
        thickness=k,
        functional_bound=bound,
    )


def marginal_move_frequencies(stats: CoupledStats, which: str = "x") -> dict[str, np.ndarray]:
    """Observed one-step move counts per region, laziness removed."""
    counts = stats.x_move_counts if which == "x" else stats.y_move_counts
    return {
        name: counts[r, :4].astype(np.float64)
        for r, name in enumerate(stats.region_order)
    }


def marginal_chi_square(stats: CoupledStats, spec, which: str = "x") -> dict[str, float]:
    """Chi-square p-values of coupled marginal move frequencies per region.

    Compares the observed (lazy-steps-removed) one-step move distribution
    from each region against the spec's exact rows.
    """
    from scipy import stats as sstats

    out = {}
    regions = spec.regions()
    for name, observed in marginal_move_frequencies(stats, which).items():
        row = regions[name]
        probs = np.array([float(row.get(d)) for d in DIRECTIONS])
        keep = probs > 0
        if observed[~keep].sum() > 0:
            out[name] = 0.0
            continue
        total = observed[keep].sum()
        if total < 100:
            continue
        expected = probs[keep] * total
        chi2, p = sstats.chisquare(observed[keep], expected)
        out[name] = float(p)
    return out


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------


def tree_run(
    spec,
    horizon: int = 10_000,
    n: int = 1_000,
    seed: int | None = None,
) -> TrajectoryStats:
    """Return-to-root statistics for a rule-based or explicit tree walk."""
    seed = resolve_seed(seed)
    out = np.empty(n, dtype=np.int64)
    if isinstance(spec, RuleTreeWalk):
        names = list(spec.classes)
        index = {name: i for i, name in enumerate(names)}
        nc = len(names)
        max_arity = max(rule.arity() for rule in spec.classes.values())
        arity = np.zeros(nc, dtype=np.int64)
        child_class = np.zeros((nc, max(max_arity, 1)), dtype=np.int16)
        cum = np.full((nc, max(max_arity, 1) + 1), 1.1, dtype=np.float64)
        for name, rule in spec.classes.items():
            c = index[name]
            arity[c] = rule.arity()
            acc = float(rule.up)
            cum[c, 0] = acc
            for m, (child_name, p) in enumerate(rule.children):
                child_class[c, m] = index[child_name]
                acc += float(p)
                cum[c, m + 1] = acc
            cum[c, rule.arity()] = 1.1
        _kernels.rule_tree_first_return(
            seed, n, horizon, index[spec.root_class], arity, child_class, cum, out
        )
    elif isinstance(spec, ExplicitTreeWalk):
        indptr = [0]
        targets: list[int] = []
        cum_list: list[float] = []
        for v in range(spec.n_vertices):
            acc = 0.0
            entries = []
            if spec.parent[v] != -1:
                entries.append((spec.parent[v], float(spec.up[v])))
            entries.extend((c, float(p)) for c, p in spec.child_probs[v])
            for target, p in entries:
                acc += p
                targets.append(target)
                cum_list.append(acc)
            cum_list[-1] = 1.1
            indptr.append(len(targets))
        _kernels.explicit_tree_first_return(
            seed,
            n,
            horizon,
            0,
            np.array(indptr, dtype=np.int64),
            np.array(targets, dtype=np.int64),
            np.array(cum_list, dtype=np.float64),
            out,
        )
    else:
        raise TypeError(f"not a tree walk spec: {type(spec).__name__}")
    return TrajectoryStats.from_return_times(out, horizon, seed, "root")


# ---------------------------------------------------------------------------
# Generic integer-lattice stepper (classification oracle)
# ---------------------------------------------------------------------------


def zlattice_run(
    increments: Sequence[Sequence[int]],
    probs: Sequence[Fraction],
    horizon: int = 100_000,
    n: int = 1_000,
    seed: int | None = None,
) -> TrajectoryStats:
    """First return to the origin of a homogeneous walk on Z^d.

    Trajectories whose remaining step budget provably cannot reach the
    origin again are censored early; this is exact, not a heuristic.
    """
    seed = resolve_seed(seed)
    inc = np.array(increments, dtype=np.int64)
    if inc.ndim != 2:
        raise ValueError("increments must be a list of equal-length vectors")
    total = sum(probs)
    if total != 1:
        raise ValueError(f"probabilities sum to {total} != 1")
    cum = np.cumsum(np.array([float(p) for p in probs]))
    cum[-1] = 1.1
    max_step = int(np.abs(inc).max(initial=0))
    out = np.empty(n, dtype=np.int64)
    _kernels.zlattice_first_return(seed, n, horizon, inc, cum, max_step, out)
    return TrajectoryStats.from_return_times(out, horizon, seed, "0")


# ---------------------------------------------------------------------------
# Occupation statistics
# ---------------------------------------------------------------------------


def origin_visit_frequencies(
    spec: QuadrantWalkSpec, n: int, horizon: int, seed: int | None = None
) -> np.ndarray:
    """P(walk is at the origin at time t), estimated from n trajectories."""
    seed = resolve_seed(seed)
    cum = _cum_rows(spec)
    n_chunks = 64
    chunk = (n + n_chunks - 1) // n_chunks
    counts = np.zeros((n_chunks, horizon + 1), dtype=np.int64)
    _kernels.quadrant_origin_visits(seed, n, horizon, cum, chunk, counts)
    return counts.sum(axis=0) / float(n)


def occupation_batches(
    spec: QuadrantWalkSpec,
    horizon: int,
    window: int,
    n_batches: int,
    seed: int | None = None,
) -> np.ndarray:
    """Batch-wise occupation frequencies of one long trajectory.

    Returns (n_batches, window+1, window+1) visit frequencies per batch for
    states in [0,window]^2.
    """
    seed = resolve_seed(seed)
    cum = _cum_rows(spec)
    out = np.zeros((n_batches, (window + 1) ** 2), dtype=np.int64)
    _kernels.quadrant_occupation_batches(seed, horizon, cum, window, out)
    length = horizon // n_batches
    return (out / float(length)).reshape(n_batches, window + 1, window + 1)
