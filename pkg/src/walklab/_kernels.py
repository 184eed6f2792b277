"""Numba kernels for the Monte Carlo engine.

Every random draw is a pure function of (seed, trajectory, step, channel),
mirroring walklab.rng bit for bit, so results are independent of worker
count, batch order, and parallel schedule. Direction codes are fixed as
0=left, 1=right, 2=up, 3=down, 4=stay.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from .rng import COUNTER_SALT, GOLDEN, MIX1, MIX2, STREAM_SALT

G = np.uint64(GOLDEN)
M1 = np.uint64(MIX1)
M2 = np.uint64(MIX2)
SS = np.uint64(STREAM_SALT)
CS = np.uint64(COUNTER_SALT)
S30 = np.uint64(30)
S27 = np.uint64(27)
S31 = np.uint64(31)
S11 = np.uint64(11)
INV53 = float(2.0**-53)

DX = np.array([-1, 1, 0, 0], dtype=np.int64)
DY = np.array([0, 0, 1, -1], dtype=np.int64)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> S30)) * M1
    z = (z ^ (z >> S27)) * M2
    return z ^ (z >> S31)


@njit(cache=True, inline="always")
def _stream_hash(seed, stream):
    h = _mix64(np.uint64(seed) + G)
    return _mix64(h ^ (np.uint64(stream) * SS + G))


@njit(cache=True, inline="always")
def _u01(stream_hash, counter):
    h = _mix64(stream_hash ^ (np.uint64(counter) * CS + G))
    return np.float64(h >> S11) * INV53


@njit(cache=True, inline="always")
def _pick4(cum, u):
    # cum has 4 entries, the last >= 1.
    if u < cum[1]:
        return 0 if u < cum[0] else 1
    return 2 if u < cum[2] else 3


@njit(cache=True, inline="always")
def _pick_outcome(cum_row, out_row, u):
    for i in range(cum_row.shape[0]):
        if u < cum_row[i]:
            return out_row[i]
    return out_row[cum_row.shape[0] - 1]


@njit(cache=True, inline="always")
def _quadrant_region(i, j):
    if i == 0:
        return 0 if j == 0 else 2
    return 1 if j == 0 else 3


@njit(cache=True, inline="always")
def _slab_region(i, j, k):
    if i == 0:
        if j == 0:
            return 0
        return 4 if j == k else 3
    if j == 0:
        return 1
    return 2 if j == k else 5


@njit(cache=True, parallel=True)
def lattice_first_return(seed, n, horizon, start_i, start_j, cum, thickness, out):
    """First return to the start for quadrant (thickness<0) or slab walks.

    cum is (n_regions, 4) cumulative row probabilities in L,R,U,D order,
    indexed by the region codes of the matching geometry. out[t] = return
    time or -1 when censored at the horizon.
    """
    for traj in prange(n):
        hs = _stream_hash(seed, traj)
        i = start_i
        j = start_j
        out[traj] = -1
        for t in range(horizon):
            u = _u01(hs, t)
            if thickness < 0:
                region = _quadrant_region(i, j)
            else:
                region = _slab_region(i, j, thickness)
            d = _pick4(cum[region], u)
            i += DX[d]
            j += DY[d]
            if i == start_i and j == start_j:
                out[traj] = t + 1
                break


@njit(cache=True, parallel=True)
def coupled_lattice(
    seed,
    n,
    horizon,
    thickness,
    transience,
    x_start_i,
    x_start_j,
    y_start_i,
    y_start_j,
    stage1_cum,
    forbidden,
    red_cum,
    red_out,
    shift_cum,
    sink_a,
    sink_b,
    functional_bound,
    slack_viol,
    parity_viol,
    func_viol,
    first_viol,
    func_max,
    x_counts,
    y_counts,
):
    """Three-stage coupled simulation on the quadrant or slab.

    Stage 1 draws one shared direction from the homogeneous walk's interior
    row. Stage 2 applies redirection rules whenever the proposal is forbidden
    at a walk's position; the redirect uniform is shared when both walks use
    the same rule, and on the slab also between the origin/lower-boundary
    pair on DOWN and the corner/upper-boundary pair on UP (their RIGHT
    outcomes occupy nested prefixes). Stage 3 shifts the second walk's
    proposed move into sink_a/sink_b per the transport plan in shift_cum.

    Monitors, per trajectory: quadrant slack containment (difference vector
    below one of (2,0),(1,1),(0,2)), slab functional |dj| + max(di,0) against
    functional_bound, and movement parity (stay steps excluded). Move counts
    per (region, outcome) feed the marginal chi-square test.
    """
    for traj in prange(n):
        hs = _stream_hash(seed, traj)
        xi = x_start_i
        xj = x_start_j
        yi = y_start_i
        yj = y_start_j
        x_par0 = (xi + xj) & 1
        y_par0 = (yi + yj) & 1
        stays_x = 0
        stays_y = 0
        sv = 0
        pv = 0
        fv = 0
        fmax = 0
        first = np.int64(-1)
        for t in range(horizon):
            base = np.uint64(t) * np.uint64(4)
            u0 = _u01(hs, base)
            u1 = _u01(hs, base + np.uint64(1))
            u2 = _u01(hs, base + np.uint64(2))
            u3 = _u01(hs, base + np.uint64(3))
            d1 = _pick4(stage1_cum, u0)
            if thickness < 0:
                rx = _quadrant_region(xi, xj)
                ry = _quadrant_region(yi, yj)
            else:
                rx = _slab_region(xi, xj, thickness)
                ry = _slab_region(yi, yj, thickness)

            if forbidden[rx, d1]:
                mx = _pick_outcome(red_cum[rx, d1], red_out[rx, d1], u1)
            else:
                mx = d1
            if forbidden[ry, d1]:
                share = ry == rx
                if thickness >= 0:
                    # origin(0)/lower(1) share on DOWN, corner(4)/upper(2) on UP
                    if d1 == 3 and ((rx == 0 and ry == 1) or (rx == 1 and ry == 0)):
                        share = True
                    if d1 == 2 and ((rx == 4 and ry == 2) or (rx == 2 and ry == 4)):
                        share = True
                uy = u1 if (share and forbidden[rx, d1]) else u2
                my = _pick_outcome(red_cum[ry, d1], red_out[ry, d1], uy)
            else:
                my = d1

            if my < 4:
                c1 = shift_cum[ry, my, 0]
                c2 = shift_cum[ry, my, 1]
                if u3 < c1:
                    my = sink_a
                elif u3 < c2:
                    my = sink_b

            if mx < 4:
                xi += DX[mx]
                xj += DY[mx]
            else:
                stays_x += 1
            if my < 4:
                yi += DX[my]
                yj += DY[my]
            else:
                stays_y += 1
            x_counts[traj, rx * 5 + mx] += 1
            y_counts[traj, ry * 5 + my] += 1

            if transience:
                di = xi - yi
                dj = xj - yj
            else:
                di = yi - xi
                dj = yj - xj
            bad = 0
            if thickness < 0:
                ok = (
                    (di <= 2 and dj <= 0)
                    or (di <= 1 and dj <= 1)
                    or (di <= 0 and dj <= 2)
                )
                if not ok:
                    sv += 1
                    bad = 1
            else:
                f = dj if dj >= 0 else -dj
                if di > 0:
                    f += di
                if f > fmax:
                    fmax = f
                if f > functional_bound:
                    fv += 1
                    bad = 1
            tt = t + 1
            if ((xi + xj + stays_x) & 1) != ((x_par0 + tt) & 1):
                pv += 1
                bad = 1
            if ((yi + yj + stays_y) & 1) != ((y_par0 + tt) & 1):
                pv += 1
                bad = 1
            if bad == 1 and first < 0:
                first = t
        slack_viol[traj] = sv
        parity_viol[traj] = pv
        func_viol[traj] = fv
        func_max[traj] = fmax
        first_viol[traj] = first


@njit(cache=True, parallel=True)
def rule_tree_first_return(
    seed, n, horizon, root_class, arity, child_class, cum, out
):
    """First return to the root of a class-rule tree.

    cum[c, 0] is the up-probability of class c; cum[c, 1 + m] accumulates the
    child-slot masses. The class stack doubles as the position encoding.
    """
    for traj in prange(n):
        hs = _stream_hash(seed, traj)
        stack = np.empty(horizon + 2, dtype=np.int16)
        stack[0] = root_class
        depth = 0
        out[traj] = -1
        for t in range(horizon):
            u = _u01(hs, t)
            cls = stack[depth]
            slot = 0
            acc = cum[cls, 0]
            while u >= acc and slot < arity[cls]:
                slot += 1
                acc = cum[cls, slot]
            if slot == 0:
                depth -= 1
            else:
                child = child_class[cls, slot - 1]
                depth += 1
                stack[depth] = child
            if depth == 0:
                out[traj] = t + 1
                break


@njit(cache=True, parallel=True)
def explicit_tree_first_return(seed, n, horizon, root, indptr, targets, cum, out):
    """First return to the root on an explicit finite tree (CSR rows)."""
    for traj in prange(n):
        hs = _stream_hash(seed, traj)
        v = root
        out[traj] = -1
        for t in range(horizon):
            u = _u01(hs, t)
            lo = indptr[v]
            hi = indptr[v + 1]
            nxt = targets[hi - 1]
            for e in range(lo, hi):
                if u < cum[e]:
                    nxt = targets[e]
                    break
            v = nxt
            if v == root:
                out[traj] = t + 1
                break


@njit(cache=True, parallel=True)
def zlattice_first_return(seed, n, horizon, inc, cum, max_step, out):
    """First return to the origin of a homogeneous Z^d walk.

    Trajectories are censored (-1) at the horizon, or as soon as the
    remaining step budget provably cannot bring the walk back (L-infinity
    distance exceeds remaining * max_step) — an exact cutoff, not an
    approximation.
    """
    m = inc.shape[0]
    dim = inc.shape[1]
    for traj in prange(n):
        hs = _stream_hash(seed, traj)
        pos = np.zeros(dim, dtype=np.int64)
        out[traj] = -1
        for t in range(horizon):
            u = _u01(hs, t)
            move = m - 1
            for c in range(m):
                if u < cum[c]:
                    move = c
                    break
            linf = 0
            at_origin = True
            for d in range(dim):
                pos[d] += inc[move, d]
                a = pos[d] if pos[d] >= 0 else -pos[d]
                if a > linf:
                    linf = a
                if pos[d] != 0:
                    at_origin = False
            if at_origin:
                out[traj] = t + 1
                break
            if linf > (horizon - t - 1) * max_step:
                break


@njit(cache=True, parallel=True)
def quadrant_origin_visits(seed, n, horizon, cum, chunk, counts):
    """Occupation counts of the origin by time step, from n trajectories.

    counts has shape (n_chunks, horizon + 1); chunk c owns trajectories
    [c*chunk, min((c+1)*chunk, n)), so parallel accumulation is race-free
    and the caller sums over axis 0.
    """
    n_chunks = counts.shape[0]
    for c in prange(n_chunks):
        lo = c * chunk
        hi = min(lo + chunk, n)
        for traj in range(lo, hi):
            hs = _stream_hash(seed, traj)
            i = 0
            j = 0
            for t in range(horizon):
                u = _u01(hs, t)
                d = _pick4(cum[_quadrant_region(i, j)], u)
                i += DX[d]
                j += DY[d]
                if i == 0 and j == 0:
                    counts[c, t + 1] += 1


@njit(cache=True)
def quadrant_occupation_batches(seed, horizon, cum, window, out):
    """Single-trajectory occupation counts on [0,window]^2, batched in time.

    out has shape (n_batches, (window+1)**2); batch b counts time steps
    [b*L, (b+1)*L) with L = horizon // n_batches. Used for batch-means
    standard errors of occupation frequencies.
    """
    n_batches = out.shape[0]
    length = horizon // n_batches
    hs = _stream_hash(seed, 0)
    i = 0
    j = 0
    side = window + 1
    for b in range(n_batches):
        for s in range(length):
            t = b * length + s
            u = _u01(hs, t)
            d = _pick4(cum[_quadrant_region(i, j)], u)
            i += DX[d]
            j += DY[d]
            if i <= window and j <= window:
                out[b, i * side + j] += 1
