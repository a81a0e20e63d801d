"""Per-period capacitated routing with the parallel Clarke & Wright savings merge."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .instance import Instance


class RoutingError(ValueError):
    """A delivery quantity the router cannot place on a single vehicle."""


@dataclass(frozen=True)
class Route:
    """One vehicle trip; the depot is implicit at both ends."""

    customer_sequence: tuple[int, ...]
    load: int
    length: float


@dataclass(frozen=True)
class RoutingSolution:
    routes: tuple[Route, ...]
    total_distance: float


def savings_value(d0i: float, d0j: float, dij: float) -> float:
    """Distance saved by serving j right after i instead of via the depot."""
    return d0i + d0j - dij


def merge_routes(
    ids: Sequence[int],
    quantities: Sequence[int],
    capacity: int,
    depot_dist: Sequence[float],
    pair_dist,
) -> list[list[int]]:
    """Core savings merge over participant positions.

    `depot_dist[p]` is the depot distance of participant p and `pair_dist(p, q)`
    the distance between participants p and q. Starts from one route per
    participant, then processes all pairs by descending savings (ties by
    ascending id pair); a pair is merged when both are endpoints of distinct
    routes whose combined load fits the capacity. Negative-savings pairs are
    never merged. Returns routes as lists of positions.
    """
    m = len(ids)
    pairs = []
    for p in range(m):
        dp = depot_dist[p]
        for q in range(p + 1, m):
            s = dp + depot_dist[q] - pair_dist(p, q)
            if s >= 0.0:
                pairs.append((-s, ids[p], ids[q], p, q))
    pairs.sort()

    routes: dict[int, list[int]] = {p: [p] for p in range(m)}
    loads = list(quantities)
    route_of = list(range(m))
    for _, _, _, p, q in pairs:
        rp, rq = route_of[p], route_of[q]
        if rp == rq:
            continue
        lp, lq = routes[rp], routes[rq]
        if p != lp[0] and p != lp[-1]:
            continue
        if q != lq[0] and q != lq[-1]:
            continue
        if loads[rp] + loads[rq] > capacity:
            continue
        if lp[0] == p:
            lp.reverse()
        if lq[-1] == q:
            lq.reverse()
        lp.extend(lq)
        for member in lq:
            route_of[member] = rp
        loads[rp] += loads[rq]
        del routes[rq]

    # canonical orientation and roster order, so equal inputs give equal outputs
    out = []
    for r in routes.values():
        if len(r) > 1 and ids[r[-1]] < ids[r[0]]:
            r.reverse()
        out.append(r)
    out.sort(key=lambda r: ids[r[0]])
    return out


def solve_savings(instance: Instance, demands: Mapping[int, int]) -> RoutingSolution:
    """Route one period's deliveries.

    Args:
        instance: the instance providing geometry and vehicle capacity.
        demands: customer id -> delivery quantity; every quantity must be
            positive and fit on one vehicle. An empty map yields an empty plan.

    The fleet size is unconstrained: the merge simply stops when no feasible
    non-negative saving remains.
    """
    if not demands:
        return RoutingSolution(routes=(), total_distance=0.0)

    ids = sorted(demands)
    by_id = {c.id: c for c in instance.customers}
    for cid in ids:
        if cid not in by_id:
            raise RoutingError(f"unknown customer id {cid}")
        q = demands[cid]
        if q <= 0:
            raise RoutingError(f"customer {cid}: quantity must be positive, got {q}")
        if q > instance.vehicle_capacity:
            raise RoutingError(
                f"customer {cid}: quantity {q} exceeds vehicle capacity {instance.vehicle_capacity}"
            )

    dx, dy = instance.depot
    xs = [by_id[cid].x for cid in ids]
    ys = [by_id[cid].y for cid in ids]
    depot_dist = [math.hypot(x - dx, y - dy) for x, y in zip(xs, ys)]

    def pair_dist(p: int, q: int) -> float:
        return math.hypot(xs[p] - xs[q], ys[p] - ys[q])

    quantities = [demands[cid] for cid in ids]
    merged = merge_routes(ids, quantities, instance.vehicle_capacity, depot_dist, pair_dist)

    routes = []
    total = 0.0
    for positions in merged:
        length = depot_dist[positions[0]]
        for a, b in zip(positions, positions[1:]):
            length += pair_dist(a, b)
        length += depot_dist[positions[-1]]
        load = sum(quantities[p] for p in positions)
        routes.append(Route(tuple(ids[p] for p in positions), load, length))
        total += length
    return RoutingSolution(routes=tuple(routes), total_distance=total)
