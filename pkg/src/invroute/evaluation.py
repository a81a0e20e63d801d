"""Coverage-period vectors to delivery plans, inventories, routes, and objectives."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import NamedTuple

from .instance import Instance
from .routing import Route, RoutingSolution

# one coverage value per customer, index-aligned with instance.customers
PeriodVector = tuple[int, ...]


class EvaluationError(ValueError):
    """No feasible delivery quantity exists for a (customer, period)."""


class Outcome(NamedTuple):
    """The two minimized objectives: summed end-of-period stock and travelled distance."""

    inventory_g1: int
    routing_g2: float


@dataclass(frozen=True)
class DeliveryPlan:
    """Full plan detail: quantities and end inventories (customers x periods), routes per period."""

    quantities: tuple[tuple[int, ...], ...]
    end_inventory: tuple[tuple[int, ...], ...]
    per_period_routes: tuple[RoutingSolution, ...]


@dataclass(frozen=True)
class Solution:
    """A coverage vector with its evaluated objectives; the plan is optional and
    regenerable from the vector."""

    pi: PeriodVector
    outcome: Outcome
    plan: DeliveryPlan | None = None


class _Schedule(NamedTuple):
    # one customer's delivery pattern under a fixed coverage value
    deliveries: tuple[tuple[int, int], ...]  # (period, quantity), period 0-based
    by_period: dict
    end_inventory: tuple[int, ...]
    inventory_sum: int


class _Record(NamedTuple):
    outcome: Outcome
    period_distances: tuple[float, ...]


def neighbors(pi: PeriodVector, horizon: int) -> list[PeriodVector]:
    """All vectors one +-1 step away, skipping values below 1 or above the horizon.

    Fixed order: ascending customer index, the -1 move before the +1 move.
    """
    out = []
    for i, v in enumerate(pi):
        if v - 1 >= 1:
            out.append(pi[:i] + (v - 1,) + pi[i + 1:])
        if v + 1 <= horizon:
            out.append(pi[:i] + (v + 1,) + pi[i + 1:])
    return out


class Evaluator:
    """Evaluates coverage vectors against one instance, caching aggressively.

    Evaluation is pure: repeated calls (and calls with different `parent` hints)
    return identical outcomes. Hot paths cache per-customer schedules, per-vector
    outcomes, and reuse untouched period routings when a vector differs from an
    already-evaluated parent in a single coordinate.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self.horizon = instance.horizon
        self.capacity = instance.vehicle_capacity
        n = instance.n_customers
        self._demand = [None] + [c.demand for c in instance.customers]
        self._prefix = [None]
        for c in instance.customers:
            pre = [0]
            for d in c.demand:
                pre.append(pre[-1] + d)
            self._prefix.append(pre)
        self._cap = [0] + [c.inventory_capacity for c in instance.customers]

        dx, dy = instance.depot
        xs = [dx] + [c.x for c in instance.customers]
        ys = [dy] + [c.y for c in instance.customers]
        self._dist = [
            [math.hypot(xs[a] - xs[b], ys[a] - ys[b]) for b in range(n + 1)] for a in range(n + 1)
        ]
        self._d0 = self._dist[0]
        # global merge order: savings are >= 0 on Euclidean data (triangle
        # inequality), so every pair participates; ties break by ascending ids
        d0 = self._d0
        order = sorted(
            ((-(d0[i] + d0[j] - self._dist[i][j]), i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)),
        )
        self._pair_seq = [(i, j) for _, i, j in order]
        # merge scratch is per-thread: concurrent runs may share one evaluator
        # (caches hold pure-function results, so racing writers are benign)
        self._scratch = threading.local()
        self._route_cache: dict = {}
        self._schedules: dict[tuple[int, int], _Schedule] = {}
        self._records: dict[PeriodVector, _Record] = {}

    # -- per-customer delivery pattern ------------------------------------

    def schedule(self, cid: int, coverage: int) -> _Schedule:
        """Delivery periods/quantities and inventory trajectory for one customer.

        Coverage values above the horizon behave exactly like the horizon itself
        (coverage never extends past the last period).
        """
        T = self.horizon
        m = coverage if coverage < T else T
        key = (cid, m)
        cached = self._schedules.get(key)
        if cached is not None:
            return cached

        d = self._demand[cid]
        pre = self._prefix[cid]
        Q = self.capacity
        C = self._cap[cid]
        inv = 0
        deliveries = []
        by_period = {}
        end = []
        total = 0
        for t in range(T):
            dt = d[t]
            if inv < dt:
                k = min(m, T - t)
                while k >= 1:
                    q = pre[t + k] - pre[t] - inv
                    if q <= Q and inv + q <= C:
                        break
                    k -= 1
                else:
                    raise EvaluationError(
                        f"customer {cid}, period {t + 1}: no feasible delivery quantity"
                    )
                inv += q
                deliveries.append((t, q))
                by_period[t] = q
            inv -= dt
            end.append(inv)
            total += inv
        sched = _Schedule(tuple(deliveries), by_period, tuple(end), total)
        self._schedules[key] = sched
        return sched

    # -- routing helpers ---------------------------------------------------

    def _route_period(self, participants: tuple[int, ...], quantities: tuple[int, ...]) -> tuple[list, float]:
        """Savings merge specialized for this instance's precomputed geometry.

        Follows the exact merge order, canonical orientation, and summation
        order of routing.merge_routes so both code paths produce bit-identical
        route lengths. Returns ([(id_sequence, length), ...], total).
        """
        d0 = self._d0
        if len(participants) == 1:
            i = participants[0]
            return [([i], 2.0 * d0[i])], 2.0 * d0[i]

        dist = self._dist
        cap = self.capacity
        scratch = self._scratch
        try:
            mark = scratch.mark
            pos = scratch.pos
        except AttributeError:
            n = self.instance.n_customers
            mark = scratch.mark = [0] * (n + 1)
            pos = scratch.pos = [0] * (n + 1)
            scratch.stamp = 0
        stamp = scratch.stamp = scratch.stamp + 1
        for k, i in enumerate(participants):
            mark[i] = stamp
            pos[i] = k
        route_of = list(range(len(participants)))
        routes: list = [[i] for i in participants]
        loads = list(quantities)
        nroutes = len(participants)
        for i, j in self._pair_seq:
            if mark[i] != stamp or mark[j] != stamp:
                continue
            ri = route_of[pos[i]]
            rj = route_of[pos[j]]
            if ri == rj:
                continue
            if loads[ri] + loads[rj] > cap:
                continue
            la = routes[ri]
            lb = routes[rj]
            if la[0] != i and la[-1] != i:
                continue
            if lb[0] != j and lb[-1] != j:
                continue
            if la[0] == i:
                la.reverse()
            if lb[-1] == j:
                lb.reverse()
            la.extend(lb)
            for member in lb:
                route_of[pos[member]] = ri
            loads[ri] += loads[rj]
            routes[rj] = None
            nroutes -= 1
            if nroutes == 1:
                break

        final = [r for r in routes if r is not None]
        for r in final:
            if len(r) > 1 and r[-1] < r[0]:
                r.reverse()
        final.sort(key=lambda r: r[0])
        out = []
        total = 0.0
        for r in final:
            length = d0[r[0]]
            prev = r[0]
            for nxt in r[1:]:
                length += dist[prev][nxt]
                prev = nxt
            length += d0[prev]
            out.append((r, length))
            total += length
        return out, total

    def _period_distance(self, participants: tuple[int, ...], quantities: tuple[int, ...]) -> float:
        key = (participants, quantities)
        cached = self._route_cache.get(key)
        if cached is not None:
            return cached
        total = self._route_period(participants, quantities)[1]
        if len(self._route_cache) >= 1_000_000:
            self._route_cache.clear()
        self._route_cache[key] = total
        return total

    # -- evaluation --------------------------------------------------------

    def evaluate(self, pi: PeriodVector, parent: PeriodVector | None = None) -> Solution:
        """Evaluate a coverage vector to its Outcome (plan elided).

        `parent` is a pure performance hint: when it names an already-evaluated
        vector differing in one coordinate, untouched period routings are reused.
        """
        pi = tuple(pi)
        rec = self._records.get(pi)
        if rec is None:
            rec = self._evaluate_record(pi, tuple(parent) if parent is not None else None)
            self._records[pi] = rec
        return Solution(pi=pi, outcome=rec.outcome)

    def _evaluate_record(self, pi: PeriodVector, parent: PeriodVector | None) -> _Record:
        T = self.horizon
        scheds = [self.schedule(idx + 1, m) for idx, m in enumerate(pi)]
        g1 = 0
        for s in scheds:
            g1 += s.inventory_sum

        base = self._records.get(parent) if parent is not None else None
        if base is not None:
            changed = [i for i in range(len(pi)) if pi[i] != parent[i]]
            if len(changed) == 1:
                j = changed[0]
                touched = set(self.schedule(j + 1, parent[j]).by_period)
                touched.update(scheds[j].by_period)
                dists = list(base.period_distances)
                for t in touched:
                    parts = []
                    qtys = []
                    for idx, s in enumerate(scheds):
                        q = s.by_period.get(t)
                        if q is not None:
                            parts.append(idx + 1)
                            qtys.append(q)
                    dists[t] = self._period_distance(tuple(parts), tuple(qtys)) if parts else 0.0
                g2 = 0.0
                for v in dists:
                    g2 += v
                return _Record(Outcome(g1, g2), tuple(dists))

        per_period: list = [None] * T
        for idx, s in enumerate(scheds):
            cid = idx + 1
            for t, q in s.deliveries:
                slot = per_period[t]
                if slot is None:
                    per_period[t] = ([cid], [q])
                else:
                    slot[0].append(cid)
                    slot[1].append(q)
        dists = []
        g2 = 0.0
        for t in range(T):
            slot = per_period[t]
            d = self._period_distance(tuple(slot[0]), tuple(slot[1])) if slot else 0.0
            dists.append(d)
            g2 += d
        return _Record(Outcome(g1, g2), tuple(dists))

    def evaluate_full(self, pi: PeriodVector) -> Solution:
        """Evaluate and also materialize the full DeliveryPlan."""
        pi = tuple(pi)
        n = self.instance.n_customers
        T = self.horizon
        quantities = []
        end_inventory = []
        per_period: list[list] = [[] for _ in range(T)]
        for idx, m in enumerate(pi):
            cid = idx + 1
            sched = self.schedule(cid, m)
            row = [0] * T
            for t, q in sched.deliveries:
                row[t] = q
                per_period[t].append((cid, q))
            quantities.append(tuple(row))
            end_inventory.append(sched.end_inventory)

        route_solutions = []
        g2 = 0.0
        for t in range(T):
            slot = per_period[t]
            if slot:
                qty_of = {cid: q for cid, q in slot}
                routed, total = self._route_period(
                    tuple(cid for cid, _ in slot), tuple(q for _, q in slot)
                )
                routes = tuple(
                    Route(
                        customer_sequence=tuple(seq),
                        load=sum(qty_of[cid] for cid in seq),
                        length=length,
                    )
                    for seq, length in routed
                )
                route_solutions.append(RoutingSolution(routes=routes, total_distance=total))
                g2 += total
            else:
                route_solutions.append(RoutingSolution(routes=(), total_distance=0.0))

        g1 = sum(sum(row) for row in end_inventory)
        plan = DeliveryPlan(
            quantities=tuple(quantities),
            end_inventory=tuple(end_inventory),
            per_period_routes=tuple(route_solutions),
        )
        outcome = Outcome(g1, g2)
        self._records.setdefault(tuple(pi), _Record(outcome, tuple(r.total_distance for r in route_solutions)))
        return Solution(pi=pi, outcome=outcome, plan=plan)


def evaluate(instance: Instance, pi: PeriodVector) -> Solution:
    """One-shot evaluation including the full plan (see Evaluator for repeated use)."""
    return Evaluator(instance).evaluate_full(pi)
