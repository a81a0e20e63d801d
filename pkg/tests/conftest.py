import itertools
import math

import pytest

from invroute.instance import Customer, Instance, Point


@pytest.fixture
def oracle_instance() -> Instance:
    """Tiny 3-4-5 geometry instance whose objective values are known by hand."""
    return Instance(
        name="oracle",
        horizon=3,
        vehicle_capacity=100,
        depot=Point(0.0, 0.0),
        customers=(
            Customer(id=1, x=0.0, y=3.0, inventory_capacity=100, demand=(2, 2, 2)),
            Customer(id=2, x=4.0, y=0.0, inventory_capacity=100, demand=(3, 3, 3)),
        ),
    )


# ---------------------------------------------------------------------------
# independent oracles, deliberately naive

def pareto_filter(outcomes):
    """Brute-force O(n^2) non-dominated filter over (g1, g2) minimization."""
    out = []
    for a in outcomes:
        dominated = False
        for b in outcomes:
            if (b[0] <= a[0] and b[1] <= a[1]) and (b[0] < a[0] or b[1] < a[1]):
                dominated = True
                break
        if not dominated and a not in out:
            out.append(a)
    return out


def naive_inventory_sim(instance: Instance, pi):
    """Re-derive quantities and inventories straight from the balance equations."""
    T = instance.horizon
    quantities = []
    inventories = []
    for c, m in zip(instance.customers, pi):
        inv = 0
        qrow, irow = [], []
        for t in range(T):
            q = 0
            if inv < c.demand[t]:
                k = min(m, T - t)
                while k >= 1:
                    cand = sum(c.demand[t:t + k]) - inv
                    if cand <= instance.vehicle_capacity and inv + cand <= c.inventory_capacity:
                        q = cand
                        break
                    k -= 1
            inv = inv + q - c.demand[t]
            qrow.append(q)
            irow.append(inv)
        quantities.append(qrow)
        inventories.append(irow)
    return quantities, inventories


def euclid(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def tour_length(depot, points, order):
    length = euclid(depot, points[order[0]])
    for a, b in zip(order, order[1:]):
        length += euclid(points[a], points[b])
    length += euclid(points[order[-1]], depot)
    return length


def optimal_single_tour(depot, points) -> float:
    """Exhaustive TSP over all permutations (only sane for a handful of points)."""
    best = math.inf
    for order in itertools.permutations(range(len(points))):
        best = min(best, tour_length(depot, points, list(order)))
    return best


def optimal_routes(depot, points, loads, capacity) -> float:
    """Exhaustive optimum over every partition into routes and every ordering."""
    n = len(points)

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    best = math.inf
    for part in partitions(list(range(n))):
        if any(sum(loads[i] for i in block) > capacity for block in part):
            continue
        total = 0.0
        for block in part:
            total += min(
                tour_length(depot, points, list(order))
                for order in itertools.permutations(block)
            )
        best = min(best, total)
    return best
