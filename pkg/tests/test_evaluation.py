import random

import pytest

from invroute.evaluation import Evaluator, Outcome, evaluate, neighbors
from invroute.instance import GeneratorConfig, generate

from conftest import naive_inventory_sim, optimal_routes


def test_oracle_outcomes(oracle_instance):
    expect = {
        (1, 1): Outcome(0, 36.0),
        (2, 2): Outcome(5, 24.0),
        (3, 3): Outcome(15, 12.0),
    }
    for pi, want in expect.items():
        sol = evaluate(oracle_instance, pi)
        assert sol.outcome.inventory_g1 == want.inventory_g1
        assert sol.outcome.routing_g2 == pytest.approx(want.routing_g2)


def test_oracle_plan_detail(oracle_instance):
    sol = evaluate(oracle_instance, (3, 3))
    assert sol.plan.quantities == ((6, 0, 0), (9, 0, 0))
    assert sol.plan.end_inventory == ((4, 2, 0), (6, 3, 0))
    assert sol.plan.per_period_routes[0].total_distance == pytest.approx(12.0)
    assert sol.plan.per_period_routes[1].routes == ()

    sol = evaluate(oracle_instance, (2, 2))
    assert sol.plan.quantities == ((4, 0, 2), (6, 0, 3))
    assert sol.plan.end_inventory == ((2, 0, 0), (3, 0, 0))


def test_oracle_against_independent_simulation(oracle_instance):
    for pi in [(1, 1), (2, 2), (3, 3), (1, 3), (2, 1), (3, 2)]:
        sol = evaluate(oracle_instance, pi)
        q, inv = naive_inventory_sim(oracle_instance, pi)
        assert sol.plan.quantities == tuple(tuple(r) for r in q)
        assert sol.plan.end_inventory == tuple(tuple(r) for r in inv)
        # exhaustive routing oracle: savings is optimal on this geometry
        depot = (0.0, 0.0)
        g2 = 0.0
        for t in range(oracle_instance.horizon):
            pts, loads = [], []
            for i, c in enumerate(oracle_instance.customers):
                if q[i][t] > 0:
                    pts.append((c.x, c.y))
                    loads.append(q[i][t])
            if pts:
                g2 += optimal_routes(depot, pts, loads, oracle_instance.vehicle_capacity)
        assert sol.outcome.routing_g2 == pytest.approx(g2)


def test_balance_invariants_on_random_instances():
    rng = random.Random(321)
    for trial in range(30):
        cfg = GeneratorConfig(
            n_customers=rng.randint(1, 8),
            horizon=rng.randint(1, 12),
            mean_demand_range=(0, 9),
            vehicle_capacity=rng.randint(12, 60),
            noise_fraction=rng.choice([0.0, 0.25]),
            seed=trial,
        )
        inst = generate(cfg)
        pi = tuple(rng.randint(1, inst.horizon) for _ in range(inst.n_customers))
        sol = evaluate(inst, pi)
        q, inv = sol.plan.quantities, sol.plan.end_inventory
        for i, c in enumerate(inst.customers):
            prev = 0
            for t in range(inst.horizon):
                assert inv[i][t] == prev + q[i][t] - c.demand[t]
                assert inv[i][t] >= 0
                assert q[i][t] <= inst.vehicle_capacity
                if q[i][t] > 0:
                    assert prev < c.demand[t]
                    assert prev + q[i][t] <= c.inventory_capacity
                else:
                    assert prev >= c.demand[t]
                prev = inv[i][t]
        assert sol.outcome.inventory_g1 == sum(sum(row) for row in inv)
        assert sol.outcome.routing_g2 == pytest.approx(
            sum(r.total_distance for r in sol.plan.per_period_routes)
        )


def test_all_ones_vector_has_zero_inventory():
    inst = generate(
        GeneratorConfig(n_customers=6, horizon=8, mean_demand_range=(1, 7), vehicle_capacity=20, seed=5)
    )
    sol = evaluate(inst, (1,) * 6)
    assert sol.outcome.inventory_g1 == 0


def test_monotone_inventory_in_common_coverage():
    inst = generate(
        GeneratorConfig(n_customers=5, horizon=10, mean_demand_range=(2, 8), vehicle_capacity=100, seed=9)
    )
    ev = Evaluator(inst)
    g1s = [ev.evaluate((m,) * 5).outcome.inventory_g1 for m in range(1, 11)]
    assert g1s == sorted(g1s)


def test_evaluate_is_pure_and_parent_hint_is_inert(oracle_instance):
    ev = Evaluator(oracle_instance)
    base = ev.evaluate((2, 2))
    fresh = Evaluator(oracle_instance)
    for nb in neighbors((2, 2), 3):
        hinted = ev.evaluate(nb, parent=(2, 2))
        cold = fresh.evaluate(nb)
        assert hinted.outcome == cold.outcome
    assert ev.evaluate((2, 2)).outcome == base.outcome


def test_incremental_matches_full_on_random_instance():
    inst = generate(
        GeneratorConfig(n_customers=7, horizon=9, mean_demand_range=(1, 9), vehicle_capacity=25, seed=13)
    )
    warm = Evaluator(inst)
    rng = random.Random(77)
    pi = tuple(rng.randint(1, 9) for _ in range(7))
    warm.evaluate(pi)
    for _ in range(200):
        nbs = neighbors(pi, 9)
        nxt = nbs[rng.randrange(len(nbs))]
        hinted = warm.evaluate(nxt, parent=pi)
        cold = Evaluator(inst).evaluate(nxt)
        assert hinted.outcome == cold.outcome
        pi = nxt


def test_coverage_above_horizon_equals_horizon(oracle_instance):
    ev = Evaluator(oracle_instance)
    assert ev.evaluate((4, 4)).outcome == ev.evaluate((3, 3)).outcome
    assert ev.evaluate((9, 9)).outcome == ev.evaluate((3, 3)).outcome


def test_neighbors_enumeration_order():
    assert neighbors((1, 1), 3) == [(2, 1), (1, 2)]
    assert neighbors((2, 2), 3) == [(1, 2), (3, 2), (2, 1), (2, 3)]
    assert neighbors((3, 3), 3) == [(2, 3), (3, 2)]


def test_period_routing_identical_to_standalone_savings():
    # the evaluator's specialized merge must mirror solve_savings exactly
    from invroute.routing import solve_savings

    rng = random.Random(55)
    inst = generate(
        GeneratorConfig(n_customers=12, horizon=10, mean_demand_range=(1, 9), vehicle_capacity=28, seed=8)
    )
    ev = Evaluator(inst)
    for _ in range(40):
        pi = tuple(rng.randint(1, 10) for _ in range(12))
        sol = ev.evaluate_full(pi)
        for t, routed in enumerate(sol.plan.per_period_routes):
            demands = {
                c.id: sol.plan.quantities[i][t]
                for i, c in enumerate(inst.customers)
                if sol.plan.quantities[i][t] > 0
            }
            standalone = solve_savings(inst, demands)
            assert standalone.routes == routed.routes
            assert standalone.total_distance == routed.total_distance
        fast = ev.evaluate(pi)
        assert fast.outcome == sol.outcome
