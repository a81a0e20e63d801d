"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s`. The heavyweight search
criteria (guided traces at budget 20k, the 10-instance speedup comparison at
budget 50k) dominate the runtime; everything else finishes in seconds.
"""
import itertools
import random
import time

import numpy as np
import pytest

from invroute.archive import Archive
from invroute.cli import main as cli_main
from invroute.evaluation import Evaluator, Outcome, Solution
from invroute.instance import GeneratorConfig, generate, serialize_instance
from invroute.routing import solve_savings
from invroute.runlog import format_run_log
from invroute.scalarize import ReferencePoint, WeightVector, achievement, in_cone
from invroute.search import (
    CONE_EXITED,
    SearchConfig,
    construct_initial_front,
    run_guided,
    run_offline,
)
from invroute.service import SessionService

from conftest import euclid, optimal_single_tour


def _report(name: str, ok: bool, detail: str = ""):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}{' (' + detail + ')' if detail else ''}")
    assert ok, f"{name} failed: {detail}"


def _bruteforce_front(points: np.ndarray) -> set:
    # plain O(n^2) pairwise dominance, vectorized per objective column
    g1 = points[:, 0]
    g2 = points[:, 1]
    le1 = g1[:, None] <= g1[None, :]
    le2 = g2[:, None] <= g2[None, :]
    lt = (g1[:, None] < g1[None, :]) | (g2[:, None] < g2[None, :])
    dominated = (le1 & le2 & lt).any(axis=0)
    return {tuple(p) for p in points[~dominated]}


def test_archive_oracle():
    """100 random 1000-point sequences: archive == brute-force filter, < 5 s."""
    rng = random.Random(2025)
    started = time.time()
    for _ in range(100):
        pts = [(rng.randint(0, 400), rng.randint(0, 1600) / 4.0) for _ in range(1000)]
        archive = Archive()
        for g1, g2 in pts:
            archive.try_insert(Solution(pi=(1,), outcome=Outcome(g1, g2)))
        got = {(o.inventory_g1, o.routing_g2) for o in archive.outcomes()}
        truth = _bruteforce_front(np.array(pts, dtype=float))
        assert got == truth
        assert archive.insert_counter == 1000
    elapsed = time.time() - started
    _report("archive-oracle", elapsed < 5.0, f"100x1000 points in {elapsed:.2f}s")


def test_evaluation_oracle(oracle_instance):
    """Hand-simulated outcomes for the 3-4-5 instance; construction stops at m=4."""
    ev = Evaluator(oracle_instance)
    expected = {(1, 1): (0, 36.0), (2, 2): (5, 24.0), (3, 3): (15, 12.0)}
    ok = True
    for pi, (g1, g2) in expected.items():
        out = ev.evaluate(pi).outcome
        ok = ok and out.inventory_g1 == g1 and out.routing_g2 == pytest.approx(g2, abs=1e-9)
    archive = construct_initial_front(ev)
    got = {(o.inventory_g1, o.routing_g2) for o in archive.outcomes()}
    ok = ok and got == {(0, 36.0), (5, 24.0), (15, 12.0)}
    ok = ok and archive.insert_counter == 4
    _report("evaluation-oracle", ok, f"front {sorted(got)}, stopped after probe {archive.insert_counter}")


def test_exhaustive_pareto_recovery():
    """50 seeded tiny instances: offline run returns the exact Pareto set."""
    rng = random.Random(1)
    failures = 0
    for seed in range(50):
        n = rng.randint(1, 3)
        horizon = rng.randint(1, 4)
        inst = generate(
            GeneratorConfig(
                n_customers=n, horizon=horizon, mean_demand_range=(1, 9),
                vehicle_capacity=30, seed=seed,
            )
        )
        ev = Evaluator(inst)
        outcomes = [
            ev.evaluate(pi).outcome
            for pi in itertools.product(range(1, horizon + 1), repeat=n)
        ]
        pts = np.array([(o.inventory_g1, o.routing_g2) for o in outcomes])
        truth = _bruteforce_front(pts)
        start = construct_initial_front(ev)
        budget = 2 * n * horizon ** n + 100
        result = run_offline(ev, start, SearchConfig(mode="offline", evaluation_budget=budget))
        got = {(float(o.inventory_g1), o.routing_g2) for o in result.archive.outcomes()}
        if got != truth:
            failures += 1
    _report("exhaustive-pareto-recovery", failures == 0, f"{50 - failures}/50 exact")


def test_routing_feasibility_and_bounds():
    """1000 random demand sets: capacity, coverage, star bound; TSP lower bound."""
    rng = random.Random(77)
    tsp_checked = 0
    for _ in range(1000):
        n = rng.randint(1, 10)
        coords = [(rng.uniform(-40, 40), rng.uniform(-40, 40)) for _ in range(n)]
        capacity = rng.randint(4, 50)
        inst = generate(
            GeneratorConfig(
                n_customers=n, horizon=1, mean_demand_range=(0, 0),
                vehicle_capacity=capacity, seed=1,
            )
        )
        # overwrite geometry: the generator gives structure, the test owns coords
        from invroute.instance import Customer, Instance, Point

        inst = Instance(
            name="bounds", horizon=1, vehicle_capacity=capacity, depot=Point(0.0, 0.0),
            customers=tuple(
                Customer(id=i + 1, x=x, y=y, inventory_capacity=capacity, demand=(0,))
                for i, (x, y) in enumerate(coords)
            ),
        )
        demands = {i + 1: rng.randint(1, capacity) for i in range(n)}
        sol = solve_savings(inst, demands)
        served = sorted(c for r in sol.routes for c in r.customer_sequence)
        assert served == sorted(demands)
        assert all(r.load <= capacity for r in sol.routes)
        star = sum(2 * euclid((0.0, 0.0), coords[c - 1]) for c in demands)
        assert sol.total_distance <= star + 1e-9

        if n <= 6:
            big = Instance(
                name="bounds", horizon=1, vehicle_capacity=10 ** 9, depot=Point(0.0, 0.0),
                customers=tuple(
                    Customer(id=i + 1, x=x, y=y, inventory_capacity=10 ** 9, demand=(0,))
                    for i, (x, y) in enumerate(coords)
                ),
            )
            free = solve_savings(big, {i + 1: 1 for i in range(n)})
            optimal = optimal_single_tour((0.0, 0.0), coords)
            assert free.total_distance >= optimal - 1e-9
            tsp_checked += 1
    _report("routing-feasibility-bounds", True, f"1000 sets, {tsp_checked} TSP-checked")


def test_guided_trace_monotone_and_deterministic():
    """20 (instance, rp) pairs at n=20, T=15, budget 20k: monotone, reproducible."""
    checked_cone = 0
    for seed in range(20):
        inst = generate(
            GeneratorConfig(
                n_customers=20, horizon=15, mean_demand_range=(4, 20),
                vehicle_capacity=80, seed=100 + seed,
            )
        )
        ev = Evaluator(inst)
        start = construct_initial_front(ev)
        anchor = start.entries[min(1 + seed % 4, len(start.entries) - 1)].outcome
        if seed % 2 == 0:
            rp = ReferencePoint(anchor.inventory_g1, anchor.routing_g2)
        else:
            rp = ReferencePoint(anchor.inventory_g1 * 0.9, anchor.routing_g2 * 0.9)
        config = SearchConfig(mode="guided", evaluation_budget=20_000, reference_point=rp)

        result = run_guided(ev, start, config)
        bests = [p.best_achievement for p in result.trace.points]
        assert all(a >= b for a, b in zip(bests, bests[1:])), f"seed {seed}: trace not monotone"
        idxs = [p.eval_index for p in result.trace.points]
        assert idxs == sorted(set(idxs)), f"seed {seed}: eval_index not strictly increasing"
        if result.trace.termination_reason == CONE_EXITED:
            assert result.evaluations > config.effective_warmup, f"seed {seed}: cone exit inside warmup"
            checked_cone += 1

        rerun = run_guided(Evaluator(inst), construct_initial_front(Evaluator(inst)), config)
        log_a = format_run_log(inst.name, config, result)
        log_b = format_run_log(inst.name, config, rerun)
        assert log_a == log_b, f"seed {seed}: run logs differ"
    _report("guided-trace-monotone-deterministic", True, f"20 pairs, {checked_cone} cone exits")


def test_speedup_over_offline():
    """Guided finds the best-known (most-preferred) quality for a mid-front
    reference point strictly earlier than the offline baseline on >= 7 of 10
    generated instances (both runs share the same 50k budget and start front).

    The comparison mirrors the reach-time methodology behind the speedup
    claim: the target is the best achievement either run attains, and a win
    means the guided run's best-achievement trace crosses that level at a
    strictly smaller evaluation index (never-reaching counts as infinity).
    """
    budget = 50_000
    wins = 0
    details = []

    def first_reach(trace, tgt):
        for p in trace.points:
            if p.best_achievement is not None and p.best_achievement <= tgt + 1e-12:
                return p.eval_index
        return None

    for seed in range(10):
        inst = generate(
            GeneratorConfig(
                n_customers=50, horizon=30, mean_demand_range=(4, 20),
                vehicle_capacity=80, seed=seed,
            )
        )
        ev = Evaluator(inst)
        start = construct_initial_front(ev)
        anchor = start.entries[2].outcome  # the 3rd construction point, mid-front
        rp = ReferencePoint(anchor.inventory_g1, anchor.routing_g2)

        offline = run_offline(
            ev, start,
            SearchConfig(mode="offline", evaluation_budget=budget, reference_point=rp),
        )
        guided = run_guided(
            ev, start,
            SearchConfig(
                mode="guided", evaluation_budget=budget, reference_point=rp,
                cone_warmup_evals=budget - 1,
            ),
        )
        target = min(
            offline.trace.points[-1].best_achievement,
            guided.trace.points[-1].best_achievement,
        )
        offline_reach = first_reach(offline.trace, target)
        guided_reach = first_reach(guided.trace, target)
        win = guided_reach is not None and (offline_reach is None or guided_reach < offline_reach)
        wins += bool(win)
        details.append(f"s{seed}:{'W' if win else 'L'}(g={guided_reach},o={offline_reach})")
    _report("speedup-over-offline", wins >= 7, f"{wins}/10 wins; " + " ".join(details))


def test_achievement_cone_equivalence():
    """achievement <= 0 iff in_cone; argmin invariant under weight scaling."""
    rng = random.Random(4242)
    for _ in range(20_000):
        x = Outcome(rng.randint(0, 1000), rng.uniform(0, 1000))
        r = ReferencePoint(rng.uniform(0, 1000), rng.uniform(0, 1000))
        w = WeightVector(rng.uniform(1e-9, 100), rng.uniform(1e-9, 100))
        assert (achievement(x, r, w) <= 0) == in_cone(x, r)
    for _ in range(2000):
        outcomes = [Outcome(rng.randint(0, 300), rng.uniform(0, 300)) for _ in range(12)]
        r = ReferencePoint(rng.uniform(0, 300), rng.uniform(0, 300))
        w = WeightVector(rng.uniform(0.001, 10), rng.uniform(0.001, 10))
        c = rng.uniform(1e-3, 1e3)
        scaled = WeightVector(w.w1 * c, w.w2 * c)
        pick = min(range(12), key=lambda i: (achievement(outcomes[i], r, w), i))
        pick_scaled = min(range(12), key=lambda i: (achievement(outcomes[i], r, scaled), i))
        assert pick == pick_scaled
    _report("achievement-cone-equivalence", True, "20k cone checks, 2k argmin checks")


def test_service_roundtrip_matches_cli(tmp_path):
    """create_session -> start_run -> poll-until-finished -> export == CLI log."""
    inst = generate(
        GeneratorConfig(
            n_customers=20, horizon=15, mean_demand_range=(4, 20),
            vehicle_capacity=80, seed=3,
        )
    )
    path = tmp_path / "inst.json"
    path.write_text(serialize_instance(inst))
    log_path = tmp_path / "cli.log"
    ev = Evaluator(inst)
    anchor = construct_initial_front(ev).entries[2].outcome
    rp_arg = f"{anchor.inventory_g1},{anchor.routing_g2}"
    cli_main([
        "guided", "--instance", str(path), "--budget", "2000",
        "--rp", rp_arg, "--out", str(log_path),
    ])

    service = SessionService()
    sid = service.create_session(str(path))["session_id"]
    rid = service.start_run(
        sid, "guided",
        reference_point=(anchor.inventory_g1, anchor.routing_g2),
        evaluation_budget=2000,
    )["run_id"]
    while service.poll_trace(sid, rid)["status"] == "running":
        time.sleep(0.01)
    exported, _ = service.export(sid, rid, "run_log")
    ok = exported == log_path.read_bytes()
    _report("service-roundtrip", ok, f"{len(exported)} bytes byte-identical")
