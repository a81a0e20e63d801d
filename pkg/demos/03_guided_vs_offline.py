"""Steering the search with a reference point versus the undirected baseline.

The guided run expands the most promising member first (smallest weighted
Chebyshev achievement w.r.t. the chosen reference point) and can stop on its
own once expansion leaves the cone below the reference point. The offline run
expands first-in-first-out and spreads over the whole front.

Run: python demos/03_guided_vs_offline.py
"""
import time

from invroute import (
    Evaluator,
    GeneratorConfig,
    ReferencePoint,
    SearchConfig,
    achievement,
    compute_weights,
    construct_initial_front,
    generate,
    most_preferred,
    run_guided,
    run_offline,
)

inst = generate(
    GeneratorConfig(n_customers=20, horizon=15, mean_demand_range=(4, 20), vehicle_capacity=80, seed=5)
)
ev = Evaluator(inst)
start = construct_initial_front(ev)
print(f"rough front: {len(start)} points")
for e in start.entries:
    print(f"  g1={e.outcome.inventory_g1:6d}  g2={e.outcome.routing_g2:9.2f}  pi=({e.solution.pi[0]},...)")

# Play a decision maker preferring the middle of the trade-off: take the third
# construction point as the aspiration (reference) point.
anchor = start.entries[2].outcome
rp = ReferencePoint(anchor.inventory_g1, anchor.routing_g2, label="mid-front")
weights = compute_weights([e.outcome for e in start.entries])
print(f"\nreference point ({rp.r1:.0f}, {rp.r2:.1f}), weights ({weights.w1:.3g}, {weights.w2:.3g})")

budget = 8000
t0 = time.time()
guided = run_guided(ev, start, SearchConfig(mode="guided", evaluation_budget=budget, reference_point=rp))
t_guided = time.time() - t0
t0 = time.time()
offline = run_offline(ev, start, SearchConfig(mode="offline", evaluation_budget=budget, reference_point=rp))
t_offline = time.time() - t0

print(f"\nguided : {guided.evaluations:5d} evaluations in {t_guided:.1f}s, "
      f"reason {guided.trace.termination_reason}, archive {len(guided.archive)}")
print(f"offline: {offline.evaluations:5d} evaluations in {t_offline:.1f}s, "
      f"reason {offline.trace.termination_reason}, archive {len(offline.archive)}")

best_g = most_preferred(guided.archive, rp, weights)
best_o = most_preferred(offline.archive, rp, weights)
print(f"\nmost preferred (guided) : g=({best_g.outcome.inventory_g1}, {best_g.outcome.routing_g2:.2f}) "
      f"achievement {achievement(best_g.outcome, rp, weights):.5f}")
print(f"most preferred (offline): g=({best_o.outcome.inventory_g1}, {best_o.outcome.routing_g2:.2f}) "
      f"achievement {achievement(best_o.outcome, rp, weights):.5f}")

print("\nbest-achievement trajectory (guided, every improvement):")
last = None
for p in guided.trace.points:
    if p.best_achievement != last:
        print(f"  eval {p.eval_index:6d}: {p.best_achievement:.5f}")
        last = p.best_achievement
