"""The rough first front and how the non-dominated archive maintains itself.

Run: python demos/02_front_construction_and_archive.py
"""
from invroute import (
    Archive,
    Evaluator,
    GeneratorConfig,
    InsertResult,
    Outcome,
    Solution,
    archive_csv,
    construct_initial_front,
    dominates,
    generate,
)

inst = generate(
    GeneratorConfig(n_customers=12, horizon=12, mean_demand_range=(4, 16), vehicle_capacity=60, seed=7)
)

# Identical coverage values m = 1, 2, 3, ... trade inventory against distance;
# the loop stops at the first value whose outcome the archive rejects.
front = construct_initial_front(Evaluator(inst))
print(f"construction probed {front.insert_counter} values, kept {len(front)} points:")
print(archive_csv(front))

# The archive itself is a plain dominance filter. Equal outcome vectors are
# rejected as duplicates so each point keeps one representative.
archive = Archive()
for g1, g2 in [(10, 50.0), (20, 40.0), (15, 45.0), (12, 48.0)]:
    result = archive.try_insert(Solution(pi=(0,), outcome=Outcome(g1, g2)))
    print(f"insert ({g1:2d}, {g2}) -> {result.value}")
better = Solution(pi=(0,), outcome=Outcome(9, 39.0))
print(f"insert (9, 39.0) -> {archive.try_insert(better).value} "
      f"(dominates everything: archive now {len(archive)} member)")

print(f"\ndominates((1,2),(2,2)) = {dominates(Outcome(1, 2.0), Outcome(2, 2.0))}")
print(f"dominates((1,2),(1,2)) = {dominates(Outcome(1, 2.0), Outcome(1, 2.0))} (equality is not dominance)")
