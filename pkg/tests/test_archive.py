import random

from invroute.archive import (
    Archive,
    InsertResult,
    archive_csv,
    dominates,
    weak_dominance_filter_check,
)
from invroute.evaluation import Outcome, Solution

from conftest import pareto_filter


def sol(g1, g2, pi=(1,)):
    return Solution(pi=tuple(pi), outcome=Outcome(g1, float(g2)))


def test_dominates_definition():
    assert dominates(Outcome(1, 2.0), Outcome(2, 2.0))
    assert not dominates(Outcome(1, 2.0), Outcome(1, 2.0))
    assert not dominates(Outcome(1, 3.0), Outcome(2, 2.0))


def test_insert_accepts_incomparable():
    a = Archive()
    a.try_insert(sol(0, 36))
    a.try_insert(sol(15, 12))
    assert a.try_insert(sol(5, 24)) is InsertResult.ACCEPTED
    assert len(a) == 3
    assert a.insert_counter == 3


def test_insert_rejects_dominated_and_duplicate():
    a = Archive()
    for g1, g2 in [(0, 36), (5, 24), (15, 12)]:
        a.try_insert(sol(g1, g2))
    assert a.try_insert(sol(6, 25)) is InsertResult.REJECTED_DOMINATED
    assert a.try_insert(sol(0, 36)) is InsertResult.REJECTED_DUPLICATE
    assert len(a) == 3
    assert a.insert_counter == 5


def test_duplicate_outcome_with_different_vector_keeps_first():
    a = Archive()
    a.try_insert(sol(3, 3, pi=(1, 1)))
    assert a.try_insert(sol(3, 3, pi=(2, 2))) is InsertResult.REJECTED_DUPLICATE
    assert a.members[0].pi == (1, 1)


def test_accepting_removes_everything_dominated():
    a = Archive()
    a.try_insert(sol(5, 10))
    a.try_insert(sol(6, 9))
    a.try_insert(sol(7, 8))
    assert a.try_insert(sol(4, 7)) is InsertResult.ACCEPTED
    assert [o for o in a.outcomes()] == [Outcome(4, 7.0)]


def test_matches_bruteforce_filter_on_random_sequences():
    rng = random.Random(42)
    for _ in range(50):
        seq = [
            (rng.randint(0, 30), float(rng.randint(0, 30)))
            for _ in range(rng.randint(1, 300))
        ]
        a = Archive()
        for g1, g2 in seq:
            a.try_insert(sol(g1, g2))
        assert a.insert_counter == len(seq)
        want = set(pareto_filter(seq))
        got = {(o.inventory_g1, o.routing_g2) for o in a.outcomes()}
        assert got == want
        assert weak_dominance_filter_check(a.outcomes())


def test_final_set_is_order_independent():
    rng = random.Random(7)
    seq = [(rng.randint(0, 15), float(rng.randint(0, 15))) for _ in range(120)]
    shuffled = list(seq)
    rng.shuffle(shuffled)
    a, b = Archive(), Archive()
    for g1, g2 in seq:
        a.try_insert(sol(g1, g2))
    for g1, g2 in shuffled:
        b.try_insert(sol(g1, g2))
    assert {(o.inventory_g1, o.routing_g2) for o in a.outcomes()} == {
        (o.inventory_g1, o.routing_g2) for o in b.outcomes()
    }


def test_weak_dominance_filter_check_examples():
    assert weak_dominance_filter_check([Outcome(1, 5.0), Outcome(2, 4.0)])
    assert not weak_dominance_filter_check([Outcome(1, 5.0), Outcome(1, 4.0)])
    a = Archive()
    a.try_insert(sol(1, 5))
    a.try_insert(sol(1, 4))
    assert weak_dominance_filter_check(a.outcomes())
    assert weak_dominance_filter_check([])


def test_csv_snapshot_format():
    a = Archive()
    a.try_insert(sol(15, 12, pi=(3, 3)), eval_index=3)
    a.try_insert(sol(0, 36, pi=(1, 1)), eval_index=1)
    text = archive_csv(a)
    lines = text.splitlines()
    assert lines[0] == "eval_index,g1,g2,pi"
    assert lines[1] == "1,0,36.0,1;1"
    assert lines[2] == "3,15,12.0,3;3"
    assert text.endswith("\n")
