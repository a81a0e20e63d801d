"""Unbounded archive of mutually non-dominated solutions."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .evaluation import Outcome, Solution


class InsertResult(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED_DOMINATED = "rejected_dominated"
    REJECTED_DUPLICATE = "rejected_duplicate"


def dominates(a: Outcome, b: Outcome) -> bool:
    """True iff a is at least as good in both objectives and strictly better in one."""
    return (
        a.inventory_g1 <= b.inventory_g1
        and a.routing_g2 <= b.routing_g2
        and (a.inventory_g1 < b.inventory_g1 or a.routing_g2 < b.routing_g2)
    )


def weak_dominance_filter_check(points: list[Outcome]) -> bool:
    """Sanity predicate: no point in the set dominates another.

    Holds for any properly filtered archive snapshot; vacuously true for the
    empty set.
    """
    for p in points:
        for q in points:
            if dominates(q, p):
                return False
    return True


@dataclass
class ArchiveMember:
    solution: Solution
    eval_index: int

    @property
    def outcome(self) -> Outcome:
        return self.solution.outcome


@dataclass
class Archive:
    """Keeps every non-dominated solution seen so far; linear-scan insertion.

    Duplicate outcome vectors are rejected even when the underlying vectors
    differ, so each point in outcome space has one (first-seen) representative.
    """

    entries: list[ArchiveMember] = field(default_factory=list)
    insert_counter: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def members(self) -> list[Solution]:
        return [e.solution for e in self.entries]

    def outcomes(self) -> list[Outcome]:
        return [e.outcome for e in self.entries]

    def try_insert(self, solution: Solution, eval_index: int | None = None) -> InsertResult:
        """Insert unless dominated or duplicated; evict members the newcomer dominates.

        The insertion counter advances on every attempt, accepted or not.
        """
        self.insert_counter += 1
        if eval_index is None:
            eval_index = self.insert_counter
        out = solution.outcome
        for e in self.entries:
            if e.outcome == out:
                return InsertResult.REJECTED_DUPLICATE
            if dominates(e.outcome, out):
                return InsertResult.REJECTED_DOMINATED
        self.entries = [e for e in self.entries if not dominates(out, e.outcome)]
        self.entries.append(ArchiveMember(solution, eval_index))
        return InsertResult.ACCEPTED

    def copy(self) -> "Archive":
        return Archive(entries=list(self.entries), insert_counter=self.insert_counter)

    def snapshot(self) -> list[ArchiveMember]:
        """Copy-on-read view for observers; the search loop is the only writer."""
        return list(self.entries)


def archive_csv(archive: Archive) -> str:
    """Snapshot CSV, rows ordered by (g1, g2): eval_index,g1,g2,pi (pi ;-joined)."""
    rows = sorted(archive.entries, key=lambda e: (e.outcome.inventory_g1, e.outcome.routing_g2))
    lines = ["eval_index,g1,g2,pi"]
    for e in rows:
        pi = ";".join(str(v) for v in e.solution.pi)
        lines.append(f"{e.eval_index},{e.outcome.inventory_g1},{e.outcome.routing_g2!r},{pi}")
    return "\n".join(lines) + "\n"
