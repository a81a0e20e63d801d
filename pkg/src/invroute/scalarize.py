"""Reference points, range-normalized weights, the weighted Chebyshev achievement
value, cone membership, and the convergence gap against a best-known outcome."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .evaluation import Outcome


@dataclass(frozen=True)
class ReferencePoint:
    """An aspiration point in outcome space (inventory units, distance units)."""

    r1: float
    r2: float
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "r1", float(self.r1))
        object.__setattr__(self, "r2", float(self.r2))


class WeightVector(NamedTuple):
    w1: float
    w2: float


def compute_weights(outcomes: Sequence[Outcome]) -> WeightVector:
    """Normalization weights 1/(max-min) per objective over the given outcomes.

    A flat objective (max == min) degenerates to weight 1 so the achievement
    value stays finite.
    """
    if not outcomes:
        raise ValueError("cannot compute weights from an empty outcome set")
    g1 = [o.inventory_g1 for o in outcomes]
    g2 = [o.routing_g2 for o in outcomes]
    span1 = max(g1) - min(g1)
    span2 = max(g2) - min(g2)
    return WeightVector(
        1.0 / span1 if span1 > 0 else 1.0,
        1.0 / span2 if span2 > 0 else 1.0,
    )


def achievement(x: Outcome, r: ReferencePoint, w: WeightVector) -> float:
    """Weighted Chebyshev distance of x from the reference point.

    Negative exactly when x improves on the reference point in both objectives.
    """
    return max(w.w1 * (x.inventory_g1 - r.r1), w.w2 * (x.routing_g2 - r.r2))


def in_cone(x: Outcome, r: ReferencePoint) -> bool:
    """True iff x weakly improves on the reference point in every objective
    (the axis-aligned region whose corner sits at the point; boundary included)."""
    return x.inventory_g1 <= r.r1 and x.routing_g2 <= r.r2


def progress_metric(
    archive_snapshot: Sequence[Outcome],
    r: ReferencePoint,
    w: WeightVector,
    best_known: Outcome,
) -> float:
    """Gap between the snapshot's best achievement and a best-known outcome's.

    Zero once the best-known alternative is matched; negative when surpassed.
    """
    if not archive_snapshot:
        raise ValueError("progress metric needs a non-empty snapshot")
    best = min(achievement(x, r, w) for x in archive_snapshot)
    return best - achievement(best_known, r, w)
