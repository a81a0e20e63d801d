"""Instance data model, deterministic generator, and the instance file format."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import NamedTuple


class InstanceError(ValueError):
    """Invalid instance data or a malformed instance file."""


class Point(NamedTuple):
    x: float
    y: float


def _q6(v: float) -> float:
    # quantize to the 6-decimal grid used by the canonical file format
    return float(f"{v:.6f}")


@dataclass(frozen=True)
class Customer:
    """One customer: location, storage limit, and its per-period demand row."""

    id: int
    x: float
    y: float
    inventory_capacity: int
    demand: tuple[int, ...]

    def __post_init__(self):
        if self.inventory_capacity < 1:
            raise InstanceError(f"customer {self.id}: inventory_capacity must be positive")
        for t, d in enumerate(self.demand):
            if not isinstance(d, int) or isinstance(d, bool):
                raise InstanceError(f"customer {self.id}: demand[{t}] must be an integer")
            if d < 0:
                raise InstanceError(f"customer {self.id}: demand[{t}] is negative")
        if self.demand and max(self.demand) > self.inventory_capacity:
            raise InstanceError(
                f"customer {self.id}: inventory_capacity {self.inventory_capacity} "
                f"below peak demand {max(self.demand)}"
            )


@dataclass(frozen=True)
class Instance:
    """A planning-horizon delivery instance: one depot, n customers, one vehicle type.

    Customers consume a known integer demand each period and may hold stock up to
    their own capacity; an unconstrained fleet of identical vehicles with capacity
    `vehicle_capacity` serves them from the depot. Distances are planar Euclidean,
    unrounded.
    """

    name: str
    horizon: int
    vehicle_capacity: int
    depot: Point
    customers: tuple[Customer, ...]

    def __post_init__(self):
        if self.horizon < 1:
            raise InstanceError("horizon must be >= 1")
        if self.vehicle_capacity < 1:
            raise InstanceError("vehicle_capacity must be positive")
        if not self.customers:
            raise InstanceError("instance needs at least one customer")
        for pos, c in enumerate(self.customers, start=1):
            if c.id != pos:
                raise InstanceError(f"customer ids must be contiguous 1..n, got {c.id} at position {pos}")
            if len(c.demand) != self.horizon:
                raise InstanceError(
                    f"customer {c.id}: demand length mismatch (got {len(c.demand)}, expected {self.horizon})"
                )
            if c.demand and max(c.demand) > self.vehicle_capacity:
                raise InstanceError(
                    f"customer {c.id}: per-period demand {max(c.demand)} exceeds "
                    f"vehicle_capacity {self.vehicle_capacity}"
                )

    @property
    def n_customers(self) -> int:
        return len(self.customers)


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters for the random-instance generator.

    Each customer gets a mean demand drawn uniformly (as an integer) from
    `mean_demand_range`; period demands then vary uniformly within
    +-noise_fraction around that mean, rounded to the nearest integer and
    floored at zero.
    """

    n_customers: int
    horizon: int
    mean_demand_range: tuple[int, int]
    vehicle_capacity: int
    noise_fraction: float = 0.25
    coordinate_range: tuple[float, float] = (0.0, 100.0)
    seed: int = 0

    def __post_init__(self):
        if self.n_customers < 1:
            raise InstanceError("n_customers must be >= 1")
        if self.horizon < 1:
            raise InstanceError("horizon must be >= 1")
        if not 0.0 <= self.noise_fraction < 1.0:
            raise InstanceError("noise_fraction must lie in [0, 1)")
        if self.mean_demand_range[0] > self.mean_demand_range[1]:
            raise InstanceError("mean_demand_range lo > hi")
        if self.coordinate_range[0] > self.coordinate_range[1]:
            raise InstanceError("coordinate_range lo > hi")
        if self.mean_demand_range[0] < 0:
            raise InstanceError("mean demand must be non-negative")


def generate(config: GeneratorConfig) -> Instance:
    """Generate an instance; a pure function of the config (same seed, same bytes).

    Raises InstanceError if a sampled demand exceeds the vehicle capacity, which
    signals an inconsistent config (no silent resampling).
    """
    rng = random.Random(config.seed)
    lo, hi = config.coordinate_range
    mlo, mhi = config.mean_demand_range
    customers = []
    for cid in range(1, config.n_customers + 1):
        x = _q6(rng.uniform(lo, hi))
        y = _q6(rng.uniform(lo, hi))
        mean = rng.randint(mlo, mhi)
        row = []
        for _ in range(config.horizon):
            raw = rng.uniform(mean * (1.0 - config.noise_fraction), mean * (1.0 + config.noise_fraction))
            row.append(max(0, int(round(raw))))
        if max(row, default=0) > config.vehicle_capacity:
            raise InstanceError(
                f"customer {cid}: generated demand {max(row)} exceeds vehicle_capacity "
                f"{config.vehicle_capacity}; config is inconsistent"
            )
        customers.append(
            Customer(
                id=cid,
                x=x,
                y=y,
                inventory_capacity=config.vehicle_capacity,
                demand=tuple(row),
            )
        )
    depot = Point(_q6((lo + hi) / 2.0), _q6((lo + hi) / 2.0))
    name = f"gen-n{config.n_customers}-t{config.horizon}-s{config.seed}"
    return Instance(
        name=name,
        horizon=config.horizon,
        vehicle_capacity=config.vehicle_capacity,
        depot=depot,
        customers=tuple(customers),
    )


def serialize_instance(instance: Instance) -> str:
    """Canonical instance document: fixed key order, 6-decimal coordinates, LF lines.

    Two serializations of the same instance are byte-identical.
    """
    out = []
    out.append("{")
    out.append(f'  "name": {json.dumps(instance.name)},')
    out.append(f'  "horizon": {instance.horizon},')
    out.append(f'  "vehicle_capacity": {instance.vehicle_capacity},')
    out.append(f'  "depot": {{"x": {instance.depot.x:.6f}, "y": {instance.depot.y:.6f}}},')
    out.append('  "customers": [')
    last = len(instance.customers) - 1
    for k, c in enumerate(instance.customers):
        row = ", ".join(str(d) for d in c.demand)
        sep = "," if k < last else ""
        out.append(
            f'    {{"id": {c.id}, "x": {c.x:.6f}, "y": {c.y:.6f}, '
            f'"inventory_capacity": {c.inventory_capacity}, "demand": [{row}]}}{sep}'
        )
    out.append("  ]")
    out.append("}")
    return "\n".join(out) + "\n"


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise InstanceError(f"{where}: missing field '{key}'")
    return obj[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_instance(text: str) -> Instance:
    """Parse an instance document, naming the offending field on error."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"instance file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")

    name = _require(doc, "name", "instance")
    horizon = _as_int(_require(doc, "horizon", "instance"), "horizon")
    capacity = _as_int(_require(doc, "vehicle_capacity", "instance"), "vehicle_capacity")
    depot_doc = _require(doc, "depot", "instance")
    if not isinstance(depot_doc, dict):
        raise InstanceError("depot: expected an object with x and y")
    depot = Point(float(_require(depot_doc, "x", "depot")), float(_require(depot_doc, "y", "depot")))
    customer_docs = _require(doc, "customers", "instance")
    if not isinstance(customer_docs, list):
        raise InstanceError("customers: expected a list")

    customers = []
    for k, cdoc in enumerate(customer_docs):
        where = f"customers[{k}]"
        if not isinstance(cdoc, dict):
            raise InstanceError(f"{where}: expected an object")
        cid = _as_int(_require(cdoc, "id", where), f"{where}.id")
        demand_doc = _require(cdoc, "demand", where)
        if not isinstance(demand_doc, list):
            raise InstanceError(f"{where}.demand: expected a list")
        if len(demand_doc) != horizon:
            raise InstanceError(
                f"{where}: demand length mismatch (got {len(demand_doc)}, expected {horizon})"
            )
        demand = tuple(_as_int(d, f"{where}.demand[{t}]") for t, d in enumerate(demand_doc))
        try:
            customers.append(
                Customer(
                    id=cid,
                    x=float(_require(cdoc, "x", where)),
                    y=float(_require(cdoc, "y", where)),
                    inventory_capacity=_as_int(
                        _require(cdoc, "inventory_capacity", where), f"{where}.inventory_capacity"
                    ),
                    demand=demand,
                )
            )
        except InstanceError as exc:
            raise InstanceError(f"{where}: {exc}") from exc

    return Instance(
        name=str(name),
        horizon=horizon,
        vehicle_capacity=capacity,
        depot=depot,
        customers=tuple(customers),
    )
