"""Domain types, cost matrix, solution evaluation and feasibility checking.

A solution is a fixed number of route slots (one per available MGV-UGV team).
Each slot holds an ordered POI sequence and an assignment describing how many
UGVs leave the depot with the team and how many are replenished at each POI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Route = tuple[int, ...]


class InstanceError(ValueError):
    """Raised when an instance violates its invariants."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("invalid instance: " + "; ".join(self.problems))


class InfeasibleSolutionError(ValueError):
    def __init__(self, report: "FeasibilityReport"):
        self.report = report
        super().__init__("infeasible solution: " + ", ".join(str(v) for v in report.violations))


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate ({self.x}, {self.y})")

    def distance(self, other: Point) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Weights:
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        vals = (self.alpha, self.beta, self.gamma)
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ValueError(f"weights must be finite and non-negative, got {vals}")
        if sum(vals) <= 0:
            raise ValueError("at least one weight must be positive")


@dataclass(frozen=True)
class Poi:
    id: int
    location: Point
    ugv_demand: int


@dataclass(frozen=True)
class Instance:
    """A routing instance: depot, POIs with UGV demands, and cost parameters.

    ``hri_table[n]`` is the HRI cost of a team carrying ``n`` UGVs. When
    ``hri_at_depot`` is set, each deployed team is also charged the HRI cost
    of its initial dispatch while at the depot.
    """

    depot: Point
    pois: tuple[Poi, ...]
    num_vehicles: int
    ugv_capacity: int
    hri_table: tuple[float, ...]
    team_cost: float = 50.0
    weights: Weights = field(default_factory=Weights)
    hri_at_depot: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pois", tuple(self.pois))
        object.__setattr__(self, "hri_table", tuple(float(h) for h in self.hri_table))
        problems = self.validate()
        if problems:
            raise InstanceError(problems)

    def validate(self) -> list[str]:
        problems = []
        if self.num_vehicles < 1:
            problems.append(f"num_vehicles must be >= 1 (got {self.num_vehicles})")
        if self.ugv_capacity < 1:
            problems.append(f"ugv_capacity must be >= 1 (got {self.ugv_capacity})")
        if len(self.hri_table) != self.ugv_capacity + 1:
            problems.append(
                f"hri_table needs {self.ugv_capacity + 1} entries (got {len(self.hri_table)})")
        if any(not math.isfinite(h) or h < 0 for h in self.hri_table):
            problems.append("hri_table entries must be finite and >= 0")
        if self.hri_table and self.hri_table[0] != 0:
            problems.append("hri_table[0] must be 0")
        if not math.isfinite(self.team_cost) or self.team_cost < 0:
            problems.append(f"team_cost must be >= 0 (got {self.team_cost})")
        seen = set()
        for p in self.pois:
            if p.id < 1:
                problems.append(f"POI id {p.id} must be >= 1")
            if p.id in seen:
                problems.append(f"duplicate POI id {p.id}")
            seen.add(p.id)
            if not 1 <= p.ugv_demand <= self.ugv_capacity:
                problems.append(
                    f"POI {p.id}: demand {p.ugv_demand} outside [1, {self.ugv_capacity}]")
        return problems

    @property
    def poi_ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.pois)

    @cached_property
    def index(self) -> dict[int, int]:
        """POI id -> cost-matrix index (depot is 0)."""
        return {p.id: i + 1 for i, p in enumerate(self.pois)}

    @cached_property
    def demand(self) -> dict[int, int]:
        return {p.id: p.ugv_demand for p in self.pois}

    def with_weights(self, weights: Weights) -> Instance:
        return Instance(self.depot, self.pois, self.num_vehicles, self.ugv_capacity,
                        self.hri_table, self.team_cost, weights, self.hri_at_depot)


class CostMatrix:
    """Symmetric Euclidean distances; index 0 is the depot, 1..n the POIs."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[float]]):
        self.rows = tuple(tuple(float(v) for v in r) for r in rows)

    def __getitem__(self, i: int) -> tuple[float, ...]:
        return self.rows[i]

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, CostMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"CostMatrix({len(self.rows)}x{len(self.rows)})"


def build_cost_matrix(instance: Instance) -> CostMatrix:
    pts = [instance.depot] + [p.location for p in instance.pois]
    n = len(pts)
    rows = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = pts[i].distance(pts[j])
            rows[i][j] = rows[j][i] = d
    return CostMatrix(rows)


@dataclass(frozen=True)
class Assignment:
    """UGV plan for one route.

    ``initial_dispatch`` UGVs leave the depot with the team and
    ``replenishments[t]`` more join at route position ``t``.
    """

    initial_dispatch: int
    replenishments: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "replenishments", tuple(self.replenishments))

    def team_sizes(self) -> tuple[int, ...]:
        sizes = []
        y = self.initial_dispatch
        for z in self.replenishments:
            y += z
            sizes.append(y)
        return tuple(sizes)

    @property
    def num_events(self) -> int:
        return sum(1 for z in self.replenishments if z > 0)

    @classmethod
    def from_team_sizes(cls, sizes: Sequence[int]) -> Assignment:
        """Inverse of :meth:`team_sizes` for a non-decreasing size vector."""
        if not sizes:
            return EMPTY_ASSIGNMENT
        z = [0] + [sizes[t] - sizes[t - 1] for t in range(1, len(sizes))]
        return cls(sizes[0], tuple(z))


EMPTY_ASSIGNMENT = Assignment(0, ())


@dataclass(frozen=True)
class RoutePlan:
    route: Route
    assignment: Assignment

    def __post_init__(self):
        object.__setattr__(self, "route", tuple(self.route))


@dataclass(frozen=True)
class Solution:
    plans: tuple[RoutePlan, ...]

    def __post_init__(self):
        object.__setattr__(self, "plans", tuple(self.plans))

    @classmethod
    def from_parts(cls, routes: Sequence[Route], assignments: Sequence[Assignment]) -> Solution:
        return cls(tuple(RoutePlan(tuple(r), a) for r, a in zip(routes, assignments, strict=True)))

    @property
    def routes(self) -> tuple[Route, ...]:
        return tuple(p.route for p in self.plans)

    @property
    def assignments(self) -> tuple[Assignment, ...]:
        return tuple(p.assignment for p in self.plans)

    @property
    def num_teams(self) -> int:
        return sum(1 for p in self.plans if p.route)


@dataclass(frozen=True)
class CostBreakdown:
    path_cost: float
    replenishment_cost: float
    hri_cost: float
    team_cost_total: float
    total: float

    @classmethod
    def from_components(cls, path_cost: float, replenishment_cost: float, hri_cost: float,
                        team_cost_total: float, weights: Weights) -> CostBreakdown:
        total = (weights.alpha * (path_cost + replenishment_cost)
                 + weights.beta * hri_cost + weights.gamma * team_cost_total)
        return cls(path_cost, replenishment_cost, hri_cost, team_cost_total, total)

    @property
    def travel_cost(self) -> float:
        return self.path_cost + self.replenishment_cost


def route_length(route: Sequence[int], instance: Instance, matrix: CostMatrix) -> float:
    if not route:
        return 0.0
    idx = instance.index
    rows = matrix.rows
    prev = 0
    total = 0.0
    for p in route:
        i = idx[p]
        total += rows[prev][i]
        prev = i
    return total + rows[prev][0]


def route_components(route: Sequence[int], assignment: Assignment, instance: Instance,
                     matrix: CostMatrix) -> tuple[float, float, float, float]:
    """(path, replenishment, hri, team) cost of a single route; no feasibility check."""
    if not route:
        return 0.0, 0.0, 0.0, 0.0
    idx = instance.index
    depot_row = matrix.rows[0]
    hri = instance.hri_table
    r2 = 0.0
    h = hri[assignment.initial_dispatch] if instance.hri_at_depot else 0.0
    y = assignment.initial_dispatch
    for p, z in zip(route, assignment.replenishments):
        if z > 0:
            r2 += depot_row[idx[p]]
        y += z
        h += hri[y]
    return route_length(route, instance, matrix), r2, h, instance.team_cost


def route_objective(route: Sequence[int], assignment: Assignment, instance: Instance,
                    matrix: CostMatrix, weights: Weights) -> float:
    r1, r2, h, t = route_components(route, assignment, instance, matrix)
    return weights.alpha * (r1 + r2) + weights.beta * h + weights.gamma * t


@dataclass(frozen=True)
class Violation:
    kind: str
    route: int | None = None
    position: int | None = None
    poi: int | None = None

    def __str__(self):
        where = [f"{k}={v}" for k, v in
                 (("route", self.route), ("pos", self.position), ("poi", self.poi)) if v is not None]
        return f"{self.kind}({', '.join(where)})"


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def check_feasibility(solution: Solution, instance: Instance) -> FeasibilityReport:
    """Collect every violated constraint; never raises."""
    out: list[Violation] = []
    if len(solution.plans) != instance.num_vehicles:
        out.append(Violation("route-count-mismatch"))
    demand = instance.demand
    cap = instance.ugv_capacity
    counts: dict[int, int] = {}
    for r, plan in enumerate(solution.plans):
        route, asg = plan.route, plan.assignment
        for t, p in enumerate(route):
            if p not in demand:
                out.append(Violation("poi-unknown", r, t, p))
            else:
                counts[p] = counts.get(p, 0) + 1
        if len(asg.replenishments) != len(route):
            out.append(Violation("assignment-length-mismatch", r))
            continue
        if asg.initial_dispatch < 0 or any(z < 0 for z in asg.replenishments):
            out.append(Violation("assignment-negative", r))
            continue
        for t, (p, y) in enumerate(zip(route, asg.team_sizes())):
            if p in demand and y < demand[p]:
                out.append(Violation("demand-unmet", r, t, p))
            if y > cap:
                out.append(Violation("capacity-exceeded", r, t, p))
    for p in instance.poi_ids:
        c = counts.get(p, 0)
        if c == 0:
            out.append(Violation("poi-missing", poi=p))
        elif c > 1:
            out.append(Violation("poi-duplicated", poi=p))
    return FeasibilityReport(tuple(out))


def evaluate(solution: Solution, instance: Instance, matrix: CostMatrix | None = None,
             weights: Weights | None = None) -> CostBreakdown:
    """Cost components and weighted total; raises on an infeasible solution."""
    report = check_feasibility(solution, instance)
    if not report.ok:
        raise InfeasibleSolutionError(report)
    if matrix is None:
        matrix = build_cost_matrix(instance)
    r1 = r2 = h = team = 0.0
    for plan in solution.plans:
        a, b, c, d = route_components(plan.route, plan.assignment, instance, matrix)
        r1 += a
        r2 += b
        h += c
        team += d
    return CostBreakdown.from_components(r1, r2, h, team, weights or instance.weights)
