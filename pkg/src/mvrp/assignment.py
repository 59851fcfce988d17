"""UGV dispatch and replenishment plans for fixed routes.

A plan for a route of length L is fully described by its non-decreasing
team-size vector ``y``: the team leaves the depot with ``y[0]`` UGVs and a
replenishment event happens at every position where ``y`` steps up.
"""

from __future__ import annotations

import enum
from typing import Iterator, Sequence

from .model import (EMPTY_ASSIGNMENT, Assignment, CostMatrix, Instance, Weights,
                    route_objective)

ORACLE_MAX_ROUTE = 6
ORACLE_MAX_CAPACITY = 12

# relative tolerance under which two plan costs count as tied
TIE_RTOL = 1e-9


class AssignmentScheme(enum.Enum):
    RULE1 = "rule1"
    RULE2 = "rule2"
    RULE3 = "rule3"


class InfeasibleRouteError(ValueError):
    pass


class InstanceTooLargeError(ValueError):
    pass


def _demands(route: Sequence[int], instance: Instance) -> list[int]:
    demand = instance.demand
    ds = [demand[p] for p in route]
    if ds and max(ds) > instance.ugv_capacity:
        raise InfeasibleRouteError(
            f"route demand {max(ds)} exceeds capacity {instance.ugv_capacity}")
    return ds


def assign_rule1(route: Sequence[int], instance: Instance) -> Assignment:
    """Carry the route-maximum demand from the depot; never replenish."""
    ds = _demands(route, instance)
    if not ds:
        return EMPTY_ASSIGNMENT
    return Assignment(max(ds), (0,) * len(ds))


def assign_rule2(route: Sequence[int], instance: Instance) -> Assignment:
    """Start with the first demand and top up whenever the team falls short."""
    ds = _demands(route, instance)
    if not ds:
        return EMPTY_ASSIGNMENT
    y = ds[0]
    z = [0]
    for d in ds[1:]:
        top_up = max(0, d - y)
        z.append(top_up)
        y += top_up
    return Assignment(ds[0], tuple(z))


def plan_objective(route: Sequence[int], sizes: Sequence[int], instance: Instance,
                   matrix: CostMatrix, weights: Weights) -> float:
    """alpha * replenishment + beta * HRI for a team-size vector."""
    depot_row = matrix.rows[0]
    idx = instance.index
    hri = instance.hri_table
    r2 = 0.0
    h = hri[sizes[0]] if instance.hri_at_depot and sizes else 0.0
    prev = None
    for p, y in zip(route, sizes):
        if prev is not None and y > prev:
            r2 += depot_row[idx[p]]
        h += hri[y]
        prev = y
    return weights.alpha * r2 + weights.beta * h


def _better(cost_a: float, events_a: int, sizes_a: tuple, cost_b: float, events_b: int,
            sizes_b: tuple) -> bool:
    """Strict preference: cheaper, then fewer events, then lexicographically smaller."""
    scale = max(abs(cost_a), abs(cost_b))
    if abs(cost_a - cost_b) > TIE_RTOL * scale:
        return cost_a < cost_b
    if events_a != events_b:
        return events_a < events_b
    return sizes_a < sizes_b


def assign_rule3(route: Sequence[int], instance: Instance, matrix: CostMatrix,
                 weights: Weights | None = None) -> Assignment:
    """Exact replenishment placement by DP over (position, team size).

    Minimizes alpha * replenishment + beta * HRI for the fixed route. A team
    may be topped up beyond the current demand when that avoids a later,
    more expensive replenishment.
    """
    ds = _demands(route, instance)
    if not ds:
        return EMPTY_ASSIGNMENT
    w = weights or instance.weights
    a, b = w.alpha, w.beta
    cap = instance.ugv_capacity
    hri = instance.hri_table
    depot_row = matrix.rows[0]
    idx = instance.index

    # state: team size -> (cost, events, sizes so far)
    depot_term = instance.hri_at_depot
    states: dict[int, tuple[float, int, tuple[int, ...]]] = {}
    for y in range(ds[0], cap + 1):
        c = b * hri[y] * (2 if depot_term else 1)
        states[y] = (c, 0, (y,))
    for t in range(1, len(ds)):
        event = a * depot_row[idx[route[t]]]
        lo = max(ds[t], min(states))
        nxt = {}
        for y2 in range(lo, cap + 1):
            stay_h = b * hri[y2]
            best = None
            for y1, (c1, e1, s1) in states.items():
                if y1 > y2:
                    continue
                if y1 == y2:
                    c, e = c1 + stay_h, e1
                else:
                    c, e = c1 + event + stay_h, e1 + 1
                if best is None or _better(c, e, s1, best[0], best[1], best[2]):
                    best = (c, e, s1)
            nxt[y2] = (best[0], best[1], best[2] + (y2,))
        states = nxt
    final = None
    for c, e, s in states.values():
        if final is None or _better(c, e, s, *final):
            final = (c, e, s)
    return Assignment.from_team_sizes(final[2])


def iter_team_sizes(demands: Sequence[int], capacity: int) -> Iterator[tuple[int, ...]]:
    """Every non-decreasing vector with demands[t] <= y[t] <= capacity, in lex order."""
    n = len(demands)

    def rec(t: int, lo: int, prefix: tuple[int, ...]):
        if t == n:
            yield prefix
            return
        for y in range(max(lo, demands[t]), capacity + 1):
            yield from rec(t + 1, y, prefix + (y,))

    yield from rec(0, 0, ())


def assign_oracle(route: Sequence[int], instance: Instance, matrix: CostMatrix,
                  weights: Weights | None = None) -> Assignment:
    """Brute-force counterpart of :func:`assign_rule3` for short routes."""
    if len(route) > ORACLE_MAX_ROUTE or instance.ugv_capacity > ORACLE_MAX_CAPACITY:
        raise InstanceTooLargeError(
            f"oracle limited to routes <= {ORACLE_MAX_ROUTE} and capacity <= "
            f"{ORACLE_MAX_CAPACITY} (got {len(route)}, {instance.ugv_capacity})")
    ds = _demands(route, instance)
    if not ds:
        return EMPTY_ASSIGNMENT
    w = weights or instance.weights
    best = None
    for sizes in iter_team_sizes(ds, instance.ugv_capacity):
        c = plan_objective(route, sizes, instance, matrix, w)
        e = sum(1 for t in range(1, len(sizes)) if sizes[t] > sizes[t - 1])
        if best is None or _better(c, e, sizes, *best):
            best = (c, e, sizes)
    return Assignment.from_team_sizes(best[2])


def best_of_rules(route: Sequence[int], instance: Instance, matrix: CostMatrix,
                  weights: Weights | None = None) -> tuple[Assignment, float]:
    """The cheaper of rule1 and rule2 for one route, with its weighted route cost.

    Ties go to rule1.
    """
    w = weights or instance.weights
    a1 = assign_rule1(route, instance)
    c1 = route_objective(route, a1, instance, matrix, w)
    a2 = assign_rule2(route, instance)
    if a2 == a1:
        return a1, c1
    c2 = route_objective(route, a2, instance, matrix, w)
    return (a2, c2) if c2 < c1 else (a1, c1)


def assign(scheme: AssignmentScheme, route: Sequence[int], instance: Instance,
           matrix: CostMatrix, weights: Weights | None = None) -> Assignment:
    if scheme is AssignmentScheme.RULE1:
        return assign_rule1(route, instance)
    if scheme is AssignmentScheme.RULE2:
        return assign_rule2(route, instance)
    return assign_rule3(route, instance, matrix, weights)
