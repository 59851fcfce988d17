"""Initial solution: sweep-based mTSP routes with rule1/rule2 assignments."""

from __future__ import annotations

import math
import random
from typing import Sequence

from .assignment import assign_rule1, assign_rule2
from .model import (CostMatrix, Instance, Route, Solution, Weights, build_cost_matrix,
                    evaluate, route_length)


def _nearest_neighbor(arc: Sequence[int], instance: Instance, matrix: CostMatrix) -> list[int]:
    idx = instance.index
    rows = matrix.rows
    left = list(arc)
    tour = []
    cur = 0
    while left:
        nxt = min(left, key=lambda p: (rows[cur][idx[p]], p))
        left.remove(nxt)
        tour.append(nxt)
        cur = idx[nxt]
    return tour


def two_opt(route: Sequence[int], instance: Instance, matrix: CostMatrix) -> Route:
    """Best-improvement 2-opt on the closed tour depot -> route -> depot."""
    idx = instance.index
    rows = matrix.rows
    tour = list(route)
    n = len(tour)
    while True:
        nodes = [0] + [idx[p] for p in tour] + [0]
        best_delta, best_ij = -1e-12, None
        # reversing tour[i..j] swaps edges (i-1, i) and (j, j+1) in node space
        for i in range(1, n + 1):
            a, b = nodes[i - 1], nodes[i]
            for j in range(i + 1, n + 1):
                c, d = nodes[j], nodes[j + 1]
                delta = rows[a][c] + rows[b][d] - rows[a][b] - rows[c][d]
                if delta < best_delta:
                    best_delta, best_ij = delta, (i - 1, j - 1)
        if best_ij is None:
            return tuple(tour)
        i, j = best_ij
        tour[i:j + 1] = tour[i:j + 1][::-1]


def _balanced_sizes(n: int, m: int) -> list[int]:
    return [n // m + (1 if k < n % m else 0) for k in range(m)]


def build_initial_routes(instance: Instance, matrix: CostMatrix | None = None,
                         seed: int = 0) -> list[Route]:
    """Sweep the POIs by angle around the depot and cut into count-balanced arcs.

    Every rotation of the angular order is tried as the first cut (visited in
    a seed-shuffled order) and the split with the shortest total tour length
    after nearest-neighbor + 2-opt is kept.
    """
    if matrix is None:
        matrix = build_cost_matrix(instance)
    m = instance.num_vehicles
    dx, dy = instance.depot.x, instance.depot.y
    order = [p.id for p in sorted(
        instance.pois, key=lambda p: (math.atan2(p.location.y - dy, p.location.x - dx), p.id))]
    n = len(order)
    if n == 0:
        return [() for _ in range(m)]
    sizes = _balanced_sizes(n, m)
    offsets = list(range(n))
    random.Random(seed).shuffle(offsets)
    best, best_len = None, math.inf
    for off in offsets:
        rotated = order[off:] + order[:off]
        routes, start = [], 0
        for size in sizes:
            arc = rotated[start:start + size]
            start += size
            routes.append(two_opt(_nearest_neighbor(arc, instance, matrix), instance, matrix))
        total = math.fsum(route_length(r, instance, matrix) for r in routes)
        if total < best_len:
            best, best_len = routes, total
    return best


def construct(instance: Instance, matrix: CostMatrix | None = None, seed: int = 0,
              weights: Weights | None = None) -> Solution:
    """Best of {forward, reversed routes} x {rule1 everywhere, rule2 everywhere}."""
    if matrix is None:
        matrix = build_cost_matrix(instance)
    weights = weights or instance.weights
    routes = build_initial_routes(instance, matrix, seed)
    best, best_total = None, math.inf
    for route_set in (routes, [tuple(reversed(r)) for r in routes]):
        for rule in (assign_rule1, assign_rule2):
            sol = Solution.from_parts(route_set, [rule(r, instance) for r in route_set])
            total = evaluate(sol, instance, matrix, weights).total
            if total < best_total:
                best, best_total = sol, total
    return best
