"""Exhaustive optimum for small instances.

Once the routes are fixed the assignment decomposes per route and is solved
exactly by :func:`assign_rule3`, so enumerating every set partition of the
POIs and every visiting order of each block gives the true optimum.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

from .assignment import InstanceTooLargeError, assign_rule3
from .model import (EMPTY_ASSIGNMENT, CostBreakdown, CostMatrix, Instance, Route, Solution,
                    Weights, build_cost_matrix, evaluate, route_objective)

MAX_POIS = 8
MAX_VEHICLES = 3


def set_partitions(items: Sequence[int], max_blocks: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions of ``items`` into 1..max_blocks non-empty blocks.

    Blocks keep the input order of their members and are listed by first
    member (restricted-growth enumeration).
    """
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            blocks = [[] for _ in range(used)]
            for item, lab in zip(items, labels):
                blocks[lab].append(item)
            yield [tuple(b) for b in blocks]
            return
        for lab in range(min(used + 1, max_blocks)):
            labels[i] = lab
            yield from rec(i + 1, max(used, lab + 1))

    yield from rec(0, 0)


def best_route(block: Sequence[int], instance: Instance, matrix: CostMatrix,
               weights: Weights) -> tuple[Route, float]:
    """Cheapest visiting order of ``block`` (each order assigned optimally)."""
    best, best_cost = None, math.inf
    for order in itertools.permutations(sorted(block)):
        cost = route_objective(order, assign_rule3(order, instance, matrix, weights),
                               instance, matrix, weights)
        if cost < best_cost:
            best, best_cost = order, cost
    return best, best_cost


def solve_exact(instance: Instance, weights: Weights | None = None,
                matrix: CostMatrix | None = None) -> tuple[Solution, CostBreakdown]:
    n, m = len(instance.pois), instance.num_vehicles
    if n > MAX_POIS or m > MAX_VEHICLES:
        raise InstanceTooLargeError(
            f"exact solver limited to {MAX_POIS} POIs and {MAX_VEHICLES} vehicles "
            f"(got {n} POIs, {m} vehicles)")
    weights = weights or instance.weights
    if matrix is None:
        matrix = build_cost_matrix(instance)
    by_block: dict[tuple[int, ...], tuple[Route, float]] = {}
    best_routes, best_total = None, math.inf
    for blocks in set_partitions(sorted(instance.poi_ids), m):
        picked = []
        for block in blocks:
            if block not in by_block:
                by_block[block] = best_route(block, instance, matrix, weights)
            picked.append(by_block[block])
        total = math.fsum(c for _, c in picked)
        if total < best_total:
            best_total = total
            best_routes = [r for r, _ in picked]
    routes = best_routes + [()] * (m - len(best_routes))
    assignments = [assign_rule3(r, instance, matrix, weights) if r else EMPTY_ASSIGNMENT
                   for r in routes]
    sol = Solution.from_parts(routes, assignments)
    return sol, evaluate(sol, instance, matrix, weights)
