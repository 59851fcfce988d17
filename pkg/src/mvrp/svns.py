"""Skewed variable neighborhood search.

The search alternates shaking (random intra-route POI swaps), best-improvement
local search over five neighborhoods, and a skewed acceptance rule that also
moves the search center to a worse solution when it is far enough away.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import random
from dataclasses import dataclass, field, fields
from typing import Callable, Sequence

from .assignment import assign_rule3, best_of_rules
from .construction import construct
from .model import (EMPTY_ASSIGNMENT, Assignment, CostBreakdown, CostMatrix, Instance, Route,
                    Solution, Weights, build_cost_matrix, evaluate, route_objective)
from .neighborhoods import (DEFAULT_MAX_SEG_LEN, REMOVE_INSERT, SEQ_EXCHANGE, SWAP_INTER,
                            TWO_OPT_INTRA, apply_move, enumerate_moves, swap_intra)

log = logging.getLogger(__name__)

ASGN_RULE3 = "asgn-rule3"
LOCAL_SEARCH_NEIGHBORHOODS = (TWO_OPT_INTRA, REMOVE_INSERT, SWAP_INTER, SEQ_EXCHANGE, ASGN_RULE3)

# route-cost caches are dropped wholesale past this many entries
_CACHE_LIMIT = 500_000


@dataclass(frozen=True)
class SvnsParams:
    k_max: int = 30
    unimproved_max: int = 40
    recenter_gap_low: float = 20.0
    recenter_gap_high: float = 50.0
    max_seg_len: int = DEFAULT_MAX_SEG_LEN
    seed: int = 0
    neighborhoods: tuple[str, ...] = LOCAL_SEARCH_NEIGHBORHOODS
    # how route-neighborhood candidates get their assignments: "rule3" (exact
    # per-route DP) or "rules12" (better of rule1/rule2 only)
    candidate_assignment: str = "rule3"
    # lets sequence exchange relocate a segment into another route (one side
    # of length 0), which is what allows two teams to merge in one move
    seq_exchange_empty_side: bool = True
    # also tries each sequence exchange with the moved segments reversed, so a
    # relocated segment can join the other route in either direction
    seq_exchange_reversal: bool = True
    # hard stop on shake/local-search rounds; recentering to worse solutions
    # can otherwise keep resetting the counters
    max_iterations: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "neighborhoods", tuple(self.neighborhoods))
        if self.k_max < 1 or self.unimproved_max < 1:
            raise ValueError("k_max and unimproved_max must be >= 1")
        if not 0 <= self.recenter_gap_low <= self.recenter_gap_high:
            raise ValueError("need 0 <= recenter_gap_low <= recenter_gap_high")
        if self.max_seg_len < 1:
            raise ValueError("max_seg_len must be >= 1")
        if self.candidate_assignment not in ("rule3", "rules12"):
            raise ValueError(f"bad candidate_assignment {self.candidate_assignment!r}")
        unknown = set(self.neighborhoods) - set(LOCAL_SEARCH_NEIGHBORHOODS)
        if unknown or not self.neighborhoods:
            raise ValueError(f"bad neighborhood list {self.neighborhoods}")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    phase: str  # construct | improve | recenter | reject
    incumbent_total: float
    current_total: float
    candidate_total: float
    gap_pct: float
    k: int
    unimproved: int
    neighborhood: str
    recentered: bool


@dataclass
class SearchTrace:
    records: list[TraceRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        names = [f.name for f in fields(TraceRecord)]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for r in self.records:
            row = []
            for name in names:
                v = getattr(r, name)
                if isinstance(v, float):
                    v = repr(v)
                elif isinstance(v, bool):
                    v = int(v)
                row.append(v)
            w.writerow(row)
        return buf.getvalue()


@dataclass(frozen=True)
class _State:
    routes: tuple[Route, ...]
    assignments: tuple[Assignment, ...]
    costs: tuple[float, ...]
    total: float

    def to_solution(self) -> Solution:
        return Solution.from_parts(self.routes, self.assignments)


class _Search:
    """Per-run evaluation context with memoized route costs."""

    def __init__(self, instance: Instance, matrix: CostMatrix, weights: Weights,
                 params: SvnsParams):
        self.instance = instance
        self.matrix = matrix
        self.weights = weights
        self.params = params
        self._rules12: dict[Route, tuple[Assignment, float]] = {}
        self._rule3: dict[Route, tuple[Assignment, float]] = {}
        self.complete = self.rule3 if params.candidate_assignment == "rule3" else self.rules12

    def rules12(self, route: Route) -> tuple[Assignment, float]:
        hit = self._rules12.get(route)
        if hit is None:
            if not route:
                hit = (EMPTY_ASSIGNMENT, 0.0)
            else:
                hit = best_of_rules(route, self.instance, self.matrix, self.weights)
            if len(self._rules12) >= _CACHE_LIMIT:
                self._rules12.clear()
            self._rules12[route] = hit
        return hit

    def rule3(self, route: Route) -> tuple[Assignment, float]:
        hit = self._rule3.get(route)
        if hit is None:
            if not route:
                hit = (EMPTY_ASSIGNMENT, 0.0)
            else:
                a = assign_rule3(route, self.instance, self.matrix, self.weights)
                hit = (a, route_objective(route, a, self.instance, self.matrix, self.weights))
            if len(self._rule3) >= _CACHE_LIMIT:
                self._rule3.clear()
            self._rule3[route] = hit
        return hit

    def state(self, solution: Solution) -> _State:
        costs = tuple(route_objective(p.route, p.assignment, self.instance, self.matrix,
                                      self.weights) if p.route else 0.0
                      for p in solution.plans)
        return _State(solution.routes, solution.assignments, costs, math.fsum(costs))

    def reassign(self, state: _State, routes: tuple[Route, ...], touched: Sequence[int],
                 completion=None) -> _State:
        completion = completion or self.complete
        assignments = list(state.assignments)
        costs = list(state.costs)
        for r in touched:
            assignments[r], costs[r] = completion(routes[r])
        return _State(routes, tuple(assignments), tuple(costs), math.fsum(costs))

    def shake(self, state: _State, k: int, rng: random.Random) -> _State:
        routes = list(state.routes)
        touched = set()
        for _ in range(max(1, k)):
            eligible = [r for r, route in enumerate(routes) if len(route) >= 2]
            if not eligible:
                break
            r = rng.choice(eligible)
            i, j = rng.sample(range(len(routes[r])), 2)
            routes[r] = swap_intra(routes[r], i, j)
            touched.add(r)
        if not touched:
            return state
        return self.reassign(state, tuple(routes), sorted(touched), self.rules12)

    def best_neighbor(self, state: _State, kind: str) -> _State | None:
        if kind == ASGN_RULE3:
            picks = [self.rule3(r) for r in state.routes]
            costs = tuple(c for _, c in picks)
            return _State(state.routes, tuple(a for a, _ in picks), costs, math.fsum(costs))
        best_total, best = math.inf, None
        base = list(state.costs)
        seg_len = self.params.max_seg_len
        empty_side = self.params.seq_exchange_empty_side
        flips = self.params.seq_exchange_reversal
        complete = self.complete
        for move in enumerate_moves(state.routes, kind, seg_len, empty_side, flips):
            routes = apply_move(state.routes, move, seg_len, empty_side)
            costs = base[:]
            for r in move.touched:
                costs[r] = complete(routes[r])[1]
            total = math.fsum(costs)
            if total < best_total:
                best_total, best = total, (routes, move.touched)
        if best is None:
            return None
        return self.reassign(state, best[0], best[1])

    def local_search(self, state: _State) -> tuple[_State, str]:
        """Cycle through the neighborhoods until none improves; returns the
        last neighborhood that produced an improvement ("" if none)."""
        nbhs = self.params.neighborhoods
        last = ""
        j = 0
        while j < len(nbhs):
            cand = self.best_neighbor(state, nbhs[j])
            if cand is not None and cand.total < state.total:
                state, last = cand, nbhs[j]
                j = 0
            else:
                j += 1
        return state, last


def relative_gap(candidate_total: float, center_total: float) -> float:
    """Percent by which ``candidate_total`` exceeds ``center_total``."""
    diff = candidate_total - center_total
    if center_total == 0:
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return 100.0 * diff / center_total


def _context(instance, matrix, weights, params):
    return _Search(instance, matrix if matrix is not None else build_cost_matrix(instance),
                   weights or instance.weights, params or SvnsParams())


def shake(solution: Solution, k: int, rng: random.Random, instance: Instance,
          matrix: CostMatrix | None = None, weights: Weights | None = None) -> Solution:
    """Apply max(1, k) random intra-route swaps; touched routes get the better
    of rule1/rule2 assignments."""
    ctx = _context(instance, matrix, weights, None)
    start = ctx.state(solution)
    out = ctx.shake(start, k, rng)
    return solution if out is start else out.to_solution()


def local_search(solution: Solution, instance: Instance, matrix: CostMatrix | None = None,
                 weights: Weights | None = None, params: SvnsParams | None = None) -> Solution:
    ctx = _context(instance, matrix, weights, params)
    start = ctx.state(solution)
    out, _ = ctx.local_search(start)
    return solution if out is start else out.to_solution()


IterationHook = Callable[[TraceRecord, Solution, Solution], None]


def solve(instance: Instance, params: SvnsParams | None = None,
          weights: Weights | None = None, matrix: CostMatrix | None = None,
          on_iteration: IterationHook | None = None,
          ) -> tuple[Solution, CostBreakdown, SearchTrace]:
    """Run the search from the construction heuristic and return the best
    solution seen, its cost breakdown, and the per-iteration trace.

    ``on_iteration`` is called after every shake/local-search round with the
    trace record, the local-search result, and the new search center.
    """
    params = params or SvnsParams()
    weights = weights or instance.weights
    if matrix is None:
        matrix = build_cost_matrix(instance)
    ctx = _Search(instance, matrix, weights, params)
    rng = random.Random(params.seed)

    f = ctx.state(construct(instance, matrix, params.seed, weights))
    incumbent = f
    trace = SearchTrace()
    trace.records.append(TraceRecord(0, "construct", f.total, f.total, f.total, 0.0, 0, 0,
                                     "", False))
    unimproved = 0
    it = 0
    while unimproved < params.unimproved_max and it < params.max_iterations:
        k = 0
        while k < params.k_max and it < params.max_iterations:
            it += 1
            shaken = ctx.shake(f, k, rng)
            cand, nbh = ctx.local_search(shaken)
            gap = relative_gap(cand.total, f.total)
            recentered = False
            if cand.total < f.total:
                f = cand
                k = 0
                unimproved = 0
                phase = "improve"
                if f.total < incumbent.total:
                    incumbent = f
            else:
                unimproved += 1
                if (cand.total > f.total
                        and params.recenter_gap_low <= gap <= params.recenter_gap_high):
                    f = cand
                    k = 0
                    phase = "recenter"
                    recentered = True
                else:
                    k += 1
                    phase = "reject"
            rec = TraceRecord(it, phase, incumbent.total, f.total, cand.total, gap, k,
                              unimproved, nbh, recentered)
            trace.records.append(rec)
            if on_iteration is not None:
                on_iteration(rec, cand.to_solution(), f.to_solution())
    if it >= params.max_iterations:
        log.warning("search stopped at max_iterations=%d", params.max_iterations)
    best = incumbent.to_solution()
    return best, evaluate(best, instance, matrix, weights), trace
