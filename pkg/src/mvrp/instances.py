"""Seeded instance generation and the text file formats for instances and solutions.

See docs/format.md for the exact file layout.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .model import (Assignment, CostBreakdown, Instance, InstanceError, Point, Poi,
                    Solution, Weights)

FORMAT_VERSION = 1

DEFAULT_CAPACITY = 12
DEFAULT_TEAM_COST = 50.0
DEFAULT_COORD_RANGE = (0.0, 100.0)

CLASS_PRESETS = {
    "small": (5, (2,)),
    "medium": (20, (3, 5)),
    "large": (40, (6, 8)),
}


def default_hri_table(capacity: int = DEFAULT_CAPACITY, slope: float = 10.0,
                      jump_at: int = 5, jump: float = 50.0) -> tuple[float, ...]:
    """Monotone piecewise-linear HRI costs with one upward jump."""
    return tuple(slope * n + (jump if n >= jump_at else 0.0) if n else 0.0
                 for n in range(capacity + 1))


class ParseError(ValueError):
    def __init__(self, path, line: int | None, field_name: str, message: str):
        self.path, self.line, self.field = path, line, field_name
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: field '{field_name}': {message}")


class InvalidSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    instance_class: str = "custom"
    num_pois: int = 5
    num_vehicles: int = 2
    coord_range: tuple[float, float] = DEFAULT_COORD_RANGE
    demand_range: tuple[int, int] = (1, DEFAULT_CAPACITY)
    capacity: int = DEFAULT_CAPACITY
    hri_table: tuple[float, ...] | None = None
    team_cost: float = DEFAULT_TEAM_COST
    weights: Weights = field(default_factory=Weights)
    seed: int = 0

    @classmethod
    def preset(cls, instance_class: str, seed: int = 0, num_vehicles: int | None = None,
               **overrides) -> GeneratorSpec:
        if instance_class not in CLASS_PRESETS:
            raise InvalidSpecError(f"unknown instance class {instance_class!r}")
        n, vehicle_opts = CLASS_PRESETS[instance_class]
        if num_vehicles is None:
            num_vehicles = vehicle_opts[0]
        elif num_vehicles not in vehicle_opts:
            raise InvalidSpecError(
                f"class {instance_class} uses {vehicle_opts} vehicles, not {num_vehicles}")
        return cls(instance_class, n, num_vehicles, seed=seed, **overrides)

    def validate(self) -> None:
        lo, hi = self.coord_range
        dlo, dhi = self.demand_range
        if self.num_pois < 0 or self.num_vehicles < 1 or self.capacity < 1:
            raise InvalidSpecError("need num_pois >= 0, num_vehicles >= 1, capacity >= 1")
        if not lo <= hi:
            raise InvalidSpecError(f"bad coord_range {self.coord_range}")
        if not 1 <= dlo <= dhi <= self.capacity:
            raise InvalidSpecError(f"demand_range {self.demand_range} not within [1, capacity]")
        if self.hri_table is not None and len(self.hri_table) != self.capacity + 1:
            raise InvalidSpecError("hri_table must have capacity + 1 entries")


def generate(spec: GeneratorSpec) -> Instance:
    spec.validate()
    rng = random.Random(spec.seed)
    lo, hi = spec.coord_range
    depot = Point(rng.uniform(lo, hi), rng.uniform(lo, hi))
    pois = []
    for i in range(1, spec.num_pois + 1):
        loc = Point(rng.uniform(lo, hi), rng.uniform(lo, hi))
        pois.append(Poi(i, loc, rng.randint(*spec.demand_range)))
    hri = spec.hri_table if spec.hri_table is not None else default_hri_table(spec.capacity)
    return Instance(depot, tuple(pois), spec.num_vehicles, spec.capacity, hri,
                    spec.team_cost, spec.weights)


def derive_seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.randrange(2**31) for _ in range(count)]


def _real(x: float) -> str:
    s = format(float(x), ".17g")
    return s


def format_instance(instance: Instance) -> str:
    w = instance.weights
    lines = [
        f"format_version {FORMAT_VERSION}",
        f"capacity {instance.ugv_capacity}",
        f"team_cost {_real(instance.team_cost)}",
        f"num_vehicles {instance.num_vehicles}",
        f"hri_at_depot {int(instance.hri_at_depot)}",
        f"weights {_real(w.alpha)} {_real(w.beta)} {_real(w.gamma)}",
        "hri_table " + " ".join(_real(h) for h in instance.hri_table),
        f"depot {_real(instance.depot.x)} {_real(instance.depot.y)}",
    ]
    for p in instance.pois:
        lines.append(f"poi {p.id} {_real(p.location.x)} {_real(p.location.y)} {p.ugv_demand}")
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path: str | os.PathLike) -> None:
    Path(path).write_text(format_instance(instance))


class _Lines:
    """Cursor over the meaningful lines of a file, with keyed field access."""

    def __init__(self, text: str, path):
        self.path = path
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.items.append((no, line.split()))
        self.pos = 0

    def peek_key(self) -> str | None:
        return self.items[self.pos][1][0] if self.pos < len(self.items) else None

    def take(self, key: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.items):
            raise ParseError(self.path, None, key, "missing (unexpected end of file)")
        no, toks = self.items[self.pos]
        if toks[0] != key:
            raise ParseError(self.path, no, key, f"expected '{key}', found '{toks[0]}'")
        self.pos += 1
        return no, toks[1:]

    def convert(self, no, key, tok, kind):
        try:
            return kind(tok)
        except ValueError:
            raise ParseError(self.path, no, key, f"cannot parse {tok!r} as {kind.__name__}")

    def scalar(self, key: str, kind=int):
        no, vals = self.take(key)
        if len(vals) != 1:
            raise ParseError(self.path, no, key, f"expected 1 value, got {len(vals)}")
        return self.convert(no, key, vals[0], kind)

    def vector(self, key: str, kind=float, count: int | None = None) -> list:
        no, vals = self.take(key)
        if count is not None and len(vals) != count:
            raise ParseError(self.path, no, key, f"expected {count} values, got {len(vals)}")
        return [self.convert(no, key, v, kind) for v in vals]


def parse_instance(text: str, path="<string>") -> Instance:
    cur = _Lines(text, path)
    version = cur.scalar("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(path, None, "format_version", f"unsupported version {version}")
    capacity = cur.scalar("capacity")
    team_cost = cur.scalar("team_cost", float)
    num_vehicles = cur.scalar("num_vehicles")
    hri_at_depot = bool(cur.scalar("hri_at_depot")) if cur.peek_key() == "hri_at_depot" else False
    alpha, beta, gamma = cur.vector("weights", float, 3)
    hri = cur.vector("hri_table", float, capacity + 1)
    dx, dy = cur.vector("depot", float, 2)
    pois = []
    while cur.peek_key() is not None:
        no = cur.items[cur.pos][0]
        vals = cur.vector("poi", str, 4)
        pid = cur.convert(no, "poi", vals[0], int)
        x, y = (cur.convert(no, "poi", v, float) for v in vals[1:3])
        demand = cur.convert(no, "poi", vals[3], int)
        pois.append(Poi(pid, Point(x, y), demand))
    try:
        return Instance(Point(dx, dy), tuple(pois), num_vehicles, capacity, tuple(hri),
                        team_cost, Weights(alpha, beta, gamma), hri_at_depot)
    except InstanceError:
        raise
    except ValueError as exc:
        raise InstanceError([str(exc)]) from exc


def read_instance(path: str | os.PathLike) -> Instance:
    return parse_instance(Path(path).read_text(), path)


def format_solution(solution: Solution, cost: CostBreakdown | None = None) -> str:
    lines = [f"format_version {FORMAT_VERSION}", f"routes {len(solution.plans)}"]
    for r, plan in enumerate(solution.plans):
        a = plan.assignment
        lines.append(f"route {r}")
        lines.append(" ".join(["pois"] + [str(p) for p in plan.route]))
        lines.append(f"initial_dispatch {a.initial_dispatch}")
        lines.append(" ".join(["replenishments"] + [str(z) for z in a.replenishments]))
    if cost is not None:
        lines += [
            f"path_cost {_real(cost.path_cost)}",
            f"replenishment_cost {_real(cost.replenishment_cost)}",
            f"hri_cost {_real(cost.hri_cost)}",
            f"team_cost {_real(cost.team_cost_total)}",
            f"total {_real(cost.total)}",
        ]
    return "\n".join(lines) + "\n"


def write_solution(solution: Solution, path: str | os.PathLike,
                   cost: CostBreakdown | None = None) -> None:
    Path(path).write_text(format_solution(solution, cost))


def parse_solution(text: str, path="<string>") -> tuple[Solution, CostBreakdown | None]:
    cur = _Lines(text, path)
    version = cur.scalar("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(path, None, "format_version", f"unsupported version {version}")
    n = cur.scalar("routes")
    routes, assignments = [], []
    for r in range(n):
        no = cur.items[cur.pos][0] if cur.pos < len(cur.items) else None
        idx = cur.scalar("route")
        if idx != r:
            raise ParseError(path, no, "route", f"expected route {r}, found {idx}")
        route = cur.vector("pois", int)
        dispatch = cur.scalar("initial_dispatch")
        no = cur.items[cur.pos][0] if cur.pos < len(cur.items) else None
        z = cur.vector("replenishments", int)
        if len(z) != len(route):
            raise ParseError(path, no, "replenishments",
                             f"expected {len(route)} values, got {len(z)}")
        routes.append(tuple(route))
        assignments.append(Assignment(dispatch, tuple(z)))
    cost = None
    if cur.peek_key() is not None:
        vals = [cur.scalar(k, float) for k in
                ("path_cost", "replenishment_cost", "hri_cost", "team_cost", "total")]
        cost = CostBreakdown(*vals)
    return Solution.from_parts(routes, assignments), cost


def read_solution(path: str | os.PathLike) -> Solution:
    return parse_solution(Path(path).read_text(), path)[0]


def read_solution_with_cost(path: str | os.PathLike) -> tuple[Solution, CostBreakdown | None]:
    return parse_solution(Path(path).read_text(), path)


def instance_files(directory: str | os.PathLike, suffix: str = ".txt") -> list[Path]:
    return sorted(p for p in Path(directory).iterdir() if p.is_file() and p.suffix == suffix)


def weight_grid(values: Sequence[float] = (0, 0.1, 0.3, 0.6, 1)) -> list[Weights]:
    """All (alpha, beta, gamma) triples from ``values`` that sum to one."""
    out = []
    for a in values:
        for b in values:
            for g in values:
                if abs(a + b + g - 1) < 1e-9:
                    out.append(Weights(a, b, g))
    return out
