"""Multi-vehicle routing with MGV-UGV teams and human-robot interaction costs."""

from .assignment import (AssignmentScheme, assign_oracle, assign_rule1, assign_rule2,
                         assign_rule3)
from .construction import build_initial_routes, construct
from .exact import solve_exact
from .instances import (GeneratorSpec, generate, read_instance, read_solution, write_instance,
                        write_solution)
from .model import (Assignment, CostBreakdown, CostMatrix, Instance, Point, Poi, RoutePlan,
                    Solution, Weights, build_cost_matrix, check_feasibility, evaluate)
from .svns import SvnsParams, local_search, shake, solve

__all__ = [
    "Assignment", "AssignmentScheme", "CostBreakdown", "CostMatrix", "GeneratorSpec",
    "Instance", "Point", "Poi", "RoutePlan", "Solution", "SvnsParams", "Weights",
    "assign_oracle", "assign_rule1", "assign_rule2", "assign_rule3", "build_cost_matrix",
    "build_initial_routes", "check_feasibility", "construct", "evaluate", "generate",
    "local_search", "read_instance", "read_solution", "shake", "solve", "solve_exact",
    "write_instance", "write_solution",
]
