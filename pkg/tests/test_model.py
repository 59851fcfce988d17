import math

import pytest
from hypothesis import given, settings, strategies as st

from mvrp.model import (Assignment, CostBreakdown, InfeasibleSolutionError, InstanceError,
                        Point, Poi, Solution, Weights, build_cost_matrix, check_feasibility,
                        evaluate)

from conftest import make_instance, tour_length


def test_cost_matrix_345():
    inst = make_instance([(3, 4)], [1], num_vehicles=1)
    m = build_cost_matrix(inst)
    assert m[0][1] == 5.0
    assert m[1][0] == 5.0


def test_cost_matrix_diagonal_and_symmetry():
    inst = make_instance([(1, 0), (0, 1), (5, 5)], [1, 1, 1])
    m = build_cost_matrix(inst)
    for i in range(len(m)):
        assert m[i][i] == 0
        for j in range(len(m)):
            assert m[i][j] == m[j][i]


def test_cost_matrix_sqrt2():
    inst = make_instance([(1, 0), (0, 1)], [1, 1])
    assert build_cost_matrix(inst)[1][2] == pytest.approx(1.41421356, abs=1e-8)


def test_point_rejects_nan():
    with pytest.raises(ValueError):
        Point(float("nan"), 0)


@pytest.mark.parametrize("kwargs, fragment", [
    (dict(num_vehicles=0), "num_vehicles"),
    (dict(hri=[0, 1, 2]), "hri_table"),
    (dict(hri=[5] + [1] * 12), "hri_table[0]"),
])
def test_instance_validation(kwargs, fragment):
    with pytest.raises(InstanceError) as exc:
        make_instance([(1, 1)], [1], **kwargs)
    assert fragment in str(exc.value)


def test_instance_rejects_demand_above_capacity():
    with pytest.raises(InstanceError, match="POI 1"):
        make_instance([(1, 1)], [13])


def test_instance_rejects_duplicate_ids():
    with pytest.raises(InstanceError, match="duplicate"):
        make_instance([(1, 1), (2, 2)], [1, 1], ids=[4, 4])


def test_weights_need_a_positive_entry():
    with pytest.raises(ValueError):
        Weights(0, 0, 0)


def test_table2_row_ss3():
    cb = CostBreakdown.from_components(422.71, 83.34, 160.03, 100, Weights(1, 1, 1))
    assert cb.total == pytest.approx(766.08, abs=0.01)


def test_weight_masking():
    cb = CostBreakdown.from_components(10, 5, 123.0, 77.0, Weights(1, 0, 0))
    assert cb.total == 15


def test_empty_solution_costs_nothing():
    inst = make_instance([], [], num_vehicles=2)
    sol = Solution.from_parts([(), ()], [Assignment(0, ()), Assignment(0, ())])
    cb = evaluate(sol, inst)
    assert (cb.path_cost, cb.replenishment_cost, cb.hri_cost, cb.team_cost_total, cb.total) \
        == (0, 0, 0, 0, 0)


def test_evaluate_by_hand(line_instance):
    # route 1 -> 2, team 3 then +4 at POI 2; route 3 -> 4 carries 5 throughout
    inst = line_instance
    sol = Solution.from_parts([(1, 2), (3, 4)], [Assignment(3, (0, 4)), Assignment(5, (0, 0))])
    cb = evaluate(sol, inst)
    h = inst.hri_table
    assert cb.path_cost == pytest.approx(4 + 8)
    assert cb.replenishment_cost == pytest.approx(2.0)
    assert cb.hri_cost == pytest.approx(h[3] + h[7] + h[5] + h[5])
    assert cb.team_cost_total == 100
    assert cb.total == pytest.approx(cb.path_cost + cb.replenishment_cost + cb.hri_cost + 100)


def test_hri_at_depot_adds_dispatch_cost():
    base = make_instance([(1, 0)], [4], num_vehicles=1)
    with_depot = make_instance([(1, 0)], [4], num_vehicles=1, hri_at_depot=True)
    sol = Solution.from_parts([(1,)], [Assignment(4, (0,))])
    diff = evaluate(sol, with_depot).hri_cost - evaluate(sol, base).hri_cost
    assert diff == base.hri_table[4]


def test_replenishment_is_per_event_not_per_ugv(line_instance):
    a = Solution.from_parts([(1, 2), (3, 4)], [Assignment(3, (0, 4)), Assignment(5, (0, 0))])
    b = Solution.from_parts([(1, 2), (3, 4)], [Assignment(3, (0, 9)), Assignment(5, (0, 0))])
    assert evaluate(a, line_instance).replenishment_cost == \
        evaluate(b, line_instance).replenishment_cost


def test_feasible_solution_reports_ok(line_instance):
    sol = Solution.from_parts([(1, 2), (3, 4)], [Assignment(7, (0, 0)), Assignment(5, (0, 0))])
    assert check_feasibility(sol, line_instance).ok


def test_missing_poi(line_instance):
    sol = Solution.from_parts([(1, 2), (4,)], [Assignment(7, (0, 0)), Assignment(5, (0,))])
    report = check_feasibility(sol, line_instance)
    assert any(v.kind == "poi-missing" and v.poi == 3 for v in report.violations)


def test_duplicated_poi(line_instance):
    sol = Solution.from_parts([(1, 2, 3), (3, 4)],
                              [Assignment(7, (0, 0, 0)), Assignment(5, (0, 0))])
    assert "poi-duplicated" in check_feasibility(sol, line_instance).kinds()


def test_demand_unmet():
    inst = make_instance([(1, 0)], [5], num_vehicles=1)
    sol = Solution.from_parts([(1,)], [Assignment(4, (0,))])
    v = check_feasibility(sol, inst).violations
    assert [(x.kind, x.route, x.position) for x in v] == [("demand-unmet", 0, 0)]


def test_capacity_exceeded_and_evaluate_refuses(line_instance):
    sol = Solution.from_parts([(1, 2), (3, 4)], [Assignment(7, (0, 6)), Assignment(5, (0, 0))])
    assert "capacity-exceeded" in check_feasibility(sol, line_instance).kinds()
    with pytest.raises(InfeasibleSolutionError):
        evaluate(sol, line_instance)


def test_assignment_length_mismatch(line_instance):
    sol = Solution.from_parts([(1, 2), (3, 4)], [Assignment(7, (0,)), Assignment(5, (0, 0))])
    assert "assignment-length-mismatch" in check_feasibility(sol, line_instance).kinds()


coords = st.tuples(st.floats(-100, 100), st.floats(-100, 100))


@st.composite
def single_route_cases(draw):
    n = draw(st.integers(1, 6))
    pts = draw(st.lists(coords, min_size=n, max_size=n))
    demands = draw(st.lists(st.integers(1, 12), min_size=n, max_size=n))
    s = max(demands[0], draw(st.integers(0, 12)))
    sizes = [s]
    for d in demands[1:]:
        sizes.append(draw(st.integers(max(sizes[-1], d), 12)))
    return pts, demands, sizes


@settings(max_examples=200, deadline=None)
@given(single_route_cases())
def test_evaluate_properties(case):
    pts, demands, sizes = case
    inst = make_instance(pts, demands, num_vehicles=1)
    route = tuple(range(1, len(pts) + 1))
    asg = Assignment.from_team_sizes(sizes)
    sol = Solution.from_parts([route], [asg])
    cb = evaluate(sol, inst)
    assert cb == evaluate(sol, inst)
    w = inst.weights
    assert cb.total == pytest.approx(
        w.alpha * (cb.path_cost + cb.replenishment_cost) + w.beta * cb.hri_cost
        + w.gamma * cb.team_cost_total)
    assert cb.hri_cost == pytest.approx(sum(inst.hri_table[y] for y in sizes))
    assert cb.path_cost == pytest.approx(tour_length(route, inst))
    # reversal keeps R1 (team sizes are irrelevant for path cost)
    rev = Solution.from_parts([route[::-1]], [Assignment(12, (0,) * len(route))])
    assert evaluate(rev, inst).path_cost == pytest.approx(cb.path_cost)
    # dropping one replenishment event (carry its UGVs from the depot) cannot raise R2
    z = list(asg.replenishments)
    for t in range(1, len(z)):
        if z[t] > 0:
            fewer = Assignment(asg.initial_dispatch + z[t], tuple(z[:t] + [0] + z[t + 1:]))
            cb2 = evaluate(Solution.from_parts([route], [fewer]), inst)
            assert cb2.replenishment_cost <= cb.replenishment_cost
            break


def test_poi_ids_need_not_be_contiguous():
    inst = make_instance([(3, 4), (6, 8)], [2, 3], ids=[10, 42], num_vehicles=1)
    sol = Solution.from_parts([(42, 10)], [Assignment(3, (0, 0))])
    assert evaluate(sol, inst).path_cost == pytest.approx(10 + 5 + 5)
    assert isinstance(inst.pois[0], Poi)
