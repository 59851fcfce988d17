import math

import pytest

from mvrp.instances import default_hri_table
from mvrp.model import Instance, Point, Poi, Weights


def make_instance(points, demands, *, depot=(0.0, 0.0), num_vehicles=2, capacity=12,
                  hri=None, team_cost=50.0, weights=Weights(), ids=None, hri_at_depot=False):
    ids = ids or list(range(1, len(points) + 1))
    pois = tuple(Poi(i, Point(*xy), d) for i, xy, d in zip(ids, points, demands))
    if hri is None:
        hri = default_hri_table(capacity)
    return Instance(Point(*depot), pois, num_vehicles, capacity, tuple(hri), team_cost,
                    weights, hri_at_depot)


def tour_length(route, instance):
    """Closed tour length straight from coordinates (independent of CostMatrix)."""
    loc = {p.id: (p.location.x, p.location.y) for p in instance.pois}
    d = (instance.depot.x, instance.depot.y)
    seq = [d] + [loc[p] for p in route] + [d]
    return sum(math.dist(a, b) for a, b in zip(seq, seq[1:]))


@pytest.fixture
def line_instance():
    # four POIs on the x axis, depot at the origin
    return make_instance([(1, 0), (2, 0), (3, 0), (4, 0)], [3, 7, 2, 5])
