import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from mvrp.neighborhoods import (ENUMERABLE_KINDS, REMOVE_INSERT, SEQ_EXCHANGE, SWAP_INTER,
                                SWAP_INTRA, TWO_OPT_INTRA, Move, MoveError, apply_move,
                                enumerate_moves, enumerate_neighbors, neighborhood_size,
                                remove_insert, reverse, seq_exchange_inter, swap_inter,
                                swap_intra, two_opt_intra)


def test_intra_examples():
    assert reverse((1, 2, 3)) == (3, 2, 1)
    assert swap_intra((1, 2, 3, 4), 0, 3) == (4, 2, 3, 1)
    assert two_opt_intra((1, 2, 3, 4, 5), 1, 3) == (1, 4, 3, 2, 5)


def test_inter_examples():
    routes = ((1, 2, 3), (4, 5))
    assert remove_insert(routes, 0, 1, 1, 2) == ((1, 3), (4, 5, 2))
    assert remove_insert(routes, 1, 0, 0, 0) == ((4, 1, 2, 3), (5,))
    assert swap_inter(routes, 0, 2, 1, 0) == ((1, 2, 4), (3, 5))
    assert seq_exchange_inter(routes, 0, (0, 2), 1, (1, 1)) == ((5, 3), (4, 1, 2))


def test_remove_insert_can_empty_a_route():
    assert remove_insert(((1,), (2,)), 0, 0, 1, 1) == ((), (2, 1))


def test_flip_reverses_exchanged_segments():
    routes = ((1, 2, 3), (4, 5))
    assert seq_exchange_inter(routes, 0, (0, 2), 1, (0, 2), flip=True) == ((5, 4, 3), (2, 1))
    assert seq_exchange_inter(routes, 1, (0, 2), 0, (0, 0), allow_empty_segment=True,
                              flip=True) == ((5, 4, 1, 2, 3), ())


def test_empty_side_relocates_segment():
    routes = ((1, 2, 3), (4,))
    assert seq_exchange_inter(routes, 0, (0, 3), 1, (1, 0), allow_empty_segment=True) == \
        ((), (4, 1, 2, 3))
    with pytest.raises(MoveError):
        seq_exchange_inter(routes, 0, (0, 3), 1, (1, 0))
    with pytest.raises(MoveError):
        seq_exchange_inter(routes, 0, (0, 0), 1, (0, 0), allow_empty_segment=True)


@pytest.mark.parametrize("call", [
    lambda: swap_intra((1, 2), 0, 0),
    lambda: swap_intra((1, 2), 0, 2),
    lambda: two_opt_intra((1, 2, 3), 2, 1),
    lambda: remove_insert(((1,), (2,)), 0, 0, 0, 0),
    lambda: remove_insert(((1,), (2,)), 0, 0, 1, 3),
    lambda: swap_inter(((1,), ()), 0, 0, 1, 0),
    lambda: seq_exchange_inter(((1, 2, 3, 4), (5,)), 0, (0, 4), 1, (0, 1)),
    lambda: seq_exchange_inter(((1, 2), (5,)), 0, (1, 2), 1, (0, 1)),
    lambda: apply_move(((1,),), Move("bogus", 0)),
])
def test_invalid_moves_raise(call):
    with pytest.raises(MoveError):
        call()


def test_inputs_not_mutated():
    routes = ((1, 2, 3), (4, 5))
    snapshot = tuple(tuple(r) for r in routes)
    for kind in ENUMERABLE_KINDS:
        list(enumerate_neighbors(routes, kind, allow_empty_segment=True))
    assert routes == snapshot


def random_routes(rng, max_routes=4, max_len=7):
    m = rng.randint(2, max_routes)
    pois = list(range(1, rng.randint(2, max_len * m) + 1))
    rng.shuffle(pois)
    cuts = sorted(rng.randint(0, len(pois)) for _ in range(m - 1))
    bounds = [0] + cuts + [len(pois)]
    return tuple(tuple(pois[a:b]) for a, b in zip(bounds, bounds[1:]))


def same_pois(before, after):
    return Counter(p for r in before for p in r) == Counter(p for r in after for p in r)


@pytest.mark.parametrize("kind", ENUMERABLE_KINDS)
@pytest.mark.parametrize("empty", [False, True])
def test_random_moves_preserve_poi_multiset(kind, empty):
    rng = random.Random(len(kind) * 2 + empty)
    done = 0
    while done < 10_000:
        routes = random_routes(rng)
        moves = list(enumerate_moves(routes, kind, 3, empty, empty))
        if not moves:
            continue
        for _ in range(50):
            move = rng.choice(moves)
            out = apply_move(routes, move, 3, empty)
            assert len(out) == len(routes)
            assert same_pois(routes, out)
            untouched = set(range(len(routes))) - set(move.touched)
            assert all(out[r] == routes[r] for r in untouched)
            done += 1


def test_involutions():
    rng = random.Random(5)
    for _ in range(2000):
        routes = random_routes(rng)
        r = max(range(len(routes)), key=lambda k: len(routes[k]))
        route = routes[r]
        assert reverse(reverse(route)) == route
        if len(route) >= 2:
            i, j = sorted(rng.sample(range(len(route)), 2))
            assert swap_intra(swap_intra(route, i, j), i, j) == route
            assert two_opt_intra(two_opt_intra(route, i, j), i, j) == route
        a, b = rng.sample(range(len(routes)), 2)
        if routes[a] and routes[b]:
            i, j = rng.randrange(len(routes[a])), rng.randrange(len(routes[b]))
            assert swap_inter(swap_inter(routes, a, i, b, j), a, i, b, j) == routes


def brute_count(routes, kind, max_len, empty):
    """Count distinct parameter tuples by filtering a superset through the move checks."""
    m = len(routes)
    n = 0
    for r1, r2 in itertools.product(range(m), range(-1, m)):
        for i, j in itertools.product(range(9), range(9)):
            for l1, l2 in itertools.product(range(max_len + 2), range(max_len + 2)):
                if kind == TWO_OPT_INTRA and (r2 != -1 or (l1, l2) != (1, 1)):
                    continue
                if kind in (REMOVE_INSERT, SWAP_INTER) and (l1, l2) != (1, 1):
                    continue
                if kind in (SWAP_INTER, SEQ_EXCHANGE) and r2 <= r1:
                    continue
                if kind == SEQ_EXCHANGE and ((l1 == 0 and i > len(routes[r1]))
                                             or (l2 == 0 and j > len(routes[r2]))):
                    continue
                try:
                    apply_move(routes, Move(kind, r1, i, r2, j, l1, l2), max_len, empty)
                except MoveError:
                    continue
                n += 1
    return n


@pytest.mark.parametrize("kind", ENUMERABLE_KINDS)
def test_closed_form_counts(kind):
    rng = random.Random(9)
    for trial in range(50):
        routes = random_routes(rng, max_routes=3, max_len=4)
        empty = trial % 2 == 1
        flip = trial % 4 >= 2
        moves = list(enumerate_moves(routes, kind, 3, empty, flip))
        assert len(moves) == len(set(moves)) == neighborhood_size(routes, kind, 3, empty, flip)
        outs = [apply_move(routes, mv, 3, empty) for mv in moves]
        if kind in (TWO_OPT_INTRA, SWAP_INTER):
            assert routes not in outs
        if trial < 10 and not flip:
            assert len(moves) == brute_count(routes, kind, 3, empty)


def test_known_counts():
    routes = ((1, 2, 3), (4, 5))
    assert neighborhood_size(routes, TWO_OPT_INTRA) == 3 + 1
    assert neighborhood_size(routes, REMOVE_INSERT) == 3 * 3 + 2 * 4
    assert neighborhood_size(routes, SWAP_INTER) == 6
    # segments of a length-3 route up to length 3: 3 + 2 + 1; length-2 route: 2 + 1
    assert neighborhood_size(routes, SEQ_EXCHANGE) == 6 * 3
    # empty side adds 4 insertion points on r1 and 3 on r2: (6+4)(3+3) - 4*3
    assert neighborhood_size(routes, SEQ_EXCHANGE, allow_empty_segment=True) == 60 - 12
    # flipping duplicates every pair except the (len <= 1, len <= 1) ones:
    # plain 18 - 3*2 = 12 extra; with empty side 48 - (3+4)(2+3) + 4*3 = 25 extra
    assert neighborhood_size(routes, SEQ_EXCHANGE, allow_reversal=True) == 18 + 12
    assert neighborhood_size(routes, SEQ_EXCHANGE, allow_empty_segment=True,
                             allow_reversal=True) == 48 + 25


def test_enumeration_is_lexicographic():
    routes = ((1, 2, 3), (4, 5), (6,))
    for kind in ENUMERABLE_KINDS:
        keys = [(mv.r1, mv.r2, mv.i, mv.len1, mv.j, mv.len2, mv.flip)
                if kind == SEQ_EXCHANGE else (mv.r1, mv.r2, mv.i, mv.j)
                for mv in enumerate_moves(routes, kind, 3, True, True)]
        assert keys == sorted(keys)


@given(st.lists(st.integers(0, 5), min_size=2, max_size=4))
def test_counts_property(lens):
    routes, nxt = [], 1
    for n in lens:
        routes.append(tuple(range(nxt, nxt + n)))
        nxt += n
    for kind in ENUMERABLE_KINDS:
        for empty, flip in itertools.product((False, True), repeat=2):
            assert sum(1 for _ in enumerate_moves(routes, kind, 3, empty, flip)) == \
                neighborhood_size(routes, kind, 3, empty, flip)
