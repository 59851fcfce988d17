"""Route-modifying moves and exhaustive neighborhood enumeration.

Moves operate on a tuple of routes (one per team slot) and return a new tuple;
inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .model import Route

Routes = tuple[Route, ...]

REVERSE = "reverse"
SWAP_INTRA = "swap-intra"
TWO_OPT_INTRA = "two-opt-intra"
REMOVE_INSERT = "remove-insert"
SWAP_INTER = "swap-inter"
SEQ_EXCHANGE = "seq-exchange"

MOVE_KINDS = (REVERSE, SWAP_INTRA, TWO_OPT_INTRA, REMOVE_INSERT, SWAP_INTER, SEQ_EXCHANGE)
ENUMERABLE_KINDS = (TWO_OPT_INTRA, REMOVE_INSERT, SWAP_INTER, SEQ_EXCHANGE)

DEFAULT_MAX_SEG_LEN = 3


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    """A parameterized move.

    Intra moves use ``r1`` with positions ``i``/``j``. Inter moves use
    ``r1``/``r2`` with ``i``/``j`` as positions in each route; ``len1``/``len2``
    are segment lengths for sequence exchange, and ``flip`` inserts both
    exchanged segments reversed.
    """

    kind: str
    r1: int
    i: int = 0
    r2: int = -1
    j: int = 0
    len1: int = 1
    len2: int = 1
    flip: bool = False

    @property
    def touched(self) -> tuple[int, ...]:
        if self.kind in (REVERSE, SWAP_INTRA, TWO_OPT_INTRA):
            return (self.r1,)
        return (self.r1, self.r2)


def _check_pos(route: Sequence[int], pos: int, what: str = "position") -> None:
    if not 0 <= pos < len(route):
        raise MoveError(f"{what} {pos} out of range for route of length {len(route)}")


def _check_routes(routes: Sequence[Route], r1: int, r2: int) -> None:
    for r in (r1, r2):
        if not 0 <= r < len(routes):
            raise MoveError(f"route index {r} out of range")
    if r1 == r2:
        raise MoveError("inter-route move needs two distinct routes")


def reverse(route: Sequence[int]) -> Route:
    return tuple(reversed(route))


def swap_intra(route: Sequence[int], i: int, j: int) -> Route:
    _check_pos(route, i)
    _check_pos(route, j)
    if i == j:
        raise MoveError("swap positions must differ")
    out = list(route)
    out[i], out[j] = out[j], out[i]
    return tuple(out)


def two_opt_intra(route: Sequence[int], i: int, j: int) -> Route:
    """Reverse the segment route[i..j] (inclusive) in place."""
    _check_pos(route, i)
    _check_pos(route, j)
    if i >= j:
        raise MoveError("two-opt needs i < j")
    route = tuple(route)
    return route[:i] + route[i:j + 1][::-1] + route[j + 1:]


def _replace(routes: Sequence[Route], updates: dict[int, Route]) -> Routes:
    return tuple(updates.get(k, r) for k, r in enumerate(routes))


def remove_insert(routes: Sequence[Route], r1: int, pos1: int, r2: int, pos2: int) -> Routes:
    _check_routes(routes, r1, r2)
    a, b = tuple(routes[r1]), tuple(routes[r2])
    _check_pos(a, pos1)
    if not 0 <= pos2 <= len(b):
        raise MoveError(f"insert position {pos2} out of range for route of length {len(b)}")
    poi = a[pos1]
    return _replace(routes, {r1: a[:pos1] + a[pos1 + 1:], r2: b[:pos2] + (poi,) + b[pos2:]})


def swap_inter(routes: Sequence[Route], r1: int, pos1: int, r2: int, pos2: int) -> Routes:
    _check_routes(routes, r1, r2)
    a, b = list(routes[r1]), list(routes[r2])
    _check_pos(a, pos1)
    _check_pos(b, pos2)
    a[pos1], b[pos2] = b[pos2], a[pos1]
    return _replace(routes, {r1: tuple(a), r2: tuple(b)})


def seq_exchange_inter(routes: Sequence[Route], r1: int, seg1: tuple[int, int], r2: int,
                       seg2: tuple[int, int], max_seg_len: int = DEFAULT_MAX_SEG_LEN,
                       allow_empty_segment: bool = False, flip: bool = False) -> Routes:
    """Exchange segment ``seg1=(start, length)`` of r1 with ``seg2`` of r2.

    With ``allow_empty_segment`` one (not both) of the segments may have
    length 0, which relocates the other segment to that insertion point.
    With ``flip`` each segment is inserted in reverse order.
    """
    _check_routes(routes, r1, r2)
    a, b = tuple(routes[r1]), tuple(routes[r2])
    (s1, l1), (s2, l2) = seg1, seg2
    min_len = 0 if allow_empty_segment else 1
    for length in (l1, l2):
        if length < min_len:
            raise MoveError(f"segment length must be >= {min_len}")
        if length > max_seg_len:
            raise MoveError(f"segment length {length} exceeds max_seg_len {max_seg_len}")
    if l1 == 0 and l2 == 0:
        raise MoveError("at least one segment must be non-empty")
    if s1 < 0 or s1 + l1 > len(a) or s2 < 0 or s2 + l2 > len(b):
        raise MoveError("segment out of range")
    seg_a, seg_b = a[s1:s1 + l1], b[s2:s2 + l2]
    if flip:
        seg_a, seg_b = seg_a[::-1], seg_b[::-1]
    new_a = a[:s1] + seg_b + a[s1 + l1:]
    new_b = b[:s2] + seg_a + b[s2 + l2:]
    return _replace(routes, {r1: new_a, r2: new_b})


def apply_move(routes: Sequence[Route], move: Move, max_seg_len: int = DEFAULT_MAX_SEG_LEN,
               allow_empty_segment: bool = False) -> Routes:
    k = move.kind
    if k in (REVERSE, SWAP_INTRA, TWO_OPT_INTRA):
        if not 0 <= move.r1 < len(routes):
            raise MoveError(f"route index {move.r1} out of range")
        route = routes[move.r1]
        if k == REVERSE:
            new = reverse(route)
        elif k == SWAP_INTRA:
            new = swap_intra(route, move.i, move.j)
        else:
            new = two_opt_intra(route, move.i, move.j)
        return _replace(routes, {move.r1: new})
    if k == REMOVE_INSERT:
        return remove_insert(routes, move.r1, move.i, move.r2, move.j)
    if k == SWAP_INTER:
        return swap_inter(routes, move.r1, move.i, move.r2, move.j)
    if k == SEQ_EXCHANGE:
        return seq_exchange_inter(routes, move.r1, (move.i, move.len1), move.r2,
                                  (move.j, move.len2), max_seg_len, allow_empty_segment,
                                  move.flip)
    raise MoveError(f"unknown move kind {k!r}")


def _segments(n: int, max_len: int, allow_empty: bool = False) -> list[tuple[int, int]]:
    """(start, length) pairs in lexicographic order; length 0 marks an insertion point."""
    first = 0 if allow_empty else 1
    return [(s, ln) for s in range(n + 1) for ln in range(first, min(max_len, n - s) + 1)]


def enumerate_moves(routes: Sequence[Route], kind: str, max_seg_len: int = DEFAULT_MAX_SEG_LEN,
                    allow_empty_segment: bool = False,
                    allow_reversal: bool = False) -> Iterator[Move]:
    """Every move of ``kind`` on ``routes`` in lexicographic parameter order.

    With ``allow_reversal`` each sequence exchange that moves a segment of
    length 2 or more is followed by its flipped variant.
    """
    m = len(routes)
    lens = [len(r) for r in routes]
    if kind == TWO_OPT_INTRA:
        for r in range(m):
            for i in range(lens[r]):
                for j in range(i + 1, lens[r]):
                    yield Move(kind, r, i, -1, j)
    elif kind == REMOVE_INSERT:
        for r1 in range(m):
            for r2 in range(m):
                if r1 == r2:
                    continue
                for i in range(lens[r1]):
                    for j in range(lens[r2] + 1):
                        yield Move(kind, r1, i, r2, j)
    elif kind == SWAP_INTER:
        for r1 in range(m):
            for r2 in range(r1 + 1, m):
                for i in range(lens[r1]):
                    for j in range(lens[r2]):
                        yield Move(kind, r1, i, r2, j)
    elif kind == SEQ_EXCHANGE:
        for r1 in range(m):
            segs1 = _segments(lens[r1], max_seg_len, allow_empty_segment)
            for r2 in range(r1 + 1, m):
                segs2 = _segments(lens[r2], max_seg_len, allow_empty_segment)
                for s1, l1 in segs1:
                    for s2, l2 in segs2:
                        if l1 == 0 and l2 == 0:
                            continue
                        yield Move(kind, r1, s1, r2, s2, l1, l2)
                        if allow_reversal and max(l1, l2) >= 2:
                            yield Move(kind, r1, s1, r2, s2, l1, l2, True)
    else:
        raise MoveError(f"{kind!r} is not an enumerable neighborhood")


def enumerate_neighbors(routes: Sequence[Route], kind: str,
                        max_seg_len: int = DEFAULT_MAX_SEG_LEN,
                        allow_empty_segment: bool = False,
                        allow_reversal: bool = False) -> Iterator[Routes]:
    for move in enumerate_moves(routes, kind, max_seg_len, allow_empty_segment, allow_reversal):
        yield apply_move(routes, move, max_seg_len, allow_empty_segment)


def neighborhood_size(routes: Sequence[Route], kind: str, max_seg_len: int = DEFAULT_MAX_SEG_LEN,
                      allow_empty_segment: bool = False, allow_reversal: bool = False) -> int:
    """Closed-form count of :func:`enumerate_moves` output."""
    lens = [len(r) for r in routes]
    m = len(lens)
    if kind == TWO_OPT_INTRA:
        return sum(n * (n - 1) // 2 for n in lens)
    if kind == REMOVE_INSERT:
        return sum(lens[a] * (lens[b] + 1) for a in range(m) for b in range(m) if a != b)
    if kind == SWAP_INTER:
        return sum(lens[a] * lens[b] for a in range(m) for b in range(a + 1, m))
    if kind == SEQ_EXCHANGE:
        extra = 1 if allow_empty_segment else 0

        def segs(n, longest):
            return sum(n - ln + 1 for ln in range(1, min(longest, n) + 1)) + extra * (n + 1)

        def pairs(a, b, longest):
            return (segs(lens[a], longest) * segs(lens[b], longest)
                    - extra * (lens[a] + 1) * (lens[b] + 1))
        total = 0
        for a in range(m):
            for b in range(a + 1, m):
                total += pairs(a, b, max_seg_len)
                if allow_reversal:
                    # flipped copies of every pair except those with both lengths <= 1
                    total += pairs(a, b, max_seg_len) - pairs(a, b, 1)
        return total
    raise MoveError(f"{kind!r} is not an enumerable neighborhood")
