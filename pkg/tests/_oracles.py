"""Independent brute-force routes used only by tests.

Everything here is deliberately naive: plain set algebra, exhaustive
enumeration, and uniform-cost search.  None of it shares code with the
package's own algorithms.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction


# ---------------------------------------------------------------------------
# naive lattice semantics over (truth_tables, statements-as-frozensets)


def naive_sat_states(truth: list[set[int]], stmt: frozenset[int], n_states: int) -> set[int]:
    states = set(range(n_states))
    for i in stmt:
        states &= truth[i]
    return states


def naive_language(truth: list[set[int]], n_states: int) -> list[frozenset[int]]:
    """All satisfiable predicate subsets, by brute subset enumeration."""
    out = []
    for r in range(len(truth) + 1):
        for combo in itertools.combinations(range(len(truth)), r):
            if naive_sat_states(truth, frozenset(combo), n_states):
                out.append(frozenset(combo))
    return out


def naive_extension(universe: list[frozenset[int]], s: frozenset[int]) -> set[frozenset[int]]:
    return {t for t in universe if s <= t}


def naive_models(
    universe: list[frozenset[int]],
    situations: list[frozenset[int]],
    decisions: set[frozenset[int]],
) -> list[frozenset[int]]:
    reach = set()
    for s in situations:
        reach |= naive_extension(universe, s)
    return [
        h
        for h in universe
        if reach & naive_extension(universe, h) == decisions
    ]


def naive_census_count(universe: list[frozenset[int]]) -> int:
    """Number of (S, D) pairs with S a nonempty proper statement subset and
    D a nonempty subset of the union of extensions of S."""
    n = len(universe)
    count = 0
    for r in range(1, n):
        for sits in itertools.combinations(universe, r):
            reach = set()
            for s in sits:
                reach |= naive_extension(universe, s)
            count += (1 << len(reach)) - 1
    return count


# ---------------------------------------------------------------------------
# minimum-literal covers by uniform-cost search over covered-state masks


def all_cubes_extents(n: int) -> list[tuple[int, int, int]]:
    """(literal_count, extent_mask, cube_id) for every cube over n bits."""
    out = []
    for care in range(1 << n):
        sub = care
        while True:
            ext = 0
            for state in range(1 << n):
                if state & care == sub:
                    ext |= 1 << state
            out.append((care.bit_count(), ext, (care << n) | sub))
            if sub == 0:
                break
            sub = (sub - 1) & care
    return out


def min_literals_search(n: int, on: int, off: int, cubes=None) -> int | None:
    """Cheapest total literal count covering ``on`` while avoiding ``off``,
    by Dijkstra over covered-ON masks.  None if uncoverable."""
    if on == 0:
        return 0
    usable = [
        (cost, ext & on)
        for cost, ext, _ in (cubes if cubes is not None else all_cubes_extents(n))
        if ext & off == 0 and ext & on
    ]
    dist = {0: 0}
    pq = [(0, 0)]
    while pq:
        d, covered = heapq.heappop(pq)
        if covered == on:
            return d
        if d > dist.get(covered, 1 << 62):
            continue
        for cost, ext in usable:
            nxt = covered | ext
            nd = d + cost
            if nd < dist.get(nxt, 1 << 62):
                dist[nxt] = nd
                heapq.heappush(pq, (nd, nxt))
    return None


# ---------------------------------------------------------------------------
# wald interval recomputed from first principles


def wald_interval(successes: int, trials: int) -> float:
    p = successes / trials
    return 1.96 * (p * (1 - p) / trials) ** 0.5


def exact_mean(values: list[Fraction]) -> Fraction:
    return sum(values, Fraction(0)) / len(values)
