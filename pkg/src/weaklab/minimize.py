"""Two-level cover search over small bit-string spaces (up to 8 variables).

States are integers whose bit j holds string position n-1-j (position 0 is
the leftmost character).  A cube fixes a subset of positions; its extent is
the set of matching states, packed as an int bitmask.  Cube universes are
tiny (3^n cubes), so primes are found by exhaustive expansion tests against
per-n cached extents.

Two searches share the prime machinery:

* minimum total-literal cover of an ON set with don't-cares (the
  description-length side), exact branch and bound;
* maximum of log2(|union of extents|) - tau * terms over covers of the ON
  set (the weakness-penalty side), exact branch and bound under a node
  budget with a greedy fallback.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import SearchFailureError

DEFAULT_NODE_BUDGET = 500_000


@dataclass(frozen=True)
class Cube:
    """Conjunction of fixed bit positions over an n-bit string space."""

    n: int
    care: int
    value: int

    def __post_init__(self):
        if self.value & ~self.care:
            raise ValueError("value bits outside care mask")

    @property
    def literal_count(self) -> int:
        return self.care.bit_count()

    @property
    def extent(self) -> int:
        return cube_extent(self.n, self.care, self.value)

    def text(self) -> str:
        """Positional rendering, leftmost position first ('1', '0' or '-')."""
        out = []
        for pos in range(self.n):
            j = self.n - 1 - pos
            if self.care >> j & 1:
                out.append("1" if self.value >> j & 1 else "0")
            else:
                out.append("-")
        return "".join(out)

    def __lt__(self, other: "Cube") -> bool:
        return self.text() < other.text()


@lru_cache(maxsize=None)
def _bit_planes(n: int) -> tuple[tuple[int, int], ...]:
    # plane[j] = (mask of states with bit j == 0, with bit j == 1)
    planes = []
    full = (1 << (1 << n)) - 1
    for j in range(n):
        ones = 0
        for state in range(1 << n):
            if state >> j & 1:
                ones |= 1 << state
        planes.append((full & ~ones, ones))
    return tuple(planes)


@lru_cache(maxsize=None)
def cube_extent(n: int, care: int, value: int) -> int:
    """Bitmask of the states matched by the cube (care, value)."""
    ext = (1 << (1 << n)) - 1
    planes = _bit_planes(n)
    for j in range(n):
        if care >> j & 1:
            ext &= planes[j][value >> j & 1]
    return ext


@lru_cache(maxsize=None)
def _all_cubes(n: int) -> tuple[tuple[int, int], ...]:
    # all (care, value) pairs, 3^n of them
    out = []
    for care in range(1 << n):
        sub = care
        while True:
            out.append((care, sub))
            if sub == 0:
                break
            sub = (sub - 1) & care
    return tuple(out)


@lru_cache(maxsize=256)
def prime_cubes(n: int, off: int) -> tuple[Cube, ...]:
    """Maximal cubes whose extent avoids ``off``, in deterministic order."""
    valid: dict[tuple[int, int], bool] = {}
    for care, value in _all_cubes(n):
        valid[(care, value)] = cube_extent(n, care, value) & off == 0
    primes = []
    for (care, value), ok in valid.items():
        if not ok:
            continue
        expandable = False
        j = care
        while j:
            bit = j & -j
            if valid[(care & ~bit, value & ~bit)]:
                expandable = True
                break
            j ^= bit
        if not expandable:
            primes.append(Cube(n, care, value))
    primes.sort(key=Cube.text)
    return tuple(primes)


@dataclass(frozen=True)
class Cover:
    """A selection of cubes with its union extent and search provenance."""

    n: int
    cubes: tuple[Cube, ...]
    sat: int
    proven_optimal: bool
    nodes_used: int

    @property
    def literal_count(self) -> int:
        return sum(c.literal_count for c in self.cubes)

    @property
    def term_count(self) -> int:
        return len(self.cubes)

    def key(self) -> tuple[str, ...]:
        return tuple(sorted(c.text() for c in self.cubes))


class _Budget:
    __slots__ = ("left",)

    def __init__(self, nodes: int):
        self.left = nodes

    def spend(self) -> bool:
        self.left -= 1
        return self.left >= 0


# ---------------------------------------------------------------------------
# minimum-literal cover


def min_literal_cover(
    n: int, on: int, off: int, budget: int = DEFAULT_NODE_BUDGET
) -> Cover:
    """Exact minimum total-literal cover of ``on`` avoiding ``off``; states
    in neither set are don't-cares.  Ties broken by fewer terms, then by
    lexicographic cube order."""
    if on & off:
        raise ValueError("ON and OFF sets intersect")
    if on == 0:
        return Cover(n, (), 0, True, 0)
    primes = sorted(
        (p for p in prime_cubes(n, off) if p.extent & on),
        key=lambda p: (p.literal_count, p.text()),
    )
    extents = [p.extent for p in primes]
    lits = [p.literal_count for p in primes]
    state_primes: dict[int, list[int]] = {}
    state_union: dict[int, int] = {}
    state_min_lit: dict[int, int] = {}
    rem = on
    while rem:
        s_bit = rem & -rem
        idxs = [i for i, e in enumerate(extents) if e & s_bit]
        u = 0
        for i in idxs:
            u |= extents[i]
        state_primes[s_bit] = idxs
        state_union[s_bit] = u
        state_min_lit[s_bit] = min(lits[i] for i in idxs)
        rem ^= s_bit

    def lower_bound(uncovered: int) -> int:
        lb = 0
        rem = uncovered
        while rem:
            s_bit = rem & -rem
            lb += state_min_lit[s_bit]
            rem &= ~state_union[s_bit]
        return lb

    # greedy incumbent (cheapest literals per newly covered state) so budget
    # exhaustion still returns a cover, flagged as unproven
    greedy: list[int] = []
    uncovered = on
    while uncovered:
        cand = None
        for i in range(len(primes)):
            gain = (extents[i] & uncovered).bit_count()
            if not gain:
                continue
            score = (lits[i] / gain, lits[i], primes[i].text())
            if cand is None or score < cand[0]:
                cand = (score, i)
        greedy.append(cand[1])
        uncovered &= ~extents[cand[1]]
    greedy_key = (
        sum(lits[i] for i in greedy),
        len(greedy),
        tuple(sorted(primes[i].text() for i in greedy)),
    )
    best: list = [greedy_key + (tuple(greedy),)]  # (lits, terms, key, indices)
    bud = _Budget(budget)
    exhausted = [False]

    def dfs(uncovered: int, chosen: tuple[int, ...], total_lits: int, banned: int):
        if not bud.spend():
            exhausted[0] = True
            return
        if uncovered == 0:
            key = (
                total_lits,
                len(chosen),
                tuple(sorted(primes[i].text() for i in chosen)),
            )
            if best[0] is None or key < best[0][:3]:
                best[0] = key + (chosen,)
            return
        if best[0] is not None and total_lits + lower_bound(uncovered) > best[0][0]:
            return
        # branch on the uncovered state with the fewest covering primes
        pick, pick_count = None, None
        rem = uncovered
        while rem:
            s_bit = rem & -rem
            cnt = sum(1 for i in state_primes[s_bit] if not banned >> i & 1)
            if cnt == 0:
                return
            if pick is None or cnt < pick_count:
                pick, pick_count = s_bit, cnt
            rem ^= s_bit
        tried = 0
        for i in state_primes[pick]:
            if banned >> i & 1:
                continue
            dfs(
                uncovered & ~extents[i],
                chosen + (i,),
                total_lits + lits[i],
                banned | tried,
            )
            tried |= 1 << i
            if exhausted[0]:
                return

    dfs(on, (), 0, 0)
    chosen = best[0][3]
    sat = 0
    for i in chosen:
        sat |= extents[i]
    cubes = tuple(sorted((primes[i] for i in chosen), key=Cube.text))
    return Cover(n, cubes, sat, not exhausted[0], budget - bud.left)


# ---------------------------------------------------------------------------
# weakness-penalty cover


def _score_gt(
    u_a: int, k_a: int, u_b: int, k_b: int, tau_num: int, tau_den: int
) -> bool:
    # log2(u_a) - tau*k_a > log2(u_b) - tau*k_b, exactly
    if u_a <= 0:
        return False
    if u_b <= 0:
        return True
    lhs = u_a**tau_den << max(0, tau_num * k_b - tau_num * k_a)
    rhs = u_b**tau_den << max(0, tau_num * k_a - tau_num * k_b)
    return lhs > rhs


def _score_eq(
    u_a: int, k_a: int, u_b: int, k_b: int, tau_num: int, tau_den: int
) -> bool:
    lhs = u_a**tau_den << max(0, tau_num * k_b - tau_num * k_a)
    rhs = u_b**tau_den << max(0, tau_num * k_a - tau_num * k_b)
    return lhs == rhs


def max_weakness_cover(
    n: int,
    on: int,
    off: int,
    tau: Fraction = Fraction(1),
    budget: int = DEFAULT_NODE_BUDGET,
) -> Cover:
    """Maximize log2(|union|) - tau*terms over prime-cube selections that
    cover ``on`` and avoid ``off``.

    Exact branch and bound; if the node budget runs out the incumbent (at
    worst the greedy seed) is returned with proven_optimal False.  Ties are
    broken by fewer literals, then lexicographic cube order.
    """
    if on & off:
        raise ValueError("ON and OFF sets intersect")
    if tau < 0:
        raise ValueError("tau must be >= 0")
    tau_num, tau_den = tau.numerator, tau.denominator
    # widest first so the greedy seed and first branches go for weak covers
    primes = sorted(
        prime_cubes(n, off), key=lambda p: (-p.extent.bit_count(), p.text())
    )
    extents = [p.extent for p in primes]
    lits = [p.literal_count for p in primes]
    m = len(primes)
    suffix_union = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix_union[i] = suffix_union[i + 1] | extents[i]
    if on & ~suffix_union[0]:
        raise SearchFailureError("ON set not coverable while avoiding OFF")
    # extent sizes in branch order (descending), so the sum of sizes[i:i+j]
    # bounds the union gain of any j selections from the suffix
    sizes = [e.bit_count() for e in extents]
    # per ON state: union of extents of the primes covering it (for a
    # disjoint-witness lower bound on the number of terms still needed)
    state_union: dict[int, int] = {}
    rem = on
    while rem:
        s_bit = rem & -rem
        u = 0
        for e in extents:
            if e & s_bit:
                u |= e
        state_union[s_bit] = u
        rem ^= s_bit

    def terms_needed(uncovered: int) -> int:
        cnt = 0
        rem = uncovered
        while rem:
            s_bit = rem & -rem
            cnt += 1
            rem &= ~state_union[s_bit]
        return cnt

    def better(u_a, k_a, l_a, key_a, u_b, k_b, l_b, key_b) -> bool:
        if _score_gt(u_a, k_a, u_b, k_b, tau_num, tau_den):
            return True
        if not _score_eq(u_a, k_a, u_b, k_b, tau_num, tau_den):
            return False
        return (l_a, key_a) < (l_b, key_b)

    # greedy seed: max marginal extent until ON covered, then profitable extras
    greedy: list[int] = []
    u = 0
    uncovered = on
    while uncovered:
        cand = None
        for i in range(m):
            if i in greedy or not extents[i] & uncovered:
                continue
            gain = (extents[i] & uncovered).bit_count()
            if cand is None or gain > cand[0]:
                cand = (gain, i)
        greedy.append(cand[1])
        u |= extents[cand[1]]
        uncovered &= ~extents[cand[1]]
    improved = True
    while improved:
        improved = False
        for i in range(m):
            if i in greedy:
                continue
            nu = u | extents[i]
            if nu != u and _score_gt(
                nu.bit_count(),
                len(greedy) + 1,
                u.bit_count(),
                len(greedy),
                tau_num,
                tau_den,
            ):
                greedy.append(i)
                u = nu
                improved = True
                break

    best = {
        "u": u.bit_count(),
        "k": len(greedy),
        "lits": sum(lits[i] for i in greedy),
        "key": tuple(sorted(primes[i].text() for i in greedy)),
        "chosen": tuple(sorted(greedy)),
    }

    bud = _Budget(budget)
    exhausted = [False]

    def consider(chosen: tuple[int, ...], union: int):
        u_pc = union.bit_count()
        k = len(chosen)
        l = sum(lits[i] for i in chosen)
        key = tuple(sorted(primes[i].text() for i in chosen))
        if better(u_pc, k, l, key, best["u"], best["k"], best["lits"], best["key"]):
            best.update(u=u_pc, k=k, lits=l, key=key, chosen=tuple(sorted(chosen)))

    def subtree_can_matter(i: int, union: int, uncovered: int, k_now: int) -> bool:
        # Optimistic score of any strict extension drawn from primes[i:]:
        # j more terms reach at most min(|union ∪ suffix|, |union| + j*top
        # marginal sizes); scan j from the forced minimum until saturation.
        reachable = union | suffix_union[i]
        if uncovered & ~reachable:
            return False
        reach_pc = reachable.bit_count()
        u_pc = union.bit_count()
        j_min = max(1, terms_needed(uncovered))
        u_j = u_pc
        idx = i
        for j in range(1, j_min):
            if idx < m:
                u_j += sizes[idx]
                idx += 1
        best_u, best_k = best["u"], best["k"]
        j = j_min
        while True:
            if idx < m:
                u_j = min(reach_pc, u_j + sizes[idx])
                idx += 1
            else:
                u_j = reach_pc
            if _score_gt(u_j, k_now + j, best_u, best_k, tau_num, tau_den) or _score_eq(
                u_j, k_now + j, best_u, best_k, tau_num, tau_den
            ):
                return True
            if u_j >= reach_pc:
                return False  # more terms only lower the score from here
            j += 1

    def dfs(i: int, chosen: tuple[int, ...], union: int, uncovered: int):
        if exhausted[0] or not bud.spend():
            exhausted[0] = True
            return
        if uncovered == 0:
            consider(chosen, union)
        if i == m:
            return
        if not subtree_can_matter(i, union, uncovered, len(chosen)):
            return
        if extents[i] & ~union:
            dfs(i + 1, chosen + (i,), union | extents[i], uncovered & ~extents[i])
        dfs(i + 1, chosen, union, uncovered)

    dfs(0, (), 0, on)
    chosen = best["chosen"]
    sat = 0
    for i in chosen:
        sat |= extents[i]
    cubes = tuple(sorted((primes[i] for i in chosen), key=Cube.text))
    return Cover(n, cubes, sat, not exhausted[0], budget - bud.left)


# ---------------------------------------------------------------------------
# exact representation of a given state set


def exact_cover_of(n: int, target: int) -> Cover:
    """Greedy prime cover whose union is exactly ``target`` (no don't-cares
    are available, so any prime selection stays inside the target)."""
    if target == 0:
        return Cover(n, (), 0, True, 0)
    full = (1 << (1 << n)) - 1
    primes = sorted(
        prime_cubes(n, full & ~target),
        key=lambda p: (-p.extent.bit_count(), p.text()),
    )
    chosen = []
    sat = 0
    uncovered = target
    while uncovered:
        cand = None
        for i, p in enumerate(primes):
            gain = (p.extent & uncovered).bit_count()
            if gain and (cand is None or gain > cand[0]):
                cand = (gain, i)
        chosen.append(primes[cand[1]])
        sat |= primes[cand[1]].extent
        uncovered &= ~primes[cand[1]].extent
    return Cover(n, tuple(sorted(chosen, key=Cube.text)), sat, True, 0)
