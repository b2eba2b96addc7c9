"""Proxy-driven induction and the exact generalisation probabilities.

All probabilities are exact rationals; in the formula paths the denominator
is a power of two by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NoModelError, TaskPreconditionError
from .lattice import Language, Statement, canonical_proxy_kind
from .tasks import VTask


def induce(task: VTask, kind: str) -> Statement:
    """Return the proxy-maximal model of the task.

    Ties are broken by the global statement order (size, then lexicographic
    on indices): the earliest maximal model wins.
    """
    kind = canonical_proxy_kind(kind)
    ms = task.models()
    if not ms:
        raise NoModelError("model set empty")
    best = ms[0]
    best_v = task.lang.proxy_value(kind, best)
    for m in ms[1:]:
        v = task.lang.proxy_value(kind, m)
        if v > best_v:
            best, best_v = m, v
    return best


def generalisation_probability(task: VTask, h: Statement) -> Fraction:
    """Probability that a model of the task generalises to an unknown strict
    parent: 2^|Z̄_S ∩ Z_h| / 2^|Z̄_S|, with Z̄_S the statements outside the
    reach of the situations."""
    if not task.is_model(h):
        raise TaskPreconditionError(f"{h!r} is not a model of the task")
    outside = set(task.lang.statements) - set(task.reachable)
    inside_h = outside & set(task.lang.extension(h))
    return Fraction(1 << len(inside_h), 1 << len(outside))


def prior(lang: Language, h: Statement) -> Fraction:
    """Probability assigned to a statement by the weakness prior:
    2^|Z_h| / 2^|L|."""
    return Fraction(1 << lang.weakness(h), 1 << lang.size)


def mutually_exclusive(lang: Language, a: Statement, b: Statement) -> bool:
    """True iff neither statement's extension contains the other, i.e.
    neither is a superset of the other."""
    lang.position(a)
    lang.position(b)
    return not a.issubset(b) and not b.issubset(a)


@dataclass(frozen=True)
class ExclusiveFamily:
    """A pairwise mutually exclusive family anchored at one statement."""

    anchor: Statement
    members: tuple[Statement, ...]


@dataclass(frozen=True)
class FamilySumReport:
    family: ExclusiveFamily
    total: Fraction


def exclusive_family_sum(lang: Language, x: Statement) -> FamilySumReport:
    """Greedily extend {x} to a maximal pairwise mutually exclusive family
    (scanning in global order) and report the exact sum of priors.

    Reporting only: maximal families are not unique and observed totals can
    differ from 1; nothing is asserted here.
    """
    lang.position(x)
    family = [x]
    for s in lang.statements:
        if s == x:
            continue
        if all(mutually_exclusive(lang, s, f) for f in family):
            family.append(s)
    members = tuple(sorted(family))
    total = sum((prior(lang, f) for f in members), Fraction(0))
    return FamilySumReport(ExclusiveFamily(x, members), total)
