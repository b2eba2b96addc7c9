"""Exhaustive brute-force verification on small languages.

Enumerates the full task census of a language (every nonempty proper
situation set with every nonempty reachable decision set), then checks, for
every task with models, that the weakest models are never beaten on the
count of census parents they generalise to.  Probability-formula values are
recorded against empirical parent fractions without being asserted equal:
the formula counts decision subsets, the census counts concrete tasks.

Also home of the two built-in fixtures: the two-state language, and the
explicit-universe language on which the weakness and description-length
proxies pick different models.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, FixtureError
from .induction import induce
from .lattice import (
    INVERSE_DESCRIPTION_LENGTH,
    WEAKNESS,
    Language,
    Predicate,
    StateSet,
    StateSpace,
    Statement,
    Vocabulary,
)
from .tasks import VTask, make_task

DEFAULT_CENSUS_CAP = 1_000_000
DEFAULT_REPORT_ROWS = 2_000
PRIOR_REPORT_CAP = 4_096


# ---------------------------------------------------------------------------
# census


@dataclass
class TaskCensus:
    """All tasks of a language with nonempty situations (a proper subset of
    the universe) and nonempty decision sets."""

    lang: Language
    tasks: tuple[VTask, ...]
    count: int


def census_size(lang: Language, cap: int = DEFAULT_CENSUS_CAP) -> int:
    """Exact census cardinality, without materializing tasks.

    Raises CapacityError as soon as the running total exceeds ``cap``.
    """
    n = lang.size
    # Every census situation set contributes at least 2^|S| - 1 decision
    # sets, so 3^n - 2^(n+1) + 1 is a cheap lower bound on the census.
    if n > 1 and 3**n - (1 << (n + 1)) + 1 > cap:
        raise CapacityError("task census", cap)
    ext = lang.extension_masks()
    full = (1 << n) - 1
    reach = [0] * (1 << n)
    total = 0
    for mask in range(1, full):
        low = mask & -mask
        reach[mask] = reach[mask ^ low] | ext[low.bit_length() - 1]
        total += (1 << reach[mask].bit_count()) - 1
        if total > cap:
            raise CapacityError("task census", cap)
    return total


def enumerate_tasks(lang: Language, cap: int = DEFAULT_CENSUS_CAP) -> TaskCensus:
    """Materialize the census in deterministic order (situation sets by
    size then lexicographic position, decision sets likewise)."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = lang.size
    stmts = lang.statements
    ext = lang.extension_masks()
    tasks: list[VTask] = []
    for k in range(1, n):
        for sit_idx in itertools.combinations(range(n), k):
            reach_mask = 0
            for i in sit_idx:
                reach_mask |= ext[i]
            reach_idx = [j for j in range(n) if reach_mask >> j & 1]
            situations = tuple(stmts[i] for i in sit_idx)
            reachable = tuple(stmts[j] for j in reach_idx)
            for r in range(1, len(reach_idx) + 1):
                for dec_idx in itertools.combinations(reach_idx, r):
                    if len(tasks) >= cap:
                        raise CapacityError("task census", cap)
                    tasks.append(
                        VTask(
                            lang,
                            situations,
                            tuple(stmts[j] for j in dec_idx),
                            reachable,
                        )
                    )
    return TaskCensus(lang, tuple(tasks), len(tasks))


# ---------------------------------------------------------------------------
# weakness-optimality verification


@dataclass(frozen=True)
class OptimalityRow:
    """One (task, model) pair of the verification sweep."""

    situations: tuple[tuple[int, ...], ...]
    decisions: tuple[tuple[int, ...], ...]
    model: tuple[int, ...]
    weakness: int
    parent_count: int
    total_parents: int
    formula: Fraction
    empirical: Fraction | None


@dataclass(frozen=True)
class Violation:
    """A weakness-maximal model that failed to attain the maximum parent
    count of its task; grounds for failing the whole suite."""

    situations: tuple[tuple[int, ...], ...]
    decisions: tuple[tuple[int, ...], ...]
    weak_model: tuple[int, ...]
    weak_count: int
    best_model: tuple[int, ...]
    best_count: int


@dataclass
class OptimalityReport:
    census_size: int
    tasks_checked: int
    rows_total: int
    rows: list[OptimalityRow]
    rows_truncated: bool
    violations: list[Violation]
    deviation_count: int
    deviation_samples: list[OptimalityRow]

    def to_dict(self) -> dict:
        def row(r: OptimalityRow) -> dict:
            return {
                "situations": [list(s) for s in r.situations],
                "decisions": [list(d) for d in r.decisions],
                "model": list(r.model),
                "weakness": r.weakness,
                "parent_count": r.parent_count,
                "total_parents": r.total_parents,
                "formula": [r.formula.numerator, r.formula.denominator],
                "empirical": None
                if r.empirical is None
                else [r.empirical.numerator, r.empirical.denominator],
            }

        return {
            "census_size": self.census_size,
            "tasks_checked": self.tasks_checked,
            "rows_total": self.rows_total,
            "rows_truncated": self.rows_truncated,
            "violation_count": len(self.violations),
            "violations": [
                {
                    "situations": [list(s) for s in v.situations],
                    "decisions": [list(d) for d in v.decisions],
                    "weak_model": list(v.weak_model),
                    "weak_count": v.weak_count,
                    "best_model": list(v.best_model),
                    "best_count": v.best_count,
                }
                for v in self.violations
            ],
            "deviation_count": self.deviation_count,
            "rows": [row(r) for r in self.rows],
        }

    def to_text(self) -> str:
        lines = [
            f"census={self.census_size} tasks_checked={self.tasks_checked} "
            f"rows={self.rows_total} violations={len(self.violations)} "
            f"formula_deviations={self.deviation_count}",
        ]
        shown = self.rows
        for r in shown:
            emp = "-" if r.empirical is None else str(r.empirical)
            lines.append(
                f"S={_fmt_sets(r.situations)} D={_fmt_sets(r.decisions)} "
                f"h={_fmt_set(r.model)} |Z_h|={r.weakness} "
                f"parents={r.parent_count}/{r.total_parents} "
                f"formula={r.formula} empirical={emp}"
            )
        if self.rows_truncated:
            lines.append(f"... ({self.rows_total - len(shown)} rows not shown)")
        for v in self.violations:
            lines.append(
                f"VIOLATION S={_fmt_sets(v.situations)} D={_fmt_sets(v.decisions)} "
                f"weakest={_fmt_set(v.weak_model)} count={v.weak_count} "
                f"beaten_by={_fmt_set(v.best_model)} count={v.best_count}"
            )
        return "\n".join(lines)


def _fmt_set(members: tuple[int, ...]) -> str:
    return "{" + ",".join(map(str, members)) + "}"


def _fmt_sets(sets: tuple[tuple[int, ...], ...]) -> str:
    return "{" + ",".join(_fmt_set(s) for s in sets) + "}"


def verify_weakness_optimality(
    lang: Language,
    census_cap: int = DEFAULT_CENSUS_CAP,
    extra_tasks: Sequence[VTask] = (),
    max_rows: int = DEFAULT_REPORT_ROWS,
) -> OptimalityReport:
    """Sweep every census task with a nonempty model set.

    For each model h of each task, counts the census parents the task has
    and how many of them h generalises to, then checks that every
    weakness-maximal model attains the task's maximum parent count.
    ``extra_tasks`` adds rows for tasks of interest (e.g. fixtures) that are
    not themselves census members.
    """
    total_census = census_size(lang, census_cap)
    n = lang.size
    ext = lang.extension_masks()
    full = (1 << n) - 1
    reach = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        reach[mask] = reach[mask ^ low] | ext[low.bit_length() - 1]

    rows: list[OptimalityRow] = []
    rows_total = 0
    tasks_checked = 0
    violations: list[Violation] = []
    deviation_count = 0
    deviation_samples: list[OptimalityRow] = []
    rows_truncated = False

    def record(row: OptimalityRow, deviates: bool) -> None:
        nonlocal rows_total, deviation_count, rows_truncated
        rows_total += 1
        if len(rows) < max_rows:
            rows.append(row)
        else:
            rows_truncated = True
        if deviates:
            deviation_count += 1
            if len(deviation_samples) < max_rows:
                deviation_samples.append(row)

    def sweep_task(s_mask: int, d_mask: int, model_idx: list[int]) -> None:
        nonlocal tasks_checked
        tasks_checked += 1
        d_pc = d_mask.bit_count()
        counts = [0] * len(model_idx)
        total_parents = 0
        comp = full & ~s_mask
        t = comp
        while t:
            big = s_mask | t
            if big != full:
                zt = reach[big]
                total_parents += 1 << (zt.bit_count() - d_pc)
                for pos, h in enumerate(model_idx):
                    if zt & ext[h] & d_mask == d_mask:
                        counts[pos] += 1
            t = (t - 1) & comp
        best = max(counts)
        weaknesses = [ext[h].bit_count() for h in model_idx]
        w_max = max(weaknesses)
        situations = tuple(
            lang.statements[i].members for i in range(n) if s_mask >> i & 1
        )
        decisions = tuple(
            lang.statements[i].members for i in range(n) if d_mask >> i & 1
        )
        outside_pc = n - reach[s_mask].bit_count() if s_mask else n
        for pos, h in enumerate(model_idx):
            a = (ext[h] & full & ~reach[s_mask]).bit_count()
            formula = Fraction(1 << a, 1 << outside_pc)
            empirical = (
                Fraction(counts[pos], total_parents) if total_parents else None
            )
            deviates = empirical is not None and empirical != formula
            record(
                OptimalityRow(
                    situations,
                    decisions,
                    lang.statements[h].members,
                    weaknesses[pos],
                    counts[pos],
                    total_parents,
                    formula,
                    empirical,
                ),
                deviates,
            )
        for pos, h in enumerate(model_idx):
            if weaknesses[pos] == w_max and counts[pos] < best:
                best_pos = counts.index(best)
                violations.append(
                    Violation(
                        situations,
                        decisions,
                        lang.statements[h].members,
                        counts[pos],
                        lang.statements[model_idx[best_pos]].members,
                        best,
                    )
                )

    for s_mask in range(1, full):
        zs = reach[s_mask]
        groups: dict[int, list[int]] = {}
        for h in range(n):
            d = zs & ext[h]
            if d:
                groups.setdefault(d, []).append(h)
        for d_mask, model_idx in groups.items():
            sweep_task(s_mask, d_mask, model_idx)

    for task in extra_tasks:
        _sweep_extra_task(lang, task, reach, ext, full, record)

    return OptimalityReport(
        census_size=total_census,
        tasks_checked=tasks_checked,
        rows_total=rows_total,
        rows=rows,
        rows_truncated=rows_truncated,
        violations=violations,
        deviation_count=deviation_count,
        deviation_samples=deviation_samples,
    )


def _sweep_extra_task(lang, task, reach, ext, full, record) -> None:
    # Situations outside the materialized universe have no census parents
    # (census situation sets are drawn from the universe), so such tasks get
    # zero-count rows; the formula side is still exact.
    in_universe = all(s in lang for s in task.situations)
    s_mask = 0
    if in_universe:
        for s in task.situations:
            s_mask |= 1 << lang.position(s)
    d_mask = 0
    for d in task.decisions:
        d_mask |= 1 << lang.position(d)
    d_pc = d_mask.bit_count()
    outside = full & ~_set_mask(lang, task.reachable)
    for h in task.models():
        hi = lang.position(h)
        count = 0
        total_parents = 0
        if in_universe:
            comp = full & ~s_mask
            t = comp
            while t:
                big = s_mask | t
                if big != full:
                    zt = reach[big]
                    total_parents += 1 << (zt.bit_count() - d_pc)
                    if zt & ext[hi] & d_mask == d_mask:
                        count += 1
                t = (t - 1) & comp
        a = (ext[hi] & outside).bit_count()
        formula = Fraction(1 << a, 1 << outside.bit_count())
        empirical = Fraction(count, total_parents) if total_parents else None
        record(
            OptimalityRow(
                tuple(s.members for s in task.situations),
                tuple(d.members for d in task.decisions),
                h.members,
                lang.weakness(h),
                count,
                total_parents,
                formula,
                empirical,
            ),
            empirical is not None and empirical != formula,
        )


def _set_mask(lang: Language, stmts: Iterable[Statement]) -> int:
    m = 0
    for s in stmts:
        m |= 1 << lang.position(s)
    return m


# ---------------------------------------------------------------------------
# prior report


@dataclass(frozen=True)
class PriorRow:
    anchor: tuple[int, ...]
    family: tuple[tuple[int, ...], ...]
    total: Fraction


def prior_report(lang: Language, cap: int = PRIOR_REPORT_CAP) -> list[PriorRow]:
    """One exclusive-family sum per statement; totals recorded, never
    asserted equal to 1."""
    from .induction import exclusive_family_sum

    if lang.size > cap:
        raise CapacityError("prior report language size", cap)
    rows = []
    for s in lang.statements:
        rep = exclusive_family_sum(lang, s)
        rows.append(
            PriorRow(
                s.members,
                tuple(m.members for m in rep.family.members),
                rep.total,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# fixtures


def tiny_language() -> Language:
    """Two states, two predicates each true at exactly one state; the
    derived language is {∅, {p}, {q}}."""
    space = StateSpace.named(("s1", "s2"))
    vocab = Vocabulary(
        (
            Predicate("p", StateSet.of([0], 2)),
            Predicate("q", StateSet.of([1], 2)),
        )
    )
    return Language.derive(space, vocab)


_DIVERGENCE_STATES = ("s1", "s2", "s3", "s4", "s5", "s6")
_DIVERGENCE_NAMES = ("a", "b", "c", "d", "e", "f", "g", "h", "j", "k", "z")
# The six maximal statements, by predicate name; predicate truth tables are
# read off them (predicate true at state i iff it appears in statement i).
_DIVERGENCE_MAXIMAL = (
    ("a", "b", "c", "d", "j", "k", "z"),
    ("e", "b", "c", "d", "k"),
    ("a", "f", "c", "d", "j"),
    ("e", "b", "g", "d", "j", "k", "z"),
    ("a", "f", "c", "h", "j", "k"),
    ("e", "f", "g", "h", "j", "k"),
)


@dataclass(frozen=True)
class DivergenceFixture:
    """Explicit-universe language and task on which the two proxies part
    ways: weakness picks the two-predicate model, description length picks
    the singleton."""

    lang: Language
    task: VTask
    models: tuple[Statement, ...]
    weakness_winner: Statement
    mdl_winner: Statement
    weakness_values: dict[Statement, int]


def divergence_fixture() -> DivergenceFixture:
    """Build the fixture and self-check every expected value; any mismatch
    raises FixtureError (build-breaking)."""
    n_states = len(_DIVERGENCE_STATES)
    space = StateSpace.named(_DIVERGENCE_STATES)
    truth = {name: 0 for name in _DIVERGENCE_NAMES}
    for state_idx, stmt in enumerate(_DIVERGENCE_MAXIMAL):
        for name in stmt:
            truth[name] |= 1 << state_idx
    vocab = Vocabulary(
        tuple(
            Predicate(name, StateSet(truth[name], n_states))
            for name in _DIVERGENCE_NAMES
        )
    )
    idx = {name: i for i, name in enumerate(_DIVERGENCE_NAMES)}

    def stmt(names: Iterable[str]) -> Statement:
        return Statement.of(idx[n] for n in names)

    universe = [stmt(names) for names in _DIVERGENCE_MAXIMAL]
    singleton = stmt(["z"])
    pair = stmt(["j", "k"])
    universe += [singleton, pair]
    lang = Language.explicit(space, vocab, universe)

    task = make_task(
        lang,
        situations=[stmt(["a", "b"]), stmt(["e", "b"])],
        decisions=[universe[0], universe[3]],
    )

    expected_models = tuple(sorted([singleton, pair]))
    got_models = task.models()
    if got_models != expected_models:
        raise FixtureError(
            f"model set {got_models} != expected {expected_models}"
        )
    w_winner = induce(task, WEAKNESS)
    l_winner = induce(task, INVERSE_DESCRIPTION_LENGTH)
    if w_winner != pair:
        raise FixtureError(f"weakness proxy selected {w_winner}, expected {pair}")
    if l_winner != singleton:
        raise FixtureError(
            f"description-length proxy selected {l_winner}, expected {singleton}"
        )
    weak = {pair: lang.weakness(pair), singleton: lang.weakness(singleton)}
    if weak[pair] != 5 or weak[singleton] != 3:
        raise FixtureError(f"weakness values {weak} != expected ({pair}:5, {singleton}:3)")
    return DivergenceFixture(
        lang=lang,
        task=task,
        models=expected_models,
        weakness_winner=pair,
        mdl_winner=singleton,
        weakness_values=weak,
    )


# ---------------------------------------------------------------------------
# derived-language enumeration and sampling for theorem sweeps


def all_derived_languages(
    max_states: int, max_vocab: int
) -> Iterator[Language]:
    """Every derived language with between 1 and max_states states and up to
    max_vocab predicates, predicates drawn without repetition from all
    possible truth tables."""
    for n_states in range(1, max_states + 1):
        space = StateSpace.named(tuple(f"s{i}" for i in range(n_states)))
        tables = range(1 << n_states)
        for k in range(0, max_vocab + 1):
            for combo in itertools.combinations(tables, k):
                vocab = Vocabulary(
                    tuple(
                        Predicate(f"p{i}", StateSet(bits, n_states))
                        for i, bits in enumerate(combo)
                    )
                )
                yield Language.derive(space, vocab)


def sample_derived_languages(
    n_states: int,
    count: int,
    seed: int | str,
    max_vocab: int = 4,
    census_cap: int = DEFAULT_CENSUS_CAP,
    max_attempts: int | None = None,
) -> list[Language]:
    """Seeded sample of derived languages over ``n_states`` states whose
    census fits ``census_cap``; oversized draws are skipped."""
    rng = random.Random(f"weaklab-language-sample|{seed}|{n_states}")
    attempts_left = max_attempts if max_attempts is not None else count * 200
    space = StateSpace.named(tuple(f"s{i}" for i in range(n_states)))
    out: list[Language] = []
    while len(out) < count:
        if attempts_left <= 0:
            raise CapacityError("language sampling attempts", len(out))
        attempts_left -= 1
        k = rng.randint(1, max_vocab)
        combo = sorted(rng.sample(range(1 << n_states), k))
        vocab = Vocabulary(
            tuple(
                Predicate(f"p{i}", StateSet(bits, n_states))
                for i, bits in enumerate(combo)
            )
        )
        lang = Language.derive(space, vocab)
        try:
            census_size(lang, census_cap)
        except CapacityError:
            continue
        out.append(lang)
    return out
