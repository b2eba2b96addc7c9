"""Tasks over a statement lattice: situations, decisions, models.

A task pairs a set of situations with the subset of their reachable
decisions that count as correct.  A model is a statement whose extension
picks out exactly the correct decisions among the reachable ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import (
    DegenerateTaskError,
    IncompatibleLanguageError,
    InvalidTaskError,
    MembershipError,
    NoDecisionError,
    TaskPreconditionError,
)
from .lattice import Language, Statement


@dataclass(frozen=True)
class Decision:
    """A decision produced for a situation, flagged against a task's
    correct set."""

    statement: Statement
    correct: bool


@dataclass(eq=False)
class VTask:
    """Situations S, correct decisions D, and (lazily) the model set M.

    Situations must be statements of the language's vocabulary; in an
    explicit-universe language they need not be members of the universe
    itself (reachable decisions are still scanned from the universe).
    """

    lang: Language
    situations: tuple[Statement, ...]
    decisions: tuple[Statement, ...]
    reachable: tuple[Statement, ...]
    _models: tuple[Statement, ...] | None = field(default=None, repr=False)

    @property
    def decision_set(self) -> frozenset[Statement]:
        return frozenset(self.decisions)

    def models(self) -> tuple[Statement, ...]:
        """All statements h of the language with Z_S ∩ Z_h = D, in global
        order; computed once and cached."""
        if self._models is None:
            reach = [(set(z.members), z in self.decision_set) for z in self.reachable]
            self._models = tuple(
                h for h in self.lang.statements if _separates(set(h.members), reach)
            )
        return self._models

    def is_model(self, h: Statement) -> bool:
        self.lang.position(h)
        reach = [(set(z.members), z in self.decision_set) for z in self.reachable]
        return _separates(set(h.members), reach)


def _separates(h_members: set[int], reach: list[tuple[set[int], bool]]) -> bool:
    # Z_h ∩ Z_S = D iff, among the reachable decisions, exactly the correct
    # ones contain h.  Linear in |Z_S| rather than in the language size.
    return all((h_members <= z) == correct for z, correct in reach)


def make_task(
    lang: Language,
    situations: Iterable[Statement],
    decisions: Iterable[Statement],
) -> VTask:
    """Validate and build a task; reachable decisions are cached, models are
    not computed eagerly.

    Situations must form a proper subset of the universe whenever they are
    all members of it; decisions must be reachable from the situations.
    """
    sit = tuple(sorted(set(situations)))
    dec = tuple(sorted(set(decisions)))
    if not sit:
        raise DegenerateTaskError("a task needs at least one situation")
    if not dec:
        raise DegenerateTaskError("a task needs at least one correct decision")
    for s in sit:
        if not lang.is_statement(s):
            raise MembershipError(
                f"situation {s!r} is not a statement of the language's vocabulary"
            )
    if all(s in lang for s in sit) and len(sit) == lang.size:
        raise InvalidTaskError("situations must be a proper subset of the universe")
    reachable = lang.extension_of_set(sit)
    reach = set(reachable)
    bad = [d for d in dec if d not in reach]
    if bad:
        listed = ", ".join(repr(d) for d in bad)
        raise InvalidTaskError(
            f"decisions not reachable from the situations: {listed}"
        )
    return VTask(lang, sit, dec, reachable)


def is_model(task: VTask, h: Statement) -> bool:
    """True iff the extensions of the situations, intersected with the
    extension of h, give exactly the correct decisions."""
    return task.is_model(h)


def generalises(h: Statement, task: VTask) -> bool:
    """A statement generalises to a task iff it is one of its models."""
    return task.is_model(h)


def models(task: VTask) -> tuple[Statement, ...]:
    return task.models()


def attempt_task(task: VTask, h: Statement, s: Statement) -> Decision:
    """Decide situation ``s`` under hypothesis ``h``.

    Returns the first statement of Z_s ∩ Z_h in global order, flagged
    correct iff it is one of the task's correct decisions.  If h is a model
    the flag is guaranteed correct.
    """
    if s not in task.situations:
        raise TaskPreconditionError(f"{s!r} is not a situation of this task")
    task.lang.position(h)
    z_s = set(task.lang.supersets(s))
    z_h = task.lang.extension(h)
    joint = [z for z in z_h if z in z_s]
    if not joint:
        raise NoDecisionError(
            f"hypothesis {h!r} admits no decision for situation {s!r}"
        )
    chosen = min(joint)
    return Decision(chosen, chosen in task.decision_set)


def is_child(a: VTask, w: VTask) -> bool:
    """Task containment: situations properly contained, decisions contained."""
    if not a.lang.same_as(w.lang):
        raise IncompatibleLanguageError("tasks built over different languages")
    sa, sw = set(a.situations), set(w.situations)
    return sa < sw and a.decision_set <= w.decision_set

