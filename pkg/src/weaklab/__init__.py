"""weaklab: exact induction over finite statement lattices.

Core objects: StateSpace, Predicate, Vocabulary, Statement, Language
(lattice); VTask and the child/parent relation (tasks); proxy-driven
induction and exact probabilities (induction); brute-force verification
(oracle); the binary-arithmetic experiment harness (arith); and a small
task-definition language (specdsl).
"""

from .errors import (
    CapacityError,
    DegenerateTaskError,
    FixtureError,
    IncompatibleLanguageError,
    InvalidTaskError,
    MembershipError,
    NoDecisionError,
    NoModelError,
    SearchFailureError,
    TaskPreconditionError,
    VocabularyError,
    WeaklabError,
)
from .induction import (
    ExclusiveFamily,
    FamilySumReport,
    exclusive_family_sum,
    generalisation_probability,
    induce,
    mutually_exclusive,
    prior,
)
from .lattice import (
    EXPLICIT,
    DERIVED,
    INVERSE_DESCRIPTION_LENGTH,
    TOP,
    WEAKNESS,
    Language,
    Predicate,
    StateSet,
    StateSpace,
    Statement,
    Vocabulary,
    description_length,
    enumerate_language,
)
from .tasks import Decision, VTask, attempt_task, generalises, is_child, is_model, make_task, models

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DegenerateTaskError",
    "Decision",
    "DERIVED",
    "EXPLICIT",
    "ExclusiveFamily",
    "FamilySumReport",
    "FixtureError",
    "IncompatibleLanguageError",
    "INVERSE_DESCRIPTION_LENGTH",
    "InvalidTaskError",
    "Language",
    "MembershipError",
    "NoDecisionError",
    "NoModelError",
    "Predicate",
    "SearchFailureError",
    "StateSet",
    "StateSpace",
    "Statement",
    "TaskPreconditionError",
    "TOP",
    "VTask",
    "Vocabulary",
    "VocabularyError",
    "WEAKNESS",
    "WeaklabError",
    "attempt_task",
    "description_length",
    "enumerate_language",
    "exclusive_family_sum",
    "generalisation_probability",
    "generalises",
    "induce",
    "is_child",
    "is_model",
    "make_task",
    "models",
    "mutually_exclusive",
    "prior",
    "__version__",
]
