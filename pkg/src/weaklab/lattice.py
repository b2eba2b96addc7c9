"""Finite statement lattices: states, predicates, vocabularies, languages.

A statement is a satisfiable conjunction of predicates, identified by the
sorted tuple of its predicate indices.  A language is a finite universe of
statements, either derived (every satisfiable subset of the vocabulary) or
explicit (a universe listed verbatim).  All counting is exact.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Iterator

from .errors import CapacityError, MembershipError, VocabularyError

DEFAULT_LANGUAGE_CAP = 1_000_000

DERIVED = "derived"
EXPLICIT = "explicit"

WEAKNESS = "weakness"
INVERSE_DESCRIPTION_LENGTH = "inverse-description-length"
_PROXY_ALIASES = {
    "weakness": WEAKNESS,
    "mdl": INVERSE_DESCRIPTION_LENGTH,
    "inverse-description-length": INVERSE_DESCRIPTION_LENGTH,
}


def canonical_proxy_kind(kind: str) -> str:
    try:
        return _PROXY_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown proxy kind {kind!r}") from None


@total_ordering
class _Top:
    """Distinguished maximum of the proxy value order (value of 1/0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, _Top)

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return not isinstance(other, _Top)

    def __hash__(self):
        return hash("weaklab-proxy-top")

    def __repr__(self):
        return "TOP"


TOP = _Top()

ProxyValue = Fraction | _Top


@dataclass(frozen=True)
class StateSet:
    """Subset of a state space, packed as a bit vector (bit i = state i)."""

    bits: int
    size: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.size:
            raise ValueError(f"bits 0x{self.bits:x} out of range for size {self.size}")

    @classmethod
    def of(cls, indices: Iterable[int], size: int) -> "StateSet":
        bits = 0
        for i in indices:
            if not 0 <= i < size:
                raise IndexError(f"state index {i} out of range 0..{size - 1}")
            bits |= 1 << i
        return cls(bits, size)

    @classmethod
    def full(cls, size: int) -> "StateSet":
        return cls((1 << size) - 1, size)

    @classmethod
    def empty(cls, size: int) -> "StateSet":
        return cls(0, size)

    @property
    def cardinality(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if self.bits >> i & 1)

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.size and bool(self.bits >> index & 1)

    def __and__(self, other: "StateSet") -> "StateSet":
        self._check(other)
        return StateSet(self.bits & other.bits, self.size)

    def __or__(self, other: "StateSet") -> "StateSet":
        self._check(other)
        return StateSet(self.bits | other.bits, self.size)

    def complement(self) -> "StateSet":
        return StateSet(~self.bits & (1 << self.size) - 1, self.size)

    def issubset(self, other: "StateSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def _check(self, other: "StateSet") -> None:
        if self.size != other.size:
            raise ValueError("state sets over different spaces")

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self):
        return f"StateSet({{{','.join(map(str, self.indices()))}}}/{self.size})"


@dataclass(frozen=True)
class StateSpace:
    """Ordered finite set of states; bit-string spaces carry their width."""

    states: tuple[str, ...]
    width: int | None = None

    def __post_init__(self):
        if not self.states:
            # A zero-state space is representable (it makes every statement
            # unsatisfiable); constructors that forbid it check explicitly.
            pass
        if len(set(self.states)) != len(self.states):
            raise ValueError("state identifiers must be unique")
        if self.width is not None and len(self.states) != 1 << self.width:
            raise ValueError("bit-string space must have 2^width states")

    @classmethod
    def bits(cls, width: int) -> "StateSpace":
        if width < 0:
            raise ValueError("width must be >= 0")
        if width > 20:
            raise ValueError("bit-string spaces wider than 20 are not supported")
        return cls(tuple(format(i, f"0{width}b") for i in range(1 << width)), width)

    @classmethod
    def named(cls, names: Iterable[str]) -> "StateSpace":
        return cls(tuple(names))

    @property
    def size(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class Predicate:
    """Named truth-valued function over a state space, stored extensionally."""

    name: str
    truth: StateSet


@dataclass(frozen=True)
class Vocabulary:
    """Indexed finite list of predicates; names unique, indices dense from 0."""

    predicates: tuple[Predicate, ...]

    def __post_init__(self):
        names = [p.name for p in self.predicates]
        if len(set(names)) != len(names):
            raise VocabularyError("duplicate predicate name in vocabulary")
        sizes = {p.truth.size for p in self.predicates}
        if len(sizes) > 1:
            raise VocabularyError("predicates defined over different state spaces")
        tables = [p.truth.bits for p in self.predicates]
        if len(set(tables)) != len(tables):
            warnings.warn(
                "vocabulary contains distinct predicates with identical truth "
                "tables; they are kept as distinct named members",
                stacklevel=3,
            )

    def __len__(self) -> int:
        return len(self.predicates)

    def __iter__(self) -> Iterator[Predicate]:
        return iter(self.predicates)

    def __getitem__(self, index: int) -> Predicate:
        return self.predicates[index]

    def index_of(self, name: str) -> int:
        for i, p in enumerate(self.predicates):
            if p.name == name:
                return i
        raise KeyError(f"no predicate named {name!r}")


@total_ordering
@dataclass(frozen=True)
class Statement:
    """Sorted duplicate-free set of predicate indices, read conjunctively.

    The order (cardinality, then index tuple) is the global deterministic
    tie-break used everywhere downstream.
    """

    members: tuple[int, ...]

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and duplicate-free")
        if self.members and self.members[0] < 0:
            raise ValueError("negative predicate index")

    @classmethod
    def of(cls, indices: Iterable[int] = ()) -> "Statement":
        return cls(tuple(sorted(set(indices))))

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.members), self.members)

    def __lt__(self, other: "Statement") -> bool:
        return self.sort_key < other.sort_key

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, index: int) -> bool:
        return index in self.members

    def issubset(self, other: "Statement") -> bool:
        return set(self.members) <= set(other.members)

    def union(self, other: "Statement") -> "Statement":
        return Statement.of(self.members + other.members)

    def __repr__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def description_length(s: Statement) -> int:
    """Number of member predicates of a statement."""
    return len(s.members)


@dataclass(eq=False)
class Language:
    """Finite universe of statements over a vocabulary.

    ``statements`` is always in the global order (size, then lexicographic on
    indices).  Derived languages contain exactly the satisfiable subsets of
    the vocabulary; explicit languages contain a listed universe.
    """

    space: StateSpace
    vocab: Vocabulary
    mode: str
    statements: tuple[Statement, ...]
    _index: dict[tuple[int, ...], int] = field(repr=False, default_factory=dict)
    _ext: list[int] | None = field(repr=False, default=None)

    def __post_init__(self):
        if not self._index:
            self._index = {s.members: i for i, s in enumerate(self.statements)}

    # -- construction ------------------------------------------------------

    @classmethod
    def derive(
        cls,
        space: StateSpace,
        vocab: Vocabulary,
        cap: int = DEFAULT_LANGUAGE_CAP,
    ) -> "Language":
        """Enumerate every satisfiable subset of the vocabulary.

        Subsets are generated in the global order.  Satisfiability is
        monotone downward, so each size level extends the previous one.
        Raises CapacityError as soon as more than ``cap`` statements exist.
        """
        if cap < 1:
            raise ValueError("cap must be >= 1")
        _check_vocab_space(space, vocab)
        statements: list[Statement] = []
        sat_bits: list[tuple[tuple[int, ...], int]] = []
        if space.size > 0:
            full = (1 << space.size) - 1
            level = [((), full)]
            while level:
                for members, bits in level:
                    if len(statements) >= cap:
                        raise CapacityError("derived language size", cap)
                    statements.append(Statement(members))
                nxt = []
                for members, bits in level:
                    lo = members[-1] + 1 if members else 0
                    for j in range(lo, len(vocab)):
                        b = bits & vocab[j].truth.bits
                        if b:
                            nxt.append((members + (j,), b))
                level = nxt
        return cls(space, vocab, DERIVED, tuple(statements))

    @classmethod
    def explicit(
        cls,
        space: StateSpace,
        vocab: Vocabulary,
        statements: Iterable[Statement],
    ) -> "Language":
        """Build a language from a verbatim statement universe."""
        _check_vocab_space(space, vocab)
        seen = set()
        listed = []
        for s in statements:
            if s.members in seen:
                raise ValueError(f"duplicate statement {s!r} in explicit universe")
            seen.add(s.members)
            listed.append(s)
        lang = cls(space, vocab, EXPLICIT, tuple(sorted(listed)))
        for s in lang.statements:
            if not lang.sat_set(s):
                raise ValueError(f"explicit statement {s!r} is unsatisfiable")
        return lang

    # -- membership --------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.statements)

    def __contains__(self, s: Statement) -> bool:
        return s.members in self._index

    def position(self, s: Statement) -> int:
        try:
            return self._index[s.members]
        except KeyError:
            raise MembershipError(f"statement {s!r} is not in the language") from None

    def require_member(self, s: Statement) -> Statement:
        self.position(s)
        return s

    # -- semantics ---------------------------------------------------------

    def sat_set(self, s: Statement) -> StateSet:
        """States satisfying every member predicate; all states for the
        empty statement."""
        bits = (1 << self.space.size) - 1
        for i in s.members:
            if not 0 <= i < len(self.vocab):
                raise IndexError(f"predicate index {i} out of range")
            bits &= self.vocab[i].truth.bits
        return StateSet(bits, self.space.size)

    def is_statement(self, s: Statement) -> bool:
        """True iff ``s`` indexes into the vocabulary and is satisfiable."""
        if s.members and s.members[-1] >= len(self.vocab):
            return False
        return bool(self.sat_set(s))

    # -- extensions --------------------------------------------------------

    def _ext_masks(self) -> list[int]:
        # ext[i] = bitmask over statement positions of supersets of statement i
        if self._ext is None:
            member_sets = [frozenset(s.members) for s in self.statements]
            ext = []
            for i, si in enumerate(member_sets):
                m = 0
                for j, sj in enumerate(member_sets):
                    if si <= sj:
                        m |= 1 << j
                ext.append(m)
            self._ext = ext
        return self._ext

    def extension_masks(self) -> list[int]:
        """Per statement position i, the bitmask (over positions) of the
        members containing statement i.  Shared cache; do not mutate."""
        return self._ext_masks()

    def supersets(self, s: Statement) -> tuple[Statement, ...]:
        """Members of the universe containing ``s``; ``s`` need not be a
        member itself (situations of explicit-universe tasks are not).

        Linear scan; the quadratic superset matrix is only built by callers
        that need all of it (see extension_masks).
        """
        if not self.is_statement(s):
            raise MembershipError(
                f"{s!r} is not a statement of this language's vocabulary"
            )
        if self._ext is not None and s in self:
            mask = self._ext[self.position(s)]
            return self._statements_of_mask(mask)
        mem = set(s.members)
        return tuple(t for t in self.statements if mem <= set(t.members))

    def extension(self, s: Statement) -> tuple[Statement, ...]:
        """All members containing the member statement ``s`` (itself included)."""
        self.position(s)
        return self.supersets(s)

    def extension_of_set(self, stmts: Iterable[Statement]) -> tuple[Statement, ...]:
        """Union of the extensions of ``stmts``, in global order."""
        out: set[Statement] = set()
        for s in stmts:
            out.update(self.supersets(s))
        return tuple(sorted(out))

    def _statements_of_mask(self, mask: int) -> tuple[Statement, ...]:
        return tuple(s for i, s in enumerate(self.statements) if mask >> i & 1)

    # -- proxies -----------------------------------------------------------

    def weakness(self, s: Statement) -> int:
        """Cardinality of the extension of a member statement (exact)."""
        self.position(s)
        return len(self.supersets(s))

    def proxy_value(self, kind: str, s: Statement) -> ProxyValue:
        """Totally ordered proxy value of a member statement.

        weakness: extension cardinality.  inverse-description-length: 1/|s|,
        with the empty statement mapped to the distinguished top element.
        """
        kind = canonical_proxy_kind(kind)
        self.position(s)
        if kind == WEAKNESS:
            return Fraction(self.weakness(s))
        if len(s) == 0:
            return TOP
        return Fraction(1, len(s))

    def format_statement(self, s: Statement) -> str:
        return "{" + ",".join(self.vocab[i].name for i in s.members) + "}"

    def same_as(self, other: "Language") -> bool:
        """Structural identity, ignoring memoized caches."""
        return (
            self is other
            or (
                self.space == other.space
                and self.vocab == other.vocab
                and self.mode == other.mode
                and self.statements == other.statements
            )
        )


def _check_vocab_space(space: StateSpace, vocab: Vocabulary) -> None:
    for p in vocab:
        if p.truth.size != space.size:
            raise VocabularyError(
                f"predicate {p.name!r} has truth table over {p.truth.size} "
                f"states, space has {space.size}"
            )


def enumerate_language(
    space: StateSpace, vocab: Vocabulary, cap: int = DEFAULT_LANGUAGE_CAP
) -> Language:
    """Functional alias for Language.derive."""
    return Language.derive(space, vocab, cap)
