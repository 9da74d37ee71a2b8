"""Exact foundations: rationals, finite sample spaces, subsets, measures, p.m.f.s.

Every probability in this package is a `fractions.Fraction`; nothing here or
in the modules built on top ever touches floating point. Subsets of a finite
space are bit vectors packed into a single int (bit i = element i), which
keeps the set algebra cheap and the orderings canonical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import SpaceMismatchError

# The exact rational type used for every probability value.
Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

#: Spaces beyond this size are refused by the finite engine; countably
#: infinite spaces go through `sigmafield.countable` presentations instead.
#: Rebind (sigmafield.core.MAX_SPACE_SIZE = ...) before constructing spaces
#: to raise or lower the cap.
MAX_SPACE_SIZE = 10_000

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def normalize_rational(numerator: int, denominator: int) -> Fraction:
    """Lowest-terms fraction with positive denominator.

    >>> normalize_rational(2, 4)
    Fraction(1, 2)
    >>> normalize_rational(3, -6)
    Fraction(-1, 2)
    """
    if denominator == 0:
        raise ZeroDivisionError("zero denominator")
    return Fraction(numerator, denominator)


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal: "a/b" or a plain integer "a".

    The denominator, when written, must be a positive integer; floating
    point literals are rejected on purpose.
    """
    match = _RATIONAL_RE.match(text.strip())
    if match is None:
        raise ValueError(f"not a rational literal: {text!r} (expected 'a' or 'a/b')")
    numerator = int(match.group(1))
    if match.group(2) is None:
        return Fraction(numerator)
    denominator = int(match.group(2))
    if denominator == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    """Render as "a/b", or just "a" when the denominator is 1."""
    return str(value)


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction, or rational literal string to a Fraction.

    Floats are refused: silently converting 0.1 to 3602879701896397/2**55
    would defeat the point of an exact library.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


@dataclass(frozen=True)
class FiniteSpace:
    """An ordered finite sample space; elements are addressed by index.

    Labels are arbitrary distinct non-empty strings. All subset and
    p.m.f. types below refer back to the space they were built on, and
    mixing spaces raises SpaceMismatchError.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.labels, tuple):
            object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("a sample space needs at least one element")
        if len(self.labels) > MAX_SPACE_SIZE:
            raise ValueError(
                f"space of {len(self.labels)} elements exceeds the cap of {MAX_SPACE_SIZE}"
            )
        seen = set()
        for label in self.labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"element labels must be non-empty strings, got {label!r}")
            if label in seen:
                raise ValueError(f"duplicate element label {label!r}")
            seen.add(label)

    @classmethod
    def of(cls, *labels: str) -> "FiniteSpace":
        return cls(tuple(labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_bits(self) -> int:
        return (1 << len(self.labels)) - 1

    @cached_property
    def _index(self) -> dict:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown element label {label!r}") from None


@dataclass(frozen=True)
class SubsetMask:
    """A subset of a finite space, stored as a bit vector (bit i = element i)."""

    space: FiniteSpace
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits <= self.space.full_bits:
            raise ValueError(
                f"bit vector {self.bits:#x} does not fit a space of {self.space.size} elements"
            )

    @classmethod
    def empty(cls, space: FiniteSpace) -> "SubsetMask":
        return cls(space, 0)

    @classmethod
    def full(cls, space: FiniteSpace) -> "SubsetMask":
        return cls(space, space.full_bits)

    @classmethod
    def from_indices(cls, space: FiniteSpace, indices: Iterable[int]) -> "SubsetMask":
        bits = 0
        for i in indices:
            if not 0 <= i < space.size:
                raise ValueError(f"element index {i} out of range for a space of {space.size}")
            bits |= 1 << i
        return cls(space, bits)

    @classmethod
    def from_labels(cls, space: FiniteSpace, labels: Iterable[str]) -> "SubsetMask":
        return cls.from_indices(space, (space.index_of(label) for label in labels))

    def _same_space(self, other: "SubsetMask") -> None:
        if self.space != other.space:
            raise SpaceMismatchError("set operands live on different sample spaces")

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_space(other)
        return SubsetMask(self.space, self.bits | other.bits)

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_space(other)
        return SubsetMask(self.space, self.bits & other.bits)

    def __sub__(self, other: "SubsetMask") -> "SubsetMask":
        self._same_space(other)
        return SubsetMask(self.space, self.bits & ~other.bits)

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.space, self.bits ^ self.space.full_bits)

    __invert__ = complement

    def issubset(self, other: "SubsetMask") -> bool:
        self._same_space(other)
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "SubsetMask") -> bool:
        self._same_space(other)
        return self.bits & other.bits == 0

    def has_index(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def has_label(self, label: str) -> bool:
        return self.has_index(self.space.index_of(label))

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == self.space.full_bits

    def __len__(self) -> int:
        return self.bits.bit_count()

    def least_index(self) -> int:
        """Index of the smallest member; used for canonical block ordering."""
        if self.bits == 0:
            raise ValueError("the empty set has no least element")
        return (self.bits & -self.bits).bit_length() - 1

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.space.size) if self.bits >> i & 1)

    def member_labels(self) -> tuple[str, ...]:
        return tuple(self.space.labels[i] for i in self.indices())

    def __str__(self) -> str:
        return "{" + ", ".join(self.member_labels()) + "}"


@dataclass(frozen=True)
class GeneratorFamily:
    """A finite list of subsets generating a sigma-field on `space`.

    Duplicates are tolerated (the engines cope); `normalized()` drops them.
    """

    space: FiniteSpace
    generators: tuple[SubsetMask, ...] = ()

    def __post_init__(self):
        if not isinstance(self.generators, tuple):
            object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.space != self.space:
                raise SpaceMismatchError("generator lives on a different sample space")

    @classmethod
    def from_labels(cls, space: FiniteSpace, sets: Iterable[Iterable[str]]) -> "GeneratorFamily":
        return cls(space, tuple(SubsetMask.from_labels(space, s) for s in sets))

    def normalized(self) -> "GeneratorFamily":
        seen = set()
        kept = []
        for g in self.generators:
            if g.bits not in seen:
                seen.add(g.bits)
                kept.append(g)
        return GeneratorFamily(self.space, tuple(kept))


@dataclass(frozen=True)
class MeasureAssignment:
    """Masses assigned to chosen sets of a space.

    Construction only checks structure, not the probability axioms:
    `verify_measure` exists to *report* axiom violations and could not do so
    if they were rejected here. `solve_atom_masses` is the strict consumer.
    """

    space: FiniteSpace
    entries: tuple[tuple[SubsetMask, Fraction], ...] = ()

    def __post_init__(self):
        normalized = []
        for entry in self.entries:
            event, mass = entry
            if event.space != self.space:
                raise SpaceMismatchError("assigned set lives on a different sample space")
            normalized.append((event, as_rational(mass)))
        object.__setattr__(self, "entries", tuple(normalized))

    @classmethod
    def from_labels(cls, space: FiniteSpace, pairs) -> "MeasureAssignment":
        """Build from (iterable-of-labels, rational-ish) pairs."""
        entries = tuple(
            (SubsetMask.from_labels(space, labels), as_rational(mass)) for labels, mass in pairs
        )
        return cls(space, entries)


@dataclass(frozen=True)
class Pmf:
    """One exact mass per element of a finite space.

    Like MeasureAssignment, construction is permissive: `pmf_validate`
    reports nonnegativity and total-mass violations instead of refusing to
    build the object carrying them.
    """

    space: FiniteSpace
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        masses = tuple(as_rational(m) for m in self.masses)
        if len(masses) != self.space.size:
            raise ValueError(
                f"expected {self.space.size} masses (one per element), got {len(masses)}"
            )
        object.__setattr__(self, "masses", masses)

    @classmethod
    def uniform(cls, space: FiniteSpace) -> "Pmf":
        share = Fraction(1, space.size)
        return cls(space, (share,) * space.size)

    @classmethod
    def point_mass(cls, space: FiniteSpace, label: str) -> "Pmf":
        hit = space.index_of(label)
        return cls(space, tuple(ONE if i == hit else ZERO for i in range(space.size)))

    def mass(self, index: int) -> Fraction:
        return self.masses[index]

    def mass_of_label(self, label: str) -> Fraction:
        return self.masses[self.space.index_of(label)]

    @property
    def total(self) -> Fraction:
        return sum(self.masses, ZERO)


@dataclass(frozen=True)
class Violation:
    """One diagnostic finding: a machine-readable kind plus a sentence."""

    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> tuple[str, ...]:
        return tuple(v.message for v in self.violations)


def pmf_validate(p: Pmf) -> ValidationReport:
    """Check the two p.m.f. conditions: nonnegativity and total mass one."""
    found = []
    for i, m in enumerate(p.masses):
        if m < 0:
            found.append(
                Violation("negative-mass", f"p({p.space.labels[i]}) = {m} is negative")
            )
    total = p.total
    if total != 1:
        found.append(Violation("total-mass", f"total mass is {total}, expected 1"))
    return ValidationReport(tuple(found))


def pmf_to_measure(p: Pmf, event: SubsetMask) -> Fraction:
    """Exact mass of `event` under `p`: the sum of p over its elements."""
    if p.space != event.space:
        raise SpaceMismatchError("p.m.f. and event live on different sample spaces")
    return sum((p.masses[i] for i in event.indices()), ZERO)
