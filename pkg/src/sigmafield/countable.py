"""Countably infinite sample spaces via finitely described presentations.

A presentation fixes finitely many atoms over an index universe
{first_index, first_index+1, ...}. Each atom is either finite (explicit
member indices) or infinite (a membership test plus a rank inside the atom's
own enumeration, starting at 1). An atom's mass is split uniformly when the
atom is finite and dyadically as mass / 2^rank when it is infinite, so every
query below is exact and lazy; nothing ever tries to enumerate an infinite
set.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Callable, Iterable, Union

from .atoms import AtomPartition
from .core import (
    ONE,
    ZERO,
    FiniteSpace,
    SubsetMask,
    ValidationReport,
    Violation,
    as_rational,
)
from .errors import IndexerInconsistencyError, PresentationError, TailUndefinedError
from .extension import DofReport, dof_from_sizes
from .field import AtomMasses


@dataclass(frozen=True)
class FiniteAtom:
    """Block with explicitly listed member indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        cleaned = tuple(sorted(set(int(i) for i in self.indices)))
        if not cleaned:
            raise PresentationError("a finite atom needs at least one index")
        object.__setattr__(self, "indices", cleaned)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.indices)

    def is_member(self, n: int) -> bool:
        return n in self._members

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def description(self) -> str:
        return "indices {" + ", ".join(str(i) for i in self.indices) + "}"


@dataclass(frozen=True)
class ArithmeticAtom:
    """Infinite block: all indices >= first_index congruent to `residue`
    modulo `modulus`, minus finitely many excluded indices.

    The rank of a member is its position in that enumeration (1, 2, ...),
    which fixes the dyadic mass split. Exclusions exist so explicit finite
    atoms can carve indices out of an otherwise covering progression.
    """

    residue: int
    modulus: int
    first_index: int = 0
    exclude: tuple[int, ...] = ()

    def __post_init__(self):
        if self.modulus < 1:
            raise PresentationError(f"modulus must be at least 1, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)
        cleaned = tuple(sorted(set(int(i) for i in self.exclude)))
        for n in cleaned:
            if n < self.first_index or n % self.modulus != self.residue:
                raise PresentationError(
                    f"excluded index {n} is not a member of the progression "
                    f"{self.residue} mod {self.modulus}"
                )
        object.__setattr__(self, "exclude", cleaned)

    @cached_property
    def _start(self) -> int:
        # smallest n >= first_index with n % modulus == residue
        offset = (self.residue - self.first_index) % self.modulus
        return self.first_index + offset

    def is_member(self, n: int) -> bool:
        return (
            n >= self.first_index
            and n % self.modulus == self.residue
            and n not in self.exclude
        )

    def rank_of(self, n: int) -> int:
        """Position of member n in the atom's increasing enumeration."""
        base = (n - self._start) // self.modulus + 1
        return base - bisect_left(self.exclude, n)

    @property
    def description(self) -> str:
        text = f"indices congruent to {self.residue} mod {self.modulus}, from {self.first_index}"
        if self.exclude:
            text += ", excluding {" + ", ".join(str(i) for i in self.exclude) + "}"
        return text


@dataclass(frozen=True)
class CustomInfiniteAtom:
    """Infinite block described by callables.

    Membership is checked on every query, but pairwise disjointness and
    coverage of the universe cannot be validated statically; that contract
    stays with the caller. `rank` must be a bijection onto 1, 2, ... on the
    members it is queried with.
    """

    membership: Callable[[int], bool]
    rank: Callable[[int], int]
    description: str = "custom infinite atom"

    def is_member(self, n: int) -> bool:
        return bool(self.membership(n))

    def rank_of(self, n: int) -> int:
        return self.rank(n)


AtomShape = Union[FiniteAtom, ArithmeticAtom, CustomInfiniteAtom]


def is_infinite_shape(shape: AtomShape) -> bool:
    return not isinstance(shape, FiniteAtom)


@dataclass(frozen=True)
class CountablePresentation:
    """Finitely many atoms with masses, presenting a p.m.f. on a countable space.

    `label_of` maps an element index to its display label (str by default);
    `atom_indexer`, when given, overrides the descriptor scan that locates
    an element's atom, and is cross-checked against the descriptors on every
    evaluation.
    """

    atoms: tuple[AtomShape, ...]
    masses: tuple[Fraction, ...]
    first_index: int = 0
    label_of: Callable[[int], str] = field(default=str)
    atom_indexer: Callable[[int], int] | None = None

    def __post_init__(self):
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise PresentationError("a presentation needs at least one atom")
        masses = tuple(as_rational(m) for m in self.masses)
        object.__setattr__(self, "masses", masses)
        if len(masses) != len(self.atoms):
            raise PresentationError(
                f"expected {len(self.atoms)} masses (one per atom), got {len(masses)}"
            )
        for shape in self.atoms:
            if isinstance(shape, ArithmeticAtom) and shape.first_index != self.first_index:
                raise PresentationError(
                    f"arithmetic atom starts at {shape.first_index} but the "
                    f"presentation universe starts at {self.first_index}"
                )
            if isinstance(shape, FiniteAtom) and shape.indices[0] < self.first_index:
                raise PresentationError(
                    f"finite atom contains index {shape.indices[0]} below the "
                    f"universe start {self.first_index}"
                )

    def index_of_atom(self, n: int) -> int:
        """Atom index of element n, via the indexer or a descriptor scan."""
        if n < self.first_index:
            raise IndexerInconsistencyError(
                f"element index {n} is below the universe start {self.first_index}"
            )
        if self.atom_indexer is not None:
            i = self.atom_indexer(n)
            if not isinstance(i, int) or not 0 <= i < len(self.atoms):
                raise IndexerInconsistencyError(
                    f"atom indexer returned {i!r} for element {n}; expected an "
                    f"atom index below {len(self.atoms)}"
                )
            return i
        for i, shape in enumerate(self.atoms):
            if shape.is_member(n):
                return i
        raise IndexerInconsistencyError(f"element index {n} belongs to no atom")


def lazy_pmf_eval(presentation: CountablePresentation, element_index: int) -> Fraction:
    """Exact mass of one element: uniform share on a finite atom, dyadic
    share mass / 2^rank on an infinite one."""
    i = presentation.index_of_atom(element_index)
    shape = presentation.atoms[i]
    if not shape.is_member(element_index):
        raise IndexerInconsistencyError(
            f"atom indexer maps element {element_index} to atom {i}, "
            f"which does not contain it"
        )
    mass = presentation.masses[i]
    if isinstance(shape, FiniteAtom):
        return mass / shape.size
    rank = shape.rank_of(element_index)
    if not isinstance(rank, int) or rank < 1:
        raise IndexerInconsistencyError(
            f"rank of element {element_index} in atom {i} is {rank!r}; "
            f"ranks must be integers starting at 1"
        )
    return mass / (1 << rank)


def _shape_at(presentation: CountablePresentation, atom_index: int) -> AtomShape:
    if not 0 <= atom_index < len(presentation.atoms):
        raise ValueError(f"no atom with index {atom_index}")
    return presentation.atoms[atom_index]


def partial_sum(presentation: CountablePresentation, atom_index: int, count: int) -> Fraction:
    """Mass of the first `count` members in the atom's enumeration.

    For an infinite atom this is mass * (1 - 2^-count); for a finite one it
    saturates at the full atom mass once count reaches the atom size.
    """
    shape = _shape_at(presentation, atom_index)
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    mass = presentation.masses[atom_index]
    if isinstance(shape, FiniteAtom):
        return mass * Fraction(min(count, shape.size), shape.size)
    return mass * (ONE - Fraction(1, 1 << count))


def tail_bound(presentation: CountablePresentation, atom_index: int, count: int) -> Fraction:
    """Mass beyond the first `count` members of an infinite atom: mass * 2^-count."""
    shape = _shape_at(presentation, atom_index)
    if isinstance(shape, FiniteAtom):
        raise TailUndefinedError("tail undefined for finite atom")
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    return presentation.masses[atom_index] * Fraction(1, 1 << count)


def measure_of_presented_set(
    presentation: CountablePresentation, atom_indices: Iterable[int]
) -> Fraction:
    """Mass of a union of atoms, given by their indices."""
    chosen = sorted(set(atom_indices))
    for i in chosen:
        if not 0 <= i < len(presentation.atoms):
            raise ValueError(f"no atom with index {i}")
    return sum((presentation.masses[i] for i in chosen), ZERO)


def presentation_dof(presentation: CountablePresentation) -> DofReport:
    """Two-count degrees of freedom; infinite atoms yield the None marker."""
    sizes = [
        shape.size if isinstance(shape, FiniteAtom) else None
        for shape in presentation.atoms
    ]
    return dof_from_sizes(sizes, presentation.masses)


def validate_presentation(presentation: CountablePresentation) -> ValidationReport:
    """Static checks: mass axioms, pairwise disjointness, universe coverage.

    Custom infinite atoms cannot be inspected, so overlap and coverage
    involving them go unchecked here (membership is still verified on every
    evaluation).
    """
    violations = []
    for i, mass in enumerate(presentation.masses):
        if mass < 0:
            violations.append(Violation("negative-mass", f"atom {i} has negative mass {mass}"))
        elif mass > 1:
            violations.append(Violation("mass-range", f"atom {i} has mass {mass} > 1"))
    total = sum(presentation.masses, ZERO)
    if total != 1:
        violations.append(Violation("total-mass", f"atom masses total {total}, expected 1"))

    finite = [(i, s) for i, s in enumerate(presentation.atoms) if isinstance(s, FiniteAtom)]
    arithmetic = [
        (i, s) for i, s in enumerate(presentation.atoms) if isinstance(s, ArithmeticAtom)
    ]
    has_custom = any(isinstance(s, CustomInfiniteAtom) for s in presentation.atoms)

    for pos, (i, a) in enumerate(finite):
        for j, b in finite[pos + 1 :]:
            shared = a._members & b._members
            if shared:
                violations.append(
                    Violation(
                        "overlap",
                        f"atoms {i} and {j} share index {min(shared)}",
                    )
                )
    for pos, (i, a) in enumerate(arithmetic):
        for j, b in arithmetic[pos + 1 :]:
            # two progressions intersect in a full progression iff the
            # residues agree modulo gcd of the moduli
            if (a.residue - b.residue) % gcd(a.modulus, b.modulus) == 0:
                violations.append(
                    Violation(
                        "overlap",
                        f"atoms {i} and {j} share infinitely many indices "
                        f"({a.residue} mod {a.modulus} meets {b.residue} mod {b.modulus})",
                    )
                )
    for i, f_atom in finite:
        for j, a_atom in arithmetic:
            hits = [n for n in f_atom.indices if a_atom.is_member(n)]
            if hits:
                violations.append(
                    Violation(
                        "overlap",
                        f"atom {j} also contains index {hits[0]} of finite atom {i} "
                        f"(add it to the progression's exclusions)",
                    )
                )
    claimed = set()
    for _, f_atom in finite:
        claimed.update(f_atom.indices)
    for j, a_atom in arithmetic:
        for n in a_atom.exclude:
            if n not in claimed:
                violations.append(
                    Violation(
                        "coverage",
                        f"index {n} is excluded from atom {j} but belongs to no finite atom",
                    )
                )

    if arithmetic and not has_custom:
        period = lcm(*(a.modulus for _, a in arithmetic))
        for offset in range(period):
            candidate = presentation.first_index + offset
            if not any(candidate % a.modulus == a.residue for _, a in arithmetic):
                violations.append(
                    Violation(
                        "coverage",
                        f"indices congruent to {candidate % period} mod {period} "
                        f"are covered by no atom",
                    )
                )
    return ValidationReport(tuple(violations))


def require_valid_presentation(presentation: CountablePresentation) -> None:
    report = validate_presentation(presentation)
    if not report.ok:
        raise PresentationError(
            "invalid countable presentation: " + "; ".join(report.messages())
        )


def materialize(
    presentation: CountablePresentation,
) -> tuple[FiniteSpace, AtomPartition, AtomMasses]:
    """Flatten an all-finite presentation onto a concrete FiniteSpace.

    The canonical extension of the result agrees with `lazy_pmf_eval`
    pointwise; the test suite holds the two engines to that.
    """
    for i, shape in enumerate(presentation.atoms):
        if is_infinite_shape(shape):
            raise PresentationError(f"cannot materialize: atom {i} is infinite")
    all_indices = sorted(set().union(*(s.indices for s in presentation.atoms)))
    space = FiniteSpace(tuple(presentation.label_of(n) for n in all_indices))
    position = {n: k for k, n in enumerate(all_indices)}
    blocks = [
        SubsetMask.from_indices(space, (position[n] for n in shape.indices))
        for shape in presentation.atoms
    ]
    partition = AtomPartition.from_blocks(space, blocks)
    mass_by_bits = {block.bits: mass for block, mass in zip(blocks, presentation.masses)}
    reordered = tuple(mass_by_bits[b.bits] for b in partition.atoms)
    return space, partition, AtomMasses(partition, reordered)


def geometric_presentation() -> CountablePresentation:
    """The whole universe {1, 2, 3, ...} as a single full-mass atom with
    identity ranks, so element n carries mass 2^-n."""
    atom = ArithmeticAtom(residue=0, modulus=1, first_index=1)
    return CountablePresentation(atoms=(atom,), masses=(ONE,), first_index=1)
