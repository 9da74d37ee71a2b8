"""Field enumeration and exact recovery of atom masses.

A sigma-field with k atoms has exactly 2^k members (unions of atoms), so
enumeration is guarded. Masses assigned to measurable sets translate into
exact linear equations over the per-atom masses; a fraction-preserving
Gauss-Jordan elimination with a deterministic pivot order solves them and
names the defect precisely when it cannot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .atoms import AtomPartition, DEFAULT_CLOSURE_GUARD, _closed_family, _minimal_blocks
from .core import (
    ONE,
    ZERO,
    FiniteSpace,
    GeneratorFamily,
    MeasureAssignment,
    SubsetMask,
    ValidationReport,
    Violation,
    as_rational,
)
from .errors import (
    GuardExceededError,
    InconsistentMeasureError,
    NegativeAtomMassError,
    NonMeasurableSetError,
    SpaceMismatchError,
    UnderdeterminedMeasureError,
)

#: enumerate_field refuses more atoms than this unless told otherwise;
#: 2^20 sets is already a million SubsetMask objects.
DEFAULT_ATOM_BOUND = 20


@dataclass(frozen=True)
class EnumeratedField:
    """Every member of a finitely generated field, in a fixed order.

    The order is the binary-counter order over atom subsets: member j is
    the union of the atoms whose index bit is set in j. So sets[0] is the
    empty set and sets[-1] is the whole space.
    """

    space: FiniteSpace
    sets: tuple[SubsetMask, ...]
    atom_basis: AtomPartition

    def __post_init__(self):
        expected = 1 << len(self.atom_basis.atoms)
        if len(self.sets) != expected:
            raise ValueError(
                f"field enumeration is incomplete: {len(self.sets)} sets for "
                f"{len(self.atom_basis.atoms)} atoms (expected {expected})"
            )
        if not self.sets[0].is_empty or not self.sets[-1].is_full:
            raise ValueError("field enumeration is not in canonical order")


def enumerate_field(atoms: AtomPartition, max_atoms: int = DEFAULT_ATOM_BOUND) -> EnumeratedField:
    """All 2^k unions of the k atoms, in binary-counter order."""
    k = len(atoms.atoms)
    if k > max_atoms:
        raise GuardExceededError(
            f"field enumeration refused: {k} atoms exceed the bound of {max_atoms} "
            f"(2^{k} sets)"
        )
    atom_bits = [a.bits for a in atoms.atoms]
    sets = []
    for selector in range(1 << k):
        bits = 0
        for i in range(k):
            if selector >> i & 1:
                bits |= atom_bits[i]
        sets.append(SubsetMask(atoms.space, bits))
    return EnumeratedField(atoms.space, tuple(sets), atoms)


def closure_oracle(
    family: GeneratorFamily, guard: int = DEFAULT_CLOSURE_GUARD
) -> EnumeratedField:
    """Independent field enumeration: fixpoint closure under complement and
    pairwise union, with the atom basis recovered from the closed family.

    Produces the same canonical order as `enumerate_field`, so the two are
    directly comparable. Test oracle; quadratic in the family size.
    """
    space = family.space
    members = _closed_family(space, (g.bits for g in family.generators), guard)
    basis = AtomPartition.from_blocks(space, _minimal_blocks(space, members))

    def selector(bits: int) -> int:
        s = 0
        for i, atom in enumerate(basis.atoms):
            if atom.bits & bits == atom.bits:
                s |= 1 << i
        return s

    ordered = sorted(members, key=selector)
    return EnumeratedField(space, tuple(SubsetMask(space, b) for b in ordered), basis)


def is_measurable(candidate: SubsetMask, atoms: AtomPartition) -> bool:
    """True iff every atom lies entirely inside or outside `candidate`."""
    if candidate.space != atoms.space:
        raise SpaceMismatchError("candidate set lives on a different sample space")
    c = candidate.bits
    for atom in atoms.atoms:
        overlap = atom.bits & c
        if overlap and overlap != atom.bits:
            return False
    return True


@dataclass(frozen=True)
class AtomMasses:
    """Nonnegative masses on the blocks of a partition, totalling exactly 1."""

    partition: AtomPartition
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        masses = tuple(as_rational(m) for m in self.masses)
        object.__setattr__(self, "masses", masses)
        if len(masses) != len(self.partition.atoms):
            raise ValueError(
                f"expected {len(self.partition.atoms)} masses (one per atom), got {len(masses)}"
            )
        for block, mass in zip(self.partition.atoms, masses):
            if mass < 0:
                raise ValueError(f"atom masses must be nonnegative: {block} gets {mass}")
        total = sum(masses, ZERO)
        if total != 1:
            raise ValueError(f"atom masses total {total}, expected 1")

    def mass_of_block(self, i: int) -> Fraction:
        return self.masses[i]

    def measure_of(self, event: SubsetMask) -> Fraction:
        """Mass of a measurable set: the sum over the atoms inside it."""
        if not is_measurable(event, self.partition):
            raise NonMeasurableSetError(f"{event} is not a union of atoms")
        return sum(
            (m for block, m in zip(self.partition.atoms, self.masses) if block.issubset(event)),
            ZERO,
        )


class _ExactSystem:
    """Incrementally maintained reduced row echelon form over Fractions.

    Equations arrive one at a time. A new row is first reduced against the
    existing pivot rows (in ascending pivot-column order); its pivot is then
    the first nonzero column left, which is in turn eliminated from every
    older row. Rows therefore stay fully reduced and the whole process is
    deterministic in the insertion order.
    """

    def __init__(self, width: int):
        self.width = width
        self._rows: dict[int, tuple[list[Fraction], Fraction]] = {}

    def add(self, coefficients: Sequence[Fraction], rhs: Fraction):
        """Insert one equation.

        Returns None when the row was absorbed (new pivot or redundant), or
        the nonzero residual r when the row reduced to the contradiction
        0 = r; in the latter case the system state is unchanged.
        """
        row = list(coefficients)
        for col in sorted(self._rows):
            factor = row[col]
            if factor:
                pivot_row, pivot_rhs = self._rows[col]
                row = [a - factor * b for a, b in zip(row, pivot_row)]
                rhs = rhs - factor * pivot_rhs
        pivot_col = next((i for i, a in enumerate(row) if a), None)
        if pivot_col is None:
            return rhs if rhs else None
        pivot = row[pivot_col]
        row = [a / pivot for a in row]
        rhs = rhs / pivot
        for col, (other_row, other_rhs) in list(self._rows.items()):
            factor = other_row[pivot_col]
            if factor:
                self._rows[col] = (
                    [a - factor * b for a, b in zip(other_row, row)],
                    other_rhs - factor * rhs,
                )
        self._rows[pivot_col] = (row, rhs)
        return None

    @property
    def free_columns(self) -> tuple[int, ...]:
        return tuple(c for c in range(self.width) if c not in self._rows)

    def solution(self) -> tuple[Fraction, ...]:
        """The unique solution; only valid once no free columns remain."""
        assert not self.free_columns, "solution() called on an underdetermined system"
        return tuple(self._rows[c][1] for c in range(self.width))


def _atom_row(event: SubsetMask, atoms: AtomPartition) -> list[Fraction]:
    return [ONE if block.issubset(event) else ZERO for block in atoms.atoms]


def solve_atom_masses(assignment: MeasureAssignment, atoms: AtomPartition) -> AtomMasses:
    """Recover the per-atom masses pinned down by a measure assignment.

    Each assigned set contributes the equation "sum of its atoms' masses =
    assigned value", in entry order; the total-mass-one equation is appended
    last. Raises:

    * NonMeasurableSetError for an assigned set that is not a union of atoms,
    * InconsistentMeasureError with a witness when the equations conflict,
    * UnderdeterminedMeasureError naming the unconstrained atoms,
    * NegativeAtomMassError when the unique solution dips below zero.
    """
    if assignment.space != atoms.space:
        raise SpaceMismatchError("assignment and atoms live on different sample spaces")
    blocks = atoms.atoms
    system = _ExactSystem(len(blocks))
    for event, mass in assignment.entries:
        if not is_measurable(event, atoms):
            raise NonMeasurableSetError(
                f"assigned set {event} is not measurable: it is not a union of atoms"
            )
        residual = system.add(_atom_row(event, atoms), mass)
        if residual is not None:
            raise InconsistentMeasureError(
                f"measure assignment inconsistent: m({event}) = {mass}, "
                f"but the other entries force {mass - residual}"
            )
    residual = system.add([ONE] * len(blocks), ONE)
    if residual is not None:
        raise InconsistentMeasureError(
            "measure assignment inconsistent: the assigned sets force a total "
            f"atom mass of {ONE - residual}, not 1"
        )
    free = system.free_columns
    if free:
        names = tuple(str(blocks[c]) for c in free)
        raise UnderdeterminedMeasureError(
            f"measure underdetermined: no entry constrains atom(s) {', '.join(names)}",
            free_atoms=names,
        )
    values = system.solution()
    for block, value in zip(blocks, values):
        if value < 0:
            raise NegativeAtomMassError(
                f"negative atom mass: solving forces {block} to {value}"
            )
    return AtomMasses(atoms, values)


def verify_measure(assignment: MeasureAssignment, atoms: AtomPartition) -> ValidationReport:
    """Diagnose an assignment instead of rejecting it.

    Reports, in order: out-of-range masses, a full-space entry differing
    from 1, non-measurable sets, additivity conflicts (with the forced
    value), a total mass other than 1, unconstrained atoms, and negative
    solved atom masses. An empty report means `solve_atom_masses` succeeds.
    """
    violations = []
    solvable = []
    for event, mass in assignment.entries:
        if mass < 0:
            violations.append(Violation("negative-mass", f"m({event}) = {mass} is negative"))
        elif mass > 1:
            violations.append(Violation("mass-range", f"m({event}) = {mass} exceeds 1"))
        if event.is_full and mass != 1:
            violations.append(
                Violation("full-space-mass", f"the whole space is assigned {mass}, expected 1")
            )
        if is_measurable(event, atoms):
            solvable.append((event, mass))
        else:
            violations.append(
                Violation("non-measurable", f"assigned set {event} is not a union of atoms")
            )
    blocks = atoms.atoms
    system = _ExactSystem(len(blocks))
    conflicted = False
    for event, mass in solvable:
        residual = system.add(_atom_row(event, atoms), mass)
        if residual is not None:
            conflicted = True
            violations.append(
                Violation(
                    "additivity",
                    f"m({event}) = {mass}, but the other entries force {mass - residual}",
                )
            )
    residual = system.add([ONE] * len(blocks), ONE)
    if residual is not None:
        conflicted = True
        violations.append(
            Violation(
                "total-mass",
                f"the assigned sets force a total atom mass of {ONE - residual}, not 1",
            )
        )
    free = system.free_columns
    if free:
        names = ", ".join(str(blocks[c]) for c in free)
        violations.append(
            Violation("underdetermined", f"no entry constrains atom(s) {names}")
        )
    elif not conflicted:
        for block, value in zip(blocks, system.solution()):
            if value < 0:
                violations.append(
                    Violation("negative-atom-mass", f"atom {block} is forced to mass {value}")
                )
    return ValidationReport(tuple(violations))
