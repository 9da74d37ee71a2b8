"""Extending atom masses to full probability mass functions, and back.

Knowing the measure of every measurable set still leaves freedom below the
atom level: any way of splitting each atom's mass over its elements yields a
p.m.f. whose induced measure agrees on the whole field. The canonical choice
splits uniformly; `ExtensionSpec` carries arbitrary per-atom conditional
p.m.f.s for everything else. `restrict_pmf` and `decompose_pmf` invert the
two directions exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .atoms import AtomPartition, atoms_by_refinement
from .core import (
    ONE,
    ZERO,
    GeneratorFamily,
    MeasureAssignment,
    Pmf,
    SubsetMask,
    pmf_to_measure,
)
from .errors import ConditionalPmfError, SpaceMismatchError
from .field import AtomMasses, DEFAULT_ATOM_BOUND, enumerate_field, solve_atom_masses


@dataclass(frozen=True)
class ExtensionSpec:
    """Atom masses plus one conditional p.m.f. per atom.

    Each conditional lives on the full space but must be supported exactly
    on its own atom and sum to 1 there; zero-mass atoms still carry one
    (it just never shows up in the extension).
    """

    masses: AtomMasses
    per_atom_pmfs: tuple[Pmf, ...] | None = None

    def __post_init__(self):
        if self.per_atom_pmfs is None:
            return
        if not isinstance(self.per_atom_pmfs, tuple):
            object.__setattr__(self, "per_atom_pmfs", tuple(self.per_atom_pmfs))
        blocks = self.masses.partition.atoms
        if len(self.per_atom_pmfs) != len(blocks):
            raise ConditionalPmfError(
                f"one conditional p.m.f. per atom required: got {len(self.per_atom_pmfs)} "
                f"for {len(blocks)} atoms"
            )
        space = self.masses.partition.space
        for block, conditional in zip(blocks, self.per_atom_pmfs):
            if conditional.space != space:
                raise SpaceMismatchError("conditional p.m.f. lives on a different sample space")
            total = ZERO
            for e in range(space.size):
                value = conditional.masses[e]
                if block.has_index(e):
                    if value < 0:
                        raise ConditionalPmfError(
                            f"conditional p.m.f. for atom {block} is negative at "
                            f"{space.labels[e]}: {value}"
                        )
                    total += value
                elif value != 0:
                    raise ConditionalPmfError(
                        f"conditional p.m.f. for atom {block} is supported off its atom: "
                        f"mass {value} at {space.labels[e]}"
                    )
            if total != 1:
                raise ConditionalPmfError(
                    f"conditional p.m.f. for atom {block} sums to {total}, not 1"
                )


def canonical_extension(masses: AtomMasses) -> Pmf:
    """Spread each atom's mass uniformly over the atom's elements."""
    space = masses.partition.space
    out = [ZERO] * space.size
    for block, mass in zip(masses.partition.atoms, masses.masses):
        share = mass / len(block)
        for e in block.indices():
            out[e] = share
    return Pmf(space, tuple(out))


def parametrized_extension(spec: ExtensionSpec) -> Pmf:
    """Element mass = atom mass times the atom's conditional mass there."""
    if spec.per_atom_pmfs is None:
        raise ConditionalPmfError("per-atom conditional p.m.f.s are required; "
                                  "use canonical_extension for the uniform split")
    space = spec.masses.partition.space
    out = [ZERO] * space.size
    for block, mass, conditional in zip(
        spec.masses.partition.atoms, spec.masses.masses, spec.per_atom_pmfs
    ):
        for e in block.indices():
            out[e] = mass * conditional.masses[e]
    return Pmf(space, tuple(out))


def restrict_pmf(p: Pmf, atoms: AtomPartition) -> AtomMasses:
    """Sum p over each atom: the exact inverse of extending."""
    if p.space != atoms.space:
        raise SpaceMismatchError("p.m.f. and atoms live on different sample spaces")
    sums = tuple(
        sum((p.masses[e] for e in block.indices()), ZERO) for block in atoms.atoms
    )
    return AtomMasses(atoms, sums)


def decompose_pmf(p: Pmf, atoms: AtomPartition) -> ExtensionSpec:
    """Split a p.m.f. into atom masses and per-atom conditionals.

    On a positive-mass atom the conditional is p renormalized by the atom
    mass; a zero-mass atom contributes nothing to p, so it gets the uniform
    conditional to keep one entry per atom. Rebuilding with
    `parametrized_extension` reproduces p exactly.
    """
    masses = restrict_pmf(p, atoms)
    space = atoms.space
    conditionals = []
    for block, mass in zip(atoms.atoms, masses.masses):
        weights = [ZERO] * space.size
        if mass:
            for e in block.indices():
                weights[e] = p.masses[e] / mass
        else:
            share = Fraction(1, len(block))
            for e in block.indices():
                weights[e] = share
        conditionals.append(Pmf(space, tuple(weights)))
    return ExtensionSpec(masses, tuple(conditionals))


@dataclass(frozen=True)
class DofReport:
    """Freedom counts for extending atom masses to a p.m.f.

    `parametrization` counts every atom: the conditional on a zero-mass atom
    still varies freely even though the extension does not. The
    `distinct_extensions` count drops zero-mass atoms and so counts
    genuinely different p.m.f.s. None marks a countably infinite count.
    """

    parametrization: int | None
    distinct_extensions: int | None


def dof_from_sizes(sizes: Sequence[int | None], masses: Sequence[Fraction]) -> DofReport:
    """Shared tally: one (size - 1) term per atom; None size = infinite atom."""
    parametrization: int | None = 0
    distinct: int | None = 0
    for size, mass in zip(sizes, masses):
        if size is None:
            parametrization = None
            if mass > 0:
                distinct = None
        else:
            if parametrization is not None:
                parametrization += size - 1
            if mass > 0 and distinct is not None:
                distinct += size - 1
    return DofReport(parametrization, distinct)


def degrees_of_freedom(atoms: AtomPartition, masses: AtomMasses) -> DofReport:
    """Sum of (atom size - 1), counted both ways of the two-count convention."""
    if masses.partition != atoms:
        raise ValueError("masses were solved for a different partition")
    return dof_from_sizes([len(b) for b in atoms.atoms], masses.masses)


@dataclass(frozen=True)
class RoundtripReport:
    """Outcome of re-measuring every field set under an extension."""

    sets_checked: int
    first_mismatch: tuple[SubsetMask, Fraction, Fraction] | None = None

    @property
    def ok(self) -> bool:
        return self.first_mismatch is None


def extension_roundtrip_check(
    assignment: MeasureAssignment,
    family: GeneratorFamily,
    max_atoms: int = DEFAULT_ATOM_BOUND,
) -> RoundtripReport:
    """Whole-pipeline check: atoms, solved masses, canonical extension, then
    every enumerated field set re-evaluated under the extension.

    Exact agreement on every set is the expected outcome; the report exists
    so a disagreement would name the first offending set instead of hiding.
    """
    atoms = atoms_by_refinement(family)
    masses = solve_atom_masses(assignment, atoms)
    p = canonical_extension(masses)
    field = enumerate_field(atoms, max_atoms)
    for i, event in enumerate(field.sets):
        expected = masses.measure_of(event)
        actual = pmf_to_measure(p, event)
        if expected != actual:
            return RoundtripReport(i + 1, (event, expected, actual))
    return RoundtripReport(len(field.sets), None)
