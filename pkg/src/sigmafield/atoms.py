"""Atom partitions of finitely generated sigma-fields on finite spaces.

An atom is a minimal non-empty measurable set; on a finite space the atoms
of sigma(generators) partition the space, and every measurable set is a
union of them. Three independent constructions live here:

* `atoms_by_refinement`: split the space by each generator in turn.
* `atoms_by_separators`: intersect, per element, one separating set against
  every other element.
* `atoms_bruteforce_oracle`: enumerate the entire field by closure, then
  intersect all members through each element. Slow by design; the other two
  are checked against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import FiniteSpace, GeneratorFamily, SubsetMask
from .errors import GuardExceededError

#: Ceiling on the closed family size for the brute-force route.
DEFAULT_CLOSURE_GUARD = 1 << 20


@dataclass(frozen=True)
class AtomPartition:
    """The partition of a space into the atoms of a sigma-field.

    Blocks are kept in canonical order (ascending least element index), so
    two partitions are equal as dataclasses exactly when they are equal as
    partitions. `atom_of[e]` is the index of the block containing element e.
    """

    space: FiniteSpace
    atoms: tuple[SubsetMask, ...]
    atom_of: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))
        if not isinstance(self.atom_of, tuple):
            object.__setattr__(self, "atom_of", tuple(self.atom_of))
        union = 0
        for block in self.atoms:
            if block.space != self.space:
                raise ValueError("partition block lives on a different space")
            if block.bits == 0:
                raise ValueError("partition blocks must be non-empty")
            if union & block.bits:
                raise ValueError("partition blocks must be pairwise disjoint")
            union |= block.bits
        if union != self.space.full_bits:
            raise ValueError("partition blocks must cover the whole space")
        if len(self.atom_of) != self.space.size:
            raise ValueError("atom_of must map every element index")
        for e, a in enumerate(self.atom_of):
            if not (0 <= a < len(self.atoms)) or not self.atoms[a].has_index(e):
                raise ValueError(f"atom_of is inconsistent at element index {e}")

    @classmethod
    def from_blocks(cls, space: FiniteSpace, blocks: Iterable) -> "AtomPartition":
        """Canonicalize raw blocks (SubsetMask or plain bit ints):
        deduplicate, order by least element, derive atom_of."""
        raw = []
        for b in blocks:
            raw.append(b.bits if isinstance(b, SubsetMask) else int(b))
        distinct = sorted(set(raw), key=lambda bits: (bits & -bits).bit_length())
        atom_of = [0] * space.size
        for i, bits in enumerate(distinct):
            for e in range(space.size):
                if bits >> e & 1:
                    atom_of[e] = i
        atoms = tuple(SubsetMask(space, bits) for bits in distinct)
        return cls(space, atoms, tuple(atom_of))

    def block_of(self, element_index: int) -> SubsetMask:
        return self.atoms[self.atom_of[element_index]]


def atoms_by_refinement(family: GeneratorFamily) -> AtomPartition:
    """Atoms via iterated splitting.

    Start from the single block Omega and cut every block into its part
    inside and outside each generator. The surviving blocks are the classes
    of the relation "no generator contains one of the two elements without
    the other", which is exactly the atom partition.
    """
    space = family.space
    blocks = [space.full_bits]
    for gen in family.generators:
        g = gen.bits
        refined = []
        for block in blocks:
            inside = block & g
            outside = block & ~g
            if inside and outside:
                refined.append(inside)
                refined.append(outside)
            else:
                refined.append(block)
        blocks = refined
    return AtomPartition.from_blocks(space, blocks)


def separator(omega: int, eta: int, family: GeneratorFamily) -> SubsetMask:
    """A measurable set containing element `omega` but not `eta`, when any
    measurable set does.

    Scanning generators suffices: sets built from the generators by
    complement and union cannot tell two elements apart unless some
    generator already does, so the answer is always a generator or a
    generator complement. Falls back to the whole space when nothing
    separates the pair (in particular when omega == eta).
    """
    space = family.space
    for index in (omega, eta):
        if not 0 <= index < space.size:
            raise ValueError(f"element index {index} out of range for a space of {space.size}")
    if omega != eta:
        for gen in family.generators:
            in_omega = gen.has_index(omega)
            in_eta = gen.has_index(eta)
            if in_omega and not in_eta:
                return gen
            if in_eta and not in_omega:
                return gen.complement()
    return SubsetMask.full(space)


def atoms_by_separators(family: GeneratorFamily) -> AtomPartition:
    """Atoms via separating sets.

    For each element, intersect its separators against every element of the
    space; the result is the smallest measurable set containing it. Those
    minimal sets are pairwise identical or disjoint, so deduplication
    yields the atom partition.
    """
    space = family.space
    n = space.size
    blocks = []
    for omega in range(n):
        candidate = space.full_bits
        for eta in range(n):
            candidate &= separator(omega, eta, family).bits
        blocks.append(candidate)
    return AtomPartition.from_blocks(space, blocks)


def _closed_family(space: FiniteSpace, generator_bits: Iterable[int], guard: int) -> list[int]:
    """Fixpoint closure of the generators (plus the empty set and the whole
    space) under complement and pairwise union. On a finite space that is
    the generated sigma-field. Returns the members sorted by bit pattern."""
    full = space.full_bits
    family = {0, full}
    family.update(generator_bits)
    while True:
        before = len(family)
        members = sorted(family)
        for bits in members:
            family.add(bits ^ full)
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                family.add(a | b)
            if len(family) > guard:
                raise GuardExceededError(f"closure guard exceeded: more than {guard} sets")
        if len(family) > guard:
            raise GuardExceededError(f"closure guard exceeded: more than {guard} sets")
        if len(family) == before:
            return sorted(family)


def _minimal_blocks(space: FiniteSpace, members: Iterable[int]) -> list[int]:
    """Per element, the intersection of every family member containing it."""
    members = list(members)
    blocks = []
    for e in range(space.size):
        probe = 1 << e
        candidate = space.full_bits
        for bits in members:
            if bits & probe:
                candidate &= bits
        blocks.append(candidate)
    return blocks


def atoms_bruteforce_oracle(
    family: GeneratorFamily, guard: int = DEFAULT_CLOSURE_GUARD
) -> AtomPartition:
    """Atoms the expensive way: enumerate the whole field first.

    This is the reference the fast constructions are tested against; do not
    reach for it outside tests unless the field is known to be tiny.
    """
    space = family.space
    try:
        members = _closed_family(space, (g.bits for g in family.generators), guard)
    except GuardExceededError as exc:
        raise GuardExceededError(f"oracle guard exceeded: {exc}") from None
    return AtomPartition.from_blocks(space, _minimal_blocks(space, members))
