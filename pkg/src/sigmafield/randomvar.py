"""Finite-valued random variables: generated fields, induced distributions,
and scenario-style extensions built from a distribution of values."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .atoms import AtomPartition
from .core import ZERO, FiniteSpace, Pmf, pmf_validate
from .errors import SpaceMismatchError, UnsupportedDistributionError
from .extension import DofReport, canonical_extension, degrees_of_freedom
from .field import AtomMasses


@dataclass(frozen=True)
class FiniteRandomVariable:
    """A total map from sample-space elements to a finite list of values.

    The codomain may list values nothing maps to; they are flagged via
    `unattained_labels` and produce no atom and zero induced mass.
    """

    domain: FiniteSpace
    codomain_labels: tuple[str, ...]
    value_of: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.codomain_labels, tuple):
            object.__setattr__(self, "codomain_labels", tuple(self.codomain_labels))
        if not isinstance(self.value_of, tuple):
            object.__setattr__(self, "value_of", tuple(self.value_of))
        if not self.codomain_labels:
            raise ValueError("the codomain needs at least one value")
        if len(set(self.codomain_labels)) != len(self.codomain_labels):
            raise ValueError("codomain values must be distinct")
        if len(self.value_of) != self.domain.size:
            raise ValueError("value_of must map every element of the domain")
        for e, v in enumerate(self.value_of):
            if not 0 <= v < len(self.codomain_labels):
                raise ValueError(f"element index {e} maps to unknown value index {v}")

    @classmethod
    def from_mapping(
        cls,
        domain: FiniteSpace,
        mapping: Mapping[str, str],
        codomain: Sequence[str] | None = None,
    ) -> "FiniteRandomVariable":
        """Build from a label-to-value dict; the default codomain order is
        first appearance along the domain."""
        values = []
        for label in domain.labels:
            if label not in mapping:
                raise ValueError(f"random variable is not total: no value for {label!r}")
            values.append(mapping[label])
        if codomain is None:
            codomain = tuple(dict.fromkeys(values))
        else:
            codomain = tuple(codomain)
            missing = [v for v in values if v not in codomain]
            if missing:
                raise ValueError(f"value {missing[0]!r} is absent from the given codomain")
        index = {v: i for i, v in enumerate(codomain)}
        return cls(domain, codomain, tuple(index[v] for v in values))

    def value_label(self, element_index: int) -> str:
        return self.codomain_labels[self.value_of[element_index]]

    @cached_property
    def attained(self) -> tuple[int, ...]:
        """Value indices that some element actually maps to, ascending."""
        return tuple(sorted(set(self.value_of)))

    @property
    def unattained_labels(self) -> tuple[str, ...]:
        hit = set(self.value_of)
        return tuple(
            label for i, label in enumerate(self.codomain_labels) if i not in hit
        )


def sigma_of(variable: FiniteRandomVariable) -> AtomPartition:
    """Partition the domain into the non-empty level sets of the variable.

    These are the atoms of the sigma-field the variable generates (every
    preimage is a union of level sets).
    """
    buckets: dict[int, int] = {}
    for e, v in enumerate(variable.value_of):
        buckets[v] = buckets.get(v, 0) | (1 << e)
    return AtomPartition.from_blocks(variable.domain, buckets.values())


def induced_distribution(variable: FiniteRandomVariable, p: Pmf) -> Pmf:
    """Push p forward: each value receives the mass of its level set."""
    if p.space != variable.domain:
        raise SpaceMismatchError("p.m.f. lives on a different space than the variable")
    totals = [ZERO] * len(variable.codomain_labels)
    for e, v in enumerate(variable.value_of):
        totals[v] += p.masses[e]
    return Pmf(FiniteSpace(variable.codomain_labels), tuple(totals))


@dataclass(frozen=True)
class ScenarioExtension:
    masses: AtomMasses
    pmf: Pmf
    dof: DofReport


def scenario_extension(
    variable: FiniteRandomVariable, value_dist: Pmf
) -> ScenarioExtension:
    """From a distribution of values to a p.m.f. on the domain.

    Each level set receives its value's mass and splits it uniformly; values
    nothing maps to must carry zero mass, otherwise there is nowhere to put
    it. Returns the atom masses, the extension, and the freedom report.
    """
    if value_dist.space.labels != variable.codomain_labels:
        raise SpaceMismatchError(
            "value distribution lives on a different codomain than the variable"
        )
    report = pmf_validate(value_dist)
    if not report.ok:
        raise ValueError(
            "value distribution is not a valid p.m.f.: " + "; ".join(report.messages())
        )
    hit = set(variable.value_of)
    for v, label in enumerate(variable.codomain_labels):
        if v not in hit and value_dist.masses[v] != 0:
            raise UnsupportedDistributionError(
                f"distribution not supported on range of X: value {label!r} has "
                f"mass {value_dist.masses[v]} but no element maps to it"
            )
    atoms = sigma_of(variable)
    masses = AtomMasses(
        atoms,
        tuple(
            value_dist.masses[variable.value_of[block.least_index()]]
            for block in atoms.atoms
        ),
    )
    return ScenarioExtension(
        masses, canonical_extension(masses), degrees_of_freedom(atoms, masses)
    )
