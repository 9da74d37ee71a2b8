"""Exact atoms of finitely generated sigma-fields and p.m.f. extensions.

On a countable sample space, knowing the probability of every measurable
set determines the masses of the field's atoms and nothing finer. This
package computes those atoms (three independent ways), recovers the atom
masses from partial measure assignments by exact elimination, extends them
to probability mass functions on the full power set (uniformly on finite
atoms, dyadically along a rank on infinite ones), and inverts the whole trip
exactly. Everything is `fractions.Fraction` end to end.
"""

from .atoms import (
    AtomPartition,
    atoms_bruteforce_oracle,
    atoms_by_refinement,
    atoms_by_separators,
    separator,
)
from .core import (
    FiniteSpace,
    GeneratorFamily,
    MeasureAssignment,
    Pmf,
    Rational,
    SubsetMask,
    ValidationReport,
    Violation,
    as_rational,
    format_rational,
    normalize_rational,
    parse_rational,
    pmf_to_measure,
    pmf_validate,
)
from .countable import (
    ArithmeticAtom,
    CountablePresentation,
    CustomInfiniteAtom,
    FiniteAtom,
    geometric_presentation,
    is_infinite_shape,
    lazy_pmf_eval,
    materialize,
    measure_of_presented_set,
    partial_sum,
    presentation_dof,
    require_valid_presentation,
    tail_bound,
    validate_presentation,
)
from .errors import (
    ConditionalPmfError,
    GuardExceededError,
    InconsistentMeasureError,
    IndexerInconsistencyError,
    NegativeAtomMassError,
    NonMeasurableSetError,
    PresentationError,
    SpaceMismatchError,
    TailUndefinedError,
    UnderdeterminedMeasureError,
    UnsupportedDistributionError,
)
from .extension import (
    DofReport,
    ExtensionSpec,
    RoundtripReport,
    canonical_extension,
    decompose_pmf,
    degrees_of_freedom,
    dof_from_sizes,
    extension_roundtrip_check,
    parametrized_extension,
    restrict_pmf,
)
from .field import (
    AtomMasses,
    EnumeratedField,
    closure_oracle,
    enumerate_field,
    is_measurable,
    solve_atom_masses,
    verify_measure,
)
from .randomvar import (
    FiniteRandomVariable,
    ScenarioExtension,
    induced_distribution,
    scenario_extension,
    sigma_of,
)

__version__ = "0.1.0"

__all__ = [
    "ArithmeticAtom",
    "AtomMasses",
    "AtomPartition",
    "ConditionalPmfError",
    "CountablePresentation",
    "CustomInfiniteAtom",
    "DofReport",
    "EnumeratedField",
    "ExtensionSpec",
    "FiniteAtom",
    "FiniteRandomVariable",
    "FiniteSpace",
    "GeneratorFamily",
    "GuardExceededError",
    "InconsistentMeasureError",
    "IndexerInconsistencyError",
    "MeasureAssignment",
    "NegativeAtomMassError",
    "NonMeasurableSetError",
    "Pmf",
    "PresentationError",
    "Rational",
    "RoundtripReport",
    "ScenarioExtension",
    "SpaceMismatchError",
    "SubsetMask",
    "TailUndefinedError",
    "UnderdeterminedMeasureError",
    "UnsupportedDistributionError",
    "ValidationReport",
    "Violation",
    "as_rational",
    "atoms_bruteforce_oracle",
    "atoms_by_refinement",
    "atoms_by_separators",
    "canonical_extension",
    "closure_oracle",
    "decompose_pmf",
    "degrees_of_freedom",
    "dof_from_sizes",
    "enumerate_field",
    "extension_roundtrip_check",
    "format_rational",
    "geometric_presentation",
    "induced_distribution",
    "is_infinite_shape",
    "is_measurable",
    "lazy_pmf_eval",
    "materialize",
    "measure_of_presented_set",
    "normalize_rational",
    "parametrized_extension",
    "parse_rational",
    "partial_sum",
    "pmf_to_measure",
    "pmf_validate",
    "presentation_dof",
    "require_valid_presentation",
    "restrict_pmf",
    "scenario_extension",
    "separator",
    "sigma_of",
    "solve_atom_masses",
    "tail_bound",
    "validate_presentation",
    "verify_measure",
]
