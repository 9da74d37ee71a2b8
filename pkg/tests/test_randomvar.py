"""Random variables, their generated fields, and scenario extensions."""

from fractions import Fraction

import pytest

from sigmafield import (
    DofReport,
    FiniteRandomVariable,
    Pmf,
    SpaceMismatchError,
    UnsupportedDistributionError,
    canonical_extension,
    induced_distribution,
    pmf_to_measure,
    scenario_extension,
    sigma_of,
)
from .helpers import blocks_of, mask, space


def payout_variable():
    sp = space("crash", "slump", "flat", "growth", "boom")
    x = FiniteRandomVariable.from_mapping(
        sp,
        {"crash": "90", "slump": "90", "flat": "110", "growth": "110", "boom": "110"},
    )
    return sp, x


class TestFiniteRandomVariable:
    def test_from_mapping_codomain_order(self):
        sp, x = payout_variable()
        assert x.codomain_labels == ("90", "110")
        assert x.value_of == (0, 0, 1, 1, 1)
        assert x.value_label(2) == "110"
        assert x.attained == (0, 1)
        assert x.unattained_labels == ()

    def test_explicit_codomain(self):
        sp = space("a", "b")
        x = FiniteRandomVariable.from_mapping(
            sp, {"a": "hi", "b": "hi"}, codomain=("hi", "lo")
        )
        assert x.unattained_labels == ("lo",)

    def test_totality_enforced(self):
        sp = space("a", "b")
        with pytest.raises(ValueError, match="not total: no value for 'b'"):
            FiniteRandomVariable.from_mapping(sp, {"a": "1"})

    def test_codomain_must_cover_values(self):
        sp = space("a",)
        with pytest.raises(ValueError, match="absent from the given codomain"):
            FiniteRandomVariable.from_mapping(sp, {"a": "x"}, codomain=("y",))

    def test_structure_validated(self):
        sp = space("a", "b")
        with pytest.raises(ValueError, match="distinct"):
            FiniteRandomVariable(sp, ("v", "v"), (0, 1))
        with pytest.raises(ValueError, match="every element"):
            FiniteRandomVariable(sp, ("v",), (0,))
        with pytest.raises(ValueError, match="unknown value index"):
            FiniteRandomVariable(sp, ("v",), (0, 3))


class TestSigmaOf:
    def test_level_sets(self):
        sp, x = payout_variable()
        part = sigma_of(x)
        assert blocks_of(part) == {
            frozenset({"crash", "slump"}),
            frozenset({"flat", "growth", "boom"}),
        }

    def test_injective_variable_gives_singletons(self):
        sp = space("a", "b", "c")
        x = FiniteRandomVariable.from_mapping(sp, {"a": "1", "b": "2", "c": "3"})
        assert len(sigma_of(x).atoms) == 3

    def test_constant_variable_gives_trivial_field(self):
        sp = space("a", "b", "c")
        x = FiniteRandomVariable.from_mapping(sp, {"a": "k", "b": "k", "c": "k"})
        assert len(sigma_of(x).atoms) == 1


class TestInducedDistribution:
    def test_pushforward(self):
        sp, x = payout_variable()
        p = Pmf(
            sp,
            (
                Fraction(1, 4),
                Fraction(1, 4),
                Fraction(1, 6),
                Fraction(1, 6),
                Fraction(1, 6),
            ),
        )
        dist = induced_distribution(x, p)
        assert dist.space.labels == ("90", "110")
        assert dist.masses == (Fraction(1, 2), Fraction(1, 2))

    def test_unattained_value_gets_zero(self):
        sp = space("a", "b")
        x = FiniteRandomVariable.from_mapping(
            sp, {"a": "hi", "b": "hi"}, codomain=("hi", "lo")
        )
        dist = induced_distribution(x, Pmf.uniform(sp))
        assert dist.masses == (Fraction(1), Fraction(0))

    def test_space_checked(self):
        sp, x = payout_variable()
        with pytest.raises(SpaceMismatchError):
            induced_distribution(x, Pmf.uniform(space("z")))


class TestScenarioExtension:
    def test_even_odds_on_payout(self):
        sp, x = payout_variable()
        dist = Pmf(
            space("90", "110"), (Fraction(1, 2), Fraction(1, 2))
        )
        ext = scenario_extension(x, dist)
        assert ext.masses.masses == (Fraction(1, 2), Fraction(1, 2))
        assert ext.pmf.masses == (
            Fraction(1, 4),
            Fraction(1, 4),
            Fraction(1, 6),
            Fraction(1, 6),
            Fraction(1, 6),
        )
        assert ext.dof == DofReport(3, 3)

    def test_pmf_reproduces_value_masses(self):
        sp, x = payout_variable()
        dist = Pmf(space("90", "110"), (Fraction(1, 3), Fraction(2, 3)))
        ext = scenario_extension(x, dist)
        assert pmf_to_measure(ext.pmf, mask(sp, "crash", "slump")) == Fraction(1, 3)
        assert induced_distribution(x, ext.pmf) == dist

    def test_codomain_labels_must_match(self):
        sp, x = payout_variable()
        with pytest.raises(SpaceMismatchError, match="codomain"):
            scenario_extension(x, Pmf.uniform(space("90", "100")))

    def test_distribution_validated(self):
        sp, x = payout_variable()
        bad = Pmf(space("90", "110"), (Fraction(1, 2), Fraction(1, 3)))
        with pytest.raises(ValueError, match="not a valid p.m.f."):
            scenario_extension(x, bad)

    def test_mass_off_the_range_rejected(self):
        sp = space("a", "b")
        x = FiniteRandomVariable.from_mapping(
            sp, {"a": "hi", "b": "hi"}, codomain=("hi", "lo")
        )
        bad = Pmf(space("hi", "lo"), (Fraction(1, 2), Fraction(1, 2)))
        with pytest.raises(UnsupportedDistributionError, match="value 'lo' has mass 1/2"):
            scenario_extension(x, bad)

    def test_zero_mass_off_range_is_fine(self):
        sp = space("a", "b")
        x = FiniteRandomVariable.from_mapping(
            sp, {"a": "hi", "b": "hi"}, codomain=("hi", "lo")
        )
        dist = Pmf(space("hi", "lo"), (Fraction(1), Fraction(0)))
        ext = scenario_extension(x, dist)
        assert ext.pmf.masses == (Fraction(1, 2), Fraction(1, 2))
        assert ext.dof == DofReport(1, 1)

    def test_composes_with_canonical_extension(self):
        sp, x = payout_variable()
        dist = Pmf(space("90", "110"), (Fraction(1, 2), Fraction(1, 2)))
        ext = scenario_extension(x, dist)
        assert canonical_extension(ext.masses) == ext.pmf
