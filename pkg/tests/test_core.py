"""Exact rationals, finite spaces, subset masks, and p.m.f. basics."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import sigmafield.core as core
from sigmafield import (
    FiniteSpace,
    GeneratorFamily,
    MeasureAssignment,
    Pmf,
    SpaceMismatchError,
    SubsetMask,
    as_rational,
    format_rational,
    normalize_rational,
    parse_rational,
    pmf_to_measure,
    pmf_validate,
)
from .helpers import mask, small_spaces, space, valid_pmfs


class TestRationalHelpers:
    @pytest.mark.parametrize(
        "num, den, expected",
        [
            (2, 4, Fraction(1, 2)),
            (3, -6, Fraction(-1, 2)),
            (0, 7, Fraction(0)),
            (-2, -4, Fraction(1, 2)),
            (5, 1, Fraction(5)),
        ],
    )
    def test_normalize(self, num, den, expected):
        got = normalize_rational(num, den)
        assert got == expected
        assert (got.numerator, got.denominator) == (
            expected.numerator,
            expected.denominator,
        )

    def test_normalize_zero_denominator(self):
        with pytest.raises(ZeroDivisionError, match="zero denominator"):
            normalize_rational(1, 0)

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("1/3", Fraction(1, 3)),
            ("7", Fraction(7)),
            ("+2/4", Fraction(1, 2)),
            ("-1/2", Fraction(-1, 2)),
            ("0", Fraction(0)),
            ("10/5", Fraction(2)),
        ],
    )
    def test_parse(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize(
        "bad", ["1.5", "0.5", "a", "3/-6", "1e3", "", "1 /2", "1//2"]
    )
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError, match="not a rational literal"):
            parse_rational(bad)

    def test_parse_rejects_zero_denominator(self):
        with pytest.raises(ValueError, match="zero denominator"):
            parse_rational("1/0")

    def test_parse_strips_whitespace(self):
        assert parse_rational(" 1/2 ") == Fraction(1, 2)

    @pytest.mark.parametrize(
        "value, text",
        [
            (Fraction(1, 2), "1/2"),
            (Fraction(4, 2), "2"),
            (Fraction(-1, 3), "-1/3"),
            (Fraction(0), "0"),
        ],
    )
    def test_format(self, value, text):
        assert format_rational(value) == text

    @given(st.integers(-200, 200), st.integers(1, 60))
    def test_parse_inverts_format(self, n, d):
        q = Fraction(n, d)
        assert parse_rational(format_rational(q)) == q

    def test_as_rational(self):
        assert as_rational(3) == Fraction(3)
        assert as_rational(Fraction(2, 5)) == Fraction(2, 5)
        assert as_rational("2/5") == Fraction(2, 5)
        with pytest.raises(TypeError):
            as_rational(0.5)
        with pytest.raises(TypeError):
            as_rational(None)


class TestFiniteSpace:
    def test_basic(self):
        sp = space("a", "b", "c")
        assert sp.size == 3
        assert sp.full_bits == 0b111
        assert sp.index_of("b") == 1
        assert sp.labels == ("a", "b", "c")

    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            FiniteSpace(())
        with pytest.raises(ValueError):
            FiniteSpace(("a", "a"))
        with pytest.raises(ValueError):
            FiniteSpace(("a", ""))

    def test_unknown_label(self):
        sp = space("a", "b")
        with pytest.raises(ValueError, match="unknown element label"):
            sp.index_of("z")

    def test_size_cap(self, monkeypatch):
        monkeypatch.setattr(core, "MAX_SPACE_SIZE", 4)
        with pytest.raises(ValueError, match="exceeds the cap"):
            FiniteSpace(tuple(f"x{i}" for i in range(5)))
        FiniteSpace(tuple(f"x{i}" for i in range(4)))

    def test_of_constructor(self):
        assert FiniteSpace.of("a", "b", "c") == space("a", "b", "c")


class TestSubsetMask:
    def test_construction_and_views(self):
        sp = space("a", "b", "c", "d")
        m = mask(sp, "a", "b")
        assert m.bits == 0b0011
        assert len(m) == 2
        assert m.member_labels() == ("a", "b")
        assert m.indices() == (0, 1)
        assert str(m) == "{a, b}"
        assert str(SubsetMask.empty(sp)) == "{}"
        assert SubsetMask.full(sp).is_full

    def test_bits_range_checked(self):
        sp = space("a", "b")
        with pytest.raises(ValueError):
            SubsetMask(sp, 0b100)
        with pytest.raises(ValueError):
            SubsetMask(sp, -1)

    def test_set_algebra(self):
        sp = space("a", "b", "c", "d")
        ab, bc = mask(sp, "a", "b"), mask(sp, "b", "c")
        assert ab | bc == mask(sp, "a", "b", "c")
        assert ab & bc == mask(sp, "b")
        assert ab - bc == mask(sp, "a")
        assert ab.complement() == mask(sp, "c", "d")
        assert ~ab == ab.complement()
        assert mask(sp, "a").issubset(ab)
        assert not ab.issubset(bc)
        assert mask(sp, "a").isdisjoint(mask(sp, "c"))
        assert ab.has_label("a") and not ab.has_label("c")
        assert ab.has_index(1) and not ab.has_index(2)

    def test_least_index(self):
        sp = space("a", "b", "c")
        assert mask(sp, "b", "c").least_index() == 1
        with pytest.raises(ValueError):
            SubsetMask.empty(sp).least_index()

    def test_space_mismatch(self):
        one, other = space("a", "b"), space("x", "y")
        m = mask(one, "a")
        with pytest.raises(SpaceMismatchError):
            m | mask(other, "x")

    def test_equal_labels_mean_equal_spaces(self):
        assert mask(space("a", "b"), "a") == mask(space("a", "b"), "a")

    @given(small_spaces(), st.data())
    def test_complement_involution_and_de_morgan(self, sp, data):
        x = SubsetMask(sp, data.draw(st.integers(0, sp.full_bits)))
        y = SubsetMask(sp, data.draw(st.integers(0, sp.full_bits)))
        assert x.complement().complement() == x
        assert (x | y).complement() == x.complement() & y.complement()
        assert len(x) + len(x.complement()) == sp.size

    def test_from_indices(self):
        sp = space("a", "b", "c")
        assert SubsetMask.from_indices(sp, (0, 2)) == mask(sp, "a", "c")


class TestGeneratorFamily:
    def test_from_labels_and_normalized(self):
        sp = space("a", "b", "c")
        fam = GeneratorFamily.from_labels(sp, [["a"], ["b", "c"], ["a"]])
        assert len(fam.generators) == 3
        normalized = fam.normalized()
        assert normalized.generators == (mask(sp, "a"), mask(sp, "b", "c"))

    def test_space_mismatch(self):
        sp, other = space("a"), space("b")
        with pytest.raises(SpaceMismatchError):
            GeneratorFamily(sp, (SubsetMask.full(other),))


class TestPmf:
    def test_uniform_and_point(self):
        sp = space("a", "b", "c", "d")
        u = Pmf.uniform(sp)
        assert u.masses == (Fraction(1, 4),) * 4
        point = Pmf.point_mass(sp, "c")
        assert point.mass_of_label("c") == 1
        assert point.mass(0) == 0

    def test_length_checked(self):
        sp = space("a", "b")
        with pytest.raises(ValueError):
            Pmf(sp, (Fraction(1),))

    def test_validate_good(self):
        report = pmf_validate(Pmf.uniform(space("a", "b", "c")))
        assert report.ok
        assert report.violations == ()

    def test_validate_bad_total(self):
        sp = space("a", "b")
        report = pmf_validate(Pmf(sp, (Fraction(3, 4), Fraction(1, 2))))
        assert not report.ok
        kinds = [v.kind for v in report.violations]
        assert kinds == ["total-mass"]
        assert "5/4" in report.violations[0].message

    def test_validate_negative(self):
        sp = space("a", "b")
        report = pmf_validate(Pmf(sp, (Fraction(-1, 4), Fraction(5, 4))))
        kinds = [v.kind for v in report.violations]
        assert kinds == ["negative-mass"]
        assert "a" in report.violations[0].message

    def test_validate_both(self):
        sp = space("a", "b")
        report = pmf_validate(Pmf(sp, (Fraction(-1, 2), Fraction(1, 4))))
        kinds = sorted(v.kind for v in report.violations)
        assert kinds == ["negative-mass", "total-mass"]

    def test_pmf_to_measure(self):
        sp = space(*"123456")
        u = Pmf.uniform(sp)
        assert pmf_to_measure(u, mask(sp, "2", "4", "6")) == Fraction(1, 2)
        p = Pmf(sp, (Fraction(2, 9), Fraction(1, 9)) * 3)
        assert pmf_to_measure(p, mask(sp, "2", "4", "6")) == Fraction(1, 3)
        assert pmf_to_measure(p, SubsetMask.full(sp)) == 1
        assert pmf_to_measure(p, SubsetMask.empty(sp)) == 0

    @given(small_spaces(), st.data())
    def test_pmf_measure_additive(self, sp, data):
        p = data.draw(valid_pmfs(sp))
        x = SubsetMask(sp, data.draw(st.integers(0, sp.full_bits)))
        y = SubsetMask(sp, data.draw(st.integers(0, sp.full_bits)))
        if x.isdisjoint(y):
            assert pmf_to_measure(p, x | y) == pmf_to_measure(p, x) + pmf_to_measure(p, y)
        assert pmf_to_measure(p, SubsetMask.full(sp)) == 1

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatchError):
            pmf_to_measure(Pmf.uniform(space("a")), SubsetMask.full(space("b")))


class TestMeasureAssignment:
    def test_from_labels(self):
        sp = space("a", "b", "c")
        m = MeasureAssignment.from_labels(sp, [(("a", "b"), "1/2")])
        assert m.entries == ((mask(sp, "a", "b"), Fraction(1, 2)),)

    def test_space_mismatch(self):
        sp, other = space("a"), space("b")
        with pytest.raises(SpaceMismatchError):
            MeasureAssignment(sp, ((SubsetMask.full(other), Fraction(1)),))
