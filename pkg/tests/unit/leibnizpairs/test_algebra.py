"""
Unit tests for algebraic input data and axiom validation.
"""

import pytest
from dataclasses import replace
from fractions import Fraction

import numpy as np

from leibnizpairs import catalog
from leibnizpairs.algebra import (
    ASSOCIATIVE,
    LIE,
    LeibnizPair,
    PoissonAlgebra,
    StructureAlgebra,
    self_module,
    validate_associative,
    validate_lie,
    validate_module,
    validate_object,
    validate_pair,
    validate_poisson,
    validate_poisson_module,
    validate_rinehart,
)
from leibnizpairs.common_utils import ZERO, format_rational, parse_rational, to_rational
from leibnizpairs.errors import StructureError


def zeros(*shape):
    return np.full(shape, ZERO, dtype=object)


class TestRationalConversion:
    """Test exact scalar conversion."""

    @pytest.mark.unit
    def test_to_rational_accepts_exact_values(self):
        """Test integers, Fractions and p/q strings."""
        assert to_rational(3) == Fraction(3)
        assert to_rational("-2/4") == Fraction(-1, 2)
        assert to_rational(Fraction(1, 3)) == Fraction(1, 3)

    @pytest.mark.unit
    def test_to_rational_refuses_inexact_values(self):
        """Test that floats, booleans and malformed strings are refused."""
        for bad in (0.5, True, "0.5", "1e3", "1/0", "abc", None):
            with pytest.raises(StructureError):
                to_rational(bad)

    @pytest.mark.unit
    def test_format_rational(self):
        """Test p/q rendering."""
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational(Fraction(-3, 6)) == "-1/2"
        assert parse_rational(format_rational(Fraction(7, 9))) == Fraction(7, 9)


class TestStructureAlgebra:
    """Test structural checks on construction."""

    @pytest.mark.unit
    def test_wrong_shape_raises(self):
        """Test that a tensor of the wrong shape is refused."""
        with pytest.raises(StructureError):
            StructureAlgebra(ASSOCIATIVE, ("1", "x"), zeros(2, 2, 3))

    @pytest.mark.unit
    def test_duplicate_labels_raise(self):
        """Test that basis labels must be distinct."""
        with pytest.raises(StructureError):
            StructureAlgebra(ASSOCIATIVE, ("a", "a"), zeros(2, 2, 2))

    @pytest.mark.unit
    def test_empty_associative_algebra_raises(self):
        """Test that A must be nonzero while L may be zero."""
        with pytest.raises(StructureError):
            StructureAlgebra(ASSOCIATIVE, (), zeros(0, 0, 0))
        assert catalog.zero_lie().dim == 0

    @pytest.mark.unit
    def test_lie_algebra_cannot_declare_unit(self):
        """Test the unit index rules."""
        with pytest.raises(StructureError):
            StructureAlgebra(LIE, ("h",), zeros(1, 1, 1), unit_index=0)
        with pytest.raises(StructureError):
            StructureAlgebra(ASSOCIATIVE, ("1",), zeros(1, 1, 1), unit_index=3)

    @pytest.mark.unit
    def test_pair_kinds_checked(self):
        """Test that a pair needs an associative A and a Lie L."""
        A = catalog.dual_numbers()
        with pytest.raises(StructureError):
            LeibnizPair(A, A, zeros(2, 2, 2))


class TestCatalogueValidation:
    """Test that every catalogued object passes its axioms."""

    @pytest.mark.unit
    @pytest.mark.parametrize("name", sorted(catalog.CATALOG))
    def test_catalogue_objects_valid(self, name):
        """Test each catalogue object with its full validator."""
        report = validate_object(catalog.CATALOG[name]())
        assert report.ok, report.to_dict()

    @pytest.mark.unit
    @pytest.mark.parametrize("name", sorted(catalog.leibniz_examples()))
    def test_regular_modules_valid(self, name):
        """Test that the regular module of each pair satisfies every module axiom."""
        pair, module = catalog.leibniz_examples()[name]
        report = validate_module(pair, module)
        assert report.ok, report.to_dict()

    @pytest.mark.unit
    def test_trivial_coefficients_valid(self, pair1):
        """Test (A, 0) as coefficients."""
        assert validate_module(pair1, catalog.trivial_coefficients(pair1)).ok

    @pytest.mark.unit
    def test_poisson_self_module_valid(self, pois3):
        """Test the Poisson module rule on the regular module."""
        assert validate_poisson_module(pois3, pois3.self_module()).ok

    @pytest.mark.unit
    def test_rinehart_conditions(self, pair1):
        """Test the Rinehart data of PAIR1 with 1.d = d and x.d = 0."""
        action = zeros(2, 1, 1)
        action[0, 0, 0] = Fraction(1)
        assert validate_rinehart(pair1, action).ok


class TestAxiomViolations:
    """Test that broken structures name their failing axioms."""

    @pytest.mark.unit
    def test_non_associative_multiplication(self):
        """Test a product with x.x = 1 and 1 not a unit."""
        c = zeros(2, 2, 2)
        c[1, 1, 0] = Fraction(1)
        c[0, 1, 1] = Fraction(1)
        A = StructureAlgebra(ASSOCIATIVE, ("e", "x"), c)
        report = validate_associative(A)
        assert not report.ok
        assert "associativity" in report.axioms_failed()

    @pytest.mark.unit
    def test_declared_unit_checked(self):
        """Test that a declared unit must act as identity."""
        A = catalog.dual_numbers()
        broken = StructureAlgebra(ASSOCIATIVE, A.basis_labels, A.c, unit_index=1)
        assert {"left_unit", "right_unit"} <= set(validate_associative(broken).axioms_failed())

    @pytest.mark.unit
    def test_non_skew_bracket(self):
        """Test a bracket with [a, a] != 0."""
        c = zeros(1, 1, 1)
        c[0, 0, 0] = Fraction(1)
        report = validate_lie(StructureAlgebra(LIE, ("a",), c))
        assert "skew_symmetry" in report.axioms_failed()

    @pytest.mark.unit
    def test_non_derivation_action(self):
        """Test d acting by 1 -> 1, which breaks the Leibniz rule on 1.1."""
        mu = zeros(1, 2, 2)
        mu[0, 0, 0] = Fraction(1)
        pair = LeibnizPair(catalog.dual_numbers(), catalog.abelian_lie(("d",)), mu)
        report = validate_pair(pair)
        assert report.axioms_failed() == ["mu_derivation"]
        violation = report.violations[0]
        assert violation.labels[0] == "d"

    @pytest.mark.unit
    def test_non_morphism_action(self):
        """Test an abelian L acting by non-commuting derivations."""
        A = catalog.matrix_algebra2()
        L = catalog.abelian_lie(("u", "v"))
        inner = catalog.matrix2_pair().mu
        mu = np.stack([inner[1], inner[2]])
        report = validate_pair(LeibnizPair(A, L, mu))
        assert report.axioms_failed() == ["mu_lie_morphism"]

    @pytest.mark.unit
    def test_poisson_leibniz_rule_violation(self):
        """Test a bracket on the dual numbers with {x, 1} = 1."""
        bracket = zeros(2, 2, 2)
        bracket[1, 0, 0] = Fraction(1)
        bracket[0, 1, 0] = Fraction(-1)
        report = validate_poisson(PoissonAlgebra(catalog.dual_numbers(), bracket))
        assert "leibniz_rule" in report.axioms_failed()

    @pytest.mark.unit
    def test_zeroed_module_not_regular(self, pair1):
        """Test a module flagged regular whose P_on_A disagrees with mu."""
        module = self_module(pair1)
        zeroed = replace(module, P_on_A=zeros(1, 2, 2), name="PAIR1_ZEROED").check_shapes(pair1)
        report = validate_module(pair1, zeroed)
        assert not report.ok
        assert "regular_module" in report.axioms_failed()

    @pytest.mark.unit
    def test_report_serialisation(self):
        """Test that violations render with labels and p/q values."""
        mu = zeros(1, 2, 2)
        mu[0, 0, 0] = Fraction(1, 2)
        pair = LeibnizPair(catalog.dual_numbers(), catalog.abelian_lie(("d",)), mu, name="BAD")
        record = validate_pair(pair).to_dict()
        assert record["subject"] == "BAD"
        assert record["ok"] is False
        assert record["violations"][0]["witness"] == ["d", "1", "1"]
