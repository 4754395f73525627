"""
Unit tests for exact rational linear algebra.

Covers construction, row reduction, kernels, images, solving and reduction
modulo a subspace, plus property-based rank-nullity checks.
"""

import pytest
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from leibnizpairs.errors import ContractViolation, StructureError
from leibnizpairs.linalg import (
    RationalMatrix,
    SubspaceBasis,
    column_space_basis,
    express_in_basis,
    is_zero_vector,
    kernel_basis,
    matmul,
    quotient_dim,
    rank,
    rational_vector,
    reduce_mod_subspace,
    rref,
    solve,
)


small_fractions = st.builds(Fraction, st.integers(min_value=-10, max_value=10), st.integers(min_value=1, max_value=10))
entries = st.one_of(st.just(Fraction(0)), small_fractions)
MAX_DIM = 12


@st.composite
def rational_matrices(draw, max_rows=MAX_DIM, max_cols=MAX_DIM):
    rows = draw(st.integers(min_value=0, max_value=max_rows))
    cols = draw(st.integers(min_value=0, max_value=max_cols))
    table = draw(st.lists(st.lists(entries, min_size=cols, max_size=cols),
                          min_size=rows, max_size=rows))
    if rows == 0 or cols == 0:
        return RationalMatrix.zeros(rows, cols)
    return RationalMatrix(table)


SLOW_DRAWS = [HealthCheck.too_slow, HealthCheck.data_too_large]


class TestRationalMatrix:
    """Test matrix construction and arithmetic."""

    @pytest.mark.unit
    def test_entries_are_fractions(self):
        """Test that integer and string entries become Fractions."""
        m = RationalMatrix([[1, "1/2"], [0, -3]])
        assert m[0, 1] == Fraction(1, 2)
        assert all(isinstance(v, Fraction) for v in m.entries.reshape(-1))

    @pytest.mark.unit
    def test_float_entries_refused(self):
        """Test that floats never enter an exact matrix."""
        with pytest.raises(StructureError):
            RationalMatrix([[0.5, 1]])

    @pytest.mark.unit
    def test_matrices_are_read_only(self):
        """Test that a matrix cannot be modified in place."""
        m = RationalMatrix.identity(2)
        with pytest.raises(ValueError):
            m.entries[0, 0] = Fraction(5)

    @pytest.mark.unit
    def test_matmul_matches_hand_product(self):
        """Test the exact product against a hand computation."""
        a = RationalMatrix([[1, 2], [0, "1/3"]])
        b = RationalMatrix([[3, 0], [1, 6]])
        assert matmul(a, b) == RationalMatrix([[5, 12], ["1/3", 2]])

    @pytest.mark.unit
    def test_apply_vector(self):
        """Test matrix-vector application."""
        m = RationalMatrix([[1, 1], [0, 2]])
        out = m.apply(rational_vector([1, "1/2"]))
        assert list(out) == [Fraction(3, 2), Fraction(1)]

    @pytest.mark.unit
    def test_shape_mismatch(self):
        """Test that incompatible shapes are rejected."""
        with pytest.raises(StructureError):
            matmul(RationalMatrix.zeros(2, 3), RationalMatrix.zeros(2, 3))
        with pytest.raises(StructureError):
            RationalMatrix.identity(2).apply(rational_vector([1, 2, 3]))


class TestRowReduction:
    """Test RREF, rank and solving."""

    @pytest.mark.unit
    def test_rref_known_matrix(self):
        """Test the reduced form of a rank-2 matrix."""
        r, pivots, reduced = rref(RationalMatrix([[2, 4, 2], [1, 2, 3], [3, 6, 5]]))
        assert r == 2
        assert pivots == [0, 2]
        assert reduced == RationalMatrix([[1, 2, 0], [0, 0, 1], [0, 0, 0]])

    @pytest.mark.unit
    def test_kernel_of_known_matrix(self):
        """Test the canonical kernel vector: free coordinate 1, pivots read off."""
        basis = kernel_basis(RationalMatrix([[2, 4, 2], [1, 2, 3], [3, 6, 5]]))
        assert basis.dim == 1
        assert list(basis.vectors[0]) == [Fraction(-2), Fraction(1), Fraction(0)]

    @pytest.mark.unit
    def test_solve_consistent_system(self):
        """Test that the particular solution vanishes on free coordinates."""
        m = RationalMatrix([[1, 1, 0], [0, 0, 1]])
        x = solve(m, [3, "1/2"])
        assert list(x) == [Fraction(3), Fraction(0), Fraction(1, 2)]

    @pytest.mark.unit
    def test_solve_inconsistent_system(self):
        """Test that an inconsistent system returns None."""
        m = RationalMatrix([[1, 1], [2, 2]])
        assert solve(m, [1, 3]) is None

    @pytest.mark.unit
    def test_empty_matrices(self):
        """Test zero-sized matrices."""
        assert rank(RationalMatrix.zeros(0, 4)) == 0
        assert kernel_basis(RationalMatrix.zeros(0, 3)).dim == 3
        assert column_space_basis(RationalMatrix.zeros(3, 0)).dim == 0


class TestSubspaces:
    """Test subspace bases, quotients and reduction."""

    @pytest.mark.unit
    def test_dependent_family_refused(self):
        """Test that a dependent family is not a basis."""
        with pytest.raises(StructureError):
            SubspaceBasis(2, [rational_vector([1, 2]), rational_vector([2, 4])])

    @pytest.mark.unit
    def test_reduce_mod_subspace(self):
        """Test canonical representatives of cosets."""
        basis = SubspaceBasis(3, [rational_vector([1, 1, 0])])
        first = reduce_mod_subspace(rational_vector([2, 3, 1]), basis)
        second = reduce_mod_subspace(rational_vector([0, 1, 1]), basis)
        assert list(first) == list(second)
        assert is_zero_vector(reduce_mod_subspace(rational_vector([5, 5, 0]), basis))

    @pytest.mark.unit
    def test_quotient_dim_contract(self):
        """Test that a boundary outside the cycles is a broken contract."""
        cycles = SubspaceBasis(2, [rational_vector([1, 0])])
        boundaries = SubspaceBasis(2, [rational_vector([0, 1])])
        with pytest.raises(ContractViolation):
            quotient_dim(cycles, boundaries)

    @pytest.mark.unit
    def test_express_in_basis(self):
        """Test coordinates with respect to a basis."""
        basis = SubspaceBasis(2, [rational_vector([1, 1]), rational_vector([0, 2])])
        coords = express_in_basis(basis, [rational_vector([1, 3])])
        assert coords.to_lists() == [[Fraction(1)], [Fraction(1)]]
        with pytest.raises(ContractViolation):
            express_in_basis(SubspaceBasis(2, [rational_vector([1, 0])]), [rational_vector([0, 1])])


class TestLinalgProperties:
    """Property-based checks over random matrices of fractions n/d with |n|, d <= 10."""

    @pytest.mark.unit
    @settings(max_examples=1000, deadline=None, suppress_health_check=SLOW_DRAWS)
    @given(rational_matrices())
    def test_rank_nullity(self, m):
        """Test rank + dim ker = number of columns."""
        assert rank(m) + kernel_basis(m).dim == m.cols

    @pytest.mark.unit
    @settings(max_examples=200, deadline=None, suppress_health_check=SLOW_DRAWS)
    @given(rational_matrices())
    def test_kernel_vectors_are_annihilated(self, m):
        """Test that every kernel basis vector maps to zero."""
        for vec in kernel_basis(m):
            assert is_zero_vector(m.apply(vec))

    @pytest.mark.unit
    @settings(max_examples=200, deadline=None, suppress_health_check=SLOW_DRAWS)
    @given(rational_matrices(), st.lists(small_fractions, min_size=MAX_DIM, max_size=MAX_DIM))
    def test_solve_finds_preimages_of_images(self, m, coeffs):
        """Test that solve recovers a preimage of any vector in the image."""
        x = rational_vector(coeffs[:m.cols])
        b = m.apply(x)
        found = solve(m, b)
        assert found is not None
        assert list(m.apply(found)) == list(b)

    @pytest.mark.unit
    @settings(max_examples=200, deadline=None, suppress_health_check=SLOW_DRAWS)
    @given(rational_matrices())
    def test_column_space_rank(self, m):
        """Test that the image basis has dimension rank(m)."""
        assert column_space_basis(m).dim == rank(m)

    @pytest.mark.unit
    @settings(max_examples=300, deadline=None, suppress_health_check=SLOW_DRAWS)
    @given(st.data())
    def test_reduction_agrees_with_rank(self, data):
        """Test that v reduces to zero mod the image exactly when appending v keeps the rank."""
        m = data.draw(rational_matrices(max_cols=MAX_DIM - 1))
        if data.draw(st.booleans()):
            x = data.draw(st.lists(small_fractions, min_size=m.cols, max_size=m.cols))
            v = m.apply(rational_vector(x))
        else:
            v = rational_vector(data.draw(st.lists(entries, min_size=m.rows, max_size=m.rows)))
        image = column_space_basis(m)
        reduced = reduce_mod_subspace(v, image)
        extended = RationalMatrix.from_columns(m.rows, [m.column(j) for j in range(m.cols)] + [v])
        assert is_zero_vector(reduced) == (rank(extended) == rank(m))
        assert list(reduce_mod_subspace(reduced, image)) == list(reduced)
