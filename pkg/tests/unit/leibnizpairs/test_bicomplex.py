"""
Unit tests for the pair and Poisson bicomplexes.

Checks layouts, individual coboundaries against hand computations, D^2 = 0
and the identities tying the Poisson bottom row to the pair complex.
"""

import pytest
from fractions import Fraction

from leibnizpairs import catalog
from leibnizpairs.bicomplex import (
    LEIBNIZ,
    POISSON,
    Bidegree,
    LeibnizBicomplex,
    PoissonBicomplex,
    TotalCochain,
    antisymmetrizer,
    check_complex,
    dim_cpq,
    embed_exterior,
    make_bicomplex,
)
from leibnizpairs.errors import StructureError
from leibnizpairs.linalg import is_zero_vector, matmul, zero_vector


def elementary(complex_, d, args, lie_args, target, value=1):
    """Cochain with a single nonzero coordinate."""
    vec = zero_vector(complex_.dim(d))
    vec[complex_.index(d, args, lie_args, target)] = Fraction(value)
    return complex_.cochain(d, vec)


class TestBidegree:
    """Test bidegree validation."""

    @pytest.mark.unit
    def test_poisson_has_no_column_zero(self):
        """Test that the Poisson complex starts at p = 1."""
        with pytest.raises(StructureError):
            Bidegree(0, 1, POISSON)

    @pytest.mark.unit
    def test_bottom_row_degree_zero(self):
        """Test the bottom slot Hom(Λ^0 A, M) at (1, -1)."""
        d = Bidegree(1, -1, POISSON)
        assert d.is_bottom
        assert d.total == 0
        with pytest.raises(StructureError):
            Bidegree(2, -1, POISSON)

    @pytest.mark.unit
    def test_unknown_branch(self):
        """Test that only the two branches exist."""
        with pytest.raises(StructureError):
            Bidegree(1, 0, "lie")


class TestLayout:
    """Test cochain space dimensions."""

    @pytest.mark.unit
    def test_dual_pair_dimensions(self, dual_pair):
        """Test that only the column of Hochschild cochains survives for L = 0."""
        complex_ = LeibnizBicomplex(dual_pair)
        assert [complex_.total_dim(n) for n in range(4)] == [0, 4, 8, 16]

    @pytest.mark.unit
    def test_pair1_dimensions(self, pair1):
        """Test C^{p,q} dimensions for a one-dimensional L."""
        complex_ = LeibnizBicomplex(pair1)
        assert complex_.dim(Bidegree(0, 0)) == 1
        assert complex_.dim(Bidegree(0, 2)) == 0
        assert complex_.dim(Bidegree(2, 1)) == 8
        assert [complex_.total_dim(n) for n in range(3)] == [1, 5, 12]

    @pytest.mark.unit
    def test_matrix_pair_dimensions(self):
        """Test total dimensions of (M_2(Q), sl_2)."""
        complex_ = LeibnizBicomplex(catalog.matrix2_pair())
        assert [complex_.total_dim(n) for n in range(5)] == [3, 25, 121, 499, 2000]

    @pytest.mark.unit
    def test_poisson_layout_puts_bottom_first(self, pois3):
        """Test the block order and sizes of the Poisson complex."""
        complex_ = PoissonBicomplex(pois3)
        blocks = complex_.layout(2)
        assert [b.bidegree for b in blocks] == [Bidegree(1, 1, POISSON), Bidegree(2, 0, POISSON)]
        assert [b.size for b in blocks] == [9, 27]
        assert [b.offset for b in blocks] == [0, 9]
        assert [complex_.total_dim(n) for n in range(4)] == [3, 9, 36, 165]

    @pytest.mark.unit
    def test_dim_cpq_dispatch(self, pois3):
        """Test the module-level dimension helper on both branches."""
        assert dim_cpq(pois3, None, Bidegree(2, 1, POISSON)) == 81
        assert dim_cpq(pois3, None, Bidegree(2, 1, LEIBNIZ)) == 81
        assert dim_cpq(pois3, None, Bidegree(0, 1, LEIBNIZ)) == 9


class TestCoboundaries:
    """Test individual differentials against hand computations."""

    @pytest.mark.unit
    def test_hochschild_sign(self, dual_pair):
        """Test δφ(x, x) = xφ(x) + φ(x)x = 2x for φ(x) = 1."""
        complex_ = LeibnizBicomplex(dual_pair)
        phi = elementary(complex_, Bidegree(1, 0), (1,), (), 0)
        image = complex_.delta_H(phi)
        assert image.coeffs[complex_.index(Bidegree(2, 0), (1, 1), (), 1)] == 2
        assert image.coeffs[complex_.index(Bidegree(2, 0), (1, 1), (), 0)] == 0
        assert image.coeffs[complex_.index(Bidegree(2, 0), (0, 1), (), 1)] == 0

    @pytest.mark.unit
    def test_chevalley_eilenberg_of_identity(self, q_sl2):
        """Test δ(id)(x, y) = [x, y] on Hom(L, L)."""
        complex_ = LeibnizBicomplex(q_sl2)
        d = Bidegree(0, 1)
        vec = zero_vector(complex_.dim(d))
        for s in range(3):
            vec[complex_.index(d, (), (s,), s)] = Fraction(1)
        image = complex_.delta_CE(complex_.cochain(d, vec))
        target = Bidegree(0, 2)
        h, e, f = 0, 1, 2
        assert image.coeffs[complex_.index(target, (), (h, e), e)] == 2
        assert image.coeffs[complex_.index(target, (), (h, f), f)] == -2
        assert image.coeffs[complex_.index(target, (), (e, f), h)] == 1
        assert image.coeffs[complex_.index(target, (), (e, f), e)] == 0

    @pytest.mark.unit
    def test_vertical_map(self, pair1):
        """Test δ_v(d)(a) = [d, a], so δ_v(d)(x) = x."""
        complex_ = LeibnizBicomplex(pair1)
        image = complex_.delta_v(elementary(complex_, Bidegree(0, 0), (), (), 0))
        assert image.bidegree == Bidegree(1, 0)
        assert image.coeffs[complex_.index(Bidegree(1, 0), (1,), (), 1)] == 1
        assert image.coeffs[complex_.index(Bidegree(1, 0), (0,), (), 0)] == 0

    @pytest.mark.unit
    def test_lie_action_on_cochain(self, pair1):
        """Test [d, φ] = d.φ - φ∘d on a 1-cochain: for φ = id, [d, id] = 0."""
        complex_ = LeibnizBicomplex(pair1)
        d = Bidegree(1, 0)
        vec = zero_vector(complex_.dim(d))
        for a in range(2):
            vec[complex_.index(d, (a,), (), a)] = Fraction(1)
        result = complex_.lie_action_on_cochain([Fraction(1)], complex_.cochain(d, vec))
        assert result.is_zero()

    @pytest.mark.unit
    def test_epsilon_star_antisymmetry(self, pois3):
        """Test (ε*f)(x|y) = m, (ε*f)(y|x) = -m, (ε*f)(x|x) = 0 for f(x∧y) = m."""
        complex_ = PoissonBicomplex(pois3)
        pair_complex = complex_.regular_pair_complex()
        x, y = 1, 2
        f = elementary(complex_, Bidegree(1, 1, POISSON), (), (x, y), 0, value="3/2")
        image = complex_.epsilon_star(f)
        assert image.bidegree == Bidegree(1, 1)
        assert image.coeffs[pair_complex.index(Bidegree(1, 1), (x,), (y,), 0)] == Fraction(3, 2)
        assert image.coeffs[pair_complex.index(Bidegree(1, 1), (y,), (x,), 0)] == Fraction(-3, 2)
        assert image.coeffs[pair_complex.index(Bidegree(1, 1), (x,), (x,), 0)] == 0

    @pytest.mark.unit
    @pytest.mark.parametrize("dim,q", [(2, 2), (3, 2), (3, 3)])
    def test_antisymmetrizer_is_idempotent(self, dim, q):
        """Test ε∘ε = ε and that ε fixes embedded exterior tensors."""
        eps = antisymmetrizer(dim, q)
        assert matmul(eps, eps) == eps
        embedded = embed_exterior(dim, q)
        assert matmul(eps, embedded) == embedded

    @pytest.mark.unit
    def test_bottom_row_rejects_delta_H(self, pois3):
        """Test that the bottom row carries δ_P rather than δ_H."""
        complex_ = PoissonBicomplex(pois3)
        with pytest.raises(StructureError):
            complex_.delta_H(complex_.cochain(Bidegree(1, 1, POISSON)))


# total dimension in degree 5 runs into the thousands
SLOW_EXAMPLES = {"matrix2", "pois3"}


class TestSquareZero:
    """Test D_{n+1} D_n = 0 on every example."""

    @pytest.mark.unit
    @pytest.mark.parametrize("name", [
        pytest.param(name, marks=pytest.mark.slow) if name in SLOW_EXAMPLES else name
        for name in sorted(catalog.CATALOG)
    ])
    def test_leibniz_branch(self, name):
        """Test the pair complex of every catalogue entry with its regular module through degree 4."""
        check_complex(make_bicomplex(catalog.CATALOG[name]()), 4)

    @pytest.mark.unit
    def test_trivial_coefficients(self, pair1):
        """Test the pair complex with (M, P) = (A, 0)."""
        check_complex(LeibnizBicomplex(pair1, catalog.trivial_coefficients(pair1)), 3)

    @pytest.mark.unit
    @pytest.mark.parametrize("name", ["pois3", "dual0"])
    def test_poisson_branch(self, name):
        """Test the modified Poisson complex through degree 4."""
        check_complex(make_bicomplex(catalog.CATALOG[name](), branch=POISSON), 4)

    @pytest.mark.unit
    def test_poisson_on_leibniz_branch(self, pois3):
        """Test that a Poisson algebra on the leibniz branch is the pair (A, A_Lie)."""
        complex_ = make_bicomplex(pois3)
        assert isinstance(complex_, LeibnizBicomplex)
        assert complex_.pair.L.dim == pois3.A.dim

    @pytest.mark.unit
    def test_poisson_branch_needs_poisson_algebra(self, pair1):
        """Test that the poisson branch refuses a plain pair."""
        with pytest.raises(StructureError):
            make_bicomplex(pair1, branch=POISSON)


class TestPoissonIdentities:
    """Test the anticommutation identities behind the modified complex."""

    @pytest.mark.unit
    @pytest.mark.parametrize("name", ["pois3", "dual0"])
    @pytest.mark.parametrize("q", [0, 1, 2, 3])
    def test_epsilon_star_intertwines(self, name, q):
        """Test δ_CE ε* + ε* δ_CE = -δ_v on C^{0,q} of (A, A_Lie)."""
        complex_ = PoissonBicomplex(catalog.CATALOG[name]())
        assert complex_.proposition_defect(q).is_zero()

    @pytest.mark.unit
    @pytest.mark.parametrize("name", ["pois3", "dual0"])
    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_delta_P_anticommutes(self, name, q):
        """Test δ_CE δ_P + δ_P δ_CE = 0 on Hom(Λ^q A, M)."""
        complex_ = PoissonBicomplex(catalog.CATALOG[name]())
        assert complex_.theorem_defect(q).is_zero()

    @pytest.mark.unit
    def test_wrong_sign_is_detected(self, pois3, monkeypatch):
        """Test that the opposite global sign leaves a nonzero defect."""
        monkeypatch.setattr("leibnizpairs.bicomplex.PROPOSITION_SIGN", 1)
        assert not PoissonBicomplex(pois3).proposition_defect(0).is_zero()


class TestTotalCochain:
    """Test block vectors of total cochains."""

    @pytest.mark.unit
    def test_vector_round_trip(self, pois3):
        """Test that from_vector and to_vector are inverse."""
        complex_ = PoissonBicomplex(pois3)
        vec = zero_vector(complex_.total_dim(2))
        vec[3] = Fraction(1)
        vec[20] = Fraction(-2)
        cochain = TotalCochain.from_vector(complex_, 2, vec)
        assert not cochain.is_zero()
        assert list(cochain.to_vector(complex_)) == list(vec)
        assert is_zero_vector(TotalCochain(2, POISSON).to_vector(complex_))
