"""Tests for the commutative Poisson layer: bracket tables, Jacobi,
multiplicativity, covariance, the closed subfamily maps, and the
hyperboloid geometry."""
from fractions import Fraction

import pytest

from qlob.poisson import (
    CommRing, CommPoly, PoissonStructure, NotInSubalgebra,
    sl2_ring, h_ring, group_structure, plane_structure,
    invariant_structure, check_ideal_compat, check_jacobi,
    check_multiplicative, check_covariant, subalgebra_brackets,
    kan_vanishing, geometry_triple, geometry_suite,
    LAM, MU, PARAM_MAP, PAPER_MU,
)
from qlob.report import PASS
from qlob.scalars import Scalar

FAMILIES = ("A", "K", "N")


def _ids(rep):
    return {r.id: r.status for r in rep}


class TestCommPoly:
    def test_ring_reduction(self):
        ring = sl2_ring()  # ad - bc = 1, oriented ad -> bc + 1
        a, b, c, d = (ring.var(n) for n in "abcd")
        assert a * d - b * c == ring.one()

    def test_distinct_ring_objects_do_not_mix(self):
        from qlob.poisson import PoissonError
        r1, r2 = h_ring(True), h_ring(True)
        with pytest.raises(PoissonError):
            r1.var("A") * r2.var("D")

    def test_h_ring_ideal(self):
        ring = h_ring(with_ideal=True)
        A, B, D = ring.var("A"), ring.var("B"), ring.var("D")
        assert A * D - B * B == ring.one()

    def test_h_ring_free(self):
        ring = h_ring(with_ideal=False)
        A, B, D = ring.var("A"), ring.var("B"), ring.var("D")
        assert A * D - B * B != ring.one()


class TestGroupStructures:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_jacobi(self, family):
        assert check_jacobi(group_structure(family)).ok

    @pytest.mark.parametrize("family", FAMILIES)
    def test_ideal_compat(self, family):
        assert check_ideal_compat(group_structure(family)).ok

    @pytest.mark.parametrize("family", FAMILIES)
    def test_multiplicative(self, family):
        assert check_multiplicative(group_structure(family)).ok

    @pytest.mark.parametrize("family", FAMILIES)
    def test_kan_vanishing(self, family):
        assert kan_vanishing(family).ok

    def test_A_bracket_sample(self):
        # {a, d} = 2 lam b c for the first family
        P = group_structure("A")
        assert P.pair("a", "d") == \
            (P.ring.var("b") * P.ring.var("c")).scale(LAM * 2)

    def test_N_bracket_sample(self):
        # {a, c} = c^2 for the third family
        P = group_structure("N")
        c = P.ring.var("c")
        assert P.pair("a", "c") == c * c


class TestPlaneStructures:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_jacobi_and_ideal(self, family):
        P = plane_structure(family)
        assert check_jacobi(P).ok
        assert check_ideal_compat(P).ok

    @pytest.mark.parametrize("family", FAMILIES)
    def test_covariant(self, family):
        assert check_covariant(group_structure(family),
                               plane_structure(family)).ok

    def test_invariant_family_covariant_with_zero_group(self):
        import itertools
        ring = sl2_ring()
        zero = {(x, y): ring.zero()
                for x, y in itertools.combinations("abcd", 2)}
        PA0 = PoissonStructure(ring, zero, name="0")
        assert check_covariant(PA0, invariant_structure()).ok

    def test_invariant_family_jacobi(self):
        P = invariant_structure()
        assert check_jacobi(P).ok
        assert check_ideal_compat(P).ok


class TestSubalgebra:
    @pytest.mark.parametrize("family,expected", [
        ("A", lambda al, be, ga: -ga),
        ("K", lambda al, be, ga: -(al + be)),
        ("N", lambda al, be, ga: -be),
    ])
    def test_parameter_maps(self, family, expected):
        al, be, ga = (Scalar.param(n) for n in ("alpha", "beta", "gamma"))
        _, lamp, mup, rep = subalgebra_brackets(family)
        assert rep.ok
        assert mup == expected(al, be, ga)
        assert PARAM_MAP[family](al, be, ga) == mup

    @pytest.mark.parametrize("family", FAMILIES)
    def test_quadric_reduces_to_discriminant(self, family):
        # the report includes the AD - B^2 = alpha*beta - gamma^2 check
        _, _, _, rep = subalgebra_brackets(family)
        ids = _ids(rep)
        quad = [i for i in ids if "quad" in i or "disc" in i]
        assert quad and all(ids[i] == PASS for i in quad)


class TestGeometry:
    def test_triple_on_unit_quadric(self):
        x0, y0 = Scalar.param("x0"), Scalar.param("y0")
        al, be, ga = geometry_triple(x0, y0)
        assert al * be - ga * ga == Scalar.one()

    def test_suite_symbolic(self):
        assert geometry_suite().ok

    def test_suite_at_rational_point(self):
        assert geometry_suite(Scalar.of(Fraction(2, 3)),
                              Scalar.of(Fraction(5))).ok

    def test_paper_mu_shapes(self):
        x0, y0 = Scalar.param("x0"), Scalar.param("y0")
        assert PAPER_MU["A"](x0, y0) == x0 / y0
