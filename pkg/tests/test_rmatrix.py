"""Tests for the classical r-matrix layer: Sklyanin bracket derivation
and invariance of the Schouten term."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from qlob.rmatrix import (
    LieElem, WedgeElem, normal_form_r, sklyanin_table, sklyanin_report,
    schouten_term, schouten_invariance, random_wedge, lie_bracket_coeffs,
)
from qlob.poisson import group_structure, check_jacobi
from qlob.scalars import Scalar

FAMILIES = ("A", "K", "N")
LAM = Scalar.param("lam")


class TestLieAlgebra:
    def test_bracket_antisymmetry(self):
        x = LieElem(1, 2, 3)
        y = LieElem(-1, 5, 0)
        lhs = x.bracket(y)
        rhs = y.bracket(x)
        assert all((a + b).is_zero for a, b in zip(lhs.coeffs, rhs.coeffs))

    def test_structure_constants_jacobi(self):
        basis = [LieElem(1, 0, 0), LieElem(0, 1, 0), LieElem(0, 0, 1)]
        for x in basis:
            for y in basis:
                for z in basis:
                    j = (x.bracket(y).bracket(z).coeffs,
                         y.bracket(z).bracket(x).coeffs,
                         z.bracket(x).bracket(y).coeffs)
                    total = [sum(cs[i] for cs in j) for i in range(3)]
                    assert all(isinstance(t, Scalar) and t.is_zero
                               for t in [Scalar.of(0) + t for t in total])

    def test_matrix_representation_respects_bracket(self):
        x, y = LieElem(2, 0, 1), LieElem(0, 3, -1)
        Mx, My = x.matrix(), y.matrix()
        comm = [[sum(Mx[i][k] * My[k][j] - My[i][k] * Mx[k][j]
                     for k in range(2)) for j in range(2)]
                for i in range(2)]
        Mb = x.bracket(y).matrix()
        assert all((comm[i][j] - Mb[i][j]).is_zero
                   for i in range(2) for j in range(2))


class TestSklyanin:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_report_symbolic_in_lambda(self, family):
        rep = sklyanin_report(family)
        assert rep.ok
        assert len(rep) == 6  # all six independent bracket entries

    def test_A_sample_entry(self):
        # {a, d} = 2 lam b c
        P = sklyanin_table(normal_form_r("A"))
        b, c = P.ring.var("b"), P.ring.var("c")
        assert P.pair("a", "d") == (b * c).scale(LAM * 2)

    def test_N_sample_entry(self):
        # {a, c} = c^2
        P = sklyanin_table(normal_form_r("N"))
        c = P.ring.var("c")
        assert P.pair("a", "c") == c * c

    @pytest.mark.parametrize("family", FAMILIES)
    def test_derived_table_satisfies_jacobi(self, family):
        assert check_jacobi(sklyanin_table(normal_form_r(family))).ok

    def test_linear_combinations_still_yield_tables(self):
        r = normal_form_r("A").scale(Scalar.of(2)) + \
            normal_form_r("N").scale(Scalar.of(-3))
        P = sklyanin_table(r)  # antisymmetry consistency runs internally
        assert P.table is not None


class TestSchouten:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_normal_forms_are_invariant(self, family):
        assert schouten_invariance(normal_form_r(family), family).ok

    def test_random_wedges_invariant(self):
        # the cubic wedge power of a 3-dimensional simple algebra is the
        # trivial module, so invariance holds for every wedge element
        rng = random.Random(3)
        for _ in range(4):
            assert schouten_invariance(random_wedge(rng), "rand").ok

    def test_schouten_term_antisymmetric_slots(self):
        C = schouten_term(normal_form_r("A"))
        # C lives in the invariant cubic tensor component; swapping the
        # first two slots negates the coefficient
        for (i, j, k), v in C.items():
            w = C.get((j, i, k), Scalar.zero())
            assert (v + w).is_zero
