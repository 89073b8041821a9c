"""Unit tests for the exact scalar tower: Gaussian rationals, sparse
multivariate (Laurent-in-q) polynomials, guarded rational scalars, and
truncated jets."""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qlob.scalars import (
    PARAMS, GaussianRational, MPoly, Scalar, Jet,
    DenominatorVanishes, DivisorNotRegistered, MissingAssignment,
    ScalarError,
    jet_exp, jet_substitute, expand_q, rational_sqrt,
)

Q = Scalar.param("q")
H = Scalar.param("h")
ALPHA = Scalar.param("alpha")
I = Scalar.of(GaussianRational(0, 1))

fractions = st.fractions(
    min_value=-50, max_value=50, max_denominator=12)
gaussians = st.builds(GaussianRational, fractions, fractions)


# -- GaussianRational -------------------------------------------------

class TestGaussianRational:
    def test_arithmetic(self):
        a = GaussianRational(Fraction(1, 2), Fraction(3))
        b = GaussianRational(2, Fraction(-1, 3))
        assert a + b == GaussianRational(Fraction(5, 2), Fraction(8, 3))
        assert a - b == GaussianRational(Fraction(-3, 2), Fraction(10, 3))
        # (1/2 + 3i)(2 - i/3) = 1 + i + 6i + 1 = 2 + 35i/6
        assert a * b == GaussianRational(2, Fraction(35, 6))

    def test_division_inverts_multiplication(self):
        a = GaussianRational(3, -4)
        b = GaussianRational(Fraction(1, 5), 2)
        assert (a * b) / b == a

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(1) / GaussianRational(0)

    def test_conj(self):
        a = GaussianRational(2, 5)
        assert a.conj() == GaussianRational(2, -5)
        assert (a * a.conj()).im == 0

    @given(gaussians, gaussians)
    def test_mul_commutes(self, a, b):
        assert a * b == b * a

    @given(gaussians, gaussians, gaussians)
    @settings(max_examples=40)
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(gaussians)
    def test_conj_is_involution(self, a):
        assert a.conj().conj() == a


# -- MPoly ------------------------------------------------------------

class TestMPoly:
    def test_param_and_arithmetic(self):
        q = MPoly.param("q")
        h = MPoly.param("h")
        p = (q + h) * (q - h)
        assert p == q * q - h * h

    def test_laurent_only_in_q(self):
        assert MPoly.param("q", -2) * MPoly.param("q", 2) == MPoly.const(1)
        with pytest.raises(ScalarError):
            MPoly.param("h", -1)

    def test_eval(self):
        q = MPoly.param("q")
        h = MPoly.param("h")
        p = q * q + h.scale(GaussianRational(0, 1))
        val = p.eval({"q": GaussianRational(Fraction(2)),
                      "h": GaussianRational(Fraction(1, 3))})
        assert val == GaussianRational(4, Fraction(1, 3))

    def test_eval_missing_assignment(self):
        with pytest.raises(MissingAssignment):
            MPoly.param("alpha").eval({"q": GaussianRational(1)})

    def test_exact_div(self):
        q = MPoly.param("q")
        h = MPoly.param("h")
        p = (q + h) * (q + h) * h
        assert p.exact_div(q + h) == (q + h) * h
        assert p.exact_div(q - h) is None

    def test_conj_unitary_q(self):
        q = MPoly.param("q")
        i_q = q.scale(GaussianRational(0, 1))
        # plain conj: only the coefficient is conjugated
        assert i_q.conj() == q.scale(GaussianRational(0, -1))
        # unitary-q conj additionally inverts q
        assert i_q.conj(unitary_q=True) == \
            MPoly.param("q", -1).scale(GaussianRational(0, -1))


# -- Scalar -----------------------------------------------------------

class TestScalar:
    def test_field_arithmetic(self):
        x = (Q + 1) / Q
        y = Q / (Q + 1)
        assert x * y == Scalar.one()
        assert (x - x).is_zero

    def test_registered_denominators_allowed(self):
        for d in (Q, H, Scalar.param("y0"), Scalar.param("delta"),
                  Q + 1, H * H + 1):
            assert (Scalar.one() / d) * d == Scalar.one()
        # products and powers of registered factors are fine too
        assert ((Q + 1) / (Q * Q * (H * H + 1))) is not None

    def test_unregistered_denominator_rejected(self):
        with pytest.raises(DivisorNotRegistered):
            Scalar.one() / (Q + H)
        with pytest.raises(DivisorNotRegistered):
            Scalar.one() / ALPHA

    def test_div_unchecked_bypasses_registry(self):
        x = Scalar.one()._div_unchecked(Q + H)
        assert x * (Q + H) == Scalar.one()

    def test_exact_cancellation(self):
        # (q^2 - 1)/(q + 1) collapses to the polynomial q - 1
        x = (Q * Q - 1) / (Q + 1)
        assert x == Q - 1

    def test_eval(self):
        x = (Q * Q - 1) / Q
        assert x.eval({"q": GaussianRational(Fraction(2))}) == \
            GaussianRational(Fraction(3, 2))

    def test_eval_vanishing_denominator(self):
        x = Scalar.one() / (Q + 1)
        with pytest.raises(DenominatorVanishes):
            x.eval({"q": GaussianRational(Fraction(-1))})

    def test_substitute(self):
        x = Q * Q + H
        assert x.substitute("q", H) == H * H + H
        # substitution may leave other parameters untouched
        assert x.substitute("h", Scalar.of(Fraction(1, 2))) == \
            Q * Q + Scalar.of(Fraction(1, 2))

    def test_conj(self):
        x = I * Q + H
        assert x.conj() == -I * Q + H
        assert x.conj(unitary_q=True) == \
            -I * Scalar.param("q", -1) + H

    def test_params_index_contract(self):
        # "s" is the formal square-root marker used by the normal form
        assert PARAMS.index("s") == 11
        assert {"q", "h", "y0", "delta"} <= set(PARAMS)

    @given(st.integers(-20, 20), st.integers(-20, 20),
           st.integers(1, 10))
    @settings(max_examples=40)
    def test_rational_embedding_is_homomorphic(self, a, b, d):
        x, y = Scalar.of(Fraction(a, d)), Scalar.of(Fraction(b, d))
        assert x + y == Scalar.of(Fraction(a + b, d))
        assert x * y == Scalar.of(Fraction(a, d) * Fraction(b, d))


# -- Jets -------------------------------------------------------------

class TestJet:
    def test_exp_multiplicativity(self):
        # exp(2h) * exp(3h) == exp(5h) as order-6 jets
        two, three, five = (Scalar.of(n) for n in (2, 3, 5))
        assert jet_exp(two, "h", 6) * jet_exp(three, "h", 6) == \
            jet_exp(five, "h", 6)

    def test_inverse(self):
        j = jet_exp(Scalar.of(1), "h", 5)
        assert j * j.inverse() == Jet.const(Scalar.one(), "h", 5)

    def test_inverse_requires_unit_constant_term(self):
        j = Jet.variable("h", 4)
        with pytest.raises(ZeroDivisionError):
            j.inverse()

    def test_jet_substitute_expands_q(self):
        # q = exp(-2h): q |-> 1 - 2h + 2h^2 + O(h^3)
        j = jet_substitute(Q, "h", {"q": jet_exp(Scalar.of(-2), "h", 2)}, 2)
        assert j.coeffs[0] == Scalar.one()
        assert j.coeffs[1] == Scalar.of(-2)
        assert j.coeffs[2] == Scalar.of(2)

    def test_jet_substitute_keeps_unmapped_params(self):
        j = jet_substitute(ALPHA * H, "h",
                           {"h": Jet.variable("h", 3)}, 3)
        assert j.coeffs[1] == ALPHA

    def test_jet_substitute_negative_power(self):
        # 1/q at q = exp(h) is exp(-h)
        j = jet_substitute(Scalar.param("q", -1), "h",
                           {"q": jet_exp(Scalar.of(1), "h", 4)}, 4)
        assert j == jet_exp(Scalar.of(-1), "h", 4)

    def test_expand_q_defaults(self):
        # expand_q uses the module's canonical q = exp(-2h) convention
        j = expand_q(Q, 1)
        assert j.coeffs[0] == Scalar.one()


class TestRationalSqrt:
    def test_perfect_square(self):
        assert rational_sqrt(Fraction(49, 9)) == Fraction(7, 3)

    def test_non_square(self):
        assert rational_sqrt(Fraction(2)) is None
        assert rational_sqrt(Fraction(5, 7)) is None

    @given(st.integers(1, 300), st.integers(1, 300))
    @settings(max_examples=50)
    def test_square_roundtrip(self, a, b):
        f = Fraction(a, b)
        assert rational_sqrt(f * f) == f
