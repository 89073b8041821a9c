"""Unit tests for bounded-degree ideal membership: echelon ground truth,
oriented rewriting, Buchberger completion, tensor leg-wise reduction,
certificate serialization, and the modular specialization path."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qlob.membership import (
    Presentation, Certificate, InconclusiveUpToD, IllFormedOrientation,
    member, member_specialized, groebner_complete, tensor_presentation,
    confluence_probe, SpecializationError, MOD_PRIME,
)
from qlob.ncalg import Alphabet, NCElem, tensor_elem
from qlob.scalars import Scalar

Q = Scalar.param("q")


def qplane(oriented=True):
    """The q-plane: y x = q x y."""
    alph = Alphabet([("x", "y")])
    x, y = NCElem.gen(alph, "x"), NCElem.gen(alph, "y")
    pres = Presentation("qplane", alph, [y * x - (x * y).scale(Q)])
    if oriented:
        pres.attach_orientation([(("y", "x"), (x * y).scale(Q))],
                                confluent=True)
    return pres


def weyl():
    """One relation without a confluent one-rule orientation over
    {x, y}: y x = x y + 1."""
    alph = Alphabet([("x", "y")])
    x, y = NCElem.gen(alph, "x"), NCElem.gen(alph, "y")
    return Presentation("weyl", alph, [y * x - x * y - pres_one(alph)])


def pres_one(alph):
    return NCElem.one(alph)


class TestEchelon:
    def test_member_of_ideal(self):
        pres = qplane(oriented=False)
        x, y = pres.gen("x"), pres.gen("y")
        elem = x * (y * x - (x * y).scale(Q)) * y
        out = member(elem, pres, degree=4)
        assert isinstance(out, Certificate)
        assert out.verify(pres, elem)

    def test_nonmember_is_inconclusive(self):
        pres = qplane(oriented=False)
        out = member(pres.gen("x"), pres, degree=4, allow_bump=False)
        assert isinstance(out, InconclusiveUpToD)
        assert not out.residual.is_zero

    def test_scaled_combination(self):
        pres = qplane(oriented=False)
        rel = pres.relations[0]
        elem = rel.scale(Q * Q) + pres.gen("y") * rel
        out = member(elem, pres, degree=4)
        assert isinstance(out, Certificate)

    def test_degree_cap_reported(self):
        pres = qplane(oriented=False)
        pres.max_echelon_degree = 2
        out = member(pres.gen("x") * pres.gen("x") * pres.gen("x"),
                     pres, degree=6)
        assert isinstance(out, InconclusiveUpToD)
        assert out.degree == 2


class TestRewrite:
    def test_rewrite_and_echelon_agree(self):
        po = qplane(oriented=True)
        pe = qplane(oriented=False)
        x, y = po.gen("x"), po.gen("y")
        rel = po.relations[0]
        for elem in (y * rel * x, rel * rel, x * rel + rel * y.scale(Q)):
            co = member(elem, po)
            ce = member(elem, pe, degree=6)
            assert isinstance(co, Certificate) and isinstance(ce, Certificate)
            assert co.verify(po, elem) and ce.verify(pe, elem)

    def test_confluent_rewrite_gives_definitive_negative(self):
        po = qplane(oriented=True)
        out = member(po.gen("x") * po.gen("y"), po)
        assert isinstance(out, InconclusiveUpToD)
        assert out.definitive

    def test_ill_formed_orientation_rejected(self):
        pres = qplane(oriented=False)
        x, y = pres.gen("x"), pres.gen("y")
        with pytest.raises(IllFormedOrientation):
            pres.attach_orientation([(("y", "x"), x * y.scale(Q + 1))])

    def test_confluence_probe(self):
        po = qplane(oriented=True)
        ok, _ = confluence_probe(po, degree=5)
        assert ok


class TestGroebner:
    def test_completion_closes_weyl(self):
        pres = weyl()
        x, y = pres.gen("x"), pres.gen("y")
        rel = pres.relations[0]
        elem = y * rel * x + rel.scale(Scalar.of(3))
        out = member(elem, pres, degree=5, use_groebner=True)
        assert isinstance(out, Certificate)
        assert out.verify(pres, elem)

    def test_completion_agrees_with_echelon_on_negatives(self):
        pres = weyl()
        probe = pres.gen("x") * pres.gen("y")
        gout = member(probe, pres, degree=5, use_groebner=True)
        eout = member(probe, pres, degree=5, allow_bump=False)
        assert isinstance(gout, InconclusiveUpToD)
        assert isinstance(eout, InconclusiveUpToD)

    def test_groebner_complete_terminates_on_qplane(self):
        rs = groebner_complete(qplane(oriented=False), degree=5)
        nf, _ = rs.reduce(NCElem.word(rs.presentation.alphabet, ("y", "x")))
        assert nf == NCElem.word(rs.presentation.alphabet,
                                 ("x", "y")).scale(Q)


class TestTensor:
    def test_legwise_membership(self):
        p = qplane(oriented=False)
        T = tensor_presentation(p, p, "qplane2")
        x, y = p.gen("x"), p.gen("y")
        rel = p.relations[0]
        Ta = T.alphabet
        elem = NCElem(Ta, {})
        lift = tensor_elem(rel * y, x, p.alphabet.tensor(p.alphabet))
        out = member(lift, T, degree=5)
        assert isinstance(out, Certificate)
        assert out.verify(T, __import__("qlob.ncalg", fromlist=["flatten"])
                          .flatten(lift))

    def test_legwise_negative(self):
        p = qplane(oriented=False)
        T = tensor_presentation(p, p, "qplane2")
        probe = tensor_elem(p.gen("x"), p.gen("y"),
                            p.alphabet.tensor(p.alphabet))
        out = member(probe, T, degree=4)
        assert isinstance(out, InconclusiveUpToD)


class TestSerialization:
    def test_round_trip(self):
        pres = qplane(oriented=False)
        rel = pres.relations[0]
        elem = pres.gen("y") * rel + rel * pres.gen("x").scale(Q)
        cert = member(elem, pres, degree=4)
        data = cert.to_data(pres)
        back = Certificate.from_data(pres, data)
        assert back.verify(pres, elem)
        assert back.to_data(pres) == data

    def test_dump_lists_summands(self):
        pres = qplane(oriented=False)
        cert = member(pres.relations[0], pres, degree=3)
        text = cert.dump(pres)
        assert "rel#0" in text
        assert len(text.splitlines()) == len(cert)


class TestSpecialized:
    def test_agrees_with_symbolic_on_members(self):
        pres = qplane(oriented=False)
        rel = pres.relations[0]
        elem = pres.gen("x") * rel - rel * pres.gen("y").scale(Q * Q)
        assert member_specialized(elem, pres, 4, {"q": Fraction(3, 7)})

    def test_rejects_nonmember(self):
        pres = qplane(oriented=False)
        assert not member_specialized(pres.gen("x") * pres.gen("y"),
                                      pres, 4, {"q": Fraction(3, 7)})

    def test_modular_prime_contract(self):
        # i must exist mod p for Gaussian coefficients
        assert MOD_PRIME % 4 == 1
        assert pow(MOD_PRIME, 1, MOD_PRIME) == 0

    @given(st.fractions(min_value=-9, max_value=9, max_denominator=9)
           .filter(lambda f: f not in (0, -1)))
    @settings(max_examples=15, deadline=None)
    def test_membership_stable_across_points(self, qv):
        pres = qplane(oriented=False)
        rel = pres.relations[0]
        elem = rel * pres.gen("x") + rel.scale(Q)
        assert member_specialized(elem, pres, 4, {"q": qv})
