"""Unit tests for the free-algebra layer: alphabets with tensor legs,
noncommutative elements, and (anti)homomorphisms."""
import pytest
from hypothesis import given, settings, strategies as st

from qlob.ncalg import (
    Alphabet, NCElem, Morphism, AlphabetMismatch, UnmappedLetter,
    tensor_elem, tensor_morphism, flatten, scalar_counit,
)
from qlob.scalars import Scalar

Q = Scalar.param("q")


@pytest.fixture
def alph():
    return Alphabet([("a", "b", "c")])


@pytest.fixture
def gens(alph):
    return tuple(NCElem.gen(alph, n) for n in ("a", "b", "c"))


class TestAlphabet:
    def test_letter_lookup_and_display(self, alph):
        la = alph.letter("a")
        assert alph.display(la) == "a"

    def test_tensor_legs_display_with_primes(self, alph):
        T = alph.tensor(alph)
        assert T.display(T.letter("b", 1)) == "b'"
        assert T.letter("b", 0) != T.letter("b", 1)

    def test_canonical_sorts_across_legs(self, alph):
        # letters on different legs commute: the canonical word form
        # moves leg-0 letters before leg-1 letters
        T = alph.tensor(alph)
        w = (T.letter("b", 1), T.letter("a", 0))
        assert T.canonical(w) == (T.letter("a", 0), T.letter("b", 1))

    def test_flattened_merges_legs(self, alph):
        F = alph.tensor(alph).flattened()
        assert len(F.legs) == 1
        assert F.letter("a'") is not None


class TestNCElem:
    def test_noncommutative_product(self, gens):
        a, b, _ = gens
        assert a * b != b * a
        assert (a * b - b * a) + (b * a - a * b) == \
            NCElem.zero(a.alphabet)

    def test_word_constructor(self, alph, gens):
        a, b, c = gens
        assert NCElem.word(alph, ("a", "b", "c")) == a * b * c

    def test_scalar_action(self, gens):
        a, b, _ = gens
        x = (a * b).scale(Q) + a.scale(Scalar.of(3))
        assert x.scale(Scalar.zero()).is_zero
        assert x - x == x.scale(Scalar.zero())

    def test_degree(self, alph, gens):
        a, b, _ = gens
        assert (a * b * a + b).degree() == 3
        assert NCElem.zero(alph).degree() == 0
        assert a.alphabet.canonical((0,)) == (0,)

    def test_substitute_param(self, gens):
        a, _, _ = gens
        x = a.scale(Q * Q)
        assert x.substitute_param("q", Scalar.of(2)) == a.scale(Scalar.of(4))

    def test_mixed_alphabet_rejected(self, alph, gens):
        other = Alphabet([("x", "y")])
        with pytest.raises(AlphabetMismatch):
            gens[0] + NCElem.gen(other, "x")

    def test_tensor_elem_bilinear(self, alph, gens):
        a, b, _ = gens
        T = alph.tensor(alph)
        lhs = tensor_elem(a + b, a, T)
        assert lhs == tensor_elem(a, a, T) + tensor_elem(b, a, T)

    def test_flatten_maps_legs_to_primes(self, alph, gens):
        a, b, _ = gens
        T = alph.tensor(alph)
        F = T.flattened()
        x = flatten(tensor_elem(a * b, b, T))
        assert x == NCElem.word(F, ("a", "b", "b'"))


class TestMorphism:
    def test_hom_respects_products(self, alph, gens):
        a, b, c = gens
        phi = Morphism(alph, alph, {"a": b, "b": c, "c": a})
        assert phi(a * b + c.scale(Q)) == b * c + a.scale(Q)

    def test_antihom_reverses_words(self, alph, gens):
        a, b, _ = gens
        kappa = Morphism(alph, alph, {"a": a, "b": b, "c": gens[2]},
                         kind="antihom")
        assert kappa(a * b) == b * a

    def test_antilinear_conjugates_coeffs(self, alph, gens):
        a, _, _ = gens
        star = Morphism(alph, alph, {"a": a, "b": gens[1], "c": gens[2]},
                        kind="antihom", linearity="antilinear")
        from qlob.scalars import GaussianRational
        I = Scalar.of(GaussianRational(0, 1))
        assert star(a.scale(I)) == a.scale(-I)

    def test_unmapped_letter(self, alph, gens):
        with pytest.raises((UnmappedLetter, KeyError)):
            Morphism(alph, alph, {"a": gens[0]})(gens[1])

    def test_tensor_morphism_acts_legwise(self, alph, gens):
        a, b, c = gens
        phi = Morphism(alph, alph, {"a": b, "b": a, "c": c})
        psi = Morphism(alph, alph, {"a": c, "b": b, "c": a})
        T = alph.tensor(alph)
        tm = tensor_morphism(phi, psi)
        assert tm(tensor_elem(a, a, T)) == tensor_elem(b, c, T)

    def test_scalar_counit(self, alph, gens):
        a, b, c = gens
        eps = scalar_counit({"a": Scalar.one(), "b": Scalar.zero(),
                             "c": Scalar.of(2)}, alph)
        assert eps(a * c + b) == Scalar.of(2)


@given(st.lists(st.sampled_from(["a", "b", "c"]), max_size=4),
       st.lists(st.sampled_from(["a", "b", "c"]), max_size=4))
@settings(max_examples=40)
def test_word_product_concatenates(w1, w2):
    alph = Alphabet([("a", "b", "c")])
    x = NCElem.word(alph, w1) * NCElem.word(alph, w2)
    assert x == NCElem.word(alph, list(w1) + list(w2))
