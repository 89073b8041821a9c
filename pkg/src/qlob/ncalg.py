"""Free associative algebras over exact scalars, with tensor legs.

Words are tuples of letter ids.  Letters of different tensor legs commute;
the canonical form of a word sorts letters by leg (stably), so pure tensors
have a unique representation.  Morphisms cover homomorphisms,
antihomomorphisms and their antilinear variants (star maps).
"""
from __future__ import annotations

from .scalars import Scalar


class AlgebraError(Exception):
    pass


class AlphabetMismatch(AlgebraError):
    pass


class UnmappedLetter(AlgebraError):
    pass


class NameCollision(AlgebraError):
    pass


class Alphabet:
    """Ordered letters distributed over tensor legs.

    ``legs`` is a sequence of name sequences; the global letter order is the
    concatenation, which also fixes monomial orders downstream.
    """

    __slots__ = ("legs", "letters", "leg_of", "_index")

    def __init__(self, legs):
        self.legs = tuple(tuple(leg) for leg in legs)
        letters, leg_of, index = [], [], {}
        for li, leg in enumerate(self.legs):
            for name in leg:
                if (li, name) in index:
                    raise NameCollision(f"duplicate letter {name} in leg {li}")
                index[(li, name)] = len(letters)
                letters.append(name)
                leg_of.append(li)
        self.letters = tuple(letters)
        self.leg_of = tuple(leg_of)
        self._index = index

    @property
    def nlegs(self):
        return len(self.legs)

    def letter(self, name: str, leg: int = 0) -> int:
        try:
            return self._index[(leg, name)]
        except KeyError:
            raise UnmappedLetter(f"no letter {name} in leg {leg}") from None

    def display(self, lid: int) -> str:
        """Name with primes marking the leg."""
        return self.letters[lid] + "'" * self.leg_of[lid]

    def tensor(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self.legs + other.legs)

    def flattened(self) -> "Alphabet":
        """Single-leg alphabet with primed names for higher legs."""
        return Alphabet([[self.display(i) for i in range(len(self.letters))]])

    def canonical(self, seq) -> tuple:
        if self.nlegs == 1:
            return tuple(seq)
        return tuple(sorted(seq, key=lambda lid: self.leg_of[lid]))

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.legs == other.legs

    def __hash__(self):
        return hash(self.legs)

    def __repr__(self):
        return f"Alphabet({self.legs})"


class NCElem:
    """Finite Scalar-linear combination of canonical words."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms=None):
        self.alphabet = alphabet
        self.terms = terms or {}

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(alphabet: Alphabet) -> "NCElem":
        return NCElem(alphabet)

    @staticmethod
    def one(alphabet: Alphabet) -> "NCElem":
        return NCElem(alphabet, {(): Scalar.one()})

    @staticmethod
    def gen(alphabet: Alphabet, name: str, leg: int = 0) -> "NCElem":
        return NCElem(alphabet, {(alphabet.letter(name, leg),): Scalar.one()})

    @staticmethod
    def word(alphabet: Alphabet, names, leg: int = 0) -> "NCElem":
        w = alphabet.canonical(alphabet.letter(n, leg) for n in names)
        return NCElem(alphabet, {w: Scalar.one()})

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "NCElem"):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch("elements over different alphabets")

    def __add__(self, other: "NCElem") -> "NCElem":
        self._check(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w)
            s = c if s is None else s + c
            if s.is_zero:
                t.pop(w, None)
            else:
                t[w] = s
        return NCElem(self.alphabet, t)

    def __sub__(self, other: "NCElem") -> "NCElem":
        return self + (-other)

    def __neg__(self):
        return NCElem(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other: "NCElem") -> "NCElem":
        self._check(other)
        t: dict = {}
        alph = self.alphabet
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = alph.canonical(w1 + w2)
                c = c1 * c2
                s = t.get(w)
                s = c if s is None else s + c
                if s.is_zero:
                    t.pop(w, None)
                else:
                    t[w] = s
        return NCElem(self.alphabet, t)

    def scale(self, s) -> "NCElem":
        s = Scalar.of(s)
        if s.is_zero:
            return NCElem.zero(self.alphabet)
        return NCElem(self.alphabet,
                      {w: c * s for w, c in self.terms.items()})

    @property
    def is_zero(self):
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, NCElem):
            return NotImplemented
        if self.alphabet != other.alphabet:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(c == other.terms[w] for w, c in self.terms.items())

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    # -- maps ---------------------------------------------------------
    def map_coeffs(self, fn) -> "NCElem":
        t = {}
        for w, c in self.terms.items():
            v = fn(c)
            if not v.is_zero:
                t[w] = v
        return NCElem(self.alphabet, t)

    def substitute_param(self, name: str, value) -> "NCElem":
        value = Scalar.of(value)
        return self.map_coeffs(lambda c: c.substitute(name, value))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            ws = ".".join(self.alphabet.display(l) for l in w) or "1"
            parts.append(f"({c})*{ws}" if ws != "1" else f"({c})")
        return " + ".join(parts)

    __repr__ = __str__


def tensor_elem(x: NCElem, y: NCElem, target: Alphabet = None) -> NCElem:
    """x (x) y over the tensor alphabet."""
    if target is None:
        target = x.alphabet.tensor(y.alphabet)
    nx = len(x.alphabet.letters)
    t = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            w = target.canonical(w1 + tuple(l + nx for l in w2))
            c = c1 * c2
            if not c.is_zero:
                t[w] = t.get(w, Scalar.zero()) + c
    return NCElem(target, {w: c for w, c in t.items() if not c.is_zero})


def flatten(x: NCElem) -> NCElem:
    """Reinterpret a multi-leg element over the flattened 1-leg alphabet.

    Canonical multi-leg words are already sorted by leg and the flattened
    alphabet preserves letter ids, so the term map carries over verbatim.
    """
    return NCElem(x.alphabet.flattened(), dict(x.terms))


class Morphism:
    """Letter-image map extended as (anti)homomorphism, (anti)linearly."""

    __slots__ = ("source", "target", "images", "kind", "linearity",
                 "unitary_q")

    def __init__(self, source: Alphabet, target: Alphabet, images: dict,
                 kind: str = "hom", linearity: str = "linear",
                 unitary_q: bool = False):
        if kind not in ("hom", "antihom"):
            raise AlgebraError(f"bad morphism kind {kind}")
        if linearity not in ("linear", "antilinear"):
            raise AlgebraError(f"bad linearity {linearity}")
        self.source, self.target = source, target
        # keys may be letter names (leg 0) or letter ids
        self.images = {
            (source.letter(k) if isinstance(k, str) else k): v
            for k, v in images.items()}
        self.kind, self.linearity = kind, linearity
        self.unitary_q = unitary_q

    def apply(self, x: NCElem) -> NCElem:
        if x.alphabet != self.source:
            raise AlphabetMismatch("element not over morphism source")
        out = NCElem.zero(self.target)
        for w, c in x.terms.items():
            if self.linearity == "antilinear":
                c = c.conj(self.unitary_q)
            img = NCElem.one(self.target)
            seq = reversed(w) if self.kind == "antihom" else w
            for lid in seq:
                if lid not in self.images:
                    raise UnmappedLetter(
                        f"letter {self.source.display(lid)} has no image")
                img = img * self.images[lid]
            out = out + img.scale(c)
        return out

    def __call__(self, x: NCElem) -> NCElem:
        return self.apply(x)


def tensor_morphism(m1: Morphism, m2: Morphism) -> Morphism:
    """Legwise tensor of two 1-leg morphisms of equal kind/linearity."""
    if (m1.kind, m1.linearity) != (m2.kind, m2.linearity):
        raise AlgebraError("tensor of mismatched morphism kinds")
    source = m1.source.tensor(m2.source)
    target = m1.target.tensor(m2.target)
    n1s = len(m1.source.letters)
    n1t = len(m1.target.letters)
    images = {}
    for lid, img in m1.images.items():
        images[lid] = NCElem(target, dict(img.terms))
    for lid, img in m2.images.items():
        images[lid + n1s] = NCElem(
            target, {tuple(l + n1t for l in w): c
                     for w, c in img.terms.items()})
    return Morphism(source, target, images, m1.kind, m1.linearity,
                    m1.unitary_q or m2.unitary_q)


def scalar_counit(images: dict, alphabet: Alphabet):
    """Build a counit: letter -> Scalar, applied multiplicatively."""
    table = {alphabet.letter(k) if isinstance(k, str) else k: Scalar.of(v)
             for k, v in images.items()}

    def eps(x: NCElem) -> Scalar:
        total = Scalar.zero()
        for w, c in x.terms.items():
            val = c
            for lid in w:
                if lid not in table:
                    raise UnmappedLetter(
                        f"letter {alphabet.display(lid)} has no counit value")
                val = val * table[lid]
            total = total + val
        return total

    eps.table = table
    return eps
