"""The quantum deformations of SL(2,R) with full Hopf/star verification.

Built-in presentations: the q-deformation (A), the SU_q(1,1)-type real
form (K, in both variants of its printed last relation), the Jordanian
deformation (N), its h-version SL_h, and SU_q(1,1) itself.  Checks:
bialgebra/antipode/star axioms via ideal membership, the quantum Cayley
transform, the SL_h isomorphism, and first-order classical limits.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .scalars import Scalar, I, Jet, jet_substitute, jet_exp
from .ncalg import (Alphabet, NCElem, Morphism, tensor_morphism, flatten,
                    scalar_counit, tensor_elem)
from .membership import (Presentation, member, tensor_presentation,
                         confluence_probe, Certificate, _Echelon,
                         MembershipError, IllFormedOrientation,
                         _scalar_from)
from .report import Report, CheckResult, PASS, FAIL, INCONCLUSIVE
from .poisson import (sl2_ring, group_structure, PoissonStructure, CommPoly,
                      check_jacobi, LAM)

Q = Scalar.param("q")
QI = Scalar.param("q", -1)
H = Scalar.param("h")
ONE = Scalar.one()


class HopfPresentation:
    """Presentation plus Hopf data (Delta, eps, kappa) and star structure."""

    def __init__(self, name, pres, delta, eps_table, kappa, star,
                 matrix=None):
        self.name = name
        self.pres = pres
        self.delta = delta            # Morphism into the 2-leg alphabet
        self.eps_table = eps_table    # dict letter name -> Scalar
        self.eps = scalar_counit(eps_table, pres.alphabet)
        self.kappa = kappa            # linear antihomomorphism
        self.star = star              # antilinear antihomomorphism
        self.matrix = matrix or [["a", "b"], ["c", "d"]]
        self._tensor = None

    @property
    def gens(self):
        return list(self.pres.alphabet.letters)

    def gen(self, name):
        return self.pres.gen(name)

    def tensor(self) -> Presentation:
        if self._tensor is None:
            tp = tensor_presentation(self.pres, self.pres)
            if tp.rewrite is not None:
                # re-establish confluence of the composed system instead of
                # trusting the inherited flag
                tp.rewrite.confluent = False
                ok, failures = confluence_probe(tp)
                if not ok:
                    raise MembershipError(
                        f"tensor rewriting of {self.name} not confluent: "
                        f"{failures[:3]}")
            self._tensor = tp
        return self._tensor


def _elem(alph, spec) -> NCElem:
    """Sum of (coeff, word-name-sequence) pairs."""
    out = NCElem.zero(alph)
    for coeff, names in spec:
        out = out + NCElem.word(alph, names).scale(coeff)
    return out


def _matrix_delta(pres, matrix, weights=None):
    """Images of the (weighted) matrix coproduct over the tensor alphabet."""
    alph = pres.alphabet
    alph2 = alph.tensor(alph)
    images = {}
    n = len(matrix)
    weights = weights or {}
    for i in range(n):
        for j in range(n):
            x = matrix[i][j]
            img = NCElem.zero(alph2)
            for m in range(n):
                w = weights.get((i, m, j), ONE)
                img = img + tensor_elem(
                    NCElem.gen(alph, matrix[i][m]),
                    NCElem.gen(alph, matrix[m][j]), alph2).scale(w)
            images[x] = img
    return Morphism(alph, alph2, images)


_cache: dict = {}


def build(name: str, k_variant: str = "printed") -> HopfPresentation:
    key = (name, k_variant if name == "K" else None)
    if key not in _cache:
        _cache[key] = _build(name, k_variant)
    return _cache[key]


def _build(name, k_variant):
    if name == "A":
        return _build_A()
    if name == "K":
        return _build_K(k_variant)
    if name == "N":
        return _build_N(h=None)
    if name == "SLh":
        return _build_N(h=H)
    if name == "SUq":
        return _build_SUq()
    raise ValueError(f"unknown algebra {name}")


def _build_A() -> HopfPresentation:
    alph = Alphabet([["a", "b", "c", "d"]])

    def E(spec):
        return _elem(alph, spec)

    rels = [
        E([(ONE, "ab"), (-Q, "ba")]),
        E([(ONE, "ac"), (-Q, "ca")]),
        E([(ONE, "bd"), (-Q, "db")]),
        E([(ONE, "cd"), (-Q, "dc")]),
        E([(ONE, "bc"), (-ONE, "cb")]),
        E([(ONE, "ad"), (-ONE, "da"), (-(Q - QI), "bc")]),
        E([(ONE, "ad"), (-Q, "bc"), (-ONE, "")]),
    ]
    pres = Presentation("A^A_h", alph, rels, unitary_q=True)
    pres.attach_orientation([
        ("ba", E([(QI, "ab")])),
        ("ca", E([(QI, "ac")])),
        ("db", E([(QI, "bd")])),
        ("dc", E([(QI, "cd")])),
        ("cb", E([(QI, "ad"), (-QI, "")])),
        ("bc", E([(QI, "ad"), (-QI, "")])),
        ("da", E([(QI * QI, "ad"), (ONE - QI * QI, "")])),
    ])
    _probe(pres)
    delta = _matrix_delta(pres, [["a", "b"], ["c", "d"]])
    eps = {"a": ONE, "b": Scalar.zero(), "c": Scalar.zero(), "d": ONE}
    kappa = Morphism(alph, alph, {
        "a": E([(ONE, "d")]), "b": E([(-QI, "b")]),
        "c": E([(-Q, "c")]), "d": E([(ONE, "a")])}, kind="antihom")
    star = Morphism(alph, alph, {x: E([(ONE, x)]) for x in "abcd"},
                    kind="antihom", linearity="antilinear", unitary_q=True)
    return HopfPresentation("A", pres, delta, eps, kappa, star)


def _build_K(variant) -> HopfPresentation:
    alph = Alphabet([["a", "b", "c", "d"]])
    ih = I * H

    def E(spec):
        return _elem(alph, spec)

    def comm(x, y):
        return [(ONE, x + y), (-ONE, y + x)]

    sum8 = [(-ih, w) for w in
            ("ab", "ba", "ac", "ca", "bd", "db", "cd", "dc")]
    alt8 = [(-ih, "ab"), (-ih, "ba"), (ih, "ac"), (ih, "ca"),
            (ih, "bd"), (ih, "db"), (-ih, "cd"), (-ih, "dc")]
    last_coeff = H if variant == "printed" else ih
    rels = [
        E(comm("a", "b") + [(-ih, ""), (ih, "aa"), (ih, "bb")]),
        E(comm("a", "c") + [(ih, ""), (-ih, "aa"), (-ih, "cc")]),
        E(comm("b", "d") + [(ih, ""), (-ih, "bb"), (-ih, "dd")]),
        E(comm("c", "d") + [(-ih, ""), (ih, "cc"), (ih, "dd")]),
        E(comm("a", "d") + sum8),
        E(comm("b", "c") + alt8),
        E([(ONE, "ad"), (ONE, "da"), (-ONE, "bc"), (-ONE, "cb"),
           (-Scalar.of(2), ""), (-2 * last_coeff, ""),
           (last_coeff, "aa"), (last_coeff, "bb"),
           (last_coeff, "cc"), (last_coeff, "dd")]),
    ]
    pres = Presentation(f"A^K_h[{variant}]", alph, rels)
    # Symbolic echelons above degree 3 are infeasible for this relation
    # set (coefficient swell in h); higher degrees go through the
    # specialized modular path instead.
    pres.max_echelon_degree = 3
    delta = _matrix_delta(pres, [["a", "b"], ["c", "d"]])
    eps = {"a": ONE, "b": Scalar.zero(), "c": Scalar.zero(), "d": ONE}
    hh = ONE + H * H       # 1 + h^2, registered denominator
    G = (2 - 2 * H * H) / hh
    F = (2 * H) / hh
    T = (2 * ONE) / hh
    q4 = Scalar.of(Fraction(1, 4))
    kappa = Morphism(alph, alph, {
        "a": E([(q4 * (2 - G), "a"), (q4 * (2 + G), "d"),
                (-q4 * F, "b"), (-q4 * F, "c")]),
        "b": E([(q4 * T, "a"), (-q4 * T, "d"),
                (-q4 * (2 + G), "b"), (q4 * (2 - G), "c")]),
        "c": E([(q4 * T, "a"), (-q4 * T, "d"),
                (q4 * (2 - G), "b"), (-q4 * (2 + G), "c")]),
        "d": E([(q4 * (2 + G), "a"), (q4 * (2 - G), "d"),
                (q4 * F, "b"), (q4 * F, "c")]),
    }, kind="antihom")
    star = Morphism(alph, alph, {x: E([(ONE, x)]) for x in "abcd"},
                    kind="antihom", linearity="antilinear")
    return HopfPresentation(f"K.{variant}", pres, delta, eps, kappa, star)


def _build_N(h: Scalar = None) -> HopfPresentation:
    """The Jordanian deformation; h=None gives the printed h-free version."""
    alph = Alphabet([["a", "b", "c", "d"]])
    hh = ONE if h is None else h
    ih = I * hh

    def E(spec):
        return _elem(alph, spec)

    def comm(x, y):
        return [(ONE, x + y), (-ONE, y + x)]

    rels = [
        E(comm("a", "b") + [(-ih, ""), (ih, "aa")]),
        E(comm("a", "c") + [(-ih, "cc")]),
        E(comm("b", "d") + [(-ih, "dd"), (ih, "")]),
        E(comm("c", "d") + [(ih, "cc")]),
        E(comm("a", "d") + [(-ih, "cd"), (ih, "ca")]),
        E(comm("b", "c") + [(-ih, "dc"), (-ih, "ca")]),
        E([(ONE, "ad"), (-ONE, "bc"), (ih, "ac"), (-ONE, "")]),
    ]
    name = "SL_h" if h is not None else "A^N"
    pres = Presentation(name, alph, rels)
    pres.attach_orientation([
        ("ba", E([(ONE, "ab"), (-ih, ""), (ih, "aa")])),
        ("ac", E([(ONE, "ca"), (ih, "cc")])),
        ("bd", E([(ONE, "db"), (ih, "dd"), (-ih, "")])),
        ("dc", E([(ONE, "cd"), (ih, "cc")])),
        ("bc", E([(ONE, "cb"), (ih, "dc"), (ih, "ca")])),
        ("ad", E([(ONE, "cb"), (ih, "dc"), (ih, "ca"), (-ih, "ac"),
                  (ONE, "")])),
        ("da", E([(ONE, "cb"), (ih, "dc"), (-ih, "cd"), (ih, "ca"),
                  (hh * hh, "cc"), (ONE, "")])),
    ], precedence_names=["c", "d", "a", "b"])
    _probe(pres)
    delta = _matrix_delta(pres, [["a", "b"], ["c", "d"]])
    eps = {"a": ONE, "b": Scalar.zero(), "c": Scalar.zero(), "d": ONE}
    # kappa(a) = d + ih c, kappa(b) = -b + ih(d - a) - h^2 c,
    # kappa(c) = -c, kappa(d) = a - ih c; the ih factors are forced by the
    # antipode axioms against these relations.
    kappa_images = {
        "a": E([(ONE, "d"), (ih, "c")]),
        "b": E([(-ONE, "b"), (ih, "d"), (-ih, "a"), (-hh * hh, "c")]),
        "c": E([(-ONE, "c")]),
        "d": E([(ONE, "a"), (-ih, "c")])}
    kappa = Morphism(alph, alph, kappa_images, kind="antihom")
    star = Morphism(alph, alph, {x: E([(ONE, x)]) for x in "abcd"},
                    kind="antihom", linearity="antilinear")
    return HopfPresentation("SLh" if h is not None else "N", pres, delta,
                            eps, kappa, star)


def _build_SUq() -> HopfPresentation:
    alph = Alphabet([["al", "be", "bs", "as"]])

    def E(spec):
        return _elem(alph, [(c, _split(w)) for c, w in spec])

    def _split(w):
        out, i = [], 0
        while i < len(w):
            out.append(w[i:i + 2])
            i += 2
        return out

    rels = [
        E([(ONE, "albe"), (-Q, "beal")]),
        E([(ONE, "albs"), (-Q, "bsal")]),
        E([(ONE, "bebs"), (-ONE, "bsbe")]),
        E([(ONE, "beas"), (-Q, "asbe")]),
        E([(ONE, "bsas"), (-Q, "asbs")]),
        E([(ONE, "alas"), (-Q * Q, "bebs"), (-ONE, "")]),
        E([(ONE, "asal"), (-ONE, "bsbe"), (-ONE, "")]),
    ]
    pres = Presentation("SUq11", alph, rels)
    pres.attach_orientation([
        (["be", "al"], E([(QI, "albe")])),
        (["bs", "al"], E([(QI, "albs")])),
        (["as", "be"], E([(QI, "beas")])),
        (["as", "bs"], E([(QI, "bsas")])),
        (["bs", "be"], E([(ONE, "bebs")])),
        (["be", "bs"], E([(QI * QI, "alas"), (-QI * QI, "")])),
        (["as", "al"], E([(ONE, "bsbe"), (ONE, "")])),
    ])
    _probe(pres)
    alph2 = alph.tensor(alph)

    def T(x, y, w=ONE):
        return tensor_elem(NCElem.gen(alph, x), NCElem.gen(alph, y),
                           alph2).scale(w)

    delta = Morphism(alph, alph2, {
        "al": T("al", "al") + T("be", "bs", Q),
        "be": T("al", "be") + T("be", "as"),
        "bs": T("bs", "al") + T("as", "bs"),
        "as": T("bs", "be", Q) + T("as", "as")})
    eps = {"al": ONE, "be": Scalar.zero(), "bs": Scalar.zero(), "as": ONE}
    kappa = Morphism(alph, alph, {
        "al": E([(ONE, "as")]), "be": E([(-QI, "be")]),
        "bs": E([(-Q, "bs")]), "as": E([(ONE, "al")])}, kind="antihom")
    star = Morphism(alph, alph, {
        "al": E([(ONE, "as")]), "as": E([(ONE, "al")]),
        "be": E([(ONE, "bs")]), "bs": E([(ONE, "be")])},
        kind="antihom", linearity="antilinear")
    return HopfPresentation("SUq", pres, delta, eps, kappa, star,
                            matrix=[["al", "be"], ["bs", "as"]])


# ---------------------------------------------------------------------
# Axiom checks
# ---------------------------------------------------------------------

def _identity_morphism(alph):
    return Morphism(alph, alph,
                    {i: NCElem(alph, {(i,): ONE})
                     for i in range(len(alph.letters))})


def _leg_split(word, n):
    w1 = tuple(l for l in word if l < n)
    w2 = tuple(l - n for l in word if l >= n)
    return w1, w2


def _apply_counit_leg(elem: NCElem, eps_table: dict, leg: int,
                      base: Alphabet) -> NCElem:
    """(eps (x) id) or (id (x) eps) on a 2-leg element."""
    n = len(base.letters)
    out = NCElem.zero(base)
    for word, coeff in elem.terms.items():
        w1, w2 = _leg_split(word, n)
        wk, wr = (w1, w2) if leg == 0 else (w2, w1)
        val = coeff
        dead = False
        for lid in wk:
            e = eps_table[base.letters[lid]]
            if e.is_zero:
                dead = True
                break
            val = val * e
        if dead:
            continue
        out = out + NCElem(base, {wr: val})
    return out


def _fold_legs(elem: NCElem, m1: Morphism, m2: Morphism,
               base: Alphabet) -> NCElem:
    """Sum of m1(w1) * m2(w2) over the terms of a 2-leg element."""
    n = len(base.letters)
    out = NCElem.zero(base)
    for word, coeff in elem.terms.items():
        w1, w2 = _leg_split(word, n)
        x1 = m1.apply(NCElem(base, {w1: ONE}))
        x2 = m2.apply(NCElem(base, {w2: ONE}))
        out = out + (x1 * x2).scale(coeff)
    return out


def _probe(pres):
    ok, failures = confluence_probe(pres)
    if not ok:
        raise IllFormedOrientation(
            f"rewriting of {pres.name} not confluent: {failures[:3]}")
    return pres


def _membership_result(rep: Report, check_id: str, element, presentation,
                       degree, detail=""):
    outcome = member(element, presentation, degree=degree, allow_bump=False)
    if isinstance(outcome, Certificate):
        if not outcome.verify(presentation, element if element.alphabet.nlegs == 1
                              else flatten(element)):
            rep.add(CheckResult(check_id, FAIL, "certificate replay failed"))
            return
        rep.add(CheckResult(check_id, PASS, detail,
                            certificate=f"{len(outcome)} summands",
                            cert_obj=(outcome, presentation)))
    else:
        status = FAIL if outcome.definitive else INCONCLUSIVE
        rep.add(CheckResult(check_id, status, detail,
                            residual=str(outcome.residual)))


def verify_bialgebra(H: HopfPresentation, degree: int = 4) -> Report:
    rep = Report()
    pres, alph = H.pres, H.pres.alphabet
    for ri, rel in enumerate(pres.relations):
        rep.check(f"hopf.{H.name}.bialgebra.eps.rel{ri}",
                  H.eps(rel).is_zero,
                  detail="counit annihilates the relation")
    ident = _identity_morphism(alph)
    for x in H.gens:
        g = H.gen(x)
        dx = H.delta(g)
        lhs = tensor_morphism(H.delta, ident).apply(dx)
        rhs = tensor_morphism(ident, H.delta).apply(dx)
        rep.check(f"hopf.{H.name}.bialgebra.coassoc.{x}", lhs == rhs)
        left = _apply_counit_leg(dx, H.eps_table, 0, alph)
        right = _apply_counit_leg(dx, H.eps_table, 1, alph)
        rep.check(f"hopf.{H.name}.bialgebra.counit.{x}",
                  left == g and right == g)
    TP = H.tensor()
    for ri, rel in enumerate(pres.relations):
        q = flatten(H.delta(rel))
        _membership_result(rep, f"hopf.{H.name}.bialgebra.delta.rel{ri}",
                           q, TP, degree,
                           detail="Delta(relation) in the tensor ideal")
    return rep


def verify_antipode(H: HopfPresentation, degree: int = 4) -> Report:
    rep = Report()
    pres, alph = H.pres, H.pres.alphabet
    ident = _identity_morphism(alph)
    for x in H.gens:
        dx = H.delta(H.gen(x))
        e = H.eps_table[x]
        lhs = _fold_legs(dx, H.kappa, ident, alph) - pres.one().scale(e)
        rhs = _fold_legs(dx, ident, H.kappa, alph) - pres.one().scale(e)
        _membership_result(rep, f"hopf.{H.name}.antipode.left.{x}",
                           lhs, pres, degree)
        _membership_result(rep, f"hopf.{H.name}.antipode.right.{x}",
                           rhs, pres, degree)
    for ri, rel in enumerate(pres.relations):
        _membership_result(rep, f"hopf.{H.name}.antipode.rel{ri}",
                           H.kappa(rel), pres, degree,
                           detail="kappa maps the relation into the ideal")
    return rep


def verify_star(H: HopfPresentation, degree: int = 4) -> Report:
    rep = Report()
    pres, alph = H.pres, H.pres.alphabet
    for ri, rel in enumerate(pres.relations):
        _membership_result(rep, f"hopf.{H.name}.star.rel{ri}",
                           H.star(rel), pres, degree,
                           detail="star maps the relation into the ideal")
    for x in H.gens:
        g = H.gen(x)
        _membership_result(rep, f"hopf.{H.name}.star.invol.{x}",
                           H.star(H.star(g)) - g, pres, degree)
    TP = H.tensor()
    ss = tensor_morphism(H.star, H.star)
    for x in H.gens:
        diff = ss.apply(H.delta(H.gen(x))) - H.delta(H.star(H.gen(x)))
        if diff.is_zero:
            rep.check(f"hopf.{H.name}.star.delta.{x}", True,
                      detail="literal equality")
        else:
            _membership_result(rep, f"hopf.{H.name}.star.delta.{x}",
                               flatten(diff), TP, degree)
    return rep


def hopf_suite(name: str, degree: int = 4, k_variant: str = "printed") -> Report:
    H = build(name, k_variant)
    rep = Report()
    rep.extend(verify_bialgebra(H, degree))
    rep.extend(verify_antipode(H, degree))
    rep.extend(verify_star(H, degree))
    return rep


def negative_control(degree: int = 6) -> Report:
    """Mutating ab = q ba to ab = q^2 ba breaks Delta-compatibility.

    The mutated relation's coproduct has a definitive nonzero normal form
    in the (confluence-checked) tensor ideal of the unmutated algebra, so
    no certificate exists at any degree, in particular none at D=6.
    """
    rep = Report()
    A = build("A")
    alph = A.pres.alphabet
    mutated = _elem(alph, [(ONE, "ab"), (-Q * Q, "ba")])
    q = flatten(A.delta(mutated))
    outcome = member(q, A.tensor(), degree=degree)
    bad = isinstance(outcome, Certificate)
    definitive = (not bad) and outcome.definitive
    rep.check("hopf.negative_control", (not bad) and definitive,
              detail="Delta(ab - q^2 ba) has definitive nonzero normal form"
                     " (no certificate at any degree, hence none at D=6)")
    return rep


# ---------------------------------------------------------------------
# Cayley transform and the SL_h isomorphism
# ---------------------------------------------------------------------

def cayley_images(target_alph) -> dict:
    """SU_q generators in terms of (a,b,c,d), coefficients exact."""
    half = Scalar.of(1)._div_unchecked(Scalar.of(2))

    def E(spec):
        return _elem(target_alph, spec)

    return {
        "al": E([(half, "a"), (half, "d"), (half * I, "b"),
                 (-half * I, "c")]),
        "as": E([(half, "a"), (half, "d"), (-half * I, "b"),
                 (half * I, "c")]),
        "be": E([(half, "a"), (-half, "d"), (-half * I, "b"),
                 (-half * I, "c")]),
        "bs": E([(half, "a"), (-half, "d"), (half * I, "b"),
                 (half * I, "c")]),
    }


def cayley_check(degree: int = 4) -> Report:
    """Transport SU_q(1,1) relations through the quantum Cayley map into
    A^K_h with h = (1-q)/(1+q); report a definite outcome per variant."""
    rep = Report()
    hq = (ONE - Q) / (ONE + Q)
    rep.check("cayley.h_at_q1",
              hq.eval({"q": 1}).is_zero, detail="q=1 gives h=0")
    SU = build("SUq")
    # counit compatibility through the transform
    eps_k = {"a": ONE, "b": Scalar.zero(), "c": Scalar.zero(), "d": ONE}
    for x in SU.gens:
        img = cayley_images(build("K").pres.alphabet)[x]
        val = scalar_counit(eps_k, img.alphabet)(img)
        rep.check(f"cayley.eps.{x}", val == SU.eps_table[x])
    for variant in ("printed", "ih"):
        K = build("K", variant)
        alph = K.pres.alphabet
        rels_q = [rel.substitute_param("h", hq) for rel in K.pres.relations]
        target = Presentation(f"A^K_q[{variant}]", alph, rels_q)
        images = cayley_images(alph)
        phi = Morphism(SU.pres.alphabet, alph, images)
        for ri, rel in enumerate(SU.pres.relations):
            q_elem = phi(rel)
            _membership_result(
                rep, f"cayley.{variant}.rel{ri}", q_elem, target, degree,
                detail="Cayley image of the SU_q relation")
    return rep


def k_cayley_basis(target_alph) -> dict:
    """(a,b,c,d) in terms of the (al,be,bs,as) combinations; inverse of
    :func:`cayley_images` as a linear change of generators."""
    half = Scalar.of(1)._div_unchecked(Scalar.of(2))
    ihalf = half * I

    def E(spec):
        return _elem(target_alph, [(c, [w]) for c, w in spec])

    return {
        "a": E([(half, "al"), (half, "as"), (half, "be"), (half, "bs")]),
        "d": E([(half, "al"), (half, "as"), (-half, "be"), (-half, "bs")]),
        "b": E([(-ihalf, "al"), (ihalf, "as"), (ihalf, "be"),
                (-ihalf, "bs")]),
        "c": E([(ihalf, "al"), (-ihalf, "as"), (ihalf, "be"),
                (-ihalf, "bs")]),
    }


_transformed_cache: dict = {}


def k_transformed_presentation(variant: str = "printed"):
    """The K presentation rewritten in the combination generators
    al = (a+d)/2 + i(b-c)/2 etc.  Returns (presentation, fwd, back)
    where fwd maps (a,b,c,d)-elements into the new generators and back
    inverts it; both are exact algebra morphisms.
    """
    if variant not in _transformed_cache:
        K = build("K", variant)
        alphT = Alphabet([["al", "be", "bs", "as"]])
        fwd = Morphism(K.pres.alphabet, alphT, k_cayley_basis(alphT))
        back = Morphism(alphT, K.pres.alphabet,
                        cayley_images(K.pres.alphabet))
        rels = [fwd(rel) for rel in K.pres.relations]
        presT = Presentation(f"A^K_h[{variant}].combo", alphT, rels)
        presT.max_echelon_degree = 3
        _transformed_cache[variant] = (presT, fwd, back)
    return _transformed_cache[variant]


def _pullback_certificate(cert: Certificate, back, limit: int = 200000):
    """Expand a certificate over the combination generators into one over
    (a,b,c,d).  Works because back(fwd(x)) = x, so back sends the i-th
    transformed relation to the i-th original relation exactly."""
    cost = sum(4 ** (len(lw) + len(rw)) for lw, _, rw, _ in cert.summands)
    if cost > limit:
        return None
    alphT = back.source
    out = []
    for lw, ri, rw, coeff in cert.summands:
        le = back(NCElem(alphT, {tuple(lw): ONE}))
        re_ = back(NCElem(alphT, {tuple(rw): ONE}))
        for wl, cl in le.terms.items():
            for wr, cr in re_.terms.items():
                c = coeff * cl * cr
                if not c.is_zero:
                    out.append((wl, ri, wr, c))
    return Certificate(out)


def k_degeneracy_report(variant: str = "printed") -> Report:
    """Replay the frozen witness that the K relations force the extra
    degree-2 relation ((a+d)^2 + (b-c)^2)/4 = 1 at generic h.

    The witness is stored in the combination basis (al, as, be, bs),
    where the extra relation reads al*as = 1; the basis change is
    verified to be an exact isomorphism, and when feasible the witness
    is also expanded back into an (a,b,c,d)-certificate.
    """
    import json
    from pathlib import Path
    rep = Report()
    K = build("K", variant)
    presT, fwd, back = k_transformed_presentation(variant)
    for x in "abcd":
        g = K.pres.gen(x)
        rep.check(f"k_degeneracy.{variant}.basis.{x}",
                  back(fwd(g)) == g, detail="back(fwd(x)) = x, exact")
    for x in ("al", "be", "bs", "as"):
        g = presT.gen(x)
        rep.check(f"k_degeneracy.{variant}.basis.{x}",
                  fwd(back(g)) == g, detail="fwd(back(x)) = x, exact")
    path = Path(__file__).parent / "data" / f"k_group_{variant}.json"
    if not path.exists():
        rep.check(f"k_degeneracy.{variant}.certificate", False,
                  detail=f"missing witness file {path.name}")
        return rep
    data = json.loads(path.read_text())
    elem = NCElem(presT.alphabet, {
        tuple(presT.alphabet.letter(n) for n in names): _scalar_from(sd)
        for names, sd in data["element"]})
    cert = Certificate.from_data(presT, data["certificate"])
    rep.check(f"k_degeneracy.{variant}.element",
              sorted(len(w) for w in elem.terms) == [0, 2],
              detail=f"witness element: {elem}")
    rep.check(f"k_degeneracy.{variant}.certificate",
              cert.verify(presT, elem),
              detail=f"{len(cert)} summands replay to the witness")
    pulled = _pullback_certificate(cert, back)
    if pulled is not None:
        rep.check(f"k_degeneracy.{variant}.pullback",
                  pulled.verify(K.pres, back(elem)),
                  detail="expanded (a,b,c,d)-certificate replays to "
                         "((a+d)^2+(b-c)^2)/4 - 1")
    else:
        rep.check(f"k_degeneracy.{variant}.pullback", True,
                  detail="expansion skipped (size); covered by the exact "
                         "isomorphism checks above")
    return rep


def slh_iso_check(degree: int = 4) -> Report:
    rep = Report()
    SLh = build("SLh")
    N = build("N")
    alphS, alphN = SLh.pres.alphabet, N.pres.alphabet
    HI = Scalar.one() / H

    def EN(spec):
        return _elem(alphN, spec)

    def ES(spec):
        return _elem(alphS, spec)

    psi = Morphism(alphS, alphN, {
        "a": EN([(ONE, "a")]), "b": EN([(H, "b")]),
        "c": EN([(HI, "c")]), "d": EN([(ONE, "d")])})
    psi_inv = Morphism(alphN, alphS, {
        "a": ES([(ONE, "a")]), "b": ES([(HI, "b")]),
        "c": ES([(H, "c")]), "d": ES([(ONE, "d")])})
    for ri, rel in enumerate(SLh.pres.relations):
        _membership_result(rep, f"slh_iso.fwd.rel{ri}", psi(rel), N.pres,
                           degree, detail="image of the SL_h relation")
    for ri, rel in enumerate(N.pres.relations):
        _membership_result(rep, f"slh_iso.bwd.rel{ri}", psi_inv(rel),
                           SLh.pres, degree,
                           detail="image of the deformation relation")
    # Hopf/star compatibility on generators, literal
    pp = tensor_morphism(psi, psi)
    for x in SLh.gens:
        lhs = pp.apply(SLh.delta(SLh.gen(x)))
        rhs = N.delta(psi(SLh.gen(x)))
        rep.check(f"slh_iso.delta.{x}", lhs == rhs)
        rep.check(f"slh_iso.eps.{x}",
                  SLh.eps_table[x] == N.eps_table[x])
        rep.check(f"slh_iso.star.{x}",
                  psi(SLh.star(SLh.gen(x))) == N.star(psi(SLh.gen(x))))
    return rep


# ---------------------------------------------------------------------
# Classical limits of the group algebras
# ---------------------------------------------------------------------

def _commutator_identity(pres: Presentation, x: str, y: str) -> NCElem:
    """Express xy - yx modulo the relation span (degree 2, no padding)."""
    ech = _Echelon(pres, max(r.degree() for r in pres.relations), pad=0)
    g = pres.gen
    residual, _ = ech.reduce_query(g(x) * g(y) - g(y) * g(x))
    return residual


def group_classical_limit(name: str):
    """First-order jet of the commutators; compare with the bracket table.

    Returns (derived PoissonStructure, Report).  The scaling is h = lam*s
    (q = exp(i*lam*s)); SL_h is scaled with h = s and approaches the
    N-family table.
    """
    rep = Report()
    H_ = build(name)
    pres = H_.pres
    lam = LAM
    if name == "A":
        images = {"q": jet_exp(I * lam, "s", 2)}
        family = "A"
    elif name == "K":
        images = {"h": Jet.variable("s", 2) * lam}
        family = "K"
    elif name == "SLh":
        images = {"h": Jet.variable("s", 2)}
        family = "N"
    else:
        raise ValueError(f"no classical limit for {name}")

    ring = sl2_ring()
    target = group_structure(family, ring=ring)
    table = {}
    letters = pres.alphabet.letters
    for x, y in itertools.combinations(letters, 2):
        ident = _commutator_identity(pres, x, y)
        entry = ring.zero()
        order0_ok = True
        for word, coeff in ident.terms.items():
            jet = jet_substitute(coeff, "s", images, 2)
            if not jet.coeffs[0].is_zero:
                order0_ok = False
            c1 = jet.coeffs[1] * (-I)   # divide by i
            if c1.is_zero:
                continue
            mono = ring.one()
            for lid in word:
                mono = mono * ring.var(letters[lid])
            entry = entry + mono.scale(c1)
        rep.check(f"limit.group.{name}.{x}{y}.order0", order0_ok,
                  detail="commutator vanishes at order 0")
        table[(x, y)] = entry.reduce()
        res = (entry - target.pair(x, y)).reduce()
        rep.check(f"limit.group.{name}.{x}{y}", res.is_zero, residual=res)
    derived = PoissonStructure(ring, table, name=f"limit.{name}")
    rep.extend(check_jacobi(derived))
    return derived, rep
