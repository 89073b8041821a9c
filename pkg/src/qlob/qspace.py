"""The quantum half planes H^I_{h,k,delta} with involutions: quadratic
deformations of the hyperbolic plane covariant under the quantum groups.

Provided checks: the quadratic embedding into the quantum groups via
Abar = alpha*a^2 + beta*b^2 + gamma*(ab+ba) and its companions, the left
coaction phi = Delta restricted to the embedded generators, first-order
classical limits against the covariant Poisson tables, and the
normal-form equivalence (k >= 0, delta in {-1,0,1}) via sign flip and
rescaling.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .scalars import (Scalar, I, Jet, jet_exp, jet_substitute, MPoly,
                      PARAMS, rational_sqrt)
from .ncalg import (Alphabet, NCElem, Morphism, tensor_morphism, flatten,
                    tensor_elem)
from .membership import (Presentation, member, tensor_presentation,
                         confluence_probe, Certificate, _Echelon,
                         member_specialized, MembershipError,
                         groebner_complete)
from .report import Report, CheckResult, PASS, FAIL, INCONCLUSIVE
from .poisson import (h_ring, plane_structure, check_jacobi, LAM,
                      PoissonStructure, CommPoly)
from . import hopf

ONE = Scalar.one()
Q = Scalar.param("q")
QI = Scalar.param("q", -1)
H = Scalar.param("h")
KP = Scalar.param("k")
DP = Scalar.param("delta")
ALPHA, BETA, GAMMA = (Scalar.param(n) for n in ("alpha", "beta", "gamma"))

# modular fallback budget for the degree-capped K group membership
K_MOD_DEGREE = 5
K_MOD_TRIALS = 3


class QSpacePresentation:
    """Presentation of H^I_{h,k,delta} on (A,B,C,D) with its star map."""

    def __init__(self, family, pres, star, params):
        self.family = family
        self.pres = pres
        self.star = star
        self.params = params    # dict: k, delta, and h where applicable

    @property
    def gens(self):
        return list(self.pres.alphabet.letters)

    def gen(self, name):
        return self.pres.gen(name)


def _elem(alph, spec) -> NCElem:
    out = NCElem.zero(alph)
    for coeff, names in spec:
        out = out + NCElem.word(alph, names).scale(coeff)
    return out


_cache: dict = {}


def build_space(family: str, k: Scalar = None, delta: Scalar = None,
                h: Scalar = None) -> QSpacePresentation:
    """The quantum half plane for family A (q-type), K or N.

    Parameters default to the symbolic k and delta.  For family A the
    deformation parameter is q (the formal e^{ih}); for K it is h; the
    printed N family is parameter-free, and a nonzero ``h`` selects the
    internally rescaled N family (h=1 reproduces the printed relations)
    used for the classical limit.
    """
    default = k is None and delta is None and h is None
    if default and family in _cache:
        return _cache[family]
    k = KP if k is None else Scalar.of(k)
    d = DP if delta is None else Scalar.of(delta)
    alph = Alphabet([["A", "B", "C", "D"]])

    def E(spec):
        return _elem(alph, spec)

    if family == "A":
        if h is not None:
            raise ValueError("family A is parametrized by q, not h")
        q2, qi, qm2 = Q * Q, QI, QI * QI
        rels = [
            E([(ONE, "C"), (-qi, "B"), (-k * (ONE - qi), "")]),
            E([(ONE, "AB"), (-q2, "BA"), (-k * (ONE - q2), "A")]),
            E([(ONE, "BD"), (-q2, "DB"), (-k * (ONE - q2), "D")]),
            E([(ONE, "AD"), (-q2, "BC"), (-k * (ONE - q2), "B"),
               (-d, "")]),
            # the DA relation is the star image of the AD relation; the
            # variant carrying B instead of C here fails the quadratic
            # embedding and collapses the algebra (see variant_controls)
            E([(ONE, "DA"), (-qm2, "CB"), (-k * (ONE - qm2), "C"),
               (-d, "")]),
        ]
        pres = Presentation("H^A", alph, rels, unitary_q=True)
        pres.attach_orientation([
            ("C", E([(qi, "B"), (k * (ONE - qi), "")])),
            ("AB", E([(q2, "BA"), (k * (ONE - q2), "A")])),
            ("DB", E([(qm2, "BD"), (k * (ONE - qm2), "D")])),
            ("AD", E([(Q, "BB"), (k * (ONE - Q), "B"), (d, "")])),
            ("DA", E([(qm2 * qi, "BB"),
                      (k * (qi + qm2 - 2 * qm2 * qi), "B"),
                      (k * k * (ONE - qi) * (ONE - qm2), ""), (d, "")])),
        ], precedence_names=["B", "A", "D", "C"])
        _probe(pres)
        params = {"k": k, "delta": d}
        star = Morphism(alph, alph, {"A": E([(ONE, "A")]),
                                     "D": E([(ONE, "D")]),
                                     "B": E([(ONE, "C")]),
                                     "C": E([(ONE, "B")])},
                        kind="antihom", linearity="antilinear",
                        unitary_q=True)
    elif family == "K":
        hh = H if h is None else Scalar.of(h)
        ih = I * hh
        rels = [
            E([(ONE, "C"), (-ONE, "B"), (ih, "A"), (ih, "D"),
               (ih * k, "")]),
            E([(ONE, "AB"), (-ONE, "BA"), (-2 * ih * k, "A"),
               (-2 * ih, "AA"), (-ih, "AD"), (-ih, "BC")]),
            E([(ONE, "BD"), (-ONE, "DB"), (-2 * ih * k, "D"),
               (-2 * ih, "DD"), (-ih, "AD"), (-ih, "CB")]),
            E([(ONE, "AD"), (-ONE, "BB"), (-ih * k, "B"), (-ih, "AB"),
               (-ih, "BD"), (-d, "")]),
            E([(ONE, "DA"), (-ONE, "CC"), (ih * k, "C"), (ih, "CA"),
               (ih, "DC"), (-d, "")]),
        ]
        pres = Presentation("H^K", alph, rels)
        # same coefficient-swell barrier as the K group algebra
        pres.max_echelon_degree = 3
        params = {"k": k, "delta": d, "h": hh}
        star = Morphism(alph, alph, {"A": E([(ONE, "A")]),
                                     "D": E([(ONE, "D")]),
                                     "B": E([(ONE, "C")]),
                                     "C": E([(ONE, "B")])},
                        kind="antihom", linearity="antilinear")
    elif family == "N":
        hh = ONE if h is None else Scalar.of(h)
        ih = I * hh
        rels = [
            E([(ONE, "C"), (-ONE, "B"), (ih, "D"), (ih * k, "")]),
            # the sign of the BD/B pair and the BC ordering in the last
            # relation are forced by the quadratic embedding and by
            # star-closure; the variants with the opposite sign (or with
            # CB) fail both (see variant_controls)
            E([(ONE, "AB"), (-ONE, "BA"), (-2 * ih, "AD"),
               (-2 * ih * k, "A"), (-2 * hh * hh, "BD"),
               (-2 * hh * hh * k, "B")]),
            E([(ONE, "BD"), (-ONE, "DB"), (-2 * ih, "DD"),
               (-2 * ih * k, "D")]),
            E([(ONE, "AD"), (-ONE, "BC"), (-2 * ih, "BD"),
               (-2 * ih * k, "B"), (-d, "")]),
            E([(ONE, "DA"), (-ONE, "BC"), (2 * ih, "DC"),
               (2 * ih * k, "C"), (-d, "")]),
        ]
        pres = Presentation("H^N", alph, rels)
        if h is None:
            i_ = I
            pres.attach_orientation([
                ("C", E([(ONE, "B"), (-i_, "D"), (-i_ * k, "")])),
                ("BA", E([(ONE, "AB"), (-2 * i_, "AD"), (-2 * i_ * k, "A"),
                          (-2 * ONE, "BD"), (-2 * k, "B")])),
                ("BD", E([(ONE, "DB"), (2 * i_, "DD"), (2 * i_ * k, "D")])),
                ("BB", E([(ONE, "AD"), (-i_, "BD"), (-i_ * k, "B"),
                          (-d, "")])),
                ("AD", E([(ONE, "DA"), (4 * i_, "DB"), (4 * i_ * k, "B"),
                          (-2 * ONE, "DD"), (2 * k * k, "")])),
            ], precedence_names=["D", "A", "B", "C"])
            _probe(pres)
        params = {"k": k, "delta": d, "h": hh}
        star = Morphism(alph, alph, {"A": E([(ONE, "A")]),
                                     "D": E([(ONE, "D")]),
                                     "B": E([(ONE, "C")]),
                                     "C": E([(ONE, "B")])},
                        kind="antihom", linearity="antilinear")
    else:
        raise ValueError(f"unknown family {family}")
    out = QSpacePresentation(family, pres, star, params)
    if default:
        _cache[family] = out
    return out


def _probe(pres):
    ok, failures = confluence_probe(pres)
    if not ok:
        raise MembershipError(
            f"rewriting of {pres.name} not confluent: {failures[:3]}")


def _membership_result(rep, check_id, element, presentation, degree,
                       detail=""):
    outcome = member(element, presentation, degree=degree, allow_bump=False)
    if isinstance(outcome, Certificate):
        target = element if element.alphabet.nlegs == 1 else flatten(element)
        if not outcome.verify(presentation, target):
            rep.add(CheckResult(check_id, FAIL, "certificate replay failed"))
            return None
        rep.add(CheckResult(check_id, PASS, detail,
                            certificate=f"{len(outcome)} summands",
                            cert_obj=(outcome, presentation)))
        return outcome
    status = FAIL if outcome.definitive else INCONCLUSIVE
    rep.add(CheckResult(check_id, status, detail,
                        residual=str(outcome.residual)))
    return None


def star_report(family: str) -> Report:
    """Involutivity of the star and star-invariance of the ideal."""
    rep = Report()
    sp = build_space(family)
    degree = 2 if family == "K" else 4
    for x in sp.gens:
        g = sp.gen(x)
        diff = sp.star(sp.star(g)) - g
        rep.check(f"space.{family}.star.invol.{x}", diff.is_zero,
                  detail="(X*)* = X literally")
    for ri, rel in enumerate(sp.pres.relations):
        _membership_result(rep, f"space.{family}.star.rel{ri}",
                           sp.star(rel), sp.pres, degree,
                           detail="star maps the relation into the ideal")
    return rep


# ---------------------------------------------------------------------
# The quadratic embedding (Abar, Bbar, Cbar, Dbar)
# ---------------------------------------------------------------------

_GROUP_OF = {"A": "A", "K": "K", "N": "N"}
K_MAP = {"A": GAMMA, "K": -(ALPHA + BETA), "N": -BETA}
DELTA_MAP = ALPHA * BETA - GAMMA * GAMMA


def embedding_morphism(family: str) -> Morphism:
    """(A,B,C,D) -> quadratic combinations of the group generators."""
    G = hopf.build(_GROUP_OF[family])
    ga = G.pres.alphabet
    al, be, gc = ALPHA, BETA, GAMMA

    def E(spec):
        return _elem(ga, spec)

    images = {
        "A": E([(al, "aa"), (be, "bb"), (gc, "ab"), (gc, "ba")]),
        "B": E([(al, "ac"), (be, "bd"), (gc, "ad"), (gc, "bc")]),
        "C": E([(al, "ca"), (be, "db"), (gc, "da"), (gc, "cb")]),
        "D": E([(al, "cc"), (be, "dd"), (gc, "cd"), (gc, "dc")]),
    }
    sp = build_space(family)
    return Morphism(sp.pres.alphabet, ga, images)


def _substitute_triple(x, vals):
    for name, v in vals.items():
        x = x.substitute(name, Scalar.of(v))
    return x


def verify_embedding(family: str, degree: int = 6, trials: int = 10,
                     seed: int = 0) -> Report:
    """The embedded generators satisfy the space relations with k as the
    stated function of (alpha,beta,gamma) and delta = alpha*beta-gamma^2,
    symbolically and at random rational triples."""
    rep = Report()
    G = hopf.build(_GROUP_OF[family])
    sp = build_space(family, k=K_MAP[family], delta=DELTA_MAP)
    phi = embedding_morphism(family)
    rng = random.Random(seed)
    triples = [{"alpha": Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                "beta": Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                "gamma": Fraction(rng.randint(-9, 9), rng.randint(1, 9))}
               for _ in range(trials)]
    # shared modular points for the degree-capped fallback, so the
    # specialized echelon is built once per point, not once per relation
    mod_pts = []
    for vals in triples[:K_MOD_TRIALS]:
        pt = dict(vals)
        pt["h"] = Fraction(rng.randint(1, 9), rng.randint(10, 19))
        mod_pts.append(pt)
    for ri, rel in enumerate(sp.pres.relations):
        elem = phi(rel)
        cert = _membership_result(
            rep, f"embed.{family}.rel{ri}", elem, G.pres, degree,
            detail="embedded space relation in the group ideal")
        if cert is not None:
            ok = all(
                Certificate([(lw, i_, rw,
                              _substitute_triple(c, vals))
                             for lw, i_, rw, c in cert.summands]).verify(
                    G.pres, elem.map_coeffs(
                        lambda c, v=vals: _substitute_triple(c, v)))
                for vals in triples)
            rep.check(f"embed.{family}.rel{ri}.specialized", ok,
                      detail=f"{trials} random rational "
                             "(alpha,beta,gamma) replays")
        elif family == "K":
            # symbolic route is degree-capped; gather modular evidence
            # at shared random points instead
            hits = sum(member_specialized(elem, G.pres, K_MOD_DEGREE, pt)
                       for pt in mod_pts)
            if hits == len(mod_pts):
                rep.check(f"embed.{family}.rel{ri}.specialized", True,
                          detail=f"modular reduction at {len(mod_pts)} "
                                 "random (alpha,beta,gamma,h) points, "
                                 f"degree {K_MOD_DEGREE}")
            else:
                rep.add(CheckResult(
                    f"embed.{family}.rel{ri}.specialized", INCONCLUSIVE,
                    detail=f"{hits}/{len(mod_pts)} modular points reduce "
                           f"at degree {K_MOD_DEGREE}; no reduction bound "
                           "certifies membership at this degree"))
    return rep


def variant_controls() -> Report:
    """Negative controls for the relation variants.

    Each check passes when the listed variant of a space relation is
    *definitively* excluded from the group ideal by the quadratic
    embedding, certifying that the forms used in build_space are the
    only consistent ones.
    """
    rep = Report()
    qm2 = QI * QI
    variants = {
        ("A", 4, "CB-relation with B in the linear term"):
            lambda E, k, d: E([(ONE, "DA"), (-qm2, "CB"),
                               (-k * (ONE - qm2), "B"), (-d, "")]),
        ("N", 1, "opposite sign on the BD/B pair"):
            lambda E, k, d: E([(ONE, "AB"), (-ONE, "BA"), (-2 * I, "AD"),
                               (-2 * I * k, "A"), (2 * ONE, "BD"),
                               (2 * k, "B")]),
        ("N", 4, "CB in place of BC"):
            lambda E, k, d: E([(ONE, "DA"), (-ONE, "CB"), (2 * I, "DC"),
                               (2 * I * k, "C"), (-d, "")]),
    }
    for (family, ri, desc), make in variants.items():
        G = hopf.build(_GROUP_OF[family])
        sp = build_space(family, k=K_MAP[family], delta=DELTA_MAP)
        alph = sp.pres.alphabet

        def E(spec, _a=alph):
            return _elem(_a, spec)

        rel = make(E, K_MAP[family], DELTA_MAP)
        phi = embedding_morphism(family)
        outcome = member(phi(rel), G.pres, degree=6, allow_bump=False)
        excluded = (not isinstance(outcome, Certificate)
                    and outcome.definitive)
        rep.check(f"variant.{family}.rel{ri}", excluded,
                  detail=f"{desc}: embedded image definitively outside "
                         "the group ideal")
    return rep


# ---------------------------------------------------------------------
# The coaction phi = Delta restricted to the embedded generators
# ---------------------------------------------------------------------

def coaction_morphism(family: str, space: QSpacePresentation = None):
    """phi: space -> group (x) space, from the coproduct of the embedded
    generators; the table is family- and parameter-independent."""
    G = hopf.build(_GROUP_OF[family])
    sp = space if space is not None else build_space(family)
    ga, sa = G.pres.alphabet, sp.pres.alphabet
    ta = ga.tensor(sa)

    def T(w, X):
        return tensor_elem(NCElem.word(ga, w), NCElem.gen(sa, X), ta)

    images = {
        "A": T("aa", "A") + T("bb", "D") + T("ab", "B") + T("ba", "C"),
        "D": T("cc", "A") + T("dd", "D") + T("cd", "B") + T("dc", "C"),
        "B": T("ac", "A") + T("bd", "D") + T("ad", "B") + T("bc", "C"),
        "C": T("ca", "A") + T("db", "D") + T("cb", "B") + T("da", "C"),
    }
    return Morphism(sa, ta, images)


_mixed_cache: dict = {}


def mixed_tensor(family: str) -> Presentation:
    """group (x) space presentation with cross commutators."""
    if family not in _mixed_cache:
        G = hopf.build(_GROUP_OF[family])
        sp = build_space(family)
        tp = tensor_presentation(G.pres, sp.pres,
                                 name=f"A^{family}(x)H^{family}")
        if tp.rewrite is not None:
            tp.rewrite.confluent = False
            ok, _ = confluence_probe(tp)
            if not ok:
                # fall back to the exact leg-wise reduction
                tp.rewrite = None
        _mixed_cache[family] = tp
    return _mixed_cache[family]


def _apply_counit_left(elem: NCElem, eps_table: dict, ga, sa) -> NCElem:
    """(eps (x) id) on an element of group (x) space."""
    n = len(ga.letters)
    out = NCElem.zero(sa)
    for word, coeff in elem.terms.items():
        w1 = tuple(l for l in word if l < n)
        w2 = tuple(l - n for l in word if l >= n)
        val = coeff
        dead = False
        for lid in w1:
            e = eps_table[ga.letters[lid]]
            if e.is_zero:
                dead = True
                break
            val = val * e
        if not dead:
            out = out + NCElem(sa, {w2: val})
    return out


def verify_coaction(family: str, degree: int = 6) -> Report:
    rep = Report()
    G = hopf.build(_GROUP_OF[family])
    sp = build_space(family)
    ga, sa = G.pres.alphabet, sp.pres.alphabet
    phi = coaction_morphism(family, sp)
    TP = mixed_tensor(family)
    for ri, rel in enumerate(sp.pres.relations):
        elem = flatten(phi(rel))
        cert = _membership_result(
            rep, f"coaction.{family}.rel{ri}", elem, TP, degree,
            detail="phi(relation) in the mixed tensor ideal")
        if cert is None and family == "K":
            rng = random.Random(7)
            ok = True
            for _ in range(5):
                pt = {"h": Fraction(rng.randint(1, 9), rng.randint(10, 19)),
                      "k": Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                      "delta": Fraction(rng.randint(-9, 9),
                                        rng.randint(1, 9))}
                if not member_specialized(elem, TP, degree, pt):
                    ok = False
                    break
            rep.check(f"coaction.{family}.rel{ri}.specialized", ok,
                      detail="modular reduction at 5 random "
                             f"(h,k,delta) points, degree {degree}")
    ident_s = Morphism(sa, sa, {i: NCElem(sa, {(i,): ONE})
                                for i in range(len(sa.letters))})
    ident_g = Morphism(ga, ga, {i: NCElem(ga, {(i,): ONE})
                                for i in range(len(ga.letters))})
    for x in sp.gens:
        px = phi(sp.gen(x))
        lhs = tensor_morphism(G.delta, ident_s).apply(px)
        rhs = tensor_morphism(ident_g, phi).apply(px)
        rep.check(f"coaction.{family}.coassoc.{x}", lhs == rhs,
                  detail="(Delta x id)phi = (id x phi)phi literally")
        rep.check(f"coaction.{family}.counit.{x}",
                  _apply_counit_left(px, G.eps_table, ga, sa) == sp.gen(x),
                  detail="(eps x id)phi = id literally")
    ss = tensor_morphism(G.star, sp.star)
    for x in sp.gens:
        diff = ss.apply(phi(sp.gen(x))) - phi(sp.star(sp.gen(x)))
        if diff.is_zero:
            rep.check(f"coaction.{family}.star.{x}", True,
                      detail="literal equality")
        else:
            _membership_result(rep, f"coaction.{family}.star.{x}",
                               flatten(diff), TP, degree,
                               detail="star-compatibility of phi")
    return rep


# ---------------------------------------------------------------------
# Classical limits (delta = 1, B = C at order 0, h = lam*s)
# ---------------------------------------------------------------------

def space_classical_limit(family: str):
    """First-order commutators against the covariant Poisson tables.

    Returns (derived PoissonStructure, Report).  The deformation scaling
    is q = exp(i*lam*s) for A, h = lam*s for K, and the rescaled
    h = lam*s family for N (whose printed relations sit at h = 1); the
    sign in the derived mu = +/- k correspondence is computed, not
    assumed, and reported per family.
    """
    rep = Report()
    if family == "A":
        sp = build_space("A", delta=1)
        images = {"q": jet_exp(I * LAM, "s", 2)}
    elif family == "K":
        sp = build_space("K", delta=1)
        images = {"h": Jet.variable("s", 2) * LAM}
    elif family == "N":
        sp = build_space("N", delta=1, h=H)
        images = {"h": Jet.variable("s", 2) * LAM}
    else:
        raise ValueError(f"unknown family {family}")
    pres = sp.pres
    alph = pres.alphabet
    ring = h_ring()            # A, B, D with AD -> B^2 + 1
    letters = alph.letters
    rels = pres.relations
    # C is linear in rel0 with unit coefficient; eliminate it exactly
    csub = Morphism(alph, alph, {
        "A": pres.gen("A"), "B": pres.gen("B"), "D": pres.gen("D"),
        "C": pres.gen("C") - rels[0]})
    # each commutator is an explicit relation combination: rel1 carries
    # AB - BA, rel2 carries BD - DB, rel3 - rel4 carries AD - DA
    combos = {("A", "B"): rels[1], ("B", "D"): rels[2],
              ("A", "D"): rels[3] - rels[4]}
    ring0 = h_ring(with_ideal=False)
    table, table0 = {}, {}
    for x, y in itertools.combinations(("A", "B", "D"), 2):
        g = pres.gen
        comm = g(x) * g(y) - g(y) * g(x)
        residual = csub(comm - combos[(x, y)])
        entry = ring0.zero()
        order0_ok = True
        for word, coeff in residual.terms.items():
            jet = jet_substitute(coeff, "s", images, 2)
            if not jet.coeffs[0].is_zero:
                order0_ok = False
            c1 = jet.coeffs[1] * (-I)
            if c1.is_zero:
                continue
            mono = ring0.one()
            for lid in word:
                name = letters[lid]
                mono = mono * ring0.var("B" if name == "C" else name)
            entry = entry + mono.scale(c1)
        rep.check(f"limit.space.{family}.{x}{y}.order0", order0_ok,
                  detail="commutator vanishes at order 0 (B = C there)")
        table0[(x, y)] = entry
        table[(x, y)] = CommPoly(ring, dict(entry.terms)).reduce()
    derived = PoissonStructure(ring, table, name=f"limit.space.{family}")
    matched_sign = None
    for sign in (-1, 1):
        target = plane_structure(family, LAM, Scalar.of(sign) * KP,
                                 ring=ring)
        if all((table[(x, y)] - target.pair(x, y)).reduce().is_zero
               for x, y in table):
            matched_sign = sign
            break
    artifact = None
    if matched_sign is None:
        # reconcile the quantum ordering defect: a residual is accepted
        # only when, before quadric reduction, it is an exact scalar
        # multiple of AD - B^2 (the symmetrization AD + BC of a quantum
        # relation differs from 2AD by exactly B^2 - AD at order 0)
        quadric = (ring0.var("A") * ring0.var("D")
                   - ring0.var("B") * ring0.var("B"))
        for sign in (1, -1):
            t0 = plane_structure(family, LAM, Scalar.of(sign) * KP,
                                 ring=ring0)
            coeffs = {}
            for (x, y), e0 in table0.items():
                c = _poly_multiple(e0 - t0.pair(x, y), quadric)
                if c is None:
                    coeffs = None
                    break
                coeffs[(x, y)] = c
            if coeffs is not None:
                matched_sign, artifact = sign, coeffs
                break
    for x, y in table:
        target = plane_structure(
            family, LAM, Scalar.of(matched_sign or -1) * KP, ring=ring)
        res = (table[(x, y)] - target.pair(x, y)).reduce()
        if res.is_zero:
            rep.check(f"limit.space.{family}.{x}{y}", True,
                      detail=f"against mu = {matched_sign or -1}*k "
                             "(reduced modulo AD - B^2 - 1)")
        elif artifact is not None:
            rep.check(
                f"limit.space.{family}.{x}{y}", True,
                detail=f"against mu = {matched_sign}*k up to the verified "
                       f"ordering defect ({artifact[(x, y)]})*(AD - B^2), "
                       "i.e. that multiple of delta on the quadric")
        else:
            rep.check(f"limit.space.{family}.{x}{y}", False,
                      detail=f"against mu = {matched_sign or -1}*k "
                             "(reduced modulo AD - B^2 - 1)",
                      residual=res)
    rep.check(f"limit.space.{family}.sign", matched_sign is not None,
              detail=f"derived correspondence mu = {matched_sign}*k"
                     + ("" if artifact is None
                        else " (with quadric-proportional ordering defect)"))
    rep.extend(check_jacobi(derived))
    return derived, rep


def _poly_multiple(diff, base):
    """diff == c*base for a single Scalar c (c = 0 included); else None."""
    if diff.is_zero:
        return Scalar.zero()
    if set(diff.terms) != set(base.terms):
        return None
    e0 = next(iter(base.terms))
    c = diff.terms[e0]._div_unchecked(base.terms[e0])
    for e, bc in base.terms.items():
        if not (diff.terms[e] - c * bc).is_zero:
            return None
    return c


# ---------------------------------------------------------------------
# Normal form under X -> -X and X -> X/sqrt(|delta|)  (k >= 0, delta in
# {-1,0,1})
# ---------------------------------------------------------------------

_S_IDX = PARAMS.index("s")


def _s_reduce(x: Scalar, dabs: Fraction) -> Scalar:
    """Reduce the formal square-root symbol: s^2 -> |delta|."""
    def poly(p: MPoly) -> MPoly:
        t = {}
        for e, c in p.terms.items():
            m = e[_S_IDX]
            if m >= 2 or m <= -2:
                q_, r_ = divmod(m, 2)
                c = c * (Fraction(dabs) ** q_)
                e = e[:_S_IDX] + (r_,) + e[_S_IDX + 1:]
            v = t.get(e)
            v = c if v is None else v + c
            if v.is_zero:
                t.pop(e, None)
            else:
                t[e] = v
        return MPoly(t)
    return Scalar(poly(x.num), poly(x.den))


class NormalForm:
    """Outcome of the equivalence reduction: target parameters plus the
    verified generator maps."""

    def __init__(self, family, k, delta, kprime, dprime, scale_desc,
                 report):
        self.family = family
        self.k, self.delta = k, delta
        self.kprime, self.dprime = kprime, dprime
        self.scale_desc = scale_desc
        self.report = report


def equivalence_normal_form(family: str, k, delta) -> NormalForm:
    """Normalize H^I_{h,k,delta} to k' >= 0 and delta' in {-1,0,1}.

    The sign flip X -> -X sends k to -k; the rescaling X -> X/u with
    u^2 = |delta| sends (k, delta) to (k/u, delta/|delta|).  When
    |delta| is not a perfect square the rescaling factor is the formal
    symbol s constrained by s^2 = |delta|.  Both generator maps are
    verified by exact proportionality of the transported relations.
    """
    k, delta = Fraction(k), Fraction(delta)
    rep = Report()
    kabs = -k if k < 0 else k
    dabs = -delta if delta < 0 else delta
    dprime = 0 if delta == 0 else (1 if delta > 0 else -1)
    if delta == 0:
        u = None
        kprime = kabs
        scale_desc = "no rescaling (delta = 0)"
    else:
        r = rational_sqrt(dabs)
        if r is not None:
            u = Scalar.of(r)
            kprime = kabs / r
            scale_desc = f"rational rescaling by 1/{r}"
        else:
            u = Scalar.param("s")
            # k/s has no registered s-denominator; use k*s/|delta|
            kprime = Scalar.of(kabs / dabs) * u
            scale_desc = f"formal rescaling by 1/s with s^2 = {dabs}"
    src = build_space(family, k=k, delta=delta)
    tgt = build_space(family, k=kprime, delta=Fraction(dprime))
    alph = src.pres.alphabet
    symbolic = delta != 0 and rational_sqrt(dabs) is None

    # the composed map is Y = sgn * X / u; substituting X = sgn*u*Y into
    # a source relation yields u^2 times the matching target relation
    sgn = Scalar.of(-1 if k < 0 else 1)
    if u is None:
        fwd_factor, bwd_factor = sgn, sgn
    else:
        uinv = Scalar.of(Fraction(1, 1) / dabs) * u if symbolic else ONE / u
        fwd_factor, bwd_factor = sgn * u, sgn * uinv

    def transport(rel, factor):
        pows = [ONE, factor, factor * factor]
        img = NCElem(alph, {w: c * pows[len(w)]
                            for w, c in rel.terms.items()})
        if symbolic:
            img = img.map_coeffs(lambda c: _s_reduce(c, dabs))
        return img

    for ri, (rs, rt) in enumerate(zip(src.pres.relations,
                                      tgt.pres.relations)):
        ok, lam_ = _proportional(transport(rs, fwd_factor), rt,
                                 dabs if symbolic else None)
        rep.check(f"normalize.{family}.fwd.rel{ri}", ok,
                  detail=f"source relation transports to {lam_} times the "
                         "target relation")
        ok, lam_ = _proportional(transport(rt, bwd_factor), rs,
                                 dabs if symbolic else None)
        rep.check(f"normalize.{family}.bwd.rel{ri}", ok,
                  detail=f"target relation transports back to {lam_} times "
                         "the source relation")
    kp_ok = (kprime >= 0) if isinstance(kprime, Fraction) else True
    rep.check(f"normalize.{family}.kprime", kp_ok,
              detail=f"k' = {kprime} >= 0")
    rep.check(f"normalize.{family}.dprime", dprime in (-1, 0, 1),
              detail=f"delta' = {dprime}")
    return NormalForm(family, k, delta, kprime, dprime, scale_desc, rep)


def _proportional(x: NCElem, y: NCElem, dabs):
    """x == c*y for a single nonzero scalar c; returns (ok, c)."""
    if x.is_zero and y.is_zero:
        return True, Scalar.one()
    if x.is_zero or y.is_zero:
        return False, None
    if set(x.terms) != set(y.terms):
        return False, None
    w0 = next(iter(x.terms))
    c = x.terms[w0]._div_unchecked(y.terms[w0])
    for w, cx in x.terms.items():
        diff = cx - c * y.terms[w]
        if dabs is not None:
            diff = _s_reduce(diff, dabs)
        if not diff.is_zero:
            return False, c
    return True, c
