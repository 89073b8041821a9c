"""Bounded-degree two-sided ideal membership with replayable certificates.

Ground truth is an exact sparse row-echelon solver over all padded
relations l * rel * r up to a degree bound, with degree-lexicographic
column order.  Presentations whose relations admit an oriented rewriting
system (validated by a local-confluence probe) get a fast normalization
path; both paths emit certificates that an independent replay re-expands.
"""
from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

from .scalars import Scalar, MPoly, GaussianRational, PARAMS
from .ncalg import Alphabet, NCElem, AlgebraError, flatten


class MembershipError(AlgebraError):
    pass


class IllFormedOrientation(MembershipError):
    pass


class NameCollisionError(MembershipError):
    pass


def deglex_key(word: tuple):
    return (len(word), word)


def _scalar_data(s: Scalar) -> dict:
    def poly(p):
        return [[list(e), str(c.re), str(c.im)]
                for e, c in sorted(p.terms.items())]
    return {"num": poly(s.num), "den": poly(s.den)}


def _scalar_from(d: dict) -> Scalar:
    def poly(rows):
        return MPoly({tuple(e): GaussianRational(Fraction(re), Fraction(im))
                      for e, re, im in rows})
    return Scalar(poly(d["num"]), poly(d["den"]))


class Certificate:
    """Witness: element = sum coeff * leftWord * relation * rightWord."""

    __slots__ = ("summands",)

    def __init__(self, summands):
        # summands: list of (left word, relation index, right word, Scalar)
        self.summands = list(summands)

    def replay(self, presentation: "Presentation") -> NCElem:
        """Independent re-expansion of the witness combination."""
        alph = presentation.alphabet
        total = NCElem.zero(alph)
        for left, relidx, right, coeff in self.summands:
            lw = NCElem(alph, {tuple(left): Scalar.one()})
            rw = NCElem(alph, {tuple(right): Scalar.one()})
            total = total + (lw * presentation.relations[relidx] * rw).scale(coeff)
        return total

    def verify(self, presentation: "Presentation", element: NCElem) -> bool:
        return (self.replay(presentation) - element).is_zero

    def to_data(self, presentation: "Presentation") -> dict:
        """JSON-serializable exact form of the certificate."""
        alph = presentation.alphabet
        return {"presentation": presentation.name,
                "summands": [[[alph.letters[l] for l in left], relidx,
                              [alph.letters[l] for l in right],
                              _scalar_data(coeff)]
                             for left, relidx, right, coeff in self.summands]}

    @staticmethod
    def from_data(presentation: "Presentation", data: dict) -> "Certificate":
        alph = presentation.alphabet
        return Certificate(
            [(tuple(alph.letter(n) for n in left), relidx,
              tuple(alph.letter(n) for n in right), _scalar_from(sd))
             for left, relidx, right, sd in data["summands"]])

    def dump(self, presentation: "Presentation") -> str:
        alph = presentation.alphabet
        lines = []
        for left, relidx, right, coeff in self.summands:
            lw = ".".join(alph.display(l) for l in left) or "1"
            rw = ".".join(alph.display(l) for l in right) or "1"
            lines.append(f"{coeff}\t{lw}\trel#{relidx}\t{rw}")
        return "\n".join(lines)

    def __len__(self):
        return len(self.summands)


class InconclusiveUpToD:
    """Non-membership up to the degree bound (semidecision outcome).

    ``definitive`` is set when a confluence-checked rewriting system
    produced a nonzero normal form, which rules out membership at every
    degree.
    """

    __slots__ = ("degree", "residual", "definitive")

    def __init__(self, degree, residual, definitive=False):
        self.degree = degree
        self.residual = residual
        self.definitive = definitive

    def __repr__(self):
        kind = "NonMember" if self.definitive else f"InconclusiveUpTo{self.degree}"
        return f"{kind}(residual={self.residual})"


class RewriteRule:
    __slots__ = ("head", "tail", "combo")

    def __init__(self, head: tuple, tail: NCElem, combo):
        # head - tail == sum coeff * leftWord * relation * rightWord
        # (combo: list of (Scalar, left word, relidx, right word))
        self.head = head
        self.tail = tail
        self.combo = combo


class RewriteSystem:
    """Oriented rules with a private letter precedence.

    Tails must be strictly smaller than heads in deglex over the given
    precedence; reduction then terminates.  Soundness of certificates does
    not depend on confluence (replay is checked independently); the
    confluence probe upgrades nonzero normal forms to definitive
    non-membership.
    """

    def __init__(self, presentation: "Presentation", rules, precedence=None,
                 confluent: bool = False):
        self.presentation = presentation
        nletters = len(presentation.alphabet.letters)
        if precedence is None:
            precedence = list(range(nletters))
        self.rank = [0] * nletters
        for r, lid in enumerate(precedence):
            self.rank[lid] = r
        self.rules = []
        self._heads: dict = {}
        self._maxhead = 0
        self.confluent = confluent
        for rule in rules:
            hk = self._key(rule.head)
            for w in rule.tail.terms:
                if not self._key(w) < hk:
                    raise IllFormedOrientation(
                        f"tail word {w} not below head {rule.head}")
            self.add_rule(rule)

    def add_rule(self, rule: RewriteRule):
        self.rules.append(rule)
        self._heads[rule.head] = rule
        self._maxhead = max(self._maxhead, len(rule.head))

    def remove_rule(self, rule: RewriteRule):
        self.rules.remove(rule)
        del self._heads[rule.head]

    def _key(self, word: tuple):
        return (len(word), tuple(self.rank[l] for l in word))

    def _find(self, word: tuple):
        heads = self._heads
        hmax = self._maxhead
        for pos in range(len(word)):
            limit = min(hmax, len(word) - pos)
            for n in range(1, limit + 1):
                rule = heads.get(word[pos:pos + n])
                if rule is not None:
                    return pos, rule
        return None

    def reduce(self, element: NCElem):
        """Full normal form plus certificate summands for the ideal part."""
        pending = dict(element.terms)
        out: dict = {}
        summands = []
        while pending:
            w = max(pending, key=self._key)
            c = pending.pop(w)
            if c.is_zero:
                continue
            hit = self._find(w)
            if hit is None:
                s = out.get(w, Scalar.zero()) + c
                if s.is_zero:
                    out.pop(w, None)
                else:
                    out[w] = s
                continue
            pos, rule = hit
            left, right = w[:pos], w[pos + len(rule.head):]
            for coeff, lp, relidx, rp in rule.combo:
                summands.append((left + lp, relidx, rp + right, c * coeff))
            for tw, tc in rule.tail.terms.items():
                ww = left + tw + right
                s = pending.get(ww, Scalar.zero()) + c * tc
                if s.is_zero:
                    pending.pop(ww, None)
                else:
                    pending[ww] = s
        nf = NCElem(element.alphabet, out)
        return nf, summands


class Presentation:
    """Finitely presented algebra over a 1-leg alphabet."""

    def __init__(self, name: str, alphabet: Alphabet, relations,
                 unitary_q: bool = False):
        if alphabet.nlegs != 1:
            raise MembershipError("presentations use flattened alphabets")
        self.name = name
        self.alphabet = alphabet
        self.relations = list(relations)
        for rel in self.relations:
            if rel.is_zero:
                raise MembershipError("zero relation")
        self.unitary_q = unitary_q
        self.rewrite: RewriteSystem | None = None
        self._echelons: dict[int, _Echelon] = {}
        self._groebner: tuple[int, RewriteSystem] | None = None
        # set by tensor_presentation: the two factor presentations
        self.tensor_of: tuple[Presentation, Presentation] | None = None
        # optional feasibility ceiling for padded-echelon construction;
        # membership queries above it report the clamped degree honestly
        self.max_echelon_degree: int | None = None
        self._mod_echelons: dict = {}

    def gen(self, name: str) -> NCElem:
        return NCElem.gen(self.alphabet, name)

    def one(self) -> NCElem:
        return NCElem.one(self.alphabet)

    def echelon(self, degree: int) -> "_Echelon":
        ech = self._echelons.get(degree)
        if ech is None:
            ech = self._echelons[degree] = _Echelon(self, degree)
        return ech

    def groebner(self, degree: int) -> "RewriteSystem":
        cached = self._groebner
        if cached is not None:
            d, rs = cached
            if rs.confluent or d >= degree:
                return rs
        rs = groebner_complete(self, degree)
        self._groebner = (degree, rs)
        return rs

    def attach_orientation(self, oriented, precedence_names=None,
                           confluent: bool = False):
        """Install a rewriting system from (head names, tail NCElem) pairs.

        Each rule is auto-certified against the relation list by a small
        echelon query, so rewrite certificates refer to original relations.
        """
        alph = self.alphabet
        precedence = None
        if precedence_names is not None:
            precedence = [alph.letter(n) for n in precedence_names]
        rules = []
        maxdeg = max(len(tuple(alph.letter(n) for n in head))
                     for head, _ in oriented)
        ech = _Echelon(self, max(2, maxdeg))
        for head_names, tail in oriented:
            head = tuple(alph.letter(n) for n in head_names)
            head_elem = NCElem(alph, {head: Scalar.one()})
            res, cert = ech.reduce_query(head_elem - tail)
            if not res.is_zero:
                raise IllFormedOrientation(
                    f"rule {head_names} is not a combination of relations")
            combo = [(coeff, left, relidx, right)
                     for (left, relidx, right), coeff in cert.items()
                     if not coeff.is_zero]
            rules.append(RewriteRule(head, tail, combo))
        self.rewrite = RewriteSystem(self, rules, precedence,
                                     confluent=confluent)
        return self.rewrite


class _Echelon:
    """Row echelon of all padded relations up to a degree bound.

    Rows are monic at their deglex-leading word (alphabet order); each row
    carries the combination of padded relations that produced it, so query
    reduction yields certificates for free.
    """

    def __init__(self, presentation: Presentation, degree: int, pad=None):
        self.presentation = presentation
        self.degree = degree
        self.pivots: dict = {}  # lead word -> (row dict, cert dict)
        alph = presentation.alphabet
        nlet = len(alph.letters)
        for relidx, rel in enumerate(presentation.relations):
            reldeg = rel.degree()
            room = degree - reldeg if pad is None else min(pad, degree - reldeg)
            if room < 0:
                continue
            for total in range(room + 1):
                for llen in range(total + 1):
                    rlen = total - llen
                    for left in itertools.product(range(nlet), repeat=llen):
                        for right in itertools.product(range(nlet),
                                                       repeat=rlen):
                            self._insert(left, relidx, right, rel)

    def _insert(self, left, relidx, right, rel: NCElem):
        row = {left + w + right: c for w, c in rel.terms.items()}
        cert = {(left, relidx, right): Scalar.one()}
        while row:
            lead = max(row, key=deglex_key)
            hit = self.pivots.get(lead)
            if hit is None:
                c = row.pop(lead)
                inv = Scalar.one()._div_unchecked(c)
                mrow = {lead: Scalar.one()}
                for w, v in row.items():
                    v = v * inv
                    if not v.is_zero:
                        mrow[w] = v
                mcert = {}
                for kk, v in cert.items():
                    v = v * inv
                    if not v.is_zero:
                        mcert[kk] = v
                self.pivots[lead] = (mrow, mcert)
                return
            prow, pcert = hit
            c = row.pop(lead)
            for w, v in prow.items():
                if w == lead:
                    continue
                s = row.get(w, Scalar.zero()) - c * v
                if s.is_zero:
                    row.pop(w, None)
                else:
                    row[w] = s
            for kk, v in pcert.items():
                s = cert.get(kk, Scalar.zero()) - c * v
                if s.is_zero:
                    cert.pop(kk, None)
                else:
                    cert[kk] = s

    def reduce_query(self, element: NCElem):
        """Normal form of an element against the echelon, with certificate."""
        row = dict(element.terms)
        cert: dict = {}
        out: dict = {}
        while row:
            lead = max(row, key=deglex_key)
            c = row.pop(lead)
            if c.is_zero:
                continue
            hit = self.pivots.get(lead)
            if hit is None:
                out[lead] = c
                continue
            prow, pcert = hit
            for w, v in prow.items():
                if w == lead:
                    continue
                s = row.get(w, Scalar.zero()) - c * v
                if s.is_zero:
                    row.pop(w, None)
                else:
                    row[w] = s
            for kk, v in pcert.items():
                s = cert.get(kk, Scalar.zero()) + c * v
                if s.is_zero:
                    cert.pop(kk, None)
                else:
                    cert[kk] = s
        return NCElem(element.alphabet, out), cert


def groebner_complete(presentation: Presentation, degree: int = 6,
                      max_rules: int = 400, _trace=None) -> RewriteSystem:
    """Bounded-degree Buchberger completion with certificate tracking.

    Rules are oriented by deglex over the alphabet order; every rule's
    head-minus-tail carries an exact padded combination of the original
    relations, so reductions yield replayable certificates.  If every
    overlap/containment ambiguity up to the degree bound resolves and no
    candidate rule exceeded it, the system is marked confluent and
    nonzero normal forms are definitive at every degree.
    """
    alph = presentation.alphabet
    rs = RewriteSystem(presentation, [])
    complete = True

    def reduce_combo(elem, combo):
        # invariant in: elem == sum combo * padded relations
        nf, summands = rs.reduce(elem)
        out = dict(combo)
        for lw, ri, rw, c in summands:
            key = (lw, ri, rw)
            s = out.get(key, Scalar.zero()) - c
            if s.is_zero:
                out.pop(key, None)
            else:
                out[key] = s
        return nf, out

    def make_rule(nf, combo):
        lead = max(nf.terms, key=deglex_key)
        inv = Scalar.one()._div_unchecked(nf.terms[lead])
        tail = NCElem(alph, {w: -(c * inv)
                             for w, c in nf.terms.items() if w != lead})
        comb = []
        for (lw, ri, rw), c in combo.items():
            c = c * inv
            if not c.is_zero:
                comb.append((c, lw, ri, rw))
        return RewriteRule(lead, tail, comb)

    pairs: deque = deque()
    added = 0

    def contains(word, sub):
        n = len(sub)
        return any(word[p:p + n] == sub for p in range(len(word) - n + 1))

    def combo_dict(rule):
        out = {}
        for c, lw, ri, rw in rule.combo:
            key = (lw, ri, rw)
            s = out.get(key, Scalar.zero()) + c
            if s.is_zero:
                out.pop(key, None)
            else:
                out[key] = s
        return out

    def install(rule):
        nonlocal added, complete
        if _trace is not None:
            _trace(added, rule)
        added += 1
        rs.add_rule(rule)
        for other in list(rs.rules):
            pairs.append((rule, other))
            if other is not rule:
                pairs.append((other, rule))
        # inter-reduction: simplify older rules against the new head
        for old in list(rs.rules):
            if old is rule:
                continue
            if contains(old.head, rule.head):
                rs.remove_rule(old)
                elem = (NCElem(alph, {old.head: Scalar.one()}) - old.tail)
                nf, combo = reduce_combo(elem, combo_dict(old))
                if nf.is_zero:
                    continue
                newr = make_rule(nf, combo)
                if len(newr.head) > degree:
                    complete = False
                    continue
                install(newr)
            elif any(contains(w, rule.head) for w in old.tail.terms):
                tailnf, summands = rs.reduce(old.tail)
                combo = combo_dict(old)
                for lw, ri, rw, c in summands:
                    key = (lw, ri, rw)
                    s = combo.get(key, Scalar.zero()) + c
                    if s.is_zero:
                        combo.pop(key, None)
                    else:
                        combo[key] = s
                old.tail = tailnf
                old.combo = [(c, lw, ri, rw)
                             for (lw, ri, rw), c in combo.items()]

    # seed with the inter-reduced relation space (unpadded echelon), so the
    # initial rules have reduced tails and carry their own certificates
    seed = _Echelon(presentation,
                    max(r.degree() for r in presentation.relations), pad=0)
    for lead in sorted(seed.pivots, key=deglex_key):
        row, cert = seed.pivots[lead]
        elem = NCElem(alph, dict(row))
        nf, combo = reduce_combo(elem, {k: v for k, v in cert.items()})
        if nf.is_zero:
            continue
        rule = make_rule(nf, combo)
        if len(rule.head) > degree:
            complete = False
            continue
        install(rule)

    while pairs:
        r1, r2 = pairs.popleft()
        if r1.head not in rs._heads or r2.head not in rs._heads:
            continue
        if rs._heads[r1.head] is not r1 or rs._heads[r2.head] is not r2:
            continue
        h1, h2 = r1.head, r2.head
        # ambiguity words w = A.h1.B = C.h2.D
        ambigs = []
        for k in range(1, min(len(h1), len(h2))):
            if h1[len(h1) - k:] == h2[:k]:
                ambigs.append(((), h2[k:], h1[:len(h1) - k], ()))
        if len(h2) < len(h1):
            for pos in range(len(h1) - len(h2) + 1):
                if h1[pos:pos + len(h2)] == h2:
                    ambigs.append(((), (), h1[:pos], h1[pos + len(h2):]))
        for A, B, C, D in ambigs:
            if len(A) + len(h1) + len(B) > degree:
                complete = False
                continue
            S = (NCElem(alph, {A: Scalar.one()}) * r1.tail
                 * NCElem(alph, {B: Scalar.one()})
                 - NCElem(alph, {C: Scalar.one()}) * r2.tail
                 * NCElem(alph, {D: Scalar.one()}))
            combo: dict = {}
            for c, lp, ri_, rp in r2.combo:
                key = (C + lp, ri_, rp + D)
                s = combo.get(key, Scalar.zero()) + c
                if s.is_zero:
                    combo.pop(key, None)
                else:
                    combo[key] = s
            for c, lp, ri_, rp in r1.combo:
                key = (A + lp, ri_, rp + B)
                s = combo.get(key, Scalar.zero()) - c
                if s.is_zero:
                    combo.pop(key, None)
                else:
                    combo[key] = s
            nf, combo = reduce_combo(S, combo)
            if nf.is_zero:
                continue
            rule = make_rule(nf, combo)
            if len(rule.head) > degree:
                complete = False
                continue
            if added >= max_rules:
                complete = False
                pairs.clear()
                break
            install(rule)
    rs.confluent = complete
    return rs


def _tensor_reduce(element: NCElem, presentation: Presentation, degree: int):
    """Leg-wise reduction in a tensor presentation.

    The quotient by (I1 (x) A2 + A1 (x) I2 + cross commutators) is the
    tensor product of the two factor quotients, so membership can be
    decided by sorting each word into leg order (via the cross relations)
    and then reducing the leg-1 and leg-2 factors independently against
    the factor echelons.  This avoids ever building an echelon over the
    doubled alphabet.
    """
    p1, p2 = presentation.tensor_of
    n1 = len(p1.alphabet.letters)
    n2 = len(p2.alphabet.letters)
    off = len(p1.relations)
    base = off + len(p2.relations)
    summands = []

    # 1. sort letters into leg order using the cross commutators
    sorted_terms: dict = {}
    for word, coeff in element.terms.items():
        w = list(word)
        while True:
            for pos in range(len(w) - 1):
                if w[pos] >= n1 and w[pos + 1] < n1:
                    i, j = w[pos + 1], w[pos]
                    crossidx = base + i * n2 + (j - n1)
                    summands.append((word[:0] + tuple(w[:pos]), crossidx,
                                     tuple(w[pos + 2:]), -coeff))
                    w[pos], w[pos + 1] = i, j
                    break
            else:
                break
        key = tuple(w)
        s = sorted_terms.get(key, Scalar.zero()) + coeff
        if s.is_zero:
            sorted_terms.pop(key, None)
        else:
            sorted_terms[key] = s

    def split(word):
        cut = 0
        while cut < len(word) and word[cut] < n1:
            cut += 1
        return word[:cut], tuple(l - n1 for l in word[cut:])

    def shift(word):
        return tuple(l + n1 for l in word)

    # 2. reduce leg-1 factors, slice by slice over the leg-2 word
    slices1: dict = {}
    d1 = d2 = 0
    for word, coeff in sorted_terms.items():
        w1, w2 = split(word)
        d1, d2 = max(d1, len(w1)), max(d2, len(w2))
        slices1.setdefault(w2, {})[w1] = coeff
    def leg_degree(p, dleg):
        d = max(min(max(degree, 2), dleg + 2), dleg, 2)
        if p.max_echelon_degree is not None:
            d = min(d, p.max_echelon_degree)
        return d

    ech1 = p1.echelon(leg_degree(p1, d1))
    mid: dict = {}
    for w2, terms in slices1.items():
        nf, cert = ech1.reduce_query(NCElem(p1.alphabet, terms))
        for (l, ri, r), c in cert.items():
            summands.append((l, ri, r + shift(w2), c))
        for w1, c in nf.terms.items():
            mid.setdefault(w1, {})[w2] = c

    # 3. reduce leg-2 factors, slice by slice over the leg-1 word
    ech2 = p2.echelon(leg_degree(p2, d2))
    residual: dict = {}
    for w1, terms in mid.items():
        nf, cert = ech2.reduce_query(NCElem(p2.alphabet, terms))
        for (l, ri, r), c in cert.items():
            summands.append((w1 + shift(l), off + ri, shift(r), c))
        for w2, c in nf.terms.items():
            residual[w1 + shift(w2)] = c
    return NCElem(presentation.alphabet, residual), summands


def member(element: NCElem, presentation: Presentation, degree: int = None,
           use_rewrite: bool = True, use_groebner: bool = False,
           bump_ceiling: int = None, allow_bump: bool = True):
    """Semidecide membership of element in the two-sided relation ideal.

    Returns a Certificate (verified by replay before returning) or an
    InconclusiveUpToD value.  Resolution order: hand-attached rewriting
    system, then leg-wise factor reduction for tensor presentations, then
    bounded Buchberger completion when requested, then the padded echelon
    (ground truth, feasible only at small degrees).
    """
    if element.alphabet.nlegs > 1:
        element = flatten(element)
    if element.alphabet != presentation.alphabet:
        raise MembershipError("element alphabet does not match presentation")
    if element.is_zero:
        return Certificate([])
    if use_rewrite and presentation.rewrite is not None:
        nf, summands = presentation.rewrite.reduce(element)
        if nf.is_zero:
            cert = Certificate(summands)
            if not cert.verify(presentation, element):
                raise MembershipError("rewrite certificate failed replay")
            return cert
        return InconclusiveUpToD(None, nf,
                                 definitive=presentation.rewrite.confluent)
    if degree is None:
        degree = element.degree() + 2
    if bump_ceiling is None:
        bump_ceiling = max(degree, 8)
    d = max(degree, element.degree())
    if presentation.tensor_of is not None:
        residual, summands = _tensor_reduce(element, presentation, d)
        if residual.is_zero:
            cert = Certificate(summands)
            if not cert.verify(presentation, element):
                raise MembershipError("tensor certificate failed replay")
            return cert
        return InconclusiveUpToD(d, residual)
    if use_groebner:
        gb = presentation.groebner(max(d, 6))
        nf, summands = gb.reduce(element)
        if nf.is_zero:
            cert = Certificate(summands)
            if not cert.verify(presentation, element):
                raise MembershipError("completion certificate failed replay")
            return cert
        if gb.confluent:
            return InconclusiveUpToD(None, nf, definitive=True)
        return InconclusiveUpToD(d, nf)
    cap = presentation.max_echelon_degree
    if cap is not None:
        d = min(d, cap)
        bump_ceiling = min(bump_ceiling, cap)
    while True:
        ech = presentation.echelon(d)
        residual, cert = ech.reduce_query(element)
        if residual.is_zero:
            summands = [(left, relidx, right, coeff)
                        for (left, relidx, right), coeff in cert.items()]
            certificate = Certificate(summands)
            if not certificate.verify(presentation, element):
                raise MembershipError("echelon certificate failed replay")
            return certificate
        if not allow_bump or d >= bump_ceiling:
            return InconclusiveUpToD(d, residual)
        d += 1


# ---------------------------------------------------------------------
# Randomized specialization path: exact modular linear algebra at a
# rational parameter point.  One-sided Monte-Carlo evidence for checks
# whose symbolic echelon degree is infeasible; the symbolic path remains
# the certifying gate.
# ---------------------------------------------------------------------

MOD_PRIME = 2147483629  # prime, = 1 (mod 4), so i has a square root


class SpecializationError(MembershipError):
    pass


_SQRT_M1: dict = {}


def _sqrt_minus1(p: int) -> int:
    x = _SQRT_M1.get(p)
    if x is None:
        for a in range(2, 10000):
            x = pow(a, (p - 1) // 4, p)
            if x * x % p == p - 1:
                break
        else:
            raise SpecializationError(f"no sqrt(-1) mod {p}")
        _SQRT_M1[p] = x
    return x


def _frac_mod(f: Fraction, p: int) -> int:
    d = f.denominator % p
    if d == 0:
        raise SpecializationError("denominator divisible by the prime")
    return f.numerator % p * pow(d, -1, p) % p


def _scalar_mod(s: Scalar, vals, p: int, ip: int) -> int:
    def poly(m):
        total = 0
        for exps, c in m.terms.items():
            v = Fraction(1)
            for i, e in enumerate(exps):
                if e:
                    base = vals[i]
                    if base is None:
                        raise SpecializationError(
                            f"parameter {PARAMS[i]} not assigned")
                    if base == 0 and e < 0:
                        raise SpecializationError(
                            f"parameter {PARAMS[i]} = 0 with negative power")
                    v *= base ** e
            total = (total + _frac_mod(c.re * v, p)
                     + ip * _frac_mod(c.im * v, p)) % p
        return total
    num, den = poly(s.num), poly(s.den)
    if den == 0:
        raise SpecializationError("denominator vanishes at the point")
    return num * pow(den, -1, p) % p


def _elem_mod(x: NCElem, vals, p: int, ip: int) -> dict:
    out = {}
    for w, c in x.terms.items():
        v = _scalar_mod(c, vals, p, ip)
        if v:
            out[w] = v
    return out


class _ModEchelon:
    """Padded-relation echelon over GF(p) at a rational parameter point."""

    def __init__(self, presentation: Presentation, degree: int, vals,
                 p: int, ip: int):
        self.p = p
        self.pivots: dict = {}
        alph = presentation.alphabet
        nlet = len(alph.letters)
        rels = [_elem_mod(r, vals, p, ip) for r in presentation.relations]
        for rel in rels:
            if not rel:
                continue
            reldeg = max(len(w) for w in rel)
            room = degree - reldeg
            if room < 0:
                continue
            for total in range(room + 1):
                for llen in range(total + 1):
                    for left in itertools.product(range(nlet), repeat=llen):
                        for right in itertools.product(
                                range(nlet), repeat=total - llen):
                            self._insert({left + w + right: c
                                          for w, c in rel.items()})

    def _insert(self, row: dict):
        p = self.p
        while row:
            lead = max(row, key=deglex_key)
            hit = self.pivots.get(lead)
            if hit is None:
                c = row.pop(lead)
                inv = pow(c, -1, p)
                self.pivots[lead] = {w: v * inv % p for w, v in row.items()}
                return
            c = row.pop(lead)
            for w, v in hit.items():
                s = (row.get(w, 0) - c * v) % p
                if s:
                    row[w] = s
                else:
                    row.pop(w, None)

    def reduce(self, row: dict) -> dict:
        p = self.p
        row = dict(row)
        out = {}
        while row:
            lead = max(row, key=deglex_key)
            c = row.pop(lead)
            if not c:
                continue
            hit = self.pivots.get(lead)
            if hit is None:
                out[lead] = c
                continue
            for w, v in hit.items():
                s = (row.get(w, 0) - c * v) % p
                if s:
                    row[w] = s
                else:
                    row.pop(w, None)
        return out


def _mod_echelon(presentation, degree, vals, p, ip) -> _ModEchelon:
    key = (degree, vals, p)
    ech = presentation._mod_echelons.get(key)
    if ech is None:
        ech = _ModEchelon(presentation, degree, vals, p, ip)
        presentation._mod_echelons[key] = ech
    return ech


def member_specialized(element: NCElem, presentation: Presentation,
                       degree: int, values: dict,
                       prime: int = MOD_PRIME) -> bool:
    """Membership decision at a rational parameter point, modulo a prime.

    ``values`` maps parameter names to rationals; every parameter that
    occurs must be assigned.  Returns True iff the specialized element
    reduces to zero against the specialized padded echelon (for tensor
    presentations, leg by leg).  A True result is Monte-Carlo evidence
    for membership; False certifies non-membership at this specialization
    up to the stated degree unless the prime divides a structure constant.
    """
    if element.alphabet.nlegs > 1:
        element = flatten(element)
    if element.alphabet != presentation.alphabet:
        raise MembershipError("element alphabet does not match presentation")
    p = prime
    ip = _sqrt_minus1(p)
    vals = tuple(Fraction(values[nm]) if nm in values else None
                 for nm in PARAMS)
    row = _elem_mod(element, vals, p, ip)
    if not row:
        return True
    if presentation.tensor_of is not None:
        p1, p2 = presentation.tensor_of
        n1 = len(p1.alphabet.letters)
        # legs commute: sort the letters, then reduce leg by leg
        sorted_row: dict = {}
        for word, c in row.items():
            key = tuple(sorted(range(len(word)),
                               key=lambda i: (word[i] >= n1, i)))
            w = tuple(word[i] for i in key)
            sorted_row[w] = (sorted_row.get(w, 0) + c) % p
        slices: dict = {}
        d1 = d2 = 0
        for word, c in sorted_row.items():
            if not c:
                continue
            cut = 0
            while cut < len(word) and word[cut] < n1:
                cut += 1
            w1, w2 = word[:cut], tuple(l - n1 for l in word[cut:])
            d1, d2 = max(d1, len(w1)), max(d2, len(w2))
            slices.setdefault(w2, {})[w1] = c
        ech1 = _mod_echelon(p1, max(min(degree, d1 + 2), d1, 2), vals, p, ip)
        mid: dict = {}
        for w2, terms in slices.items():
            for w1, c in ech1.reduce(terms).items():
                mid.setdefault(w1, {})[w2] = c
        ech2 = _mod_echelon(p2, max(min(degree, d2 + 2), d2, 2), vals, p, ip)
        for w1, terms in mid.items():
            if ech2.reduce(terms):
                return False
        return True
    ech = _mod_echelon(presentation, degree, vals, p, ip)
    return not ech.reduce(row)


def tensor_presentation(p1: Presentation, p2: Presentation,
                        name: str = None) -> Presentation:
    """Union presentation with cross commutators between the two legs.

    Leg-2 letters are primed.  If both inputs carry rewriting systems the
    tensor inherits one (their rules plus orientations of the cross
    commutators).
    """
    a1, a2 = p1.alphabet, p2.alphabet
    names1 = list(a1.letters)
    names2 = [n + "'" for n in a2.letters]
    if set(names1) & set(names2):
        raise NameCollisionError("letter names collide after priming")
    alph = Alphabet([names1 + names2])
    n1 = len(names1)

    def lift1(x: NCElem) -> NCElem:
        return NCElem(alph, dict(x.terms))

    def lift2(x: NCElem) -> NCElem:
        return NCElem(alph, {tuple(l + n1 for l in w): c
                             for w, c in x.terms.items()})

    relations = [lift1(r) for r in p1.relations]
    relations += [lift2(r) for r in p2.relations]
    cross = []
    for i in range(n1):
        for j in range(n1, n1 + len(names2)):
            # x y' - y' x
            cross.append(NCElem(alph, {(i, j): Scalar.one(),
                                       (j, i): Scalar.of(-1)}))
    relations += cross
    pres = Presentation(name or f"{p1.name}(x){p2.name}", alph, relations,
                        unitary_q=p1.unitary_q or p2.unitary_q)
    pres.tensor_of = (p1, p2)
    if p1.rewrite is not None and p2.rewrite is not None:
        rules = []
        for rule in p1.rewrite.rules:
            rules.append(RewriteRule(rule.head, lift1(rule.tail),
                                     list(rule.combo)))
        off = len(p1.relations)

        def shift_word(w):
            return tuple(l + n1 for l in w)

        for rule in p2.rewrite.rules:
            head = shift_word(rule.head)
            combo = [(c, shift_word(lp), ri + off, shift_word(rp))
                     for c, lp, ri, rp in rule.combo]
            rules.append(RewriteRule(head, lift2(rule.tail), combo))
        base = off + len(p2.relations)
        ci = 0
        for i in range(n1):
            for j in range(n1, n1 + len(names2)):
                tail = NCElem(alph, {(i, j): Scalar.one()})
                combo = [(Scalar.of(-1), (), base + ci, ())]
                rules.append(RewriteRule((j, i), tail, combo))
                ci += 1
        # precedence: p1's ranks first, then p2's shifted
        prec1 = sorted(range(n1), key=lambda l: p1.rewrite.rank[l])
        prec2 = sorted(range(len(names2)),
                       key=lambda l: p2.rewrite.rank[l])
        precedence = prec1 + [l + n1 for l in prec2]
        pres.rewrite = RewriteSystem(
            pres, rules, precedence,
            confluent=p1.rewrite.confluent and p2.rewrite.confluent)
    return pres


def confluence_probe(presentation: Presentation, degree: int = 6):
    """Resolve all overlap ambiguities of the attached rewriting system.

    Returns (True, []) on success or (False, failures); on success the
    system is marked confluent, making nonzero normal forms definitive.
    """
    rs = presentation.rewrite
    if rs is None:
        raise MembershipError("no rewriting system attached")
    alph = presentation.alphabet
    failures = []

    def reduce_full(elem):
        nf, _ = rs.reduce(elem)
        return nf

    for r1 in rs.rules:
        for r2 in rs.rules:
            h1, h2 = r1.head, r2.head
            # overlaps: suffix of h1 equals prefix of h2
            for k in range(1, min(len(h1), len(h2))):
                if h1[len(h1) - k:] == h2[:k]:
                    w = h1 + h2[k:]
                    if len(w) > degree:
                        continue
                    left = NCElem(alph, {w[len(h1):]: Scalar.one()})
                    t1 = r1.tail * left
                    pre = NCElem(alph, {w[:len(w) - len(h2)]: Scalar.one()})
                    t2 = pre * r2.tail
                    if not (reduce_full(t1) - reduce_full(t2)).is_zero:
                        failures.append((w, r1.head, r2.head))
            # containment: h2 strictly inside h1
            if len(h2) < len(h1):
                for pos in range(len(h1) - len(h2) + 1):
                    if h1[pos:pos + len(h2)] == h2:
                        l = NCElem(alph, {h1[:pos]: Scalar.one()})
                        r = NCElem(alph, {h1[pos + len(h2):]: Scalar.one()})
                        t2 = l * r2.tail * r
                        if not (reduce_full(r1.tail) - reduce_full(t2)).is_zero:
                            failures.append((h1, r1.head, r2.head))
    if not failures:
        rs.confluent = True
        return True, []
    return False, failures
