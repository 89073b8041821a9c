"""Commutative Poisson structures on SL(2,R) and the hyperbolic plane.

Polynomial rings come with oriented substitution rules standing in for
their defining ideals (e.g. ad -> bc + 1); brackets are given on generator
pairs and extended as biderivations.  The checks cover Jacobi, ideal
compatibility, multiplicativity, covariance, KAN vanishing, the
subalgebra closure with its parameter maps, and the fixed-point geometry.
"""
from __future__ import annotations

import itertools

from .scalars import Scalar, GaussianRational
from .report import Report


class PoissonError(Exception):
    pass


class NotInSubalgebra(PoissonError):
    pass


class InconsistentTable(PoissonError):
    pass


class CommRing:
    """Polynomial ring with oriented reduction rules for its ideal."""

    def __init__(self, name, variables, rules=None):
        self.name = name
        self.variables = tuple(variables)
        self.index = {v: i for i, v in enumerate(self.variables)}
        # rules: list of (lead exponent tuple, tail {exponent: Scalar})
        self.rules = list(rules or [])

    @property
    def nvars(self):
        return len(self.variables)

    def zero(self):
        return CommPoly(self, {})

    def const(self, c):
        c = Scalar.of(c)
        if c.is_zero:
            return self.zero()
        return CommPoly(self, {(0,) * self.nvars: c})

    def one(self):
        return self.const(1)

    def var(self, name):
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return CommPoly(self, {tuple(e): Scalar.one()})

    def monomial(self, exps, coeff=1):
        coeff = Scalar.of(coeff)
        if coeff.is_zero:
            return self.zero()
        return CommPoly(self, {tuple(exps): coeff})


class CommPoly:
    """Sparse commutative polynomial with Scalar coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    def _check(self, other):
        if self.ring is not other.ring:
            raise PoissonError("mixed rings")

    def __add__(self, other):
        if isinstance(other, (int, Scalar, GaussianRational)):
            other = self.ring.const(other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e)
            s = c if s is None else s + c
            if s.is_zero:
                t.pop(e, None)
            else:
                t[e] = s
        return CommPoly(self.ring, t)

    def __sub__(self, other):
        if isinstance(other, (int, Scalar, GaussianRational)):
            other = self.ring.const(other)
        return self + (-other)

    def __neg__(self):
        return CommPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Scalar, GaussianRational)):
            return self.scale(other)
        self._check(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                s = t.get(e)
                s = c if s is None else s + c
                if s.is_zero:
                    t.pop(e, None)
                else:
                    t[e] = s
        return CommPoly(self.ring, t)

    __radd__ = __add__
    __rmul__ = __mul__

    def scale(self, s):
        s = Scalar.of(s)
        if s.is_zero:
            return self.ring.zero()
        return CommPoly(self.ring, {e: c * s for e, c in self.terms.items()})

    @property
    def is_zero(self):
        return not self.terms

    def reduce(self):
        """Normal form under the ring's oriented substitution rules."""
        terms = dict(self.terms)
        rules = self.ring.rules
        if not rules:
            return self
        changed = True
        while changed:
            changed = False
            for e in list(terms):
                c = terms.get(e)
                if c is None:
                    continue
                for lead, tail in rules:
                    if all(x >= y for x, y in zip(e, lead)):
                        rest = tuple(x - y for x, y in zip(e, lead))
                        del terms[e]
                        for te, tc in tail.items():
                            ee = tuple(x + y for x, y in zip(rest, te))
                            s = terms.get(ee, Scalar.zero()) + c * tc
                            if s.is_zero:
                                terms.pop(ee, None)
                            else:
                                terms[ee] = s
                        changed = True
                        break
                if changed:
                    break
        return CommPoly(self.ring, terms)

    def __eq__(self, other):
        if isinstance(other, (int, Scalar, GaussianRational)):
            other = self.ring.const(other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return (self - other).reduce().is_zero

    def __hash__(self):
        raise TypeError("CommPoly is unhashable (equality is modulo ideal)")

    def diff(self, name):
        i = self.ring.index[name]
        t = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ee = e[:i] + (e[i] - 1,) + e[i + 1:]
            v = c * Scalar.of(e[i])
            t[ee] = t.get(ee, Scalar.zero()) + v
        return CommPoly(self.ring, {e: c for e, c in t.items()
                                    if not c.is_zero})

    def substitute(self, images: dict) -> "CommPoly":
        """Ring map sending each variable to a CommPoly of a target ring."""
        target = next(iter(images.values())).ring
        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for i, x in enumerate(e):
                if x == 0:
                    continue
                img = images[self.ring.variables[i]]
                for _ in range(x):
                    term = term * img
            out = out + term
        return out

    def map_coeffs(self, fn) -> "CommPoly":
        t = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not v.is_zero:
                t[e] = v
        return CommPoly(self.ring, t)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            facs = [f"{v}^{x}" if x > 1 else v
                    for v, x in zip(self.ring.variables, e) if x]
            parts.append("*".join([f"({c})"] + facs) if facs else f"({c})")
        return " + ".join(parts)

    __repr__ = __str__


class PoissonStructure:
    """Bracket table on generator pairs, extended as a biderivation."""

    def __init__(self, ring: CommRing, table: dict, name=""):
        self.ring = ring
        self.name = name
        self.table = {}
        for (x, y), val in table.items():
            i, j = ring.index[x], ring.index[y]
            if i == j:
                if not val.is_zero:
                    raise InconsistentTable(f"{{{x},{x}}} nonzero")
                continue
            if i > j:
                i, j, val = j, i, -val
            key = (i, j)
            if key in self.table:
                if not (self.table[key] - val).reduce().is_zero:
                    raise InconsistentTable(
                        f"conflicting entries for {{{x},{y}}}")
            else:
                self.table[key] = val
        self._vars = [ring.var(v) for v in ring.variables]

    def pair(self, x: str, y: str) -> CommPoly:
        i, j = self.ring.index[x], self.ring.index[y]
        if i == j:
            return self.ring.zero()
        if i < j:
            return self.table.get((i, j), self.ring.zero())
        return -self.table.get((j, i), self.ring.zero())

    def bracket(self, f: CommPoly, g: CommPoly) -> CommPoly:
        out = self.ring.zero()
        vs = self.ring.variables
        dfs = {v: f.diff(v) for v in vs}
        dgs = {v: g.diff(v) for v in vs}
        for (i, j), val in self.table.items():
            xi, xj = vs[i], vs[j]
            term = dfs[xi] * dgs[xj] - dfs[xj] * dgs[xi]
            if not term.is_zero:
                out = out + term * val
        return out.reduce()


# ---------------------------------------------------------------------
# Ring and structure builders
# ---------------------------------------------------------------------

def sl2_ring() -> CommRing:
    ring = CommRing("sl2", ("a", "b", "c", "d"))
    # ad -> bc + 1
    tail = {(0, 1, 1, 0): Scalar.one(), (0, 0, 0, 0): Scalar.one()}
    ring.rules.append(((1, 0, 0, 1), tail))
    return ring


def h_ring(with_ideal: bool = True) -> CommRing:
    ring = CommRing("H", ("A", "B", "D"))
    if with_ideal:
        # AD -> B^2 + 1
        tail = {(0, 2, 0): Scalar.one(), (0, 0, 0): Scalar.one()}
        ring.rules.append(((1, 0, 1), tail))
    return ring


LAM = Scalar.param("lam")
MU = Scalar.param("mu")


def group_structure(family: str, lam: Scalar = None,
                    ring: CommRing = None) -> PoissonStructure:
    """The multiplicative Poisson structures on SL(2,R)."""
    if ring is None:
        ring = sl2_ring()
    if lam is None:
        lam = LAM if family in ("A", "K") else Scalar.one()
    a, b, c, d = (ring.var(v) for v in "abcd")
    L = ring.const(lam)
    one = ring.one()
    if family == "A":
        table = {("a", "b"): L * a * b,
                 ("a", "c"): L * a * c,
                 ("a", "d"): 2 * L * b * c,
                 ("b", "c"): ring.zero(),
                 ("b", "d"): L * b * d,
                 ("c", "d"): L * c * d}
    elif family == "K":
        table = {("a", "b"): L * (one - a * a - b * b),
                 ("a", "c"): L * (a * a + c * c - one),
                 ("a", "d"): L * (a - d) * (b - c),
                 ("b", "c"): L * (a + d) * (b + c),
                 ("b", "d"): L * (b * b + d * d - one),
                 ("c", "d"): L * (one - c * c - d * d)}
    elif family == "N":
        table = {("a", "b"): (one - a * a) * lam,
                 ("a", "c"): c * c * lam,
                 ("a", "d"): c * (d - a) * lam,
                 ("b", "c"): c * (d + a) * lam,
                 ("b", "d"): (d * d - one) * lam,
                 ("c", "d"): (-(c * c)) * lam}
    else:
        raise PoissonError(f"unknown family {family}")
    return PoissonStructure(ring, table, name=f"A^{family}")


def plane_structure(family: str, lam: Scalar = None, mu: Scalar = None,
                    ring: CommRing = None) -> PoissonStructure:
    """The covariant structures H^I_{lam,mu} on the half plane."""
    if ring is None:
        ring = h_ring()
    lam = (LAM if family in ("A", "K") else Scalar.one()) if lam is None else lam
    mu = MU if mu is None else Scalar.of(mu)
    A, B, D = (ring.var(v) for v in "ABD")
    if family == "A":
        mid = B + ring.const(mu)
    elif family == "K":
        mid = A + D + ring.const(mu)
    elif family == "N":
        mid = D + ring.const(mu)
    else:
        raise PoissonError(f"unknown family {family}")
    table = {("A", "B"): 2 * lam * A * mid,
             ("A", "D"): 4 * lam * B * mid,
             ("B", "D"): 2 * lam * D * mid}
    return PoissonStructure(ring, table, name=f"H^{family}")


def invariant_structure(mu: Scalar = None, ring: CommRing = None):
    """The left-invariant mu-family on the plane."""
    if ring is None:
        ring = h_ring()
    mu = MU if mu is None else Scalar.of(mu)
    A, B, D = (ring.var(v) for v in "ABD")
    table = {("A", "B"): 2 * mu * A,
             ("A", "D"): 4 * mu * B,
             ("B", "D"): 2 * mu * D}
    return PoissonStructure(ring, table, name="H^inv")


# ---------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------

def check_ideal_compat(P: PoissonStructure, ideal_polys=None) -> Report:
    """{x, r} reduces to 0 for every generator x and ideal generator r."""
    rep = Report()
    ring = P.ring
    if ideal_polys is None:
        ideal_polys = []
        for lead, tail in ring.rules:
            poly = ring.monomial(lead) - CommPoly(ring, dict(tail))
            ideal_polys.append(poly)
    for v in ring.variables:
        for ri, r in enumerate(ideal_polys):
            res = P.bracket(ring.var(v), r)
            rep.check(f"ideal.{P.name}.{v}.r{ri}", res.is_zero, residual=res)
    return rep


def check_jacobi(P: PoissonStructure) -> Report:
    rep = Report()
    vs = P.ring.variables
    for x, y, z in itertools.combinations(vs, 3):
        fx, fy, fz = P.ring.var(x), P.ring.var(y), P.ring.var(z)
        jac = (P.bracket(fx, P.bracket(fy, fz))
               + P.bracket(fy, P.bracket(fz, fx))
               + P.bracket(fz, P.bracket(fx, fy))).reduce()
        rep.check(f"jacobi.{P.name}.{x}{y}{z}", jac.is_zero, residual=jac)
    return rep


def doubled_ring(ring: CommRing) -> CommRing:
    """Two commuting copies (suffix 1/2) with both ideals."""
    vs = [v + "1" for v in ring.variables] + [v + "2" for v in ring.variables]
    out = CommRing(ring.name + "^2", vs)
    n = ring.nvars
    for lead, tail in ring.rules:
        for off in (0, n):
            lead2 = tuple((list((0,) * off) + list(lead)
                           + list((0,) * (2 * n - off - n))))
            tail2 = {tuple((0,) * off + e + (0,) * (n - off)): c
                     for e, c in tail.items()}
            out.rules.append((lead2, tail2))
    return out


def product_structure(P1: PoissonStructure, P2: PoissonStructure,
                      name="") -> PoissonStructure:
    """Direct product bracket on the concatenated ring (cross brackets 0)."""
    ring = CommRing(name or f"{P1.ring.name}x{P2.ring.name}",
                    tuple(P1.ring.variables) + tuple(P2.ring.variables))
    n1, n2 = P1.ring.nvars, P2.ring.nvars
    for lead, tail in P1.ring.rules:
        ring.rules.append((lead + (0,) * n2,
                           {e + (0,) * n2: c for e, c in tail.items()}))
    for lead, tail in P2.ring.rules:
        ring.rules.append(((0,) * n1 + lead,
                           {(0,) * n1 + e: c for e, c in tail.items()}))
    table = {}
    for (i, j), val in P1.table.items():
        table[(ring.variables[i], ring.variables[j])] = CommPoly(
            ring, {e + (0,) * n2: c for e, c in val.terms.items()})
    for (i, j), val in P2.table.items():
        table[(ring.variables[n1 + i], ring.variables[n1 + j])] = CommPoly(
            ring, {(0,) * n1 + e: c for e, c in val.terms.items()})
    return PoissonStructure(ring, table, name=name or "product")


def _rename_structure(P: PoissonStructure, suffix: str) -> PoissonStructure:
    ring = CommRing(P.ring.name + suffix,
                    [v + suffix for v in P.ring.variables], list(P.ring.rules))
    table = {}
    for (i, j), val in P.table.items():
        table[(ring.variables[i], ring.variables[j])] = CommPoly(
            ring, dict(val.terms))
    return PoissonStructure(ring, table, name=P.name + suffix)


def check_multiplicative(P: PoissonStructure, delta_images: dict = None) -> Report:
    """Delta is a Poisson map A -> A (x) A for the matrix coproduct."""
    rep = Report()
    P1 = _rename_structure(P, "1")
    P2 = _rename_structure(P, "2")
    PP = product_structure(P1, P2, name=P.name + "(x)2")
    ring2 = PP.ring

    if delta_images is None:
        def m(v1, v2):
            return ring2.var(v1) * ring2.var(v2)
        delta_images = {
            "a": m("a1", "a2") + m("b1", "c2"),
            "b": m("a1", "b2") + m("b1", "d2"),
            "c": m("c1", "a2") + m("d1", "c2"),
            "d": m("c1", "b2") + m("d1", "d2")}

    vs = P.ring.variables
    for x, y in itertools.combinations(vs, 2):
        lhs = PP.bracket(delta_images[x], delta_images[y])
        rhs = P.pair(x, y).reduce().substitute(delta_images).reduce()
        res = (lhs - rhs).reduce()
        rep.check(f"mult.{P.name}.{x}{y}", res.is_zero, residual=res)
    return rep


def check_covariant(PA: PoissonStructure, PH: PoissonStructure) -> Report:
    """phi is a Poisson map H -> A (x) H for the coaction phi."""
    rep = Report()
    PP = product_structure(PA, PH, name="AxH")
    ring = PP.ring

    def m(*names):
        out = ring.one()
        for n in names:
            out = out * ring.var(n)
        return out

    phi = {"A": m("a", "a") * ring.var("A") + m("b", "b") * ring.var("D")
                + 2 * m("a", "b") * ring.var("B"),
           "B": m("a", "c") * ring.var("A") + m("b", "d") * ring.var("D")
                + (m("a", "d") + m("b", "c")) * ring.var("B"),
           "D": m("c", "c") * ring.var("A") + m("d", "d") * ring.var("D")
                + 2 * m("c", "d") * ring.var("B")}

    for x, y in itertools.combinations(PH.ring.variables, 2):
        lhs = PP.bracket(phi[x], phi[y])
        rhs = PH.pair(x, y).reduce().substitute(phi).reduce()
        res = (lhs - rhs).reduce()
        rep.check(f"covariant.{PA.name}|{PH.name}.{x}{y}", res.is_zero,
                  residual=res)
    return rep


# ---------------------------------------------------------------------
# Subalgebra closure (Prop 3) and parameter maps
# ---------------------------------------------------------------------

def barred_generators(ring: CommRing, alpha, beta, gamma):
    a, b, c, d = (ring.var(v) for v in "abcd")
    alpha, beta, gamma = Scalar.of(alpha), Scalar.of(beta), Scalar.of(gamma)
    Ab = alpha * a * a + beta * b * b + 2 * gamma * a * b
    Bb = alpha * a * c + beta * b * d + gamma * (a * d + b * c)
    Db = alpha * c * c + beta * d * d + 2 * gamma * c * d
    return Ab, Bb, Db


PARAM_MAP = {"A": lambda al, be, ga: -ga,
             "K": lambda al, be, ga: -al - be,
             "N": lambda al, be, ga: -be}


def subalgebra_brackets(family: str, alpha=None, beta=None, gamma=None):
    """Brackets of the barred generators, re-expressed in (Abar,Bbar,Dbar).

    Returns (table: dict pair -> CommPoly over the abstract H ring,
    lam_prime, mu_prime, report).  Raises NotInSubalgebra if re-expression
    fails.
    """
    alpha = Scalar.param("alpha") if alpha is None else Scalar.of(alpha)
    beta = Scalar.param("beta") if beta is None else Scalar.of(beta)
    gamma = Scalar.param("gamma") if gamma is None else Scalar.of(gamma)
    ring = sl2_ring()
    P = group_structure(family, ring=ring)
    Ab, Bb, Db = barred_generators(ring, alpha, beta, gamma)
    barred = {"A": Ab, "B": Bb, "D": Db}

    lam_prime = LAM if family in ("A", "K") else Scalar.one()
    mu_prime = PARAM_MAP[family](alpha, beta, gamma)

    # expected table instance, expressed through the barred elements
    Href = h_ring(with_ideal=False)
    target = plane_structure(family, lam=lam_prime, mu=mu_prime, ring=Href)

    rep = Report()
    table = {}
    for x, y in itertools.combinations("ABD", 2):
        pb = P.bracket(barred[x], barred[y])
        # re-express by substituting barred images into the abstract entry;
        # the delta correction AD - B^2 = alpha*beta - gamma^2 enters for K
        expect = target.pair(x, y).substitute(barred).reduce()
        res = (pb - expect).reduce()
        if not res.is_zero:
            raise NotInSubalgebra(
                f"{{{x},{y}}} not matched by the expected table: {res}")
        table[(x, y)] = target.pair(x, y)
        rep.check(f"prop3.{family}.{x}{y}", True)

    # quadric identity: Abar*Dbar - Bbar^2 = alpha*beta - gamma^2 mod ideal
    quad = (Ab * Db - Bb * Bb
            - ring.const(alpha * beta - gamma * gamma)).reduce()
    rep.check(f"prop3.{family}.quadric", quad.is_zero, residual=quad)
    return table, lam_prime, mu_prime, rep


def kan_vanishing(family: str) -> Report:
    """Bracket tables vanish on the matching KAN subgroup."""
    rep = Report()
    P = group_structure(family)
    if family == "A":
        sub = CommRing("GA", ("u", "v"))
        sub.rules.append(((1, 1), {(0, 0): Scalar.one()}))  # uv -> 1
        images = {"a": sub.var("u"), "b": sub.zero(),
                  "c": sub.zero(), "d": sub.var("v")}
    elif family == "K":
        sub = CommRing("GK", ("s", "c"))
        # s^2 -> 1 - c^2
        sub.rules.append(((2, 0), {(0, 0): Scalar.one(),
                                   (0, 2): Scalar.of(-1)}))
        images = {"a": sub.var("c"), "b": sub.var("s"),
                  "c": -sub.var("s"), "d": sub.var("c")}
    elif family == "N":
        sub = CommRing("GN", ("x",))
        images = {"a": sub.one(), "b": sub.var("x"),
                  "c": sub.zero(), "d": sub.one()}
    else:
        raise PoissonError(f"unknown family {family}")
    for x, y in itertools.combinations("abcd", 2):
        val = P.pair(x, y).reduce().substitute(images).reduce()
        rep.check(f"remark1.{family}.{x}{y}", val.is_zero, residual=val)
    return rep


# ---------------------------------------------------------------------
# Geometry (fixed points on the half plane)
# ---------------------------------------------------------------------

PAPER_MU = {"A": lambda x0, y0: x0 / y0,
            "K": lambda x0, y0: -(Scalar.one() + x0 * x0 + y0 * y0) / y0,
            "N": lambda x0, y0: -(Scalar.one()) / y0}


def geometry_triple(x0: Scalar, y0: Scalar):
    """(alpha, beta, gamma) determined from the fixed point x0 + i y0."""
    alpha = (x0 * x0 + y0 * y0) / y0
    beta = Scalar.one() / y0
    gamma = x0 / y0
    return alpha, beta, gamma


def geometry_suite(x0=None, y0=None) -> Report:
    rep = Report()
    x0 = Scalar.param("x0") if x0 is None else Scalar.of(x0)
    y0 = Scalar.param("y0") if y0 is None else Scalar.of(y0)
    alpha, beta, gamma = geometry_triple(x0, y0)

    rep.check("geom.triple.unit",
              alpha * beta - gamma * gamma == Scalar.one(),
              detail="alpha*beta - gamma^2 = 1 for the computed triple")

    ring = sl2_ring()
    a, b, c, d = (ring.var(v) for v in "abcd")
    Ab, Bb, Db = barred_generators(ring, alpha, beta, gamma)
    z2 = x0 * x0 + y0 * y0
    Nx = z2 * a * c + x0 * (a * d + b * c) + b * d
    w = z2 * c * c + 2 * x0 * c * d + d * d

    # Bbar = x/y and Dbar = 1/y as rational identities: x = Nx/w, y = y0/w
    rep.check("geom.Bbar", (Bb * y0 - Nx).reduce().is_zero,
              detail="Bbar * y0 = numerator of x-image")
    rep.check("geom.Dbar", (Db * y0 - w).reduce().is_zero,
              detail="Dbar * y0 = common denominator")

    for family in ("A", "K", "N"):
        mu_computed = PARAM_MAP[family](alpha, beta, gamma)
        mu_paper = PAPER_MU[family](x0, y0)
        exact = mu_computed == mu_paper
        up_to_sign = exact or (mu_computed == -mu_paper)
        rep.check(f"geom.{family}.mu", up_to_sign,
                  detail=(f"computed mu = {mu_computed}; printed formula "
                          + ("matches exactly" if exact
                             else "matches up to the |mu| sign equivalence")))

        # xy-bracket by change of variables: with x = Nx/w, y = y0/w,
        # {x,y} = -y0 {Nx, w} / w^3, so the printed formula E(x,y) becomes
        # the polynomial identity -y0*{Nx,w} = w^3 * E(Nx/w, y0/w).
        P = group_structure(family, ring=ring)
        lam = LAM if family in ("A", "K") else Scalar.one()
        lhs = P.bracket(Nx, w).scale(-y0)
        mu = mu_computed
        if family == "A":
            # E = -2 lam (x y + mu y^2)
            rhs = (Nx * w * y0 + w * (y0 * y0 * mu)).scale(-2 * lam)
        elif family == "K":
            # E = -2 lam (x^2 y + y + y^3 + mu y^2)
            rhs = (Nx * Nx * y0 + w * w * y0
                   + (y0 * y0 * y0) * ring.one() + w * (y0 * y0 * mu)
                   ).scale(-2 * lam)
        else:
            # E = -2 (y + mu y^2)
            rhs = (w * w * y0 + w * (y0 * y0 * mu)).scale(-2)
        res = (lhs - rhs).reduce()
        rep.check(f"geom.{family}.xybracket", res.is_zero, residual=res)
    return rep
