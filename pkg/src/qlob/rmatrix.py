"""Classical r-matrices for sl(2): Sklyanin bracket tables and the
invariance of the Schouten term (modified classical Yang-Baxter equation).

Internal Lie-algebra basis order is (e-1, e0, e1) with the 2x2 matrices
e-1 = (0 1; 0 0), e0 = diag(1,-1), e1 = (0 0; 1 0).
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .scalars import Scalar
from .report import Report
from .poisson import (CommPoly, PoissonStructure, sl2_ring, InconsistentTable,
                      group_structure, LAM)

# 2x2 representation matrices, Scalar entries, index order (e-1, e0, e1)
_S0, _S1 = Scalar.zero(), Scalar.one()
RHO = (
    ((_S0, _S1), (_S0, _S0)),                  # e_{-1}
    ((_S1, _S0), (_S0, -_S1)),                 # e_0
    ((_S0, _S0), (_S1, _S0)),                  # e_1
)

EM1, E0, E1 = 0, 1, 2


def _mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), start=_S0 * 0)
             for j in range(p)] for i in range(n)]


def _mat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def _decompose(M):
    """Traceless 2x2 -> coefficients on (e-1, e0, e1)."""
    return (M[0][1], M[0][0], M[1][0])


def lie_bracket_coeffs(i: int, j: int):
    """[e_i, e_j] expanded in the basis, as a coefficient triple."""
    A, B = RHO[i], RHO[j]
    return _decompose(_mat_sub(_mat_mul(A, B), _mat_mul(B, A)))


class LieElem:
    """Element of sl(2) by coefficients on (e-1, e0, e1)."""

    __slots__ = ("coeffs",)

    def __init__(self, cm1=0, c0=0, c1=0):
        self.coeffs = (Scalar.of(cm1), Scalar.of(c0), Scalar.of(c1))

    def matrix(self):
        out = [[_S0, _S0], [_S0, _S0]]
        for c, rho in zip(self.coeffs, RHO):
            out = [[o + c * e for o, e in zip(orow, erow)]
                   for orow, erow in zip(out, rho)]
        return out

    def bracket(self, other: "LieElem") -> "LieElem":
        cm1 = c0 = c1 = Scalar.zero()
        for i, ci in enumerate(self.coeffs):
            if ci.is_zero:
                continue
            for j, cj in enumerate(other.coeffs):
                if cj.is_zero:
                    continue
                bm1, b0, b1 = lie_bracket_coeffs(i, j)
                f = ci * cj
                cm1, c0, c1 = cm1 + f * bm1, c0 + f * b0, c1 + f * b1
        out = LieElem()
        out.coeffs = (cm1, c0, c1)
        return out

    def __eq__(self, other):
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))


class WedgeElem:
    """Element of sl2 ^ sl2 on the basis (e0^e1, e0^e-1, e1^e-1)."""

    __slots__ = ("c01", "c0m1", "c1m1")

    def __init__(self, c01=0, c0m1=0, c1m1=0):
        self.c01 = Scalar.of(c01)
        self.c0m1 = Scalar.of(c0m1)
        self.c1m1 = Scalar.of(c1m1)

    def tensor(self):
        """Antisymmetric 3x3 coefficient matrix over (e-1, e0, e1) x same."""
        T = [[Scalar.zero() for _ in range(3)] for _ in range(3)]
        for coeff, (i, j) in ((self.c01, (E0, E1)),
                              (self.c0m1, (E0, EM1)),
                              (self.c1m1, (E1, EM1))):
            T[i][j] = T[i][j] + coeff
            T[j][i] = T[j][i] - coeff
        return T

    def __add__(self, other):
        return WedgeElem(self.c01 + other.c01, self.c0m1 + other.c0m1,
                         self.c1m1 + other.c1m1)

    def scale(self, s):
        s = Scalar.of(s)
        return WedgeElem(self.c01 * s, self.c0m1 * s, self.c1m1 * s)

    def __repr__(self):
        return (f"({self.c01})*e0^e1 + ({self.c0m1})*e0^e-1 "
                f"+ ({self.c1m1})*e1^e-1")


def normal_form_r(family: str, lam: Scalar = None) -> WedgeElem:
    """The wedge normal forms reproducing the three bracket tables.

    The A-case fixes the global Sklyanin sign; the K/N constants are the
    ones that reproduce the printed tables with the stated basis matrices
    (the source's own wedge list is inconsistent with its matrix display;
    see the repository notes).
    """
    if lam is None:
        lam = LAM if family in ("A", "K") else Scalar.one()
    if family == "A":
        return WedgeElem(0, 0, lam)              # lam * e1 ^ e-1
    if family == "K":
        return WedgeElem(-lam, -lam, 0)          # lam * (e1^e0 + e-1^e0)
    if family == "N":
        return WedgeElem(0, -Scalar.one(), 0)    # e-1 ^ e0
    raise ValueError(f"unknown family {family}")


# Global Sklyanin sign, frozen by requiring the A-case normal form to
# reproduce {a,b} = lam*a*b exactly.
SIGN = Scalar.of(-1)


def sklyanin_table(r: WedgeElem) -> PoissonStructure:
    """Bracket table on (a,b,c,d) from [rho(x)rho(r), g (x) g]."""
    T = r.tensor()
    rmat = [[Scalar.zero()] * 4 for _ in range(4)]
    for i in range(3):
        for j in range(3):
            c = T[i][j]
            if c.is_zero:
                continue
            A, B = RHO[i], RHO[j]
            for p in range(2):
                for k in range(2):
                    for q_ in range(2):
                        for l in range(2):
                            rmat[2 * p + k][2 * q_ + l] = (
                                rmat[2 * p + k][2 * q_ + l]
                                + c * A[p][q_] * B[k][l])
    ring = sl2_ring()
    g = [[ring.var("a"), ring.var("b")], [ring.var("c"), ring.var("d")]]
    G = [[g[p][q_] * g[k][l]
          for q_ in range(2) for l in range(2)]
         for p in range(2) for k in range(2)]

    def mul(A, B):
        return [[sum((A[i][m] * B[m][j] for m in range(4)),
                     start=ring.zero())
                 for j in range(4)] for i in range(4)]

    rG = [[sum((rmat[i][m] * G[m][j] for m in range(4)), start=ring.zero())
           for j in range(4)] for i in range(4)]
    Gr = [[sum((G[i][m] * rmat[m][j] for m in range(4)), start=ring.zero())
           for j in range(4)] for i in range(4)]
    M = [[(x - y).scale(SIGN).reduce() for x, y in zip(rx, ry)]
         for rx, ry in zip(rG, Gr)]

    names = ("a", "b", "c", "d")
    entries = {}
    for p in range(2):
        for q_ in range(2):
            for k in range(2):
                for l in range(2):
                    x, y = names[2 * p + q_], names[2 * k + l]
                    entries[(x, y)] = M[2 * p + k][2 * q_ + l]
    # consistency of the redundant entries: antisymmetry and zero diagonal
    for x in names:
        if not entries[(x, x)].is_zero:
            raise InconsistentTable(f"{{{x},{x}}} != 0: {entries[(x, x)]}")
    for x, y in itertools.combinations(names, 2):
        if not (entries[(x, y)] + entries[(y, x)]).reduce().is_zero:
            raise InconsistentTable(f"{{{x},{y}}} + {{{y},{x}}} != 0")
    table = {(x, y): entries[(x, y)]
             for x, y in itertools.combinations(names, 2)}
    return PoissonStructure(ring, table, name="sklyanin")


def sklyanin_report(family: str) -> Report:
    """Compare the derived table with the stored bracket table."""
    rep = Report()
    derived = sklyanin_table(normal_form_r(family))
    target = group_structure(family, ring=derived.ring)
    for x, y in itertools.combinations("abcd", 2):
        res = (derived.pair(x, y) - target.pair(x, y)).reduce()
        rep.check(f"sklyanin.{family}.{x}{y}", res.is_zero, residual=res)
    return rep


# ---------------------------------------------------------------------
# Schouten term and MCYBE invariance
# ---------------------------------------------------------------------

def schouten_term(r: WedgeElem):
    """C(r) = [r12,r13] + [r12,r23] + [r13,r23] as a 3-tensor dict."""
    T = r.tensor()
    C: dict = {}

    def addc(key, val):
        s = C.get(key, Scalar.zero()) + val
        if s.is_zero:
            C.pop(key, None)
        else:
            C[key] = s

    for a in range(3):
        for b in range(3):
            rab = T[a][b]
            if rab.is_zero:
                continue
            for c in range(3):
                for d in range(3):
                    rcd = T[c][d]
                    if rcd.is_zero:
                        continue
                    f = rab * rcd
                    # [r12, r13]: bracket in leg 1
                    for e, coeff in enumerate(lie_bracket_coeffs(a, c)):
                        if not coeff.is_zero:
                            addc((e, b, d), f * coeff)
                    # [r12, r23]: bracket in leg 2
                    for e, coeff in enumerate(lie_bracket_coeffs(b, c)):
                        if not coeff.is_zero:
                            addc((a, e, d), f * coeff)
                    # [r13, r23]: bracket in leg 3
                    for e, coeff in enumerate(lie_bracket_coeffs(b, d)):
                        if not coeff.is_zero:
                            addc((a, c, e), f * coeff)
    return C


def schouten_invariance(r: WedgeElem, label: str = "r") -> Report:
    """(ad_x x 1 x 1 + 1 x ad_x x 1 + 1 x 1 x ad_x) C(r) = 0 for basis x."""
    rep = Report()
    C = schouten_term(r)
    for x in range(3):
        out: dict = {}

        def addo(key, val):
            s = out.get(key, Scalar.zero()) + val
            if s.is_zero:
                out.pop(key, None)
            else:
                out[key] = s

        for (i, j, k), v in C.items():
            for e, coeff in enumerate(lie_bracket_coeffs(x, i)):
                if not coeff.is_zero:
                    addo((e, j, k), v * coeff)
            for e, coeff in enumerate(lie_bracket_coeffs(x, j)):
                if not coeff.is_zero:
                    addo((i, e, k), v * coeff)
            for e, coeff in enumerate(lie_bracket_coeffs(x, k)):
                if not coeff.is_zero:
                    addo((i, j, e), v * coeff)
        rep.check(f"mcybe.{label}.ad{('em1', 'e0', 'e1')[x]}", not out,
                  residual=out or None)
    return rep


def random_wedge(rng: random.Random, height: int = 9) -> WedgeElem:
    def rat():
        return Scalar.of(Fraction(rng.randint(-height, height),
                                  rng.randint(1, height)))
    return WedgeElem(rat(), rat(), rat())
