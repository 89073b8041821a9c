"""Exact coefficient arithmetic.

Scalars are Gaussian-rational multivariate fractions in a fixed parameter
vocabulary.  Only ``q`` may carry negative exponents (Laurent), and public
division is restricted to a closed registry of denominators; everything is
exact, there are no floats anywhere.  Jets (truncated power series) support
the classical-limit computations.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

PARAMS = ("h", "k", "delta", "alpha", "beta", "gamma", "lam", "mu",
          "q", "x0", "y0", "s")
NPARAMS = len(PARAMS)
PARAM_INDEX = {name: i for i, name in enumerate(PARAMS)}
Q_INDEX = PARAM_INDEX["q"]
ZERO_EXP = (0,) * NPARAMS


class ScalarError(Exception):
    pass


class DivisorNotRegistered(ScalarError):
    """Division would create a denominator outside the registered set."""


class DenominatorVanishes(ScalarError):
    """An evaluation point zeroes a denominator."""


class MissingAssignment(ScalarError):
    """Evaluation with a parameter left unassigned."""


class GaussianRational:
    """a + b*I with exact rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if not isinstance(x, (int, Fraction)):
            raise TypeError(f"cannot coerce {type(x).__name__}")
        return GaussianRational(x)

    def __add__(self, other):
        if not isinstance(other, (int, Fraction, GaussianRational)):
            return NotImplemented
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        if not isinstance(other, (int, Fraction, GaussianRational)):
            return NotImplemented
        other = GaussianRational.of(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, (int, Fraction, GaussianRational)):
            return NotImplemented
        other = GaussianRational.of(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.of(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational((self.re * other.re + self.im * other.im) / n,
                                (self.im * other.re - self.re * other.im) / n)

    def conj(self):
        return GaussianRational(self.re, -self.im)

    @property
    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self)


I = GaussianRational(0, 1)
GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)


def format_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_gaussian(z: GaussianRational) -> str:
    if z.im == 0:
        return format_fraction(z.re)
    if z.re == 0:
        if z.im == 1:
            return "I"
        if z.im == -1:
            return "-I"
        return f"{format_fraction(z.im)}*I"
    im = format_gaussian(GaussianRational(0, z.im))
    sign = "+" if not im.startswith("-") else ""
    return f"({format_fraction(z.re)}{sign}{im})"


class MPoly:
    """Sparse multivariate polynomial over Gaussian rationals.

    Terms map exponent vectors (tuples over PARAMS) to nonzero coefficients.
    Only the ``q`` slot may be negative.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero():
        return MPoly({})

    @staticmethod
    def const(c) -> "MPoly":
        c = GaussianRational.of(c)
        return MPoly({} if c.is_zero else {ZERO_EXP: c})

    @staticmethod
    def param(name: str, exp: int = 1) -> "MPoly":
        i = PARAM_INDEX[name]
        if exp < 0 and i != Q_INDEX:
            raise ScalarError(f"negative exponent on parameter {name}")
        if exp == 0:
            return MPoly.const(1)
        e = [0] * NPARAMS
        e[i] = exp
        return MPoly({tuple(e): GR_ONE})

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "MPoly") -> "MPoly":
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, GR_ZERO) + c
            if s.is_zero:
                t.pop(e, None)
            else:
                t[e] = s
        return MPoly(t)

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "MPoly") -> "MPoly":
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = t.get(e, GR_ZERO) + c1 * c2
                if s.is_zero:
                    t.pop(e, None)
                else:
                    t[e] = s
        return MPoly(t)

    def scale(self, c) -> "MPoly":
        c = GaussianRational.of(c)
        if c.is_zero:
            return MPoly.zero()
        return MPoly({e: cc * c for e, cc in self.terms.items()})

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- structure ----------------------------------------------------
    def params_used(self):
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x != 0:
                    used.add(i)
        return used

    def constant_value(self) -> GaussianRational:
        if self.is_zero:
            return GR_ZERO
        if set(self.terms) == {ZERO_EXP}:
            return self.terms[ZERO_EXP]
        raise ScalarError("not a constant polynomial")

    @property
    def is_constant(self):
        return not self.terms or set(self.terms) == {ZERO_EXP}

    def lead(self):
        """Lex-leading (exponent, coeff)."""
        e = max(self.terms)
        return e, self.terms[e]

    # -- maps ---------------------------------------------------------
    def conj(self, unitary_q: bool = False) -> "MPoly":
        t = {}
        for e, c in self.terms.items():
            if unitary_q and e[Q_INDEX] != 0:
                e = e[:Q_INDEX] + (-e[Q_INDEX],) + e[Q_INDEX + 1:]
            t[e] = c.conj()
        return MPoly(t)

    def eval(self, assignment: dict) -> GaussianRational:
        vals = {}
        total = GR_ZERO
        for e, c in self.terms.items():
            term = c
            for i, x in enumerate(e):
                if x == 0:
                    continue
                name = PARAMS[i]
                if name not in assignment:
                    raise MissingAssignment(f"parameter {name} unassigned")
                v = vals.get(name)
                if v is None:
                    v = vals[name] = GaussianRational.of(assignment[name])
                if x < 0:
                    if v.is_zero:
                        raise DenominatorVanishes("q assigned 0 with q^-1 present")
                    for _ in range(-x):
                        term = term / v
                else:
                    for _ in range(x):
                        term = term * v
            total = total + term
        return total

    def exact_div(self, other: "MPoly"):
        """Return self/other if the division is exact, else None."""
        if other.is_zero:
            raise ZeroDivisionError("exact_div by zero polynomial")
        if self.is_zero:
            return MPoly.zero()
        le, lc = other.lead()
        rem = dict(self.terms)
        quot: dict = {}
        for _ in range(len(self.terms) * max(1, len(other.terms)) + 1):
            if not rem:
                return MPoly(quot)
            re_ = max(rem)
            qe = tuple(x - y for x, y in zip(re_, le))
            if any(x < 0 for i, x in enumerate(qe) if i != Q_INDEX):
                return None
            qc = rem[re_] / lc
            quot[qe] = qc
            for e, c in other.terms.items():
                ee = tuple(x + y for x, y in zip(qe, e))
                s = rem.get(ee, GR_ZERO) - qc * c
                if s.is_zero:
                    rem.pop(ee, None)
                else:
                    rem[ee] = s
        return None

    def substitute(self, name: str, value: "Scalar") -> "Scalar":
        """Replace a parameter by a Scalar (used e.g. for h -> (1-q)/(1+q))."""
        i = PARAM_INDEX[name]
        total = Scalar.zero()
        for e, c in self.terms.items():
            n = e[i]
            base = MPoly({e[:i] + (0,) + e[i + 1:]: c})
            term = Scalar.of_poly(base)
            if n > 0:
                p = value
                for _ in range(n - 1):
                    p = p * value
                term = term * p
            elif n < 0:
                p = value
                for _ in range(-n - 1):
                    p = p * value
                term = term._div_unchecked(p)
            total = total + term
        return total

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            for i, x in enumerate(e):
                if x == 0:
                    continue
                factors.append(PARAMS[i] if x == 1 else f"{PARAMS[i]}^{x}")
            cs = format_gaussian(c)
            if factors and cs == "1":
                parts.append("*".join(factors))
            elif factors and cs == "-1":
                parts.append("-" + "*".join(factors))
            else:
                parts.append("*".join([cs] + factors))
        out = parts[0]
        for p in parts[1:]:
            out += ("+" + p) if not p.startswith("-") else p
        return out

    __repr__ = __str__


MP_ONE = MPoly.const(1)

# Registered denominator irreducibles: the monomial parameters q, h, y0,
# delta plus the two binomials 1+q and 1+h^2.
_REG_MONOMIAL_PARAMS = {PARAM_INDEX["q"], PARAM_INDEX["h"],
                        PARAM_INDEX["y0"], PARAM_INDEX["delta"]}
REGISTERED_BINOMIALS = (
    MPoly.const(1) + MPoly.param("q"),
    MPoly.const(1) + MPoly.param("h", 2),
)


def _monomial_content(polys):
    """Componentwise min exponent across all terms of all polys."""
    it = [e for p in polys for e in p.terms]
    return tuple(min(e[i] for e in it) for i in range(NPARAMS))


def _shift(p: MPoly, shift) -> MPoly:
    if all(x == 0 for x in shift):
        return p
    return MPoly({tuple(x - s for x, s in zip(e, shift)): c
                  for e, c in p.terms.items()})


def _is_registered_product(p: MPoly) -> bool:
    """True if p is a unit times a product of registered irreducibles."""
    if p.is_zero:
        return False
    content = _monomial_content([p])
    if any(x != 0 and i not in _REG_MONOMIAL_PARAMS
           for i, x in enumerate(content)):
        return False
    p = _shift(p, content)
    for f in REGISTERED_BINOMIALS:
        while True:
            d = p.exact_div(f)
            if d is None:
                break
            p = d
    return p.is_constant


def _univar_index(p: MPoly):
    used = p.params_used()
    if len(used) == 1:
        return next(iter(used))
    return None


def _to_univar(p: MPoly, i: int) -> dict:
    return {e[i]: c for e, c in p.terms.items()}


def _from_univar(coeffs: dict, i: int) -> MPoly:
    t = {}
    for n, c in coeffs.items():
        e = [0] * NPARAMS
        e[i] = n
        t[tuple(e)] = c
    return MPoly(t)


def _univar_gcd(f: dict, g: dict) -> dict:
    """Monic GCD of univariate polynomials over the Gaussian rationals."""
    def degree(p):
        return max(p) if p else -1

    def monic(p):
        if not p:
            return p
        lc = p[degree(p)]
        return {n: c / lc for n, c in p.items()}

    a, b = dict(f), dict(g)
    while b:
        da, db = degree(a), degree(b)
        if da < db:
            a, b = b, a
            continue
        lcb = b[db]
        while a and degree(a) >= db:
            da = degree(a)
            q = a[da] / lcb
            for n, c in b.items():
                m = n + da - db
                s = a.get(m, GR_ZERO) - q * c
                if s.is_zero:
                    a.pop(m, None)
                else:
                    a[m] = s
        a, b = b, a
    return monic(a)


class Scalar:
    """Exact fraction num/den of sparse polynomials.

    Public division only allows denominators from the registered set;
    internal solver code may use :meth:`_div_unchecked`.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly, _normalized=False):
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if _normalized:
            self.num, self.den = num, den
        else:
            self.num, self.den = _normalize(num, den)

    # -- constructors -------------------------------------------------
    @staticmethod
    def of(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, MPoly):
            return Scalar.of_poly(x)
        return Scalar(MPoly.const(GaussianRational.of(x)), MP_ONE,
                      _normalized=True)

    @staticmethod
    def of_poly(p: MPoly) -> "Scalar":
        return Scalar(p, MP_ONE, _normalized=True)

    @staticmethod
    def zero():
        return Scalar.of(0)

    @staticmethod
    def one():
        return Scalar.of(1)

    @staticmethod
    def param(name: str, exp: int = 1) -> "Scalar":
        return Scalar.of_poly(MPoly.param(name, exp))

    # -- arithmetic ---------------------------------------------------
    _COERCIBLE = (int, Fraction)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (MPoly, GaussianRational) + Scalar._COERCIBLE):
            return Scalar.of(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Scalar(-self.num, self.den, _normalized=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.num * other.num, self.den * other.den)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero:
            raise ZeroDivisionError("division by zero scalar")
        if not _is_registered_product(other.num):
            raise DivisorNotRegistered(
                f"denominator {other.num} is not a registered product")
        return self._div_unchecked(other)

    def _div_unchecked(self, other: "Scalar") -> "Scalar":
        if other.num.is_zero:
            raise ZeroDivisionError("division by zero scalar")
        return Scalar(self.num * other.den, self.den * other.num)

    @property
    def is_zero(self):
        return self.num.is_zero

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, MPoly)):
            other = Scalar.of(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero

    def __hash__(self):
        return hash((self.num, self.den))

    # -- maps ---------------------------------------------------------
    def conj(self, unitary_q: bool = False) -> "Scalar":
        return Scalar(self.num.conj(unitary_q), self.den.conj(unitary_q))

    def eval(self, assignment: dict) -> GaussianRational:
        d = self.den.eval(assignment)
        if d.is_zero:
            raise DenominatorVanishes(
                f"denominator {self.den} vanishes at {assignment}")
        return self.num.eval(assignment) / d

    def substitute(self, name: str, value: "Scalar") -> "Scalar":
        return self.num.substitute(name, value)._div_unchecked(
            self.den.substitute(name, value))

    def __str__(self):
        ns = str(self.num)
        if self.den == MP_ONE:
            return ns
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        return f"{ns}/({self.den})"

    __repr__ = __str__


def _normalize(num: MPoly, den: MPoly):
    if num.is_zero:
        return MPoly.zero(), MP_ONE
    # cancel common monomial content (also shifts Laurent q to baseline)
    content = _monomial_content([num, den])
    if any(content):
        num, den = _shift(num, content), _shift(den, content)
    # make the denominator monic in lex order
    _, lc = den.lead()
    if not (lc.re == 1 and lc.im == 0):
        inv = GR_ONE / lc
        num, den = num.scale(inv), den.scale(inv)
    if den.is_constant:
        return num, MP_ONE
    # full cancellation when the quotient is exact
    q = num.exact_div(den)
    if q is not None:
        return q, MP_ONE
    # univariate GCD cancellation (covers solver-generated denominators)
    i, j = _univar_index(num), _univar_index(den)
    if i is not None and i == j:
        g = _univar_gcd(_to_univar(num, i), _to_univar(den, i))
        if g and max(g) > 0:
            gp = _from_univar(g, i)
            num = num.exact_div(gp)
            den = den.exact_div(gp)
            return _normalize(num, den)
        return num, den
    # peel registered binomial factors shared by both sides
    for f in REGISTERED_BINOMIALS:
        while True:
            dn = den.exact_div(f)
            if dn is None:
                break
            nm = num.exact_div(f)
            if nm is None:
                break
            num, den = nm, dn
    return num, den


# ---------------------------------------------------------------------
# Jets: truncated power series in one expansion variable
# ---------------------------------------------------------------------

class Jet:
    """Truncated power series sum coeffs[m] * var^m, m <= order."""

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, var: str, order: int, coeffs):
        coeffs = list(coeffs)[:order + 1]
        coeffs += [Scalar.zero()] * (order + 1 - len(coeffs))
        self.var, self.order, self.coeffs = var, order, coeffs

    @staticmethod
    def const(value, var: str, order: int) -> "Jet":
        return Jet(var, order, [Scalar.of(value)])

    @staticmethod
    def variable(var: str, order: int) -> "Jet":
        return Jet(var, order, [Scalar.zero(), Scalar.one()])

    def _check(self, other: "Jet"):
        if self.var != other.var or self.order != other.order:
            raise ScalarError("jet variable/order mismatch")

    def __add__(self, other):
        if not isinstance(other, Jet):
            other = Jet.const(other, self.var, self.order)
        self._check(other)
        return Jet(self.var, self.order,
                   [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not isinstance(other, Jet):
            other = Jet.const(other, self.var, self.order)
        return self + (-other)

    def __neg__(self):
        return Jet(self.var, self.order, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Jet):
            other = Jet.const(other, self.var, self.order)
        self._check(other)
        out = [Scalar.zero() for _ in range(self.order + 1)]
        for m, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for n, b in enumerate(other.coeffs):
                if m + n > self.order:
                    break
                out[m + n] = out[m + n] + a * b
        return Jet(self.var, self.order, out)

    def pow(self, n: int) -> "Jet":
        if n < 0:
            return self.inverse().pow(-n)
        out = Jet.const(1, self.var, self.order)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "Jet":
        c0 = self.coeffs[0]
        if c0.is_zero:
            raise ZeroDivisionError("jet with vanishing constant term")
        inv = [Scalar.one()._div_unchecked(c0)]
        for n in range(1, self.order + 1):
            acc = Scalar.zero()
            for m in range(1, n + 1):
                acc = acc + self.coeffs[m] * inv[n - m]
            inv.append((-acc)._div_unchecked(c0))
        return Jet(self.var, self.order, inv)

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Jet):
            other = Jet.const(other, self.var, self.order)
        return (self.var == other.var and self.order == other.order
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((self.var, self.order, tuple(self.coeffs)))

    def __str__(self):
        parts = [f"({c})*{self.var}^{m}" for m, c in enumerate(self.coeffs)
                 if not c.is_zero]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def jet_exp(coef, var: str, order: int) -> Jet:
    """Jet of exp(coef * var)."""
    coef = Scalar.of(coef)
    coeffs, power, fact = [], Scalar.one(), 1
    for m in range(order + 1):
        if m:
            power = power * coef
            fact *= m
        coeffs.append(power._div_unchecked(Scalar.of(Fraction(fact))))
    return Jet(var, order, coeffs)


def jet_substitute(a: Scalar, var: str, images: dict, order: int) -> Jet:
    """Evaluate a Scalar into the jet ring at `var`.

    `images` maps parameter names to Jets; unmapped parameters stay
    symbolic (constant jets), except `var` itself which becomes the jet
    variable.
    """
    def poly_jet(p: MPoly) -> Jet:
        total = Jet.const(0, var, order)
        for e, c in p.terms.items():
            term = Jet.const(c, var, order)
            for i, x in enumerate(e):
                if x == 0:
                    continue
                name = PARAMS[i]
                if name in images:
                    base = images[name]
                elif name == var:
                    base = Jet.variable(var, order)
                else:
                    base = Jet.const(Scalar.param(name), var, order)
                term = term * base.pow(x)
            total = total + term
        return total

    num = poly_jet(a.num)
    if a.den == MP_ONE:
        return num
    return num * poly_jet(a.den).inverse()


def expand_q(a: Scalar, order: int) -> Jet:
    """Substitute q -> exp(I*h) as a truncated series in h."""
    if order < 1:
        raise ScalarError("expand_q needs order >= 1")
    return jet_substitute(a, "h", {"q": jet_exp(I, "h", order)}, order)


def rational_sqrt(x: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None
