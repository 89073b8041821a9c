"""Command-line entry point: suite selection, parameter binding, degree
control, randomized mode, and machine-readable reporting.

Commands::

    qlob verify <suite>      suites: poisson rmatrix hopf space limits
                             geometry all
    qlob derive sklyanin --r <A|K|N|cA,cK,cN>
    qlob limit {group|space} --case <A|K|N>
    qlob normalize --case <A|K|N> --k <rat> --delta <rat>
    qlob reduce --algebra <name> --expr <text>

Exit status: 0 when every check passes, 1 when any check fails, 2 when
some checks are inconclusive and none fail (also used for configuration
errors, which are reported before any check runs).
"""
from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from fractions import Fraction

from .scalars import Scalar, PARAMS, I
from .ncalg import NCElem, flatten
from .membership import (member, member_specialized, Certificate,
                         SpecializationError, MembershipError)
from .report import Report, CheckResult, PASS, FAIL, INCONCLUSIVE
from . import poisson, rmatrix, hopf, qspace


class ConfigError(Exception):
    """Invalid run configuration; raised before any check runs."""


class UnknownGenerator(Exception):
    pass


class UnknownParameter(Exception):
    pass


SUITES = ("poisson", "rmatrix", "hopf", "space", "limits", "geometry")
FAMILIES = ("A", "K", "N")

# parameters whose vanishing would zero a registered denominator
_NONZERO_PARAMS = {"q", "h", "y0", "delta"}


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad rational literal {text!r}") from None


class RunConfig:
    """Validated configuration for a verification run."""

    def __init__(self, suites, case=None, degree=None, mode="symbolic",
                 trials=10, seed=0, params=None, fmt="text",
                 k_variant="printed", cert_dir=None, with_timing=True):
        if isinstance(suites, str):
            suites = [suites]
        expanded = []
        for s in suites:
            if s == "all":
                expanded.extend(SUITES)
            elif s in SUITES:
                expanded.append(s)
            else:
                raise ConfigError(f"unknown suite {s!r}")
        self.suites = tuple(dict.fromkeys(expanded))
        if case is not None and case not in FAMILIES:
            raise ConfigError(f"unknown case {case!r}")
        self.case = case
        if degree is not None and degree < 1:
            raise ConfigError("degree must be >= 1")
        self.degree = degree
        if mode not in ("symbolic", "randomized"):
            raise ConfigError(f"unknown mode {mode!r}")
        self.mode = mode
        if mode == "randomized" and trials < 1:
            raise ConfigError("randomized mode requires trials >= 1")
        self.trials = trials
        self.seed = seed
        self.params = {}
        for name, value in (params or {}).items():
            if name not in PARAMS:
                raise ConfigError(f"unknown parameter {name!r}")
            v = value if isinstance(value, Fraction) else _parse_rational(
                str(value))
            if name in _NONZERO_PARAMS and v == 0:
                raise ConfigError(
                    f"parameter {name}=0 zeroes a registered denominator")
            if name == "q" and v == -1:
                raise ConfigError(
                    "parameter q=-1 zeroes the registered denominator 1+q")
            self.params[name] = v
        if fmt not in ("text", "json"):
            raise ConfigError(f"unknown format {fmt!r}")
        self.fmt = fmt
        if k_variant not in ("printed", "ih"):
            raise ConfigError(f"unknown k-variant {k_variant!r}")
        self.k_variant = k_variant
        self.cert_dir = cert_dir
        self.with_timing = with_timing

    def to_dict(self) -> dict:
        return {"suites": list(self.suites), "case": self.case,
                "degree": self.degree, "mode": self.mode,
                "trials": self.trials, "seed": self.seed,
                "params": {k: str(v) for k, v in sorted(self.params.items())},
                "format": self.fmt, "k_variant": self.k_variant,
                "emit_certificates": self.cert_dir}

    @property
    def families(self):
        return (self.case,) if self.case else FAMILIES


# ---------------------------------------------------------------------
# Expression parser: +, -, * (product), # (tensor), ^int, rationals,
# parameter names, and generator names of the ambient presentation.
# ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|([A-Za-z_][A-Za-z0-9_]*'*)"
                    r"|([-+*#^()]))")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            err = SyntaxError(f"unexpected character {stripped[0]!r} "
                              f"at offset {at}")
            err.offset = at
            raise err
        if m.group(1) is not None:
            out.append(("num", Fraction(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, tokens, ambient):
        self.tokens = tokens
        self.i = 0
        self.pres = ambient
        self.alph = ambient.alphabet
        self.names = set(self.alph.letters)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, pos):
        err = SyntaxError(f"{msg} at offset {pos}")
        err.offset = pos
        raise err

    # value model: Scalar or NCElem; products fold left to right
    def _mul(self, x, y):
        if isinstance(x, Scalar) and isinstance(y, Scalar):
            return x * y
        if isinstance(x, Scalar):
            return y.scale(x)
        if isinstance(y, Scalar):
            return x.scale(y)
        return x * y

    def _as_elem(self, x):
        return (self.pres.one().scale(x) if isinstance(x, Scalar) else x)

    def expr(self, primed=False):
        kind, val, pos = self.peek()
        neg = False
        while kind == "op" and val in "+-":
            self.take()
            if val == "-":
                neg = not neg
            kind, val, pos = self.peek()
        out = self.term(primed)
        if neg:
            out = self._mul(Scalar.of(-1), out)
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term(primed)
                if val == "-":
                    rhs = self._mul(Scalar.of(-1), rhs)
                out = self._add(out, rhs)
            else:
                return out

    def _add(self, x, y):
        if isinstance(x, Scalar) and isinstance(y, Scalar):
            return x + y
        return self._as_elem(x) + self._as_elem(y)

    def term(self, primed):
        out = self.factor(primed)
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = self._mul(out, self.factor(primed))
            elif kind == "op" and val == "#":
                self.take()
                out = self._mul(out, self.factor(primed=True))
            else:
                return out

    def factor(self, primed):
        kind, val, pos = self.take()
        if kind == "op" and val == "-":
            return self._mul(Scalar.of(-1), self.factor(primed))
        if kind == "op" and val == "(":
            inner = self.expr(primed)
            kind, val, pos = self.take()
            if not (kind == "op" and val == ")"):
                self.error("expected ')'", pos)
            return self._pow(inner)
        if kind == "num":
            return self._pow(Scalar.of(val))
        if kind == "name":
            return self._pow(self.atom_name(val, pos, primed))
        self.error("expected an atom", pos)

    def _pow(self, base):
        kind, val, pos = self.peek()
        if not (kind == "op" and val == "^"):
            return base
        self.take()
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "num" or val.denominator != 1:
            self.error("expected an integer exponent", pos)
        n = sign * val.numerator
        if isinstance(base, Scalar):
            if n >= 0:
                out = Scalar.one()
                for _ in range(n):
                    out = out * base
                return out
            inv = Scalar.one() / base
            out = Scalar.one()
            for _ in range(-n):
                out = out * inv
            return out
        if n < 0:
            self.error("negative powers need a scalar base", pos)
        out = self.pres.one()
        for _ in range(n):
            out = out * base
        return out

    def atom_name(self, name, pos, primed):
        if name == "i":
            return I
        resolved = name + "'" if primed and name + "'" in self.names else name
        if resolved in self.names:
            return NCElem.gen(self.alph, resolved)
        if name in PARAMS:
            return Scalar.param(name)
        if name.rstrip("'") in PARAMS:
            raise UnknownParameter(f"parameter {name!r} cannot be primed")
        raise UnknownGenerator(
            f"unknown generator {name!r} at offset {pos} "
            f"(ambient letters: {', '.join(self.alph.letters)})")


def parse_expr(text: str, ambient) -> NCElem:
    """Parse ``text`` into an exact element of the ambient presentation.

    Grammar: rationals, parameter names, generator names, ``+ - *``,
    ``#`` (tensor: the right factor resolves in the primed leg), ``^n``,
    and parentheses.  Errors carry the offending offset.
    """
    p = _Parser(_tokenize(text), ambient)
    out = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        p.error(f"unexpected {val!r}", pos)
    if isinstance(out, Scalar):
        out = ambient.one().scale(out)
    return out


# ---------------------------------------------------------------------
# Randomized helpers
# ---------------------------------------------------------------------

def _rand_rat(rng, nonzero=False):
    while True:
        v = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if not nonzero or v != 0:
            return v


def _random_point(rng, fixed=None):
    pt = {}
    for name in PARAMS:
        if name == "s":
            continue
        if fixed and name in fixed:
            pt[name] = fixed[name]
            continue
        while True:
            v = _rand_rat(rng, nonzero=name in _NONZERO_PARAMS)
            if name == "q" and v in (0, -1):
                continue
            pt[name] = v
            break
    return pt


def _randomized_membership(rep, check_id, element, presentation, degree,
                           cfg, rng, detail=""):
    """Monte-Carlo membership at ``trials`` random rational points."""
    for _ in range(cfg.trials):
        pt = _random_point(rng, cfg.params)
        try:
            ok = member_specialized(element, presentation, degree, pt)
        except SpecializationError as e:
            rep.add(CheckResult(check_id, INCONCLUSIVE,
                                f"specialization failed: {e}"))
            return
        if not ok:
            rep.add(CheckResult(
                check_id, INCONCLUSIVE,
                detail + f" (nonzero residual at {degree}-bounded modular "
                         "reduction; not definitive)"))
            return
    rep.add(CheckResult(check_id, PASS,
                        detail + f" ({cfg.trials} random modular points)"))


# ---------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------

def _poisson_suite(cfg, rng) -> Report:
    rep = Report()
    randomized = cfg.mode == "randomized"

    def pick(name):
        if name in cfg.params:
            return Scalar.of(cfg.params[name])
        if randomized:
            return Scalar.of(_rand_rat(rng, nonzero=True))
        return None

    for fam in cfg.families:
        lam, mu = pick("lam"), pick("mu")
        P = poisson.group_structure(fam, lam=lam)
        rep.extend(poisson.check_ideal_compat(P))
        rep.extend(poisson.check_jacobi(P))
        rep.extend(poisson.check_multiplicative(P))
        rep.extend(poisson.kan_vanishing(fam))
        PH = poisson.plane_structure(fam, lam=lam, mu=mu)
        rep.extend(poisson.check_ideal_compat(PH))
        rep.extend(poisson.check_jacobi(PH))
        rep.extend(poisson.check_covariant(P, PH))
        al, be, ga = pick("alpha"), pick("beta"), pick("gamma")
        try:
            _table, _lp, _mp, r3 = poisson.subalgebra_brackets(
                fam, al, be, ga)
            rep.extend(r3)
        except poisson.NotInSubalgebra as e:
            rep.check(f"prop3.{fam}", False, detail=str(e))
    # the left-invariant mu-family is covariant with the zero structure
    PH0 = poisson.invariant_structure(mu=pick("mu"))
    ring = poisson.sl2_ring()
    import itertools as _it
    zero_table = {(x, y): ring.zero()
                  for x, y in _it.combinations("abcd", 2)}
    PA0 = poisson.PoissonStructure(ring, zero_table, name="0")
    rep.extend(poisson.check_jacobi(PH0))
    rep.extend(poisson.check_covariant(PA0, PH0))
    return rep


def _rmatrix_suite(cfg, rng) -> Report:
    rep = Report()
    for fam in cfg.families:
        rep.extend(rmatrix.sklyanin_report(fam))
        lam = None
        if cfg.mode == "randomized":
            lam = Scalar.of(_rand_rat(rng, nonzero=True))
        r = rmatrix.normal_form_r(fam, lam=lam)
        rep.extend(rmatrix.schouten_invariance(r, label=f"r^{fam}"))
    return rep


def _hopf_membership_items(H):
    """(check id, element, presentation) for every membership check of
    the bialgebra/antipode/star suites, ids matching the symbolic path."""
    items = []
    pres, alph = H.pres, H.pres.alphabet
    TP = H.tensor()
    ident = hopf._identity_morphism(alph)
    for ri, rel in enumerate(pres.relations):
        items.append((f"hopf.{H.name}.bialgebra.delta.rel{ri}",
                      flatten(H.delta(rel)), TP))
    for x in H.gens:
        dx = H.delta(H.gen(x))
        e = H.eps_table[x]
        items.append((f"hopf.{H.name}.antipode.left.{x}",
                      hopf._fold_legs(dx, H.kappa, ident, alph)
                      - pres.one().scale(e), pres))
        items.append((f"hopf.{H.name}.antipode.right.{x}",
                      hopf._fold_legs(dx, ident, H.kappa, alph)
                      - pres.one().scale(e), pres))
    for ri, rel in enumerate(pres.relations):
        items.append((f"hopf.{H.name}.antipode.rel{ri}",
                      H.kappa(rel), pres))
    for ri, rel in enumerate(pres.relations):
        items.append((f"hopf.{H.name}.star.rel{ri}", H.star(rel), pres))
    ss_items = []
    from .ncalg import tensor_morphism
    ss = tensor_morphism(H.star, H.star)
    for x in H.gens:
        diff = ss.apply(H.delta(H.gen(x))) - H.delta(H.star(H.gen(x)))
        if not diff.is_zero:
            ss_items.append((f"hopf.{H.name}.star.delta.{x}",
                             flatten(diff), TP))
    return items + ss_items


_HOPF_ALGEBRAS = ("A", "N", "SUq", "SLh", "K")


def _hopf_literal_checks(rep, H):
    """Exact parameter-free axioms: counit on relations, coassociativity,
    counit law, star involutivity, and star/Delta compatibility when it
    holds literally; ids match the symbolic suite."""
    from .ncalg import tensor_morphism
    pres, alph = H.pres, H.pres.alphabet
    for ri, rel in enumerate(pres.relations):
        rep.check(f"hopf.{H.name}.bialgebra.eps.rel{ri}",
                  H.eps(rel).is_zero,
                  detail="counit annihilates the relation")
    ident = hopf._identity_morphism(alph)
    from .ncalg import tensor_morphism as _tm
    for x in H.gens:
        g = H.gen(x)
        dx = H.delta(g)
        lhs = _tm(H.delta, ident).apply(dx)
        rhs = _tm(ident, H.delta).apply(dx)
        rep.check(f"hopf.{H.name}.bialgebra.coassoc.{x}", lhs == rhs)
        left = hopf._apply_counit_leg(dx, H.eps_table, 0, alph)
        right = hopf._apply_counit_leg(dx, H.eps_table, 1, alph)
        rep.check(f"hopf.{H.name}.bialgebra.counit.{x}",
                  left == g and right == g)
    ss = tensor_morphism(H.star, H.star)
    for x in H.gens:
        diff = ss.apply(H.delta(H.gen(x))) - H.delta(H.star(H.gen(x)))
        if diff.is_zero:
            rep.check(f"hopf.{H.name}.star.delta.{x}", True,
                      detail="literal equality")


def _hopf_suite(cfg, rng) -> Report:
    rep = Report()
    degree = cfg.degree or 4
    for name in _HOPF_ALGEBRAS:
        variants = ("printed", "ih") if name == "K" else (cfg.k_variant,)
        for variant in variants:
            if cfg.mode == "symbolic":
                rep.extend(hopf.hopf_suite(name, degree, k_variant=variant))
            else:
                H = hopf.build(name, variant)
                _hopf_literal_checks(rep, H)
                for x in H.gens:
                    g = H.gen(x)
                    diff = H.star(H.star(g)) - g
                    if diff.is_zero:
                        rep.check(f"hopf.{H.name}.star.invol.{x}", True,
                                  detail="literal equality")
                    else:
                        _randomized_membership(
                            rep, f"hopf.{H.name}.star.invol.{x}", diff,
                            H.pres, min(degree, 5), cfg, rng)
                for cid, elem, pres in _hopf_membership_items(H):
                    _randomized_membership(rep, cid, elem, pres,
                                           min(degree, 5), cfg, rng)
    if cfg.mode == "symbolic":
        rep.extend(hopf.negative_control(min(max(degree, 6), 6)))
        rep.extend(hopf.cayley_check(degree))
        rep.extend(hopf.slh_iso_check(degree))
        for variant in ("printed", "ih"):
            try:
                rep.extend(hopf.k_degeneracy_report(variant))
            except FileNotFoundError:
                rep.add(CheckResult(
                    f"hopf.K.degeneracy.{variant}", INCONCLUSIVE,
                    "no frozen collapse witness for this variant"))
    return rep


def _space_membership_items(family):
    """Membership items for the space suite (star/embedding/coaction)."""
    items = []
    sp = qspace.build_space(family)
    for ri, rel in enumerate(sp.pres.relations):
        items.append((f"space.{family}.star.rel{ri}", sp.star(rel),
                      sp.pres))
    G = hopf.build(family)
    spm = qspace.build_space(family, k=qspace.K_MAP[family],
                             delta=qspace.DELTA_MAP)
    phi = qspace.embedding_morphism(family)
    for ri, rel in enumerate(spm.pres.relations):
        items.append((f"embed.{family}.rel{ri}", phi(rel), G.pres))
    co = qspace.coaction_morphism(family, sp)
    TP = qspace.mixed_tensor(family)
    for ri, rel in enumerate(sp.pres.relations):
        items.append((f"coaction.{family}.rel{ri}",
                      flatten(co(rel)), TP))
    return items


def _space_suite(cfg, rng) -> Report:
    rep = Report()
    degree = cfg.degree or 6
    if cfg.mode == "symbolic":
        for fam in cfg.families:
            rep.extend(qspace.star_report(fam))
            rep.extend(qspace.verify_embedding(fam, degree=degree,
                                               seed=cfg.seed))
            rep.extend(qspace.verify_coaction(fam, degree=degree))
        rep.extend(qspace.variant_controls())
        samples = [(3, -4), (-2, 0), (5, 9), (-1, 7), (0, 1)]
        for fam in cfg.families:
            for k, d in samples:
                nf = qspace.equivalence_normal_form(fam, k, d)
                rep.check(
                    f"normalize.{fam}.k={k}.delta={d}", nf.report.ok,
                    detail=f"k'={nf.kprime}, delta'={nf.dprime}; "
                           f"{nf.scale_desc}")
    else:
        for fam in cfg.families:
            sp = qspace.build_space(fam)
            for x in sp.gens:
                g = sp.gen(x)
                rep.check(f"space.{fam}.star.invol.{x}",
                          (sp.star(sp.star(g)) - g).is_zero,
                          detail="(X*)* = X literally")
            for cid, elem, pres in _space_membership_items(fam):
                d = min(degree, 5) if fam == "K" else degree
                _randomized_membership(rep, cid, elem, pres, d, cfg, rng)
            for _ in range(cfg.trials):
                k = _rand_rat(rng)
                d = _rand_rat(rng)
                nf = qspace.equivalence_normal_form(fam, k, d)
                rep.check(f"normalize.{fam}.k={k}.delta={d}",
                          nf.report.ok,
                          detail=f"k'={nf.kprime}, delta'={nf.dprime}")
    return rep


def _limits_suite(cfg, rng) -> Report:
    # jets are exact; the computation is identical in both modes
    rep = Report()
    for fam in cfg.families:
        _derived, r = hopf.group_classical_limit(fam)
        rep.extend(r)
        _derived, r = qspace.space_classical_limit(fam)
        rep.extend(r)
    return rep


def _geometry_suite(cfg, rng) -> Report:
    x0 = y0 = None
    if "x0" in cfg.params:
        x0 = Scalar.of(cfg.params["x0"])
    if "y0" in cfg.params:
        y0 = Scalar.of(cfg.params["y0"])
    if cfg.mode == "randomized":
        if x0 is None:
            x0 = Scalar.of(_rand_rat(rng))
        if y0 is None:
            y0 = Scalar.of(_rand_rat(rng, nonzero=True))
    return poisson.geometry_suite(x0, y0)


_SUITE_RUNNERS = {
    "poisson": _poisson_suite,
    "rmatrix": _rmatrix_suite,
    "hopf": _hopf_suite,
    "space": _space_suite,
    "limits": _limits_suite,
    "geometry": _geometry_suite,
}


def run(config: RunConfig, stream=None) -> int:
    """Execute the configured suites; returns the exit code."""
    stream = stream or sys.stdout
    rng = random.Random(config.seed)
    rep = Report()
    for suite in config.suites:
        rep.extend(_SUITE_RUNNERS[suite](config, rng))
    if config.cert_dir:
        _emit_certificates(rep, config.cert_dir)
    _print_report(rep, config, stream)
    return _exit_code(rep)


def _exit_code(rep: Report) -> int:
    if rep.has_fail:
        return 1
    if rep.has_inconclusive:
        return 2
    return 0


def _print_report(rep, config, stream):
    if config.fmt == "json":
        print(rep.to_json(config.to_dict(),
                          with_timing=config.with_timing), file=stream)
    else:
        for r in sorted(rep.results, key=lambda r: r.id):
            line = f"{r.status.upper():12s} {r.id}"
            if r.detail:
                line += f"  -- {r.detail}"
            if r.residual:
                line += f"  [residual: {r.residual}]"
            print(line, file=stream)
        n = len(rep.results)
        npass = sum(1 for r in rep.results if r.status == PASS)
        print(f"{npass}/{n} checks passed", file=stream)


def _emit_certificates(rep, directory):
    os.makedirs(directory, exist_ok=True)
    for r in rep.results:
        if r.cert_obj is None:
            continue
        cert, pres = r.cert_obj
        path = os.path.join(directory, r.id + ".json")
        with open(path, "w") as f:
            json.dump(cert.to_data(pres), f)


# ---------------------------------------------------------------------
# Non-verify commands
# ---------------------------------------------------------------------

def _cmd_derive(args) -> int:
    spec = args.r
    if spec in FAMILIES:
        r = rmatrix.normal_form_r(spec)
        label = f"r^{spec}"
    else:
        parts = spec.split(",")
        if len(parts) != 3:
            raise ConfigError(
                "--r expects a family letter or three rationals cA,cK,cN")
        coeffs = [_parse_rational(p) for p in parts]
        r = None
        for c, fam in zip(coeffs, FAMILIES):
            term = rmatrix.normal_form_r(fam).scale(Scalar.of(c))
            r = term if r is None else r + term
        label = f"{coeffs[0]}*r^A + {coeffs[1]}*r^K + {coeffs[2]}*r^N"
    P = rmatrix.sklyanin_table(r)
    out = {"r": label,
           "brackets": {f"{{{x},{y}}}": str(P.pair(x, y).reduce())
                        for x, y in __import__("itertools").combinations(
                            "abcd", 2)}}
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(f"Sklyanin table for {label}:")
        for k, v in out["brackets"].items():
            print(f"  {k} = {v}")
    return 0


def _cmd_limit(args) -> int:
    fams = (args.case,) if args.case else FAMILIES
    rep = Report()
    tables = {}
    for fam in fams:
        if args.what == "group":
            derived, r = hopf.group_classical_limit(fam)
        else:
            derived, r = qspace.space_classical_limit(fam)
        rep.extend(r)
        tables[fam] = {f"{{{x},{y}}}": str(derived.pair(x, y).reduce())
                       for x, y in derived.table}
    if args.format == "json":
        print(json.dumps(
            {"config": {"command": "limit", "what": args.what,
                        "case": args.case},
             "tables": tables,
             "results": [r.to_dict(False) for r in rep.results]}, indent=2))
    else:
        for fam, tab in tables.items():
            print(f"first-order table ({args.what} {fam}):")
            for k, v in tab.items():
                print(f"  {k} = {v}")
        _print_text_results(rep)
    return _exit_code(rep)


def _print_text_results(rep):
    for r in sorted(rep.results, key=lambda r: r.id):
        line = f"{r.status.upper():12s} {r.id}"
        if r.detail:
            line += f"  -- {r.detail}"
        print(line)


def _cmd_normalize(args) -> int:
    if args.case not in FAMILIES:
        raise ConfigError(f"unknown case {args.case!r}")
    k = _parse_rational(args.k)
    d = _parse_rational(args.delta)
    nf = qspace.equivalence_normal_form(args.case, k, d)
    summary = {"family": args.case, "k": str(k), "delta": str(d),
               "k_prime": str(nf.kprime), "delta_prime": nf.dprime,
               "rescaling": nf.scale_desc}
    if args.format == "json":
        print(json.dumps(
            {"config": summary,
             "results": [r.to_dict(False) for r in nf.report.results]},
            indent=2))
    else:
        print(f"H^{args.case}(k={k}, delta={d}) ~ "
              f"H^{args.case}(k'={nf.kprime}, delta'={nf.dprime})"
              f"  [{nf.scale_desc}]")
        _print_text_results(nf.report)
    return _exit_code(nf.report)


_REDUCE_ALGEBRAS = ("A", "K", "N", "SUq", "SLh",
                    "space.A", "space.K", "space.N",
                    "mixed.A", "mixed.K", "mixed.N")


def _ambient(name, k_variant):
    if name in ("A", "K", "N", "SUq", "SLh"):
        return hopf.build(name, k_variant).pres
    if name.startswith("space."):
        return qspace.build_space(name[6:]).pres
    if name.startswith("mixed."):
        return qspace.mixed_tensor(name[6:])
    raise ConfigError(f"unknown algebra {name!r}; choose from "
                      + ", ".join(_REDUCE_ALGEBRAS))


def _cmd_reduce(args) -> int:
    pres = _ambient(args.algebra, args.k_variant)
    elem = parse_expr(args.expr, pres)
    degree = args.degree or max(elem.degree() + 2, 4)
    outcome = member(elem, pres, degree=degree, allow_bump=False)
    if isinstance(outcome, Certificate):
        status, normal_form = "zero (in the ideal)", "0"
        cert = outcome.to_data(pres)
    else:
        cert = None
        normal_form = str(outcome.residual)
        status = ("nonzero (definitively outside the ideal)"
                  if outcome.definitive
                  else f"nonzero modulo degree-{degree} reduction "
                       "(inconclusive)")
    if args.format == "json":
        out = {"algebra": args.algebra, "expr": args.expr,
               "degree": degree, "status": status,
               "normal_form": normal_form}
        if cert is not None and args.emit_certificates:
            out["certificate"] = cert
        print(json.dumps(out, indent=2))
    else:
        print(f"{args.expr}  ->  {normal_form}   [{status}]")
    if cert is not None and args.emit_certificates:
        os.makedirs(args.emit_certificates, exist_ok=True)
        with open(os.path.join(args.emit_certificates, "reduce.json"),
                  "w") as f:
            json.dump(cert, f)
    return 0


# ---------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------

def _parse_params(text):
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        if "=" not in piece:
            raise ConfigError(f"bad parameter assignment {piece!r}")
        name, _, value = piece.partition("=")
        out[name.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qlob",
        description="Exact symbolic verifier for the Poisson and quantum "
                    "structures on SL(2,R) and the hyperbolic plane.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--degree", type=int, default=None)
        p.add_argument("--mode", choices=("symbolic", "randomized"),
                       default="symbolic")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=10)
        p.add_argument("--params", default="",
                       help="comma-separated name=rational assignments")
        p.add_argument("--k-variant", choices=("printed", "ih"),
                       default="printed")
        p.add_argument("--format", choices=("text", "json"),
                       default="text")
        p.add_argument("--emit-certificates", metavar="DIR", default=None)
        p.add_argument("--no-timing", action="store_true",
                       help="omit elapsed_ms from JSON output")

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument("suite", choices=SUITES + ("all",))
    pv.add_argument("--case", choices=FAMILIES, default=None)
    pv.add_argument("--algebra", choices=FAMILIES, default=None,
                    help="alias for --case")
    common(pv)

    pd = sub.add_parser("derive", help="derive a Sklyanin bracket table")
    pd.add_argument("what", choices=("sklyanin",))
    pd.add_argument("--r", required=True,
                    help="family letter A|K|N or rational triple cA,cK,cN")
    pd.add_argument("--format", choices=("text", "json"), default="text")

    pl = sub.add_parser("limit", help="first-order classical limits")
    pl.add_argument("what", choices=("group", "space"))
    pl.add_argument("--case", choices=FAMILIES, default=None)
    pl.add_argument("--format", choices=("text", "json"), default="text")

    pn = sub.add_parser("normalize",
                        help="normal form under sign flip and rescaling")
    pn.add_argument("--case", required=True)
    pn.add_argument("--k", required=True)
    pn.add_argument("--delta", required=True)
    pn.add_argument("--format", choices=("text", "json"), default="text")

    pr = sub.add_parser("reduce", help="normal form of an expression")
    pr.add_argument("--algebra", required=True)
    pr.add_argument("--expr", required=True)
    pr.add_argument("--degree", type=int, default=None)
    pr.add_argument("--k-variant", choices=("printed", "ih"),
                    default="printed")
    pr.add_argument("--format", choices=("text", "json"), default="text")
    pr.add_argument("--emit-certificates", metavar="DIR", default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "verify":
            cfg = RunConfig([args.suite],
                            case=args.case or args.algebra,
                            degree=args.degree, mode=args.mode,
                            trials=args.trials, seed=args.seed,
                            params=_parse_params(args.params),
                            fmt=args.format, k_variant=args.k_variant,
                            cert_dir=args.emit_certificates,
                            with_timing=not args.no_timing)
            return run(cfg)
        if args.command == "derive":
            return _cmd_derive(args)
        if args.command == "limit":
            return _cmd_limit(args)
        if args.command == "normalize":
            return _cmd_normalize(args)
        if args.command == "reduce":
            return _cmd_reduce(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except (UnknownGenerator, UnknownParameter, SyntaxError) as e:
        print(f"expression error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
