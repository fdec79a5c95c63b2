"""Exact multivariate polynomials over the rationals.

:class:`MultiPoly` is a sparse map from exponent vectors to nonzero
:class:`fractions.Fraction` coefficients.  Heavy operations (products,
division, gcd, resultants) convert to dense recursive integer form in
:mod:`surfint._dmp` and back.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from math import gcd as igcd, lcm
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from . import _dmp

Rational = Fraction
Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class PolynomialError(ValueError):
    """Invalid polynomial operation (zero input, inexact division, ...)."""


def as_rational(value) -> Fraction:
    """Exact rational from an int, Fraction, or a string such as ``"1/3"``
    or ``"0.05"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return Fraction(value)


class MultiPoly:
    """Sparse polynomial with rational coefficients in named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None,
                 vars: Sequence[str] = ()):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                e = tuple(int(x) for x in e)
                if len(e) != n:
                    raise PolynomialError("exponent length does not match variables")
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, vars, terms):
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    # construction ------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str] = ()) -> "MultiPoly":
        vars = tuple(vars)
        c = as_rational(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, name: str, vars: Sequence[str] | None = None) -> "MultiPoly":
        vars = tuple(vars) if vars is not None else (name,)
        if name not in vars:
            vars = vars + (name,)
        e = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {e: Fraction(1)})

    @classmethod
    def parse(cls, text: str, vars: Sequence[str] | None = None) -> "MultiPoly":
        return parse_poly(text, vars)

    # basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def free_vars(self) -> Tuple[str, ...]:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def is_constant(self) -> bool:
        return not self.free_vars()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolynomialError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self, var: str) -> int:
        """Degree in ``var``; ``-1`` for the zero polynomial."""
        if not self.terms:
            return -1
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __len__(self):
        return len(self.terms)

    # variable management -----------------------------------------------
    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        """Same polynomial expressed over ``vars`` (a superset of its free
        variables)."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for v in vars:
            idx.append(self.vars.index(v) if v in self.vars else None)
        for i, v in enumerate(self.vars):
            if v not in vars and any(e[i] for e in self.terms):
                raise PolynomialError(f"variable {v} is in use")
        terms = {}
        for e, c in self.terms.items():
            terms[tuple(e[i] if i is not None else 0 for i in idx)] = c
        return MultiPoly._raw(vars, terms)

    def _align(self, other) -> Tuple["MultiPoly", "MultiPoly"]:
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self.vars)
            return self, other
        if other.vars == self.vars:
            return self, other
        vars = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(vars), other.with_vars(vars)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        a, b = self._align(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_rational(other)
            if not c:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        a, b = self._align(other)
        if len(a.terms) == 1 or len(b.terms) == 1:
            terms = {}
            for e1, c1 in a.terms.items():
                for e2, c2 in b.terms.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    s = terms.get(e, 0) + c1 * c2
                    if s:
                        terms[e] = s
                    else:
                        terms.pop(e, None)
            return MultiPoly._raw(a.vars, terms)
        fa, da = a._to_int()
        fb, db = b._to_int()
        u = len(a.vars) - 1 if a.vars else 0
        return MultiPoly._from_int(_dmp.mul(fa, fb, u), a.vars, Fraction(1, da * db))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant():
                other = other.constant_value()
            else:
                return exact_divide(self, other)
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, n: int):
        if n < 0:
            raise PolynomialError("negative power")
        result = MultiPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # equality ----------------------------------------------------------
    def _key(self):
        items = []
        for e, c in self.terms.items():
            mono = tuple(sorted((v, k) for v, k in zip(self.vars, e) if k))
            items.append((mono, c))
        return frozenset(items)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = MultiPoly.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    # conversion to dense integer form ----------------------------------
    def _to_int(self, vars: Sequence[str] | None = None):
        """Dense integer form over ``vars`` and the denominator ``D`` such that
        ``self = dense / D``."""
        p = self if vars is None else self.with_vars(vars)
        if not p.vars:
            c = p.terms.get((), Fraction(0))
            return ([c.numerator] if c else []), c.denominator
        D = 1
        for c in p.terms.values():
            D = lcm(D, c.denominator)
        ints = {e: c.numerator * (D // c.denominator) for e, c in p.terms.items()}
        return _dmp.from_dict(ints, len(p.vars) - 1), D

    @classmethod
    def _from_int(cls, f, vars, scale=Fraction(1)):
        vars = tuple(vars)
        if not vars:
            if not f:
                return cls._raw((), {})
            return cls._raw((), {(): Fraction(f[0]) * scale})
        terms = _dmp.to_dict(f, len(vars) - 1)
        if scale == 1:
            return cls._raw(vars, {e: Fraction(c) for e, c in terms.items()})
        return cls._raw(vars, {e: c * scale for e, c in terms.items()})

    def integer_primitive(self) -> "MultiPoly":
        """Positive rational multiple with coprime integer coefficients and
        positive leading coefficient (graded lex)."""
        if not self.terms:
            return self
        D = 1
        for c in self.terms.values():
            D = lcm(D, c.denominator)
        g = 0
        for c in self.terms.values():
            g = igcd(g, c.numerator * (D // c.denominator))
        scale = Fraction(D, g)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    # orderings ---------------------------------------------------------
    def sorted_terms(self):
        """Terms in descending graded lexicographic order."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        e = max(self.terms, key=lambda e: (sum(e), e))
        return self.terms[e]

    def coefficients_in(self, var: str) -> Dict[int, "MultiPoly"]:
        """Map degree -> coefficient polynomial (still over ``self.vars``)."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(var)
        out: Dict[int, Dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: MultiPoly._raw(self.vars, t) for k, t in out.items()}

    def lc_in(self, var: str) -> "MultiPoly":
        d = self.degree(var)
        if d < 0:
            return self
        return self.coefficients_in(var)[d]

    # calculus and evaluation -------------------------------------------
    def diff(self, var: str) -> "MultiPoly":
        return derivative(self, var)

    def subs(self, assignment: Mapping[str, Scalar]) -> "MultiPoly":
        return evaluate(self, assignment)

    def __call__(self, **assignment):
        return evaluate(self, assignment)

    def compose(self, mapping: Mapping[str, "MultiPoly"], vars: Sequence[str] | None = None) -> "MultiPoly":
        """Substitute polynomials for variables."""
        return compose(self, mapping, vars)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, vars={self.vars})"


# ---------------------------------------------------------------------------
# core operations


def _common_vars(*polys: MultiPoly) -> Tuple[str, ...]:
    vars: Tuple[str, ...] = ()
    for p in polys:
        vars = vars + tuple(v for v in p.vars if v not in vars)
    return vars


def derivative(p: MultiPoly, var: str) -> MultiPoly:
    if var not in p.vars:
        return MultiPoly._raw(p.vars, {})
    i = p.vars.index(var)
    terms = {}
    for e, c in p.terms.items():
        k = e[i]
        if k:
            terms[e[:i] + (k - 1,) + e[i + 1:]] = c * k
    return MultiPoly._raw(p.vars, terms)


def evaluate(p: MultiPoly, assignment: Mapping[str, Scalar]) -> MultiPoly:
    """Substitute rational values for some variables; the result keeps the
    original variable list (substituted variables no longer occur)."""
    idx = [(p.vars.index(v), as_rational(x)) for v, x in assignment.items() if v in p.vars]
    if not idx:
        return p
    powers: Dict[Tuple[int, int], Fraction] = {}
    terms: Dict[Exponent, Fraction] = {}
    for e, c in p.terms.items():
        e2 = list(e)
        for i, x in idx:
            k = e[i]
            if k:
                key = (i, k)
                pw = powers.get(key)
                if pw is None:
                    pw = powers[key] = x ** k
                c = c * pw
                e2[i] = 0
        if c:
            e2 = tuple(e2)
            s = terms.get(e2, 0) + c
            if s:
                terms[e2] = s
            else:
                terms.pop(e2, None)
    return MultiPoly._raw(p.vars, terms)


def evaluate_scalar(p: MultiPoly, assignment: Mapping[str, Scalar]) -> Fraction:
    return evaluate(p, assignment).constant_value()


def compose(p: MultiPoly, mapping: Mapping[str, MultiPoly], vars: Sequence[str] | None = None) -> MultiPoly:
    """``p`` with each mapped variable replaced by a polynomial.  The result
    lives over ``vars`` (default: unmapped variables of ``p`` followed by the
    variables of the images)."""
    images = {k: (v if isinstance(v, MultiPoly) else MultiPoly.const(v)) for k, v in mapping.items()}
    if vars is None:
        vars = tuple(v for v in p.vars if v not in images)
        vars = vars + _common_vars(*images.values())
        vars = tuple(dict.fromkeys(vars))
    vars = tuple(vars)
    images = {k: v.with_vars(vars) for k, v in images.items()}
    result = MultiPoly._raw(vars, {})
    by_var = {}
    for i, name in enumerate(p.vars):
        if name in images:
            by_var[i] = images[name]
    cache: Dict[Tuple[int, int], MultiPoly] = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = by_var[i] ** k
        return cache[key]

    keep = [(i, vars.index(name)) for i, name in enumerate(p.vars) if name not in images]
    for e, c in p.terms.items():
        mono_e = [0] * len(vars)
        for i, j in keep:
            mono_e[j] = e[i]
        term = MultiPoly._raw(vars, {tuple(mono_e): c})
        for i in by_var:
            if e[i]:
                term = term * power(i, e[i])
        result = result + term
    return result


def exact_divide(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """``p / q``; raises :class:`PolynomialError` if the division leaves a
    remainder."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    vars = _common_vars(p, q)
    if not vars:
        return MultiPoly.const(p.constant_value() / q.constant_value())
    fp, dp = p._to_int(vars)
    fq, dq = q._to_int(vars)
    u = len(vars) - 1
    # make the divisor's integer content 1 so that integer exactness is implied
    cq = _dmp.int_content(fq, u)
    fq = _dmp.quo_ground(fq, cq, u)
    try:
        h = _dmp.exquo(fp, fq, u)
    except _dmp.NotExactDivision as exc:
        raise PolynomialError("exact_divide: nonzero remainder") from exc
    return MultiPoly._from_int(h, vars, Fraction(dq, dp * cq))


def divides(q: MultiPoly, p: MultiPoly) -> bool:
    try:
        exact_divide(p, q)
        return True
    except PolynomialError:
        return False


def gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, normalised by :meth:`MultiPoly.integer_primitive`."""
    vars = _common_vars(p, q)
    if p.is_zero() and q.is_zero():
        return MultiPoly._raw(vars, {})
    if not vars:
        return MultiPoly.const(1)
    fp, _ = p._to_int(vars)
    fq, _ = q._to_int(vars)
    u = len(vars) - 1
    h = _dmp.gcd(fp, fq, u)
    return MultiPoly._from_int(h, vars).integer_primitive()


def gcd_list(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = list(polys)
    g = polys[0]
    for p in polys[1:]:
        if g.is_constant() and not g.is_zero():
            break
        g = gcd(g, p)
    return g


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Resultant with respect to ``var`` by the subresultant PRS.

    A polynomial constant in ``var`` contributes its power per the Sylvester
    convention; ``Res(c, q) = c^deg(q)``.
    """
    if p.is_zero() and q.is_zero():
        raise PolynomialError("zero polynomial resultant undefined")
    vars = _common_vars(p, q)
    if var not in vars:
        vars = vars + (var,)
    order = (var,) + tuple(v for v in vars if v != var)
    fp, dp = p._to_int(order)
    fq, dq = q._to_int(order)
    u = len(order) - 1
    n, m = p.degree(var), q.degree(var)
    rest = order[1:]
    scale = Fraction(1, dp ** max(m, 0) * dq ** max(n, 0))
    if u == 0:
        r = _dmp.resultant(fp, fq, 0)
        return MultiPoly.const(Fraction(r) * scale, order[1:])
    r = _dmp.resultant(fp, fq, u)
    out = MultiPoly._from_int(r, rest, scale)
    return out.with_vars(tuple(v for v in vars if v != var))


def discriminant_like(p: MultiPoly, var: str) -> MultiPoly:
    """``Res(p, dp/dvar, var)`` (the discriminant up to a factor of the
    leading coefficient)."""
    return resultant(p, derivative(p, var), var)


def content_primitive(p: MultiPoly, main_vars: Iterable[str]) -> Tuple[MultiPoly, MultiPoly]:
    """Split ``p = content * primitive`` where the content involves only the
    variables outside ``main_vars``."""
    if p.is_zero():
        raise PolynomialError("content of the zero polynomial")
    main = [v for v in p.vars if v in set(main_vars)]
    idx = [p.vars.index(v) for v in main]
    groups: Dict[Tuple[int, ...], Dict[Exponent, Fraction]] = {}
    for e, c in p.terms.items():
        key = tuple(e[i] for i in idx)
        e2 = tuple(0 if i in idx else k for i, k in enumerate(e))
        groups.setdefault(key, {})[e2] = c
    coeffs = sorted((MultiPoly._raw(p.vars, t) for t in groups.values()), key=len)
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    primitive = exact_divide(p, g).integer_primitive()
    content = exact_divide(p, primitive)
    return content, primitive


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """``p / gcd(p, dp/dx_1, ..., dp/dx_n)`` normalised to an integer
    primitive polynomial."""
    if p.is_zero():
        raise PolynomialError("squarefree part of the zero polynomial")
    g = p
    for v in p.free_vars():
        if g.is_constant():
            break
        g = gcd(g, derivative(p, v))
    return exact_divide(p, g).integer_primitive()


def remove_factor(p: MultiPoly, f: MultiPoly) -> Tuple[MultiPoly, int]:
    """Divide out ``f`` as often as it divides ``p``."""
    k = 0
    if f.is_constant():
        return p, 0
    while True:
        try:
            p2 = exact_divide(p, f)
        except PolynomialError:
            return p, k
        p, k = p2, k + 1


def split_content(p: MultiPoly, var: str) -> Tuple[MultiPoly, MultiPoly]:
    """``(univariate factor in var, cofactor)`` where the first factor is the
    largest divisor of ``p`` involving only ``var``."""
    others = [v for v in p.vars if v != var]
    content, prim = content_primitive(p, others)
    return content, prim


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Reduced quotient of two :class:`MultiPoly`."""

    __slots__ = ("numer", "denom")

    def __init__(self, numer: MultiPoly, denom: MultiPoly | None = None, reduce: bool = True):
        if denom is None:
            denom = MultiPoly.const(1, numer.vars)
        if denom.is_zero():
            raise ZeroDivisionError("zero denominator")
        numer, denom = numer._align(denom)
        if reduce and not numer.is_zero():
            g = gcd(numer, denom)
            if not g.is_constant():
                numer = exact_divide(numer, g)
                denom = exact_divide(denom, g)
        if numer.is_zero():
            denom = MultiPoly.const(1, numer.vars)
        lc = denom.leading_coefficient()
        if lc != 1:
            numer = numer * (1 / lc)
            denom = denom * (1 / lc)
        self.numer = numer
        self.denom = denom

    @property
    def vars(self):
        return self.numer.vars

    def free_vars(self):
        return tuple(dict.fromkeys(self.numer.free_vars() + self.denom.free_vars()))

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.numer * other.denom + other.numer * self.denom,
                                self.denom * other.denom)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numer, self.denom, reduce=False)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.numer * other.numer, self.denom * other.denom)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.numer * other.denom, self.denom * other.numer)

    def __eq__(self, other):
        other = _as_rf(other)
        return (self.numer * other.denom - other.numer * self.denom).is_zero()

    def __hash__(self):
        return hash((self.numer, self.denom))

    def diff(self, var: str) -> "RationalFunction":
        n, d = self.numer, self.denom
        return RationalFunction(derivative(n, var) * d - n * derivative(d, var), d * d)

    def evaluate(self, assignment: Mapping[str, Scalar]):
        """Value (Fraction) when every free variable is assigned; otherwise a
        partially evaluated RationalFunction."""
        n = evaluate(self.numer, assignment)
        d = evaluate(self.denom, assignment)
        if d.is_zero():
            raise ZeroDivisionError("pole of rational function")
        if n.is_constant() and d.is_constant():
            return n.constant_value() / d.constant_value()
        return RationalFunction(n, d)

    def compose(self, mapping, vars=None) -> "RationalFunction":
        return RationalFunction(compose(self.numer, mapping, vars), compose(self.denom, mapping, vars))

    def __str__(self):
        if self.denom.is_constant() and self.denom.constant_value() == 1:
            return format_poly(self.numer)
        return f"({format_poly(self.numer)})/({format_poly(self.denom)})"

    __repr__ = __str__


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, MultiPoly):
        return RationalFunction(x, reduce=False)
    return RationalFunction(MultiPoly.const(x), reduce=False)


def compose_rational(p: MultiPoly, images: Mapping[str, RationalFunction],
                     vars: Sequence[str] | None = None) -> Tuple[MultiPoly, MultiPoly]:
    """Numerator and denominator of ``p`` with rational functions substituted,
    before cancelling common factors.  The denominator is the product of the
    image denominators raised to the degree of ``p`` in each variable."""
    images = {k: _as_rf(v) for k, v in images.items()}
    if vars is None:
        vars = tuple(v for v in p.vars if v not in images)
        for rf in images.values():
            vars = vars + tuple(v for v in rf.vars if v not in vars)
    vars = tuple(vars)
    degs = {k: p.degree(k) for k in images}
    numer = MultiPoly._raw(vars, {})
    denom = MultiPoly.const(1, vars)
    npow: Dict[Tuple[str, int], MultiPoly] = {}
    dpow: Dict[Tuple[str, int], MultiPoly] = {}

    def pw(cache, name, which, k):
        key = (name, k)
        if key not in cache:
            cache[key] = getattr(images[name], which).with_vars(vars) ** k
        return cache[key]

    for name, d in degs.items():
        if d > 0:
            denom = denom * pw(dpow, name, "denom", d)
    keep = [(i, vars.index(name)) for i, name in enumerate(p.vars) if name not in images]
    img_idx = [(i, name) for i, name in enumerate(p.vars) if name in images]
    for e, c in p.terms.items():
        mono = [0] * len(vars)
        for i, j in keep:
            mono[j] = e[i]
        term = MultiPoly._raw(vars, {tuple(mono): c})
        for i, name in img_idx:
            k, d = e[i], degs[name]
            if k:
                term = term * pw(npow, name, "numer", k)
            if d - k:
                term = term * pw(dpow, name, "denom", d - k)
        numer = numer + term
    return numer, denom


# ---------------------------------------------------------------------------
# text form


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: MultiPoly) -> str:
    """Canonical text: graded-lex descending terms ``coeff*x^a*y^b``."""
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(p.vars, e) if k)
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{_format_rational(a)}*{mono}"
        else:
            body = _format_rational(a)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


class _PolyBuilder(ast.NodeVisitor):
    def __init__(self, vars):
        self.vars = vars

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_BinOp(self, node):
        left = self.visit(node.left)
        if isinstance(node.op, ast.Pow):
            exp = self.visit(node.right)
            if isinstance(exp, MultiPoly):
                exp = exp.constant_value()
            if exp.denominator != 1 or exp < 0:
                raise PolynomialError("exponents must be nonnegative integers")
            return _lift(left, self.vars) ** int(exp)
        right = self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return _lift(left, self.vars) + right
        if isinstance(node.op, ast.Sub):
            return _lift(left, self.vars) - right
        if isinstance(node.op, ast.Mult):
            return _lift(left, self.vars) * right
        if isinstance(node.op, ast.Div):
            if isinstance(right, MultiPoly):
                if not right.is_constant():
                    raise PolynomialError("division by a non-constant in a polynomial")
                right = right.constant_value()
            return _lift(left, self.vars) / right
        raise PolynomialError(f"unsupported operator {type(node.op).__name__}")

    def visit_UnaryOp(self, node):
        val = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -_lift(val, self.vars)
        if isinstance(node.op, ast.UAdd):
            return _lift(val, self.vars)
        raise PolynomialError("unsupported unary operator")

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise PolynomialError(f"bad constant {node.value!r}")
        if isinstance(node.value, float):
            return Fraction(repr(node.value))
        return Fraction(node.value)

    def visit_Name(self, node):
        if node.id not in self.vars:
            raise PolynomialError(f"unknown variable {node.id!r}")
        return MultiPoly.var(node.id, self.vars)

    def generic_visit(self, node):
        raise PolynomialError(f"unsupported syntax: {type(node).__name__}")


def _lift(x, vars):
    return x if isinstance(x, MultiPoly) else MultiPoly.const(x, vars)


def _names_in(text: str):
    tree = ast.parse(text, mode="eval")
    return [n.id for n in ast.walk(tree) if isinstance(n, ast.Name)]


def parse_poly(text: str, vars: Sequence[str] | None = None) -> MultiPoly:
    """Parse ``+ - * / ^ **`` expressions with rational or decimal constants."""
    src = text.replace("^", "**")
    if vars is None:
        vars = tuple(dict.fromkeys(_names_in(src)))
    vars = tuple(vars)
    tree = ast.parse(src, mode="eval")
    out = _PolyBuilder(vars).visit(tree)
    return _lift(out, vars).with_vars(vars)


def parse_rational_function(text: str, vars: Sequence[str]) -> RationalFunction:
    """Parse a quotient expression; any division by a polynomial is allowed."""
    src = text.replace("^", "**")
    tree = ast.parse(src, mode="eval")
    return _RFBuilder(tuple(vars)).visit(tree)


class _RFBuilder(_PolyBuilder):
    def visit_BinOp(self, node):
        if isinstance(node.op, ast.Pow):
            base = self.visit(node.left)
            exp = self.visit(node.right)
            if isinstance(exp, RationalFunction):
                exp = exp.numer.constant_value() / exp.denom.constant_value()
            if exp.denominator != 1 or exp < 0:
                raise PolynomialError("exponents must be nonnegative integers")
            base = _as_rf(_lift(base, self.vars) if not isinstance(base, RationalFunction) else base)
            return RationalFunction(base.numer ** int(exp), base.denom ** int(exp))
        left = _as_rf(_lift_rf(self.visit(node.left), self.vars))
        right = _as_rf(_lift_rf(self.visit(node.right), self.vars))
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        raise PolynomialError(f"unsupported operator {type(node.op).__name__}")

    def visit_UnaryOp(self, node):
        val = _as_rf(_lift_rf(self.visit(node.operand), self.vars))
        if isinstance(node.op, ast.USub):
            return -val
        return val

    def visit_Name(self, node):
        return _as_rf(super().visit_Name(node))

    def visit_Expression(self, node):
        out = self.visit(node.body)
        return _as_rf(_lift_rf(out, self.vars))


def _lift_rf(x, vars):
    if isinstance(x, (RationalFunction, MultiPoly)):
        return x
    return MultiPoly.const(x, vars)
