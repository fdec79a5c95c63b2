"""Certified real root isolation.

Univariate polynomials are isolated by Descartes' rule of signs with
bisection on rational intervals.  Bivariate triangular systems
``{h(v) = 0, g(v, t) = 0}`` are handled column by column: for each real root
``alpha`` of ``h`` the squarefree part of ``g(alpha, t)`` is computed exactly
in ``(Q[v]/h)[t]`` (splitting ``h`` whenever a zero test is ambiguous), and its
roots are separated by interval subdivision.  Every endpoint is an exact
rational; nothing here uses floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import Iterable, List, Optional, Sequence, Tuple

from . import _dmp
from .algebra import MultiPoly, PolynomialError, as_rational
from .intervals import Interval


class RootIsolationError(ArithmeticError):
    """A certification step could not be completed."""


class VerticalComponentError(RootIsolationError):
    """``g(alpha, t)`` vanishes identically at a root ``alpha`` of ``h``."""


MAX_DEPTH = 400


# ---------------------------------------------------------------------------
# dense univariate integer polynomials (highest degree first)

def _upoly(p: MultiPoly) -> List[int]:
    """Integer coefficient list of a univariate polynomial (positive multiple)."""
    free = p.free_vars()
    if len(free) > 1:
        raise PolynomialError(f"expected a univariate polynomial, got variables {free}")
    if not free:
        c = p.constant_value()
        return [1 if c > 0 else -1] if c else []
    dense, _ = p._to_int(free)
    return _prim(list(dense))


def _prim(f: List[int]) -> List[int]:
    g = 0
    for a in f:
        g = igcd(g, a)
    if g > 1:
        f = [a // g for a in f]
    return f


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _eval_sign(f: Sequence[int], x: Fraction) -> int:
    """Exact sign of ``f(x)``."""
    return _sign(_dmp.eval_main(f, x.numerator, x.denominator, 0))


def _variations(coeffs: Iterable[int]) -> int:
    n = 0
    last = 0
    for c in coeffs:
        if c:
            if last and (c > 0) != (last > 0):
                n += 1
            last = c
    return n


def _shift1(f: Sequence[int]) -> List[int]:
    """Taylor shift ``f(x + 1)``."""
    f = list(f)
    n = len(f)
    for i in range(n - 1):
        for j in range(1, n - i):
            f[j] += f[j - 1]
    return f


def _halve(f: Sequence[int]) -> List[int]:
    """``2^n f(x/2)``."""
    return [a << i for i, a in enumerate(f)]


def _descartes_unit(f: Sequence[int]) -> int:
    """Descartes bound for the number of roots of ``f`` in ``(0, 1)``."""
    return _variations(_shift1(list(reversed(f))))


def _to_unit(f: Sequence[int], lo: Fraction, hi: Fraction) -> List[int]:
    """Integer polynomial ``c * f(lo + (hi - lo) x)`` with ``c > 0``."""
    w = hi - lo
    # Horner over Q[x]: acc = acc * (lo + w x) + a
    acc: List[Fraction] = []
    for a in f:
        new = [Fraction(0)] * (len(acc) + 1)
        for i, c in enumerate(acc):
            new[i] += c * w
            new[i + 1] += c * lo
        new[-1] += a
        acc = new
    den = 1
    for c in acc:
        den = den * c.denominator // igcd(den, c.denominator)
    return _dmp.strip(_prim([int(c * den) for c in acc]))


def cauchy_bound(f: Sequence[int]) -> Fraction:
    """Every real root of ``f`` lies in ``(-B, B)``."""
    lc = abs(f[0])
    return 1 + Fraction(max(abs(a) for a in f[1:]) if len(f) > 1 else 0, lc)


def _isolate_open(f: List[int], lo: Fraction, hi: Fraction):
    """Roots of squarefree ``f`` in the open interval ``(lo, hi)``.

    Yields ``(a, b)`` pairs; ``a == b`` marks an exact rational root, otherwise
    ``(a, b)`` contains exactly one root and may have a root at an endpoint
    (callers normalise).
    """
    g = _to_unit(f, lo, hi)
    w = hi - lo
    out = []
    stack = [(g, 0, 0)]  # (poly on (0,1), numerator c, level k): (c/2^k, (c+1)/2^k)
    while stack:
        p, c, k = stack.pop()
        v = _descartes_unit(p)
        if v == 0:
            continue
        a = lo + w * Fraction(c, 1 << k)
        b = lo + w * Fraction(c + 1, 1 << k)
        if v == 1:
            out.append((a, b))
            continue
        if k > MAX_DEPTH:
            raise RootIsolationError("root isolation did not terminate; is the input squarefree?")
        left = _halve(p)
        right = _shift1(left)
        if right[-1] == 0:
            m = (a + b) / 2
            out.append((m, m))
        stack.append((right, 2 * c + 1, k + 1))
        stack.append((left, 2 * c, k + 1))
    out.sort()
    return out


def simplest_rational(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in ``[lo, hi]`` (Stern-Brocot)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_rational(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # same integer part: recurse on reciprocals of the fractional parts
    return fl + 1 / simplest_rational(1 / (hi - fl), 1 / (lo - fl))


# ---------------------------------------------------------------------------
# real algebraic numbers

class IsolatingInterval:
    """A real root of a squarefree integer polynomial, isolated by ``[lo, hi]``.

    Either ``lo == hi`` (the root is that rational) or the polynomial has
    nonzero, opposite signs at the endpoints and exactly one root between them.
    The defining polynomial may shrink to a factor during zero tests; the
    number it denotes never changes.
    """

    __slots__ = ("poly", "lo", "hi", "_slo")

    def __init__(self, poly: Sequence[int], lo, hi):
        self.poly = list(poly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo == self.hi:
            self._slo = 0
            if self.poly and _eval_sign(self.poly, self.lo) != 0:
                raise RootIsolationError(f"{self.lo} is not a root")
        else:
            self._slo = _eval_sign(self.poly, self.lo)
            if self._slo == 0 or self._slo == _eval_sign(self.poly, self.hi):
                raise RootIsolationError(f"[{self.lo}, {self.hi}] is not an isolating interval")

    @classmethod
    def exact(cls, value) -> "IsolatingInterval":
        x = as_rational(value)
        return cls([x.denominator, -x.numerator], x, x)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("root is not known to be rational")
        return self.lo

    @property
    def interval(self) -> Interval:
        return Interval._raw(self.lo, self.hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def polynomial(self, var: str = "v") -> MultiPoly:
        n = len(self.poly) - 1
        return MultiPoly({(n - i,): c for i, c in enumerate(self.poly) if c}, (var,))

    def set_poly(self, poly: Sequence[int]) -> None:
        """Replace the defining polynomial by a factor that still vanishes here."""
        poly = _prim(list(poly))
        if poly and poly[0] < 0:
            poly = [-a for a in poly]
        self.poly = poly
        if not self.is_exact:
            self._slo = _eval_sign(poly, self.lo)

    def minimize(self) -> "IsolatingInterval":
        """Replace the defining polynomial by the minimal polynomial."""
        if self.is_exact or len(self.poly) <= 2:
            return self
        from sympy.polys.domains import ZZ
        from sympy.polys.factortools import dup_factor_list
        _, factors = dup_factor_list([ZZ(a) for a in self.poly], ZZ)
        for fac, _k in factors:
            fac = [int(a) for a in fac]
            if len(fac) > 1 and _roots_in_closed(fac, self.lo, self.hi) > 0:
                self.set_poly(fac)
                if len(fac) == 2:
                    self.lo = self.hi = Fraction(-fac[1], fac[0])
                break
        return self

    def bisect(self) -> None:
        if self.is_exact:
            return
        m = (self.lo + self.hi) / 2
        s = _eval_sign(self.poly, m)
        if s == 0:
            self.lo = self.hi = m
            self._slo = 0
        elif s == self._slo:
            self.lo = m
        else:
            self.hi = m

    def refine(self, width) -> "IsolatingInterval":
        width = Fraction(width)
        while not self.is_exact and self.hi - self.lo > width:
            self.bisect()
        return self

    def try_exact(self) -> bool:
        """Detect a rational root.

        A rational root ``p/q`` has ``q | lc``; once the width drops below
        ``1/lc^2`` it is the simplest rational in the interval.
        """
        if self.is_exact:
            return True
        lc = abs(self.poly[0])
        if lc.bit_length() <= 64:
            self.refine(Fraction(1, 2 * lc * lc))
            if self.is_exact:
                return True
        r = simplest_rational(self.lo, self.hi)
        if _eval_sign(self.poly, r) == 0:
            self.lo = self.hi = r
            self._slo = 0
            return True
        return False

    def copy(self) -> "IsolatingInterval":
        c = object.__new__(IsolatingInterval)
        c.poly, c.lo, c.hi, c._slo = list(self.poly), self.lo, self.hi, self._slo
        return c

    def approx(self, width=Fraction(1, 10 ** 15)) -> Fraction:
        self.refine(width)
        return self.mid

    def __float__(self):
        return float(self.approx())

    def __repr__(self):
        if self.is_exact:
            return f"IsolatingInterval({self.lo})"
        return f"IsolatingInterval([{self.lo}, {self.hi}])"

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "exact": self.is_exact}

    # comparison ----------------------------------------------------------
    def equals(self, other: "IsolatingInterval") -> bool:
        return compare(self, other) == 0

    def __lt__(self, other):
        return compare(self, other) < 0


RealAlgebraic = IsolatingInterval


def _roots_in_closed(f: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct roots of ``f`` in ``[lo, hi]`` (``f`` need not be squarefree)."""
    if not f or len(f) == 1:
        return 0
    f = _sqf_int(f)
    if lo == hi:
        return int(_eval_sign(f, lo) == 0)
    n = len(_isolate_open(f, lo, hi))
    n += _eval_sign(f, lo) == 0
    n += _eval_sign(f, hi) == 0
    return n


def _sqf_int(f: Sequence[int]) -> List[int]:
    f = list(f)
    if len(f) <= 2:
        return f
    g = _dmp.gcd(f, _dmp.diff(f, 0), 0)
    if len(g) <= 1:
        return f
    return _dmp.exquo(f, g, 0)


def compare(a: IsolatingInterval, b: IsolatingInterval) -> int:
    """Exact comparison of two real algebraic numbers."""
    if a is b:
        return 0
    if a.is_exact and b.is_exact:
        return _sign(a.lo - b.lo)
    if a.is_exact or b.is_exact:
        x, y, flip = (a, b, 1) if a.is_exact else (b, a, -1)
        # y is irrational-or-unknown; x rational
        if y.lo <= x.lo <= y.hi and _eval_sign(y.poly, x.lo) == 0:
            return 0
        while y.lo <= x.lo <= y.hi:
            y.bisect()
            if y.is_exact:
                return flip * _sign(x.lo - y.lo)
        return flip * (1 if x.lo > y.hi else -1)
    if a.hi < b.lo:
        return -1
    if b.hi < a.lo:
        return 1
    g = _dmp.gcd(a.poly, b.poly, 0)
    if len(g) > 1 and _roots_in_closed(g, a.lo, a.hi) and _roots_in_closed(g, b.lo, b.hi):
        # both are roots of g; they agree iff g has a single root in the hull
        while True:
            lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
            if a.hi < b.lo or b.hi < a.lo:
                break
            if _roots_in_closed(g, lo, hi) == 1:
                return 0
            a.bisect()
            b.bisect()
            if a.is_exact or b.is_exact:
                return compare(a, b)
    for _ in range(100000):
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        a.bisect()
        b.bisect()
        if a.is_exact or b.is_exact:
            return compare(a, b)
    raise RootIsolationError("comparison of algebraic numbers did not terminate")


# ---------------------------------------------------------------------------
# univariate public API

def _domain(domain) -> Tuple[Optional[Fraction], Optional[Fraction]]:
    if domain is None:
        return None, None
    if isinstance(domain, Interval):
        return domain.lo, domain.hi
    lo, hi = domain
    return (None if lo is None else as_rational(lo)), (None if hi is None else as_rational(hi))


def isolate_int(f: Sequence[int], lo: Optional[Fraction] = None,
                hi: Optional[Fraction] = None) -> List[IsolatingInterval]:
    """Isolate the roots of a squarefree integer polynomial in ``[lo, hi]``."""
    f = _dmp.strip(list(f))
    if not f:
        raise PolynomialError("cannot isolate the roots of the zero polynomial")
    if len(f) == 1:
        return []
    if lo is None or hi is None:
        B = cauchy_bound(f)
        lo = -B if lo is None else lo
        hi = B if hi is None else hi
    if lo > hi:
        raise ValueError(f"empty domain [{lo}, {hi}]")
    out: List[IsolatingInterval] = []
    if _eval_sign(f, lo) == 0:
        out.append(IsolatingInterval(f, lo, lo))
    if lo < hi:
        for a, b in _isolate_open(f, lo, hi):
            out.append(_normalise(f, a, b))
        if _eval_sign(f, hi) == 0:
            out.append(IsolatingInterval(f, hi, hi))
    for r in out:
        r.try_exact()
    out.sort(key=lambda r: (r.lo, r.hi))
    return out


def _normalise(f, a: Fraction, b: Fraction) -> IsolatingInterval:
    """Turn a Descartes interval (open, endpoints possibly roots) into an
    isolating interval whose endpoints are not roots."""
    if a == b:
        return IsolatingInterval(f, a, a)
    sa, sb = _eval_sign(f, a), _eval_sign(f, b)
    k = 2
    while sa == 0 or sb == 0:
        w = (b - a) / k
        if sa == 0:
            a2 = a + w
            sa2 = _eval_sign(f, a2)
        else:
            a2, sa2 = a, sa
        if sb == 0:
            b2 = b - w
            sb2 = _eval_sign(f, b2)
        else:
            b2, sb2 = b, sb
        # the single root of (a, b) must still lie strictly inside
        if sa2 and sb2 and sa2 != sb2:
            a, b, sa, sb = a2, b2, sa2, sb2
            break
        if sa2 == 0 or sb2 == 0:
            # landed on the root itself
            r = a2 if sa2 == 0 and a2 != a else b2
            return IsolatingInterval(f, r, r)
        k *= 2
    return IsolatingInterval(f, a, b)


def isolate_univariate(p: MultiPoly, domain=None) -> List[IsolatingInterval]:
    """Sorted isolating intervals for the real roots of squarefree ``p`` in
    ``domain`` (a closed rational interval, or ``None`` for the whole line)."""
    if p.is_zero():
        raise PolynomialError("cannot isolate the roots of the zero polynomial")
    f = _upoly(p)
    lo, hi = _domain(domain)
    return isolate_int(f, lo, hi)


def refine(obj, width):
    """Shrink an isolating interval or box to width at most ``width``."""
    return obj.refine(width)


def count_roots_in(p: MultiPoly, interval) -> int:
    """Number of distinct real roots of ``p`` in the open interval."""
    if p.is_zero():
        raise PolynomialError("cannot count the roots of the zero polynomial")
    f = _upoly(p)
    lo, hi = _domain(interval)
    if lo is None or hi is None or lo >= hi:
        raise ValueError("count_roots_in needs a bounded nonempty interval")
    if len(f) <= 1:
        return 0
    for x in (lo, hi):
        if _eval_sign(f, x) == 0:
            raise RootIsolationError(
                f"root at interval endpoint {x}; perturb the query interval")
    return len(_isolate_open(_sqf_int(f), lo, hi))


def nonroot_near(p: MultiPoly, x, toward, k0: int = 10) -> Fraction:
    """Deterministic perturbation: ``x`` itself if it is not a root, otherwise
    ``x + (toward - x) / 2^k`` for the smallest ``k >= k0`` that avoids roots."""
    x, toward = as_rational(x), as_rational(toward)
    f = _upoly(p)
    if not f or len(f) == 1 or _eval_sign(f, x) != 0:
        return x
    k = k0
    while True:
        y = x + (toward - x) / (1 << k)
        if _eval_sign(f, y) != 0:
            return y
        k += 1


# ---------------------------------------------------------------------------
# arithmetic in Q[v] (Fraction lists, highest first)

def _qstrip(f):
    i = 0
    while i < len(f) and not f[i]:
        i += 1
    return f[i:]


def _qsub(f, g):
    n = max(len(f), len(g))
    f = [Fraction(0)] * (n - len(f)) + list(f)
    g = [Fraction(0)] * (n - len(g)) + list(g)
    return _qstrip([a - b for a, b in zip(f, g)])


def _qadd(f, g):
    n = max(len(f), len(g))
    f = [Fraction(0)] * (n - len(f)) + list(f)
    g = [Fraction(0)] * (n - len(g)) + list(g)
    return _qstrip([a + b for a, b in zip(f, g)])


def _qmul(f, g):
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _qscale(f, c):
    if not c:
        return []
    return [a * c for a in f]


def _qdivmod(f, g):
    f = list(f)
    if len(f) < len(g):
        return [], f
    q = [Fraction(0)] * (len(f) - len(g) + 1)
    inv = 1 / g[0]
    for i in range(len(q)):
        c = f[i] * inv
        q[i] = c
        if c:
            for j in range(1, len(g)):
                f[i + j] -= c * g[j]
    return q, _qstrip(f[len(q):])


def _qrem(f, g):
    if len(f) < len(g):
        return list(f)
    return _qdivmod(f, g)[1]


def _qmonic(f):
    if not f:
        return f
    inv = 1 / f[0]
    return [a * inv for a in f]


def _qgcd(f, g):
    f, g = _qstrip(list(f)), _qstrip(list(g))
    while g:
        f, g = g, _qrem(f, g)
    return _qmonic(f)


def _qinv(a, m):
    """Inverse of ``a`` modulo ``m`` (they must be coprime)."""
    r0, r1 = list(m), _qrem(a, m)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    if len(r0) != 1:
        raise RootIsolationError("element is not invertible modulo the defining polynomial")
    return _qrem(_qscale(s0, 1 / r0[0]), m)


def _q_to_int(f) -> List[int]:
    den = 1
    for c in f:
        den = den * c.denominator // igcd(den, c.denominator)
    g = _prim([int(c * den) for c in f])
    if g and g[0] < 0:
        g = [-a for a in g]
    return g


def _int_to_q(f) -> List[Fraction]:
    return [Fraction(a) for a in f]


def _qeval_interval(f, x: Interval) -> Interval:
    acc = Interval._raw(Fraction(0), Fraction(0))
    for c in f:
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# polynomials over Q(alpha)

def _coeffs_in_t(g: MultiPoly, vvar: str, tvar: str) -> List[List[Fraction]]:
    """Coefficients of ``g`` in ``t`` (highest first), each a Q[v] list."""
    gg = g.with_vars((tvar, vvar))
    dt = gg.degree(tvar)
    if dt < 0:
        return []
    rows = [dict() for _ in range(dt + 1)]
    for (et, ev), c in gg.terms.items():
        rows[dt - et][ev] = c
    out = []
    for row in rows:
        if not row:
            out.append([])
            continue
        dv = max(row)
        out.append([row.get(dv - i, Fraction(0)) for i in range(dv + 1)])
    return out


class AlgebraicField:
    """Arithmetic modulo the (shrinking) defining polynomial of ``alpha``."""

    def __init__(self, alpha: IsolatingInterval):
        self.alpha = alpha
        if alpha.is_exact:
            self.h = [Fraction(1), -alpha.lo]
        else:
            self.h = _int_to_q(alpha.poly)

    def _sync(self, newh) -> None:
        self.h = _qmonic(newh)
        self.alpha.set_poly(_q_to_int(self.h))

    def reduce(self, c):
        return _qrem(c, self.h) if len(c) >= len(self.h) else _qstrip(list(c))

    def is_zero(self, c) -> bool:
        """Exact test ``c(alpha) == 0``; may split the defining polynomial."""
        c = self.reduce(c)
        if not c:
            return True
        if self.alpha.is_exact:
            x = self.alpha.lo
            acc = Fraction(0)
            for a in c:
                acc = acc * x + a
            return acc == 0
        g = _qgcd(self.h, c)
        if len(g) == 1:
            return False
        gi = _q_to_int(g)
        if _roots_in_closed(gi, self.alpha.lo, self.alpha.hi):
            self._sync(g)
            return True
        self._sync(_qdivmod(self.h, g)[0])
        return False

    def inv(self, c):
        return _qinv(c, self.h)

    def value(self, c) -> Interval:
        return _qeval_interval(c, self.alpha.interval)

    def sign(self, c) -> int:
        """Exact sign of ``c(alpha)``."""
        c = self.reduce(c)
        if not c:
            return 0
        if self.alpha.is_exact:
            acc = Fraction(0)
            for a in c:
                acc = acc * self.alpha.lo + a
            return _sign(acc)
        s = self.value(c).sign()
        if s is not None and s != 0:
            return s
        if self.is_zero(c):
            return 0
        while True:
            self.alpha.refine(self.alpha.width / 4)
            s = self.value(c).sign()
            if s:
                return s


class ColumnPoly:
    """Squarefree ``Q(alpha, t)`` with the same real roots as ``g(alpha, t)``."""

    def __init__(self, field: AlgebraicField, coeffs: List[List[Fraction]]):
        self.field = field
        self.coeffs = coeffs  # highest degree in t first, each reduced mod h
        self.dcoeffs = [_qscale(c, len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]

    @property
    def alpha(self) -> IsolatingInterval:
        return self.field.alpha

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_poly(cls, g: MultiPoly, alpha: IsolatingInterval, vvar: str = "v",
                  tvar: str = "t", field: AlgebraicField | None = None) -> "ColumnPoly":
        field = field or AlgebraicField(alpha)
        A = _trim(field, [field.reduce(c) for c in _coeffs_in_t(g, vvar, tvar)])
        if not A:
            raise VerticalComponentError(
                f"polynomial vanishes identically on the column v = {alpha}; "
                "vertical component leaked into triangular solve")
        if len(A) == 1:
            return cls(field, [[Fraction(1)]])
        dA = [field.reduce(_qscale(c, len(A) - 1 - i)) for i, c in enumerate(A[:-1])]
        D = _col_gcd(field, A, dA)
        Q = _col_exquo(field, A, D) if len(D) > 1 else _col_monic(field, A)
        return cls(field, Q)

    def univariate(self) -> List[int]:
        """Integer coefficients when ``alpha`` is rational."""
        x = self.alpha.lo
        vals = []
        for c in self.coeffs:
            acc = Fraction(0)
            for a in c:
                acc = acc * x + a
            vals.append(acc)
        return _q_to_int(_qstrip(vals))

    def ieval(self, t: Interval, deriv: bool = False) -> Interval:
        cs = self.dcoeffs if deriv else self.coeffs
        av = self.alpha.interval
        acc = Interval._raw(Fraction(0), Fraction(0))
        for c in cs:
            acc = acc * t + _qeval_interval(c, av)
        return acc

    def at(self, t: Fraction) -> List[Fraction]:
        """``Q(v, t)`` as an element of ``Q[v]/h``."""
        acc: List[Fraction] = []
        for c in self.coeffs:
            acc = _qadd(_qscale(acc, t), c)
        return self.field.reduce(acc)

    def sign_at(self, t: Fraction) -> int:
        return self.field.sign(self.at(t))

    def gcd_with(self, f: MultiPoly, vvar: str = "v", tvar: str = "t") -> List[List[Fraction]]:
        """Monic ``gcd(Q(alpha, t), f(alpha, t))`` (``[]`` if ``f(alpha, .)`` is zero)."""
        B = _trim(self.field, [self.field.reduce(c) for c in _coeffs_in_t(f, vvar, tvar)])
        if not B:
            return []
        return _col_gcd(self.field, list(self.coeffs), B)


def _trim(field: AlgebraicField, A):
    i = 0
    while i < len(A) and field.is_zero(A[i]):
        i += 1
    return [field.reduce(c) for c in A[i:]]


def _col_monic(field, A):
    inv = field.inv(A[0])
    return [[Fraction(1)]] + [field.reduce(_qmul(c, inv)) for c in A[1:]]


def _col_rem(field, A, B):
    """Remainder of ``A`` by ``B`` (``lc(B)(alpha) != 0``)."""
    A = [list(c) for c in A]
    inv = field.inv(B[0])
    while len(A) >= len(B):
        q = field.reduce(_qmul(A[0], inv))
        for j in range(1, len(B)):
            A[j] = field.reduce(_qsub(A[j], _qmul(q, B[j])))
        A = A[1:]
        A = _trim(field, A)
        if not A:
            break
    return A


def _col_gcd(field, A, B):
    A = _trim(field, A)
    B = _trim(field, B)
    while B:
        A, B = B, _col_rem(field, A, B)
        B = _trim(field, B)
    return _col_monic(field, A) if A else []


def _col_exquo(field, A, D):
    """``A / D`` for monic ``D`` dividing ``A``."""
    A = [list(c) for c in A]
    q = []
    while len(A) >= len(D):
        c = A[0]
        q.append(c)
        for j in range(1, len(D)):
            A[j] = field.reduce(_qsub(A[j], _qmul(c, D[j])))
        A = A[1:]
    if any(field.reduce(c) for c in A):
        # the remainder must vanish at alpha; anything else is a bug
        if not all(field.is_zero(c) for c in A):
            raise RootIsolationError("inexact division in the column squarefree part")
    return _trim(field, q)


# ---------------------------------------------------------------------------
# isolating boxes

class IsolatingBox:
    """Exactly one solution ``(alpha, beta)`` of ``{h = 0, g = 0}``.

    ``v`` isolates ``alpha``; ``[t_lo, t_hi]`` isolates ``beta`` among the
    roots of the squarefree column polynomial ``column``.
    """

    __slots__ = ("v", "t_lo", "t_hi", "column", "g", "vars", "_slo")

    def __init__(self, v: IsolatingInterval, t_lo, t_hi, column: ColumnPoly,
                 g: MultiPoly, vars=("v", "t")):
        self.v = v
        self.t_lo = Fraction(t_lo)
        self.t_hi = Fraction(t_hi)
        self.column = column
        self.g = g
        self.vars = tuple(vars)
        self._slo = 0 if self.t_lo == self.t_hi else column.sign_at(self.t_lo)

    @property
    def t_exact(self) -> bool:
        return self.t_lo == self.t_hi

    @property
    def is_exact(self) -> bool:
        return self.t_exact and self.v.is_exact

    @property
    def v_interval(self) -> IsolatingInterval:
        return self.v

    @property
    def t_interval(self) -> Interval:
        return Interval._raw(self.t_lo, self.t_hi)

    @property
    def point(self) -> Tuple[Fraction, Fraction]:
        if not self.is_exact:
            raise ValueError("point is not known to be rational")
        return self.v.lo, self.t_lo

    def bisect_t(self) -> None:
        if self.t_exact:
            return
        m = (self.t_lo + self.t_hi) / 2
        s = self.column.sign_at(m)
        if s == 0:
            self.t_lo = self.t_hi = m
            self._slo = 0
        elif s == self._slo:
            self.t_lo = m
        else:
            self.t_hi = m

    def refine(self, width) -> "IsolatingBox":
        width = Fraction(width)
        self.v.refine(width)
        while not self.t_exact and self.t_hi - self.t_lo > width:
            self.bisect_t()
        return self

    def try_exact(self) -> bool:
        if self.t_exact:
            return True
        r = simplest_rational(self.t_lo, self.t_hi)
        if self.column.sign_at(r) == 0:
            self.t_lo = self.t_hi = r
            self._slo = 0
            return True
        return False

    def approx(self, width=Fraction(1, 10 ** 12)) -> Tuple[Fraction, Fraction]:
        self.refine(width)
        return self.v.mid, (self.t_lo + self.t_hi) / 2

    def to_json(self) -> dict:
        return {"v": self.v.to_json(),
                "t": {"lo": str(self.t_lo), "hi": str(self.t_hi), "exact": self.t_exact}}

    def __repr__(self):
        t = f"{self.t_lo}" if self.t_exact else f"[{self.t_lo}, {self.t_hi}]"
        return f"IsolatingBox(v={self.v!r}, t={t})"


def _isolate_column(col: ColumnPoly, C: Fraction, D: Fraction) -> List[Tuple[Fraction, Fraction]]:
    """Isolating intervals for the roots of ``col`` in ``[C, D]``."""
    if col.degree == 0:
        return []
    alpha = col.alpha
    if alpha.is_exact:
        return [(r.lo, r.hi) for r in isolate_int(col.univariate(), C, D)]
    roots: List[Tuple[Fraction, Fraction]] = []
    sC, sD = col.sign_at(C), col.sign_at(D)
    if sC == 0:
        roots.append((C, C))
    if sD == 0 and D != C:
        roots.append((D, D))
    stack = [(C, D, sC, sD, 0)]
    while stack:
        c, d, sc, sd, depth = stack.pop()
        if c == d:
            continue
        alpha.refine((d - c) / 64)
        iv = Interval._raw(c, d)
        if not col.ieval(iv).contains_zero():
            continue
        if not col.ieval(iv, deriv=True).contains_zero():
            if sc and sd and sc != sd:
                roots.append((c, d))
            continue
        if depth > MAX_DEPTH:
            raise RootIsolationError("column root isolation did not terminate")
        m = (c + d) / 2
        sm = col.sign_at(m)
        if sm == 0:
            roots.append((m, m))
        stack.append((m, d, sm, sd, depth + 1))
        stack.append((c, m, sc, sm, depth + 1))
    roots.sort()
    # shrink exact-endpoint intervals away from neighbouring exact roots
    out = []
    for a, b in roots:
        if a != b:
            r = simplest_rational(a, b)
            if col.sign_at(r) == 0:
                a = b = r
        out.append((a, b))
    return out


def isolate_column(g: MultiPoly, alpha: IsolatingInterval, C, D,
                   vars=("v", "t")) -> List[IsolatingBox]:
    """Boxes for the roots of ``g(alpha, t)`` with ``t`` in ``[C, D]``."""
    C, D = as_rational(C), as_rational(D)
    col = ColumnPoly.from_poly(g, alpha, vars[0], vars[1])
    return [IsolatingBox(alpha, a, b, col, g, vars) for a, b in _isolate_column(col, C, D)]


def isolate_triangular(h: MultiPoly, g: MultiPoly, box, vars=("v", "t")) -> List[IsolatingBox]:
    """All solutions of ``{h(v) = 0, g(v, t) = 0}`` in ``[A, B] x [C, D]``,
    sorted by column and then by ``t``."""
    A, B, C, D = (as_rational(x) for x in box)
    out: List[IsolatingBox] = []
    for alpha in isolate_univariate(h, (A, B)):
        out.extend(isolate_column(g, alpha, C, D, vars))
    return out


# ---------------------------------------------------------------------------
# signs and coincidence at algebraic points

def box_values(box: IsolatingBox) -> dict:
    return {box.vars[0]: box.v.interval, box.vars[1]: box.t_interval}


def _poly_interval(f: MultiPoly, box: IsolatingBox) -> Interval:
    from .intervals import interval_eval
    vals = box_values(box)
    return interval_eval(f, {k: vals[k] for k in f.vars if k in vals})


def point_sign(box: IsolatingBox, f: MultiPoly) -> int:
    """Exact sign of ``f`` at the point isolated by ``box``."""
    vvar, tvar = box.vars
    if box.v.is_exact and box.t_exact:
        return _sign(f.subs({vvar: box.v.lo, tvar: box.t_lo}).constant_value())
    s = _poly_interval(f, box).sign()
    if s:
        return s
    if box.t_exact:
        field = box.column.field
        fc = _coeffs_in_t(f, vvar, tvar)
        acc: List[Fraction] = []
        for c in fc:
            acc = _qadd(_qscale(acc, box.t_lo), c)
        return field.sign(acc)
    D = box.column.gcd_with(f, vvar, tvar)
    if not D:
        return 0
    if len(D) > 1:
        dcol = ColumnPoly(box.column.field, D)
        s1, s2 = dcol.sign_at(box.t_lo), dcol.sign_at(box.t_hi)
        if s1 != s2:
            return 0
    for _ in range(100000):
        box.refine(max(box.v.width, box.t_hi - box.t_lo) / 2)
        if box.is_exact or box.t_exact:
            return point_sign(box, f)
        s = _poly_interval(f, box).sign()
        if s:
            return s
    raise RootIsolationError("sign determination did not terminate")


def same_point(p: IsolatingBox, q: IsolatingBox) -> bool:
    """Exact test whether two boxes isolate the same point of the plane."""
    if compare(p.v, q.v) != 0:
        return False
    if p.t_exact and q.t_exact:
        return p.t_lo == q.t_lo
    if p.t_exact:
        p, q = q, p
    # p has a proper t-interval isolating beta_p among the roots of p.g(alpha, .)
    if q.t_exact:
        if not (p.t_lo <= q.t_lo <= p.t_hi):
            return False
        return p.column.sign_at(q.t_lo) == 0
    if q.t_hi < p.t_lo or p.t_hi < q.t_lo:
        return False
    # a copy of q living over p's field keeps the comparison exact
    if point_sign(q, p.g) != 0:
        return False
    for _ in range(100000):
        if q.t_hi < p.t_lo or p.t_hi < q.t_lo:
            return False
        if p.t_lo <= q.t_lo and q.t_hi <= p.t_hi:
            return True
        if q.t_exact:
            return p.t_lo <= q.t_lo <= p.t_hi
        q.bisect_t()
    raise RootIsolationError("point comparison did not terminate")


def compare_t(p: IsolatingBox, q: IsolatingBox) -> int:
    """Order of the t-coordinates of two boxes over the same column."""
    if same_point(p, q):
        return 0
    for _ in range(100000):
        if p.t_hi < q.t_lo:
            return -1
        if q.t_hi < p.t_lo:
            return 1
        if p.t_exact and q.t_exact:
            return _sign(p.t_lo - q.t_lo)
        p.bisect_t()
        q.bisect_t()
    raise RootIsolationError("t comparison did not terminate")
