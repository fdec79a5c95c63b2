"""Closed intervals with exact rational endpoints."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import MultiPoly


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")

    @classmethod
    def _raw(cls, lo, hi):
        iv = object.__new__(cls)
        iv.lo = lo
        iv.hi = hi
        return iv

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval._raw(self.lo + other.lo, self.hi + other.hi)
        return Interval._raw(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Interval._raw(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval._raw(self.lo - other.hi, self.hi - other.lo)
        return Interval._raw(self.lo - other, self.hi - other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Interval):
            a, b, c, d = self.lo, self.hi, other.lo, other.hi
            if a >= 0 and c >= 0:
                return Interval._raw(a * c, b * d)
            p = (a * c, a * d, b * c, b * d)
            return Interval._raw(min(p), max(p))
        if other >= 0:
            return Interval._raw(self.lo * other, self.hi * other)
        return Interval._raw(self.hi * other, self.lo * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Interval):
            if other.contains_zero():
                raise ZeroDivisionError("interval division by an interval containing zero")
            return self * Interval._raw(1 / other.hi, 1 / other.lo)
        return self * (1 / Fraction(other))

    def __pow__(self, n: int):
        if n == 0:
            return Interval._raw(Fraction(1), Fraction(1))
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 0:
            if self.lo <= 0 <= self.hi:
                return Interval._raw(Fraction(0), max(a, b))
            return Interval._raw(min(a, b), max(a, b))
        return Interval._raw(a, b)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def sign(self) -> int | None:
        """Certified sign, or ``None`` if the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def _horner(f, xs, u):
    """Interval Horner evaluation of a dense integer polynomial."""
    x = xs[0]
    if u == 0:
        acc = None
        for c in f:
            acc = Interval._raw(Fraction(c), Fraction(c)) if acc is None else acc * x + c
        return acc if acc is not None else Interval._raw(Fraction(0), Fraction(0))
    acc = None
    for c in f:
        val = _horner(c, xs[1:], u - 1) if c else Interval._raw(Fraction(0), Fraction(0))
        acc = val if acc is None else acc * x + val
    return acc if acc is not None else Interval._raw(Fraction(0), Fraction(0))


class IntervalEvaluator:
    """Cached interval evaluation of a fixed polynomial over fixed variables."""

    def __init__(self, poly: MultiPoly, order: Sequence[str]):
        self.order = tuple(order)
        self.dense, self.den = poly._to_int(self.order)
        self.u = len(self.order) - 1

    def __call__(self, values: Mapping[str, Interval] | Sequence[Interval]) -> Interval:
        if isinstance(values, Mapping):
            xs = [values[v] for v in self.order]
        else:
            xs = list(values)
        xs = [x if isinstance(x, Interval) else Interval._raw(Fraction(x), Fraction(x)) for x in xs]
        if not self.order:
            c = Fraction(self.dense[0]) if self.dense else Fraction(0)
            return Interval._raw(c / self.den, c / self.den)
        val = _horner(self.dense, xs, self.u)
        if self.den != 1:
            val = val * Fraction(1, self.den)
        return val


def interval_eval(poly: MultiPoly, values: Mapping[str, Interval]) -> Interval:
    order = [v for v in poly.vars if v in values]
    missing = [v for v in poly.free_vars() if v not in values]
    if missing:
        raise ValueError(f"no interval for variables {missing}")
    return IntervalEvaluator(poly.with_vars(order) if set(poly.vars) - set(order) else poly, order)(values)
