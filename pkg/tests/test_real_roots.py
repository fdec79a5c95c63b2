import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from surfint.algebra import MultiPoly, parse_poly
from surfint.real_roots import (IsolatingInterval, RootIsolationError, compare, count_roots_in,
                                isolate_int, isolate_triangular, isolate_univariate, point_sign,
                                same_point, simplest_rational)

from oracles import sturm_count

X = ("x",)
VT = ("v", "t")


def sqf_coeffs(coeffs):
    x = sympy.Symbol("x")
    p = sympy.Poly(sum(c * x ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs)), x)
    return [int(c) for c in sympy.Poly(sympy.sqf_part(p.as_expr()), x).all_coeffs()]


def test_sqrt2():
    (r1, r2) = isolate_univariate(parse_poly("x^2 - 2", X))
    r2.refine(Fraction(1, 10 ** 12))
    assert r2.lo < Fraction(math.sqrt(2)) + Fraction(1, 10 ** 10)
    assert r2.lo ** 2 < 2 < r2.hi ** 2
    assert r1.hi < 0


def test_rational_roots_become_exact():
    roots = isolate_univariate(parse_poly("(2*x - 1)*(x + 3)*(x^2 - 3)", X))
    exact = [r.value for r in roots if r.is_exact]
    assert exact == [Fraction(-3), Fraction(1, 2)]
    assert len(roots) == 4


def test_domain_closed_endpoints():
    roots = isolate_univariate(parse_poly("x*(x - 1)*(x - 2)", X), (0, 1))
    assert [r.value for r in roots] == [0, 1]


def test_no_real_roots():
    assert isolate_univariate(parse_poly("x^4 + 1", X)) == []


def test_bad_interval_rejected():
    with pytest.raises(RootIsolationError):
        IsolatingInterval([1, 0, -2], 2, 3)


def test_count_roots_rejects_endpoint_root():
    with pytest.raises(RootIsolationError):
        count_roots_in(parse_poly("x - 1", X), (1, 2))
    assert count_roots_in(parse_poly("x^3 - x", X), (Fraction(-1, 2), 2)) == 2


def test_compare_equal_algebraic_numbers():
    # sqrt(2) as a root of two different polynomials
    a = [r for r in isolate_int([1, 0, -2]) if r.lo > 0][0]
    b = [r for r in isolate_int([1, -1, -2, 2]) if r.lo > 1][0]  # (x - 1)(x^2 - 2)
    assert compare(a, b) == 0
    c = [r for r in isolate_int([1, 0, -3]) if r.lo > 0][0]
    assert compare(a, c) == -1 and compare(c, a) == 1


def test_minimize_drops_spurious_factor():
    r = [r for r in isolate_int([3, 0, 2, 0, -1]) if r.lo > 0][0]   # (3v^2 - 1)(v^2 + 1)
    r.minimize()
    assert r.poly == [3, 0, -1]


def test_simplest_rational():
    assert simplest_rational(Fraction(1, 3), Fraction(3, 4)) == Fraction(1, 2)
    assert simplest_rational(Fraction(-7, 2), Fraction(-3)) == -3


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=8))
def test_isolation_matches_sturm(coeffs):
    if coeffs[0] == 0:
        return
    f = sqf_coeffs(coeffs)
    if len(f) < 2:
        return
    roots = isolate_int(f)
    assert len(roots) == sturm_count(f, -10 ** 6, 10 ** 6)
    for r in roots:
        if not r.is_exact:
            assert sturm_count(f, r.lo, r.hi) == 1
    for a, b in zip(roots, roots[1:]):
        assert a.hi < b.lo or (a.hi <= b.lo and (a.is_exact or b.is_exact))


def sturm_suite(n=100, seed=5):
    rng = random.Random(seed)
    fails = 0
    for _ in range(n):
        coeffs = [rng.randint(-20, 20) for _ in range(rng.randint(3, 9))]
        coeffs[0] = coeffs[0] or 1
        f = sqf_coeffs(coeffs)
        lo, hi = Fraction(rng.randint(-40, 0), 7), Fraction(rng.randint(1, 40), 7)
        roots = isolate_int(f, lo, hi)
        # Sturm counts (lo, hi]; add a root sitting exactly at lo
        expected = sturm_count(f, lo, hi) + (sum(c * lo ** (len(f) - 1 - i) for i, c in enumerate(f)) == 0)
        fails += len(roots) != expected
    return fails


def test_sturm_suite():
    assert sturm_suite() == 0


def test_refine_keeps_root():
    r = isolate_univariate(parse_poly("x^3 - x - 1", X))[0]
    r.refine(Fraction(1, 2 ** 50))
    assert r.width <= Fraction(1, 2 ** 50)
    assert (r.lo ** 3 - r.lo - 1) * (r.hi ** 3 - r.hi - 1) < 0


def test_triangular_circle_parabola():
    h = parse_poly("v^4 + v^2 - 1", ("v",))    # v^2 = (sqrt5 - 1)/2
    g = parse_poly("v^2 + t^2 - 1", VT)
    boxes = isolate_triangular(h, g, (-2, 2, -2, 2))
    assert len(boxes) == 4
    for b in boxes:
        assert point_sign(b, g) == 0
        assert point_sign(b, parse_poly("t - v^2", VT)) * point_sign(b, parse_poly("t + v^2", VT)) <= 0


def test_triangular_against_sympy():
    h = parse_poly("v^3 - 2*v", ("v",))
    g = parse_poly("t^3 - v*t - 1", VT)
    boxes = isolate_triangular(h, g, (-3, 3, -3, 3))
    expected = 0
    for a in (0.0, math.sqrt(2), -math.sqrt(2)):
        # t^3 + p t + q has one real root iff -4p^3 - 27q^2 < 0
        expected += 1 if -4 * (-a) ** 3 - 27 < 0 else 3
    assert len(boxes) == expected == 3


def test_triangular_exact_points_and_same_point():
    h = parse_poly("v*(v - 1)", ("v",))
    g = parse_poly("t^2 - v", VT)
    boxes = isolate_triangular(h, g, (-1, 2, -2, 2))
    pts = [b.point for b in boxes if b.is_exact]
    assert (Fraction(0), Fraction(0)) in pts
    assert (Fraction(1), Fraction(1)) in pts
    other = isolate_triangular(parse_poly("v^2 - v", ("v",)), parse_poly("t^3 - v*t", VT), (-1, 2, -2, 2))
    matches = sum(same_point(a, b) for a in boxes for b in other)
    assert matches == 3


def test_point_sign_at_irrational_point():
    h = parse_poly("v^2 - 2", ("v",))
    g = parse_poly("t - v", VT)
    b = [b for b in isolate_triangular(h, g, (0, 2, 0, 2))][0]
    assert point_sign(b, parse_poly("t^2 - 2", VT)) == 0
    assert point_sign(b, parse_poly("t^2 - 3", VT)) == -1
    assert point_sign(b, MultiPoly.const(-1, VT)) == -1
