import random
from fractions import Fraction

import pytest

from akcurves.field import QuadFieldElement
from akcurves.hirzebruch import (VARS, FmCurve, FmPoint, arithmetic_genus, bidegree_reduction_check,
                                 blowdown_to_p2, blowup_from_p2, canonical_class, center_normalization,
                                 classify_at_fm_point, divisibility_condition, divisor_to_poly,
                                 fiber, fiber_intersection, fiber_points, fm_automorphism, fm_curve,
                                 fm_normalize_points, intersection_at_fm_point, lift_point,
                                 move_to_q_matrix, poly_to_divisor, s_minus, s_plus)
from akcurves.parse import parse_poly
from akcurves.plane import apply_matrix, has_bidegree
from akcurves.poly import MultiPoly

from oracles import random_fraction


def nonzero(rng):
    return random_fraction(rng) or Fraction(1)


def random_form(rng, deg, d=0, terms=3):
    y0, y1 = MultiPoly.gens(VARS, d)[2:]
    out = MultiPoly.zero(VARS, d)
    for _ in range(terms):
        j = rng.randint(0, deg)
        out = out + y0 ** j * y1 ** (deg - j) * nonzero(rng)
    return out


def random_curve(rng, m, a, b, d=0):
    x0, x1 = MultiPoly.gens(VARS, d)[:2]
    G = MultiPoly.zero(VARS, d)
    while G.is_zero():
        for i in range(a + 1):
            if b - m * i >= 0 and rng.random() < 0.8:
                G = G + x0 ** i * x1 ** (a - i) * random_form(rng, b - m * i, d)
    return FmCurve(m, G)


def random_automorphism(rng, m):
    while True:
        M = [[random_fraction(rng) for _ in range(2)] for _ in range(2)]
        if M[0][0] * M[1][1] - M[0][1] * M[1][0]:
            break
    Q = random_form(rng, m) if m else None
    return fm_automorphism(m, M, nonzero(rng), nonzero(rng), Q)


def random_point(rng, m):
    return FmPoint(nonzero(rng), nonzero(rng), random_fraction(rng), nonzero(rng), m)


# -- divisor classes ---------------------------------------------------------------

@pytest.mark.parametrize("m", range(0, 7))
@pytest.mark.parametrize("a", range(1, 5))
def test_genus_of_multiple_sections(a, m):
    assert arithmetic_genus(a * s_plus(m)) == Fraction(a * ((a - 1) * m - 2), 2) + 1


@pytest.mark.parametrize("m", range(0, 6))
def test_intersection_pairing(m):
    assert s_minus(m).self_intersection == -m
    assert s_plus(m).self_intersection == m
    assert s_minus(m).dot(s_plus(m)) == 0
    assert fiber(m).self_intersection == 0
    assert s_minus(m).dot(fiber(m)) == 1
    assert canonical_class(m).self_intersection == 8
    # sections and fibers are rational
    assert arithmetic_genus(s_minus(m)) == 0 == arithmetic_genus(fiber(m))


def test_class_mismatch():
    with pytest.raises(ValueError):
        s_minus(1).dot(s_minus(2))


# -- points and curves ------------------------------------------------------------------

def test_point_normal_form():
    m = 3
    p = FmPoint(3, 2, 1, 5, m)
    mu, lam = Fraction(7, 2), Fraction(-2, 3)
    q = FmPoint(3 * mu, 2 * mu * lam ** -m, lam, 5 * lam, m)
    assert p == q and hash(p) == hash(q)
    assert FmPoint(1, 0, 2, 3, m).on_s_minus()
    with pytest.raises(ValueError):
        FmPoint(0, 0, 1, 1, m)


def test_curve_weights():
    C = fm_curve("x0*y1^2 - x1*y0^4", 2)
    assert (C.a, C.b) == (1, 4) and C.divisor_class == s_plus(2) + 2 * fiber(2)
    with pytest.raises(ValueError):
        fm_curve("x0 + x1*y0", 2)


def test_fiber_points_and_intersection():
    C = fm_curve("x0^2 - x1^2*y0^4", 2)
    pts = dict((str(p), k) for p, k in fiber_points(C, (0, 1)))
    assert pts == {"[0:1;0:1]": 2}
    assert fiber_intersection(C, FmPoint(0, 1, 0, 1, 2)) == 2
    assert fiber_intersection(C, FmPoint(1, 1, 1, 1, 2)) == 1
    assert classify_at_fm_point(C, FmPoint(0, 1, 0, 1, 2)).ak == 3


# -- automorphisms --------------------------------------------------------------------

def test_random_automorphisms_invert():
    rng = random.Random(17)
    for trial in range(200):
        m = trial % 4
        A = random_automorphism(rng, m)
        C = random_curve(rng, m, 2, 2 * m + 1)
        assert A.inverse().apply_curve(A.apply_curve(C)).same_as(C)
        p = random_point(rng, m)
        assert A.inverse().apply_point(A.apply_point(p)) == p


def test_automorphism_moves_points_with_curves():
    rng = random.Random(3)
    for m in range(0, 4):
        A = random_automorphism(rng, m)
        C = random_curve(rng, m, 3, 3 * m)
        for p, _ in fiber_points(C, (1, 1)):
            assert A.apply_curve(C).G.evaluate(A.apply_point(p).coords) == 0


def test_composition():
    rng = random.Random(5)
    A, B = random_automorphism(rng, 2), random_automorphism(rng, 2)
    C = random_curve(rng, 2, 3, 6)
    assert A.then(B).apply_curve(C).same_as(B.apply_curve(A.apply_curve(C)))
    with pytest.raises(ValueError):
        A.then(random_automorphism(rng, 1))


def test_normalize_points():
    rng = random.Random(8)
    for m in range(1, 5):
        s = random_point(rng, m)
        t = FmPoint(nonzero(rng), 1, nonzero(rng), random_fraction(rng), m)
        if s.fiber[0] * t.fiber[1] == s.fiber[1] * t.fiber[0]:
            continue
        A = fm_normalize_points(s, t)
        assert A.apply_point(s) == FmPoint(0, 1, 0, 1, m)
        assert A.apply_point(t) == FmPoint(0, 1, 1, 0, m)
    with pytest.raises(ValueError):
        fm_normalize_points(FmPoint(1, 0, 0, 1, 2), FmPoint(0, 1, 1, 0, 2))


def test_center_normalization():
    rng = random.Random(9)
    for m in range(0, 4):
        p = random_point(rng, m)
        assert center_normalization(p).apply_point(p) == FmPoint(0, 1, 1, 0, m)
        q = FmPoint(1, 0, nonzero(rng), 1, m)
        assert center_normalization(q).apply_point(q) == FmPoint(1, 0, 1, 0, m)


def test_automorphisms_over_extension():
    w = QuadFieldElement(0, 1, -3)
    A = fm_automorphism(1, ((1, w), (0, 1)))
    p = FmPoint(1, 1, 1, 1, 1)
    assert A.inverse().apply_point(A.apply_point(p)) == p


# -- polynomial <-> divisor ---------------------------------------------------------------

def test_poly_divisor_roundtrip():
    rng = random.Random(11)
    for n in range(20):
        a, m = 1 + n % 3, n % 4
        terms = {}
        for _ in range(5):
            i = rng.randint(0, a)
            j = rng.randint(0, m * (a - i))
            terms[(i, j)] = nonzero(rng)
        terms[(a, 0)] = Fraction(1)
        F = MultiPoly(("x", "y"), terms)
        C = poly_to_divisor(F, m, a)
        assert C.divisor_class == a * s_plus(m)
        assert divisor_to_poly(C) == F
        assert poly_to_divisor(divisor_to_poly(C), m, a).G == C.G


def test_poly_divisor_rejects_wrong_bidegree():
    with pytest.raises(ValueError):
        poly_to_divisor(parse_poly("x^2 - y^5"), 2, 2)
    with pytest.raises(ValueError):
        divisor_to_poly(fm_curve("x0*y1 - x1*y0^3", 2))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_reduction_check(m):
    rng = random.Random(m)
    for r in (1, 2):
        # bidegree (3, 3m - r) versus a generic (3, 3m) polynomial
        terms = {(3, 0): Fraction(1)}
        for _ in range(6):
            i = rng.randint(0, 2)
            j = rng.randint(0, (3 * m - r) * (3 - i) // 3)
            terms[(i, j)] = nonzero(rng)
        F = MultiPoly(("x", "y"), terms)
        assert has_bidegree(F, 3, 3 * m - r)
        C = poly_to_divisor(F, m, 3)
        assert bidegree_reduction_check(C, r)
        assert divisibility_condition(C, r)
        generic = poly_to_divisor(F + parse_poly(f"y^{3 * m}"), m, 3)
        assert not bidegree_reduction_check(generic, r)


def test_reduction_check_arguments():
    with pytest.raises(ValueError):
        bidegree_reduction_check(fm_curve("x0^2 - x1^2*y0^2", 1), 2)


# -- P^2 blow-up ---------------------------------------------------------------------

def test_blowup_roundtrip():
    F = parse_poly("y^2*z - x^3 - x^2*z", 0, ("x", "y", "z"))
    C, e = blowup_from_p2(F)
    assert e == 2 and C.m == 1
    assert blowdown_to_p2(C) == F
    G = parse_poly("x*y*z + x^3 + y^3", 0, ("x", "y", "z"))
    _, e = blowup_from_p2(G)
    assert e == 2
    _, e = blowup_from_p2(parse_poly("z^3 + x^3 - y^3", 0, ("x", "y", "z")))
    assert e == 0


def test_move_to_q_and_lift():
    for q in [(1, 2, 3), (0, 1, 0), (1, 0, 0), (2, 5, 0)]:
        M = move_to_q_matrix(q)
        assert apply_matrix(M, (0, 0, 1)) == apply_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], q)
    p = lift_point((2, 3, 5))
    # the plane point and its preimage satisfy the same conic
    S = parse_poly("x*z - y^2 + z^2", 0, ("x", "y", "z"))
    C, _ = blowup_from_p2(S)
    assert (S.evaluate((2, 3, 5)) == 0) == (C.G.evaluate(p.coords) == 0)
    with pytest.raises(ValueError):
        lift_point((0, 0, 1))


def test_intersection_on_surface():
    C = fm_curve("x0 - x1*y0", 1)
    D = fm_curve("x0 - x1*y0 - x1*y1", 1)
    p = FmPoint(1, 1, 1, 0, 1)
    assert intersection_at_fm_point(C, D, p) == 1
    # total intersection equals the class pairing S_+ . S_+ = 1
    assert C.divisor_class.dot(D.divisor_class) == 1
