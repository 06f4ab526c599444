"""Curves, points and divisor classes on the Hirzebruch surfaces F_m.

Points are [x0:x1;y0:y1] up to (x0, x1, y0, y1) ~ (mu x0, lam^-m mu x1, lam y0, lam y1).
A curve is the zero set of G = sum_i x0^i x1^(a-i) G_i(y0, y1) with
deg G_i = b - m*i; its class is a*S_- + b*f, where S_- = {x1 = 0} and f is a fiber.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .field import QuadFieldElement
from .plane import (SingularityReport, classify_singularity, has_bidegree,
                    intersection_multiplicity, multiplicity_at, normalize_projective,
                    tangent_cone, translate)
from .poly import MultiPoly, binary_form_roots, divide, gcd

VARS = ("x0", "x1", "y0", "y1")
AFFINE = ("x", "y")
PLANE = ("x", "y", "z")


def _sc(c, d=0) -> QuadFieldElement:
    return c if isinstance(c, QuadFieldElement) else QuadFieldElement(c, 0, d)


def _field_of(values) -> int:
    return next((c.d for c in values if isinstance(c, QuadFieldElement) and c.im), 0)


# -- divisor classes ----------------------------------------------------------

@dataclass(frozen=True)
class DivisorClass:
    """s*S_- + f*fiber on F_m."""

    m: int
    s: int
    f: int

    def dot(self, other: "DivisorClass") -> int:
        if other.m != self.m:
            raise ValueError(f"classes on F_{self.m} and F_{other.m}")
        return -self.m * self.s * other.s + self.s * other.f + self.f * other.s

    def __add__(self, other):
        if other.m != self.m:
            raise ValueError(f"classes on F_{self.m} and F_{other.m}")
        return DivisorClass(self.m, self.s + other.s, self.f + other.f)

    def __rmul__(self, k: int):
        return DivisorClass(self.m, k * self.s, k * self.f)

    @property
    def self_intersection(self) -> int:
        return self.dot(self)

    def __str__(self):
        return f"{self.s}S_- + {self.f}f"


def s_minus(m: int) -> DivisorClass:
    return DivisorClass(m, 1, 0)


def s_plus(m: int) -> DivisorClass:
    return DivisorClass(m, 1, m)


def fiber(m: int) -> DivisorClass:
    return DivisorClass(m, 0, 1)


def canonical_class(m: int) -> DivisorClass:
    return DivisorClass(m, -2, -(m + 2))


def intersection_number(D1: DivisorClass, D2: DivisorClass) -> int:
    return D1.dot(D2)


def arithmetic_genus(D: DivisorClass) -> Fraction:
    """Adjunction: 1 + D.(D + K)/2."""
    return Fraction(D.dot(D + canonical_class(D.m)), 2) + 1


# -- points --------------------------------------------------------------------

class FmPoint:
    """Normalized representative: last nonzero y-entry is 1, then last nonzero x-entry is 1."""

    __slots__ = ("m", "x0", "x1", "y0", "y1")

    def __init__(self, x0, x1, y0, y1, m: int):
        d = _field_of((x0, x1, y0, y1))
        x0, x1, y0, y1 = (_sc(c, d) for c in (x0, x1, y0, y1))
        if not (x0 or x1) or not (y0 or y1):
            raise ValueError("neither coordinate pair of a point on F_m may vanish")
        lam = y1 if y1 else y0
        y0, y1 = y0 / lam, y1 / lam
        x1 = x1 * lam ** m
        mu = x1 if x1 else x0
        self.m = m
        self.x0, self.x1, self.y0, self.y1 = x0 / mu, x1 / mu, y0, y1

    @property
    def coords(self) -> Tuple[QuadFieldElement, ...]:
        return (self.x0, self.x1, self.y0, self.y1)

    @property
    def fiber(self) -> Tuple[QuadFieldElement, QuadFieldElement]:
        return (self.y0, self.y1)

    def on_s_minus(self) -> bool:
        return not self.x1

    def __eq__(self, other):
        return isinstance(other, FmPoint) and self.m == other.m and self.coords == other.coords

    def __hash__(self):
        return hash((self.m, self.coords))

    def __str__(self):
        return "[{}:{};{}:{}]".format(*(str(c) for c in self.coords))

    def __repr__(self):
        return f"FmPoint({self}, m={self.m})"


def same_fiber(p: FmPoint, q: FmPoint) -> bool:
    return p.y0 * q.y1 == p.y1 * q.y0


# -- curves ---------------------------------------------------------------------

class FmCurve:
    """A curve on F_m given by a bihomogeneous G in x0, x1, y0, y1."""

    __slots__ = ("m", "G", "a", "b")

    def __init__(self, m: int, G: MultiPoly):
        if G.vars != VARS:
            G = G.embed(VARS) if set(G.vars) <= set(VARS) else G
        if G.is_zero():
            raise ValueError("the zero polynomial defines no curve")
        self.m = m
        self.G = G
        a = b = None
        for e in G.terms:
            i, j = e[0], e[1]
            bb = e[2] + e[3] + m * i
            if a is None:
                a, b = i + j, bb
            elif i + j != a or bb != b:
                raise ValueError(f"{G} is not weight-consistent on F_{m}")
        self.a, self.b = a, b

    @classmethod
    def from_forms(cls, m: int, forms: Sequence[Optional[MultiPoly]], d: int = 0) -> "FmCurve":
        """G = sum x0^i x1^(a-i) forms[i]; forms are binary in (y0, y1) or 4-variate."""
        a = len(forms) - 1
        x0, x1, _, _ = MultiPoly.gens(VARS, d)
        G = MultiPoly.zero(VARS, d)
        for i, form in enumerate(forms):
            if form is None or form.is_zero():
                continue
            form = form.embed(VARS) if form.vars != VARS else form
            G = G + x0 ** i * x1 ** (a - i) * form
        C = cls(m, G)
        if C.a != a:
            raise ValueError("forms do not assemble to an x-degree matching their count")
        return C

    @property
    def d(self) -> int:
        return self.G.d

    @property
    def divisor_class(self) -> DivisorClass:
        return DivisorClass(self.m, self.a, self.b)

    @property
    def self_intersection(self) -> int:
        return self.divisor_class.self_intersection

    def forms(self) -> List[Optional[MultiPoly]]:
        """G_0..G_a as binary forms in (y0, y1); None where the form is zero."""
        out: List[dict] = [dict() for _ in range(self.a + 1)]
        for e, c in self.G.terms.items():
            out[e[0]][(e[2], e[3])] = c
        return [MultiPoly(("y0", "y1"), t, self.d) if t else None for t in out]

    def monic(self) -> "FmCurve":
        return FmCurve(self.m, self.G.monic())

    def same_as(self, other: "FmCurve") -> bool:
        """Equal zero sets: G's agree up to a nonzero scalar."""
        if self.m != other.m:
            return False
        return self.G.monic() == other.G.monic()

    def has_fiber_component(self) -> bool:
        forms = [f for f in self.forms() if f is not None]
        return not gcd(*forms).is_constant()

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "a": self.a,
            "b": self.b,
            "class": str(self.divisor_class),
            "self_intersection": self.self_intersection,
            "equation": str(self.G),
            "forms": [None if f is None else str(f) for f in self.forms()],
        }

    def __str__(self):
        return str(self.G)

    def __repr__(self):
        return f"FmCurve(m={self.m}, class={self.divisor_class}, G={self.G})"


def fm_curve(text_or_poly, m: int, field: int = 0) -> FmCurve:
    if isinstance(text_or_poly, str):
        from .parse import parse_poly
        text_or_poly = parse_poly(text_or_poly, field, vars=VARS)
    return FmCurve(m, text_or_poly)


# -- automorphisms ---------------------------------------------------------------

class FmAutomorphism:
    """An automorphism stored as two substitutions in the coordinates of F_m.

    forward gives new coordinates as polynomials in old ones (used on points);
    backward gives old coordinates in terms of new ones (used on curves).
    """

    __slots__ = ("m", "forward", "backward")

    def __init__(self, m: int, forward: Sequence[MultiPoly], backward: Sequence[MultiPoly]):
        self.m = m
        self.forward = tuple(forward)
        self.backward = tuple(backward)

    @classmethod
    def identity(cls, m: int, d: int = 0) -> "FmAutomorphism":
        g = MultiPoly.gens(VARS, d)
        return cls(m, g, g)

    @classmethod
    def swap(cls, d: int = 0) -> "FmAutomorphism":
        """x0 <-> x1, only an automorphism of F_0."""
        x0, x1, y0, y1 = MultiPoly.gens(VARS, d)
        return cls(0, (x1, x0, y0, y1), (x1, x0, y0, y1))

    def then(self, other: "FmAutomorphism") -> "FmAutomorphism":
        if other.m != self.m:
            raise ValueError("automorphisms of different surfaces")
        fwd = [f.substitute(self.forward) for f in other.forward]
        bwd = [g.substitute(other.backward) for g in self.backward]
        return FmAutomorphism(self.m, fwd, bwd)

    def inverse(self) -> "FmAutomorphism":
        return FmAutomorphism(self.m, self.backward, self.forward)

    def apply_curve(self, C: FmCurve) -> FmCurve:
        if C.m != self.m:
            raise ValueError(f"curve on F_{C.m}, automorphism of F_{self.m}")
        return FmCurve(self.m, C.G.substitute(self.backward)).monic()

    def apply_point(self, p: FmPoint) -> FmPoint:
        if p.m != self.m:
            raise ValueError(f"point on F_{p.m}, automorphism of F_{self.m}")
        return FmPoint(*(f.evaluate(p.coords) for f in self.forward), self.m)


def fm_automorphism(m: int, matrix=((1, 0), (0, 1)), alpha=1, beta=1,
                    Q: Optional[MultiPoly] = None) -> FmAutomorphism:
    """x0 -> alpha x0 + x1 Q(y0, y1), x1 -> beta x1, (y0, y1) -> matrix (y0, y1)."""
    vals = [matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1], alpha, beta]
    d = _field_of(vals)
    if Q is not None:
        d = d or Q.d
    (p, q), (r, s) = [[_sc(c, d) for c in row] for row in matrix]
    alpha, beta = _sc(alpha, d), _sc(beta, d)
    det = p * s - q * r
    if not det or not alpha or not beta:
        raise ValueError("degenerate automorphism")
    x0, x1, y0, y1 = MultiPoly.gens(VARS, d)
    if Q is None:
        Q = MultiPoly.zero(VARS, d)
    elif Q.vars != VARS:
        Q = Q.embed(VARS)
    if not Q.is_zero() and (not Q.is_homogeneous() or Q.total_degree() != m
                            or Q.degree_in(0) > 0 or Q.degree_in(1) > 0):
        raise ValueError(f"Q must be a binary form of degree {m} in y0, y1")
    ny0, ny1 = y0 * p + y1 * q, y0 * r + y1 * s
    forward = (x0 * alpha + x1 * Q, x1 * beta, ny0, ny1)
    # inverse of the y-matrix
    oy0, oy1 = (y0 * s - y1 * q) / det, (y1 * p - y0 * r) / det
    ox1 = x1 / beta
    Qold = Q.substitute([x0, x1, oy0, oy1]) if not Q.is_zero() else Q
    ox0 = (x0 - ox1 * Qold) / alpha
    backward = (ox0, ox1, oy0, oy1)
    return FmAutomorphism(m, forward, backward)


def fm_apply_automorphism(C: FmCurve, aut: FmAutomorphism) -> FmCurve:
    return aut.apply_curve(C)


def fm_normalize_points(s: FmPoint, t: FmPoint) -> FmAutomorphism:
    """Automorphism sending s to [0:1;0:1] and t to [0:1;1:0]."""
    m = s.m
    if s.on_s_minus() or t.on_s_minus():
        raise ValueError("points to normalize must lie off S_-")
    if same_fiber(s, t):
        raise ValueError("points to normalize must lie on distinct fibers")
    if m == 0:
        raise ValueError("on F_0 two points cannot both be moved to x0 = 0")
    a0, a1 = s.fiber
    b0, b1 = t.fiber
    A = fm_automorphism(m, ((a1, -a0), (-b1, b0)))
    s1, t1 = A.apply_point(s), A.apply_point(t)
    d = _field_of(s1.coords + t1.coords)
    _, _, y0, y1 = MultiPoly.gens(VARS, d)
    Q = -(y1 ** m * s1.x0 + y0 ** m * t1.x0)
    if Q.is_zero():
        return A
    return A.then(fm_automorphism(m, Q=Q))


def center_normalization(p: FmPoint) -> FmAutomorphism:
    """Automorphism sending p to [0:1;1:0] (p off S_-) or [1:0;1:0] (p on S_-)."""
    m = p.m
    d0, d1 = p.fiber
    if d0:
        A = fm_automorphism(m, ((1, 0), (-d1 / d0, 1)))
    else:
        A = fm_automorphism(m, ((0, 1), (1, 0)))
    p1 = A.apply_point(p)
    if p.on_s_minus() or not p1.x0:
        return A
    _, _, y0, _ = MultiPoly.gens(VARS, p1.x0.d)
    return A.then(fm_automorphism(m, Q=-(y0 ** m) * p1.x0))


# -- charts -----------------------------------------------------------------------

CHARTS = ((0, 0), (0, 1), (1, 0), (1, 1))


def chart_of(p: FmPoint) -> Tuple[int, int]:
    """Lexicographically first chart {x_i != 0, y_j != 0} containing p."""
    for i, j in CHARTS:
        if (p.x0, p.x1)[i] and (p.y0, p.y1)[j]:
            return i, j
    raise AssertionError("every point lies in some chart")


def chart_equation(C: FmCurve, chart: Tuple[int, int]) -> MultiPoly:
    """Affine equation in (x, y) = (free x-coordinate, free y-coordinate)."""
    i, j = chart
    d = C.d
    u, v = MultiPoly.gens(AFFINE, d)
    one = MultiPoly.const(AFFINE, 1, d)
    xs = [None, None]
    ys = [None, None]
    xs[i], xs[1 - i] = one, u
    ys[j], ys[1 - j] = one, v
    return C.G.substitute(xs + ys)


def chart_coordinates(p: FmPoint, chart: Tuple[int, int]) -> Tuple[QuadFieldElement, QuadFieldElement]:
    i, j = chart
    ys = (p.y0, p.y1)
    xs = [p.x0, p.x1 * ys[j] ** p.m]
    return xs[1 - i] / xs[i], ys[1 - j] / ys[j]


def local_equation(C: FmCurve, p: FmPoint, chart=None) -> MultiPoly:
    """Equation of C near p, translated so p is the origin."""
    if C.m != p.m:
        raise ValueError("curve and point live on different surfaces")
    chart = chart or chart_of(p)
    return translate(chart_equation(C, chart), chart_coordinates(p, chart))


def classify_at_fm_point(C: FmCurve, p: FmPoint) -> SingularityReport:
    return classify_singularity(local_equation(C, p))


def multiplicity_at_fm_point(C: FmCurve, p: FmPoint) -> int:
    return multiplicity_at(local_equation(C, p))


def intersection_at_fm_point(C: FmCurve, D: FmCurve, p: FmPoint):
    chart = chart_of(p)
    return intersection_multiplicity(local_equation(C, p, chart), local_equation(D, p, chart))


# -- fibers -----------------------------------------------------------------------

def restrict_to_fiber(C: FmCurve, direction) -> MultiPoly:
    """G(x0, x1, alpha, beta) as a binary form in (x0, x1); zero means a fiber component."""
    alpha, beta = direction
    d = C.d or _field_of(direction)
    x0, x1 = MultiPoly.gens(("x0", "x1"), d)
    return C.G.substitute([x0, x1, MultiPoly.const(("x0", "x1"), alpha, d),
                           MultiPoly.const(("x0", "x1"), beta, d)])


def fiber_points(C: FmCurve, direction) -> List[Tuple[FmPoint, int]]:
    """Field-rational points of C on the fiber, with their fiber intersection numbers."""
    B = restrict_to_fiber(C, direction)
    if B.is_zero():
        raise ValueError("the fiber is a component of the curve")
    roots, _ = binary_form_roots(B)
    return [(FmPoint(r0, r1, direction[0], direction[1], C.m), k) for (r0, r1), k in roots]


def fiber_intersection(C: FmCurve, p: FmPoint) -> int:
    """I_p(C, f) for the fiber f through p, read off the fiber restriction."""
    B = restrict_to_fiber(C, p.fiber)
    if B.is_zero():
        raise ValueError("the fiber through p is a component of the curve")
    lin = MultiPoly.gens(("x0", "x1"), B.d)
    form = lin[0] * p.x1 - lin[1] * p.x0
    k = 0
    while True:
        q, r = divide(B, form)
        if not r.is_zero():
            return k
        B = q
        k += 1


# -- polynomial <-> divisor ---------------------------------------------------------

def poly_to_divisor(F: MultiPoly, m: int, a: Optional[int] = None) -> FmCurve:
    """Homogenize a bidegree (a, am) polynomial to its divisor in |a S_+| on F_m."""
    if a is None:
        a = F.degree_in(0)
    if not has_bidegree(F, a, a * m):
        raise ValueError(f"polynomial is not of bidegree ({a}, {a * m})")
    terms = {}
    for (i, j), c in F.terms.items():
        terms[(i, a - i, j, m * (a - i) - j)] = c
    return FmCurve(m, MultiPoly(VARS, terms, F.d))


def divisor_to_poly(C: FmCurve) -> MultiPoly:
    """F(x, y) = G(x, 1, y, 1) for C in |a S_+|."""
    if C.b != C.a * C.m:
        raise ValueError(f"class {C.divisor_class} is not a multiple of S_+")
    x, y = MultiPoly.gens(AFFINE, C.d)
    one = MultiPoly.const(AFFINE, 1, C.d)
    return C.G.substitute([x, one, y, one])


def divisibility_condition(C: FmCurve, r: int) -> bool:
    """y1^(r - floor(i r / a)) divides the coefficient of x0^i x1^(a-i), for every i."""
    a = C.a
    for i, form in enumerate(C.forms()):
        if form is None:
            continue
        if form.order_in(1) < r - (i * r) // a:
            return False
    return True


def bidegree_reduction_check(C: FmCurve, r: int) -> bool:
    """Geometric test at p = [0:1;1:0] that G(x,1,y,1) has bidegree (a, am - r).

    r = 1: the fiber y1 = 0 meets C at p with multiplicity a, or is a component.
    r = 2 (a = 3 only): p is a triple point, or a double point whose only
    tangent is the fiber direction.
    """
    if C.b != C.a * C.m:
        raise ValueError("the reduction check needs C in |a S_+|")
    if r not in (1, 2) or (r == 2 and C.a != 3):
        raise ValueError(f"unsupported reduction r={r} for a={C.a}")
    g = chart_equation(C, (1, 0))
    if r == 1:
        if C.G.order_in(3) >= 1:
            geometric = True
        else:
            y = MultiPoly.var(AFFINE, "y", C.d)
            geometric = intersection_multiplicity(g, y) == C.a
    else:
        mult = g.lowest_degree() if g.constant_term() == 0 else 0
        if mult == 3:
            geometric = True
        elif mult == 2:
            cone, shape = tangent_cone(g)
            geometric = shape == "double_line" and set(cone.terms) == {(0, 2)}
        else:
            geometric = False
    if geometric != divisibility_condition(C, r):
        raise AssertionError("geometric and divisibility forms of the reduction disagree")
    return geometric


# -- the blow-up F_1 -> P^2 at q = [0:0:1] -------------------------------------------

def move_to_q_matrix(q: Sequence) -> List[List[QuadFieldElement]]:
    """A matrix M with M [0:0:1] = q, for use with projective_change."""
    q = normalize_projective(q)
    k = max(i for i in range(3) if q[i])
    others = [i for i in range(3) if i != k]
    d = _field_of(q)
    M = [[_sc(0, d)] * 3 for _ in range(3)]
    for col, i in enumerate(others):
        M[i][col] = _sc(1, d)
    for i in range(3):
        M[i][2] = q[i]
    return M


def blowup_from_p2(F: MultiPoly) -> Tuple[FmCurve, int]:
    """Strict transform of a plane curve under F_1 -> P^2 blowing up [0:0:1].

    The map is [x0:x1;y0:y1] -> [x1 y0 : x1 y1 : x0]; returns the curve and the
    removed power of x1, which equals the multiplicity of F at [0:0:1].
    """
    if F.arity != 3 or not F.is_homogeneous():
        raise ValueError("blow-up needs a ternary form")
    x0, x1, y0, y1 = MultiPoly.gens(VARS, F.d)
    G = F.substitute([x1 * y0, x1 * y1, x0])
    e = G.order_in(1)
    G = MultiPoly(VARS, {(i, j - e, k, l): c for (i, j, k, l), c in G.terms.items()}, G.d)
    return FmCurve(1, G), e


def blowdown_to_p2(C: FmCurve) -> MultiPoly:
    """Image in P^2 of a curve on F_1: substitute x0 = z, x1 = 1, (y0, y1) = (x, y)."""
    if C.m != 1:
        raise ValueError("blow-down is defined from F_1")
    x, y, z = MultiPoly.gens(PLANE, C.d)
    return C.G.substitute([z, MultiPoly.const(PLANE, 1, C.d), x, y])


def lift_point(P: Sequence) -> FmPoint:
    """Preimage on F_1 of a plane point other than [0:0:1]."""
    X, Y, Z = normalize_projective(P)
    if not X and not Y:
        raise ValueError("[0:0:1] is the blown-up point")
    return FmPoint(Z, 1, X, Y, 1)
