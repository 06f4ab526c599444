"""Affine and projective plane curves: Newton triangle, multiplicity, A_k
classification by iterated blow-up, and local intersection numbers."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .field import QuadFieldElement
from .poly import MultiPoly, gcd, repeated_part

INFINITE = math.inf


@dataclass(frozen=True)
class SingularityReport:
    """kind is one of off_curve, smooth, A, mult_ge_3, non_reduced."""

    kind: str
    k: Optional[int] = None
    blowups: int = 0
    multiplicity: Optional[int] = None

    def __post_init__(self):
        if self.kind == "A" and self.blowups != (self.k + 1) // 2:
            raise AssertionError(f"A_{self.k} reached after {self.blowups} blow-ups")
        if self.kind == "smooth" and self.blowups:
            raise AssertionError("smooth points need no blow-up")

    @property
    def ak(self) -> Optional[int]:
        """k of the A_k type, with 0 for smooth points and None otherwise."""
        if self.kind == "A":
            return self.k
        if self.kind == "smooth":
            return 0
        return None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "k": self.k, "blowups": self.blowups}
        if self.multiplicity is not None:
            out["multiplicity"] = self.multiplicity
        return out

    def __str__(self):
        if self.kind == "A":
            return f"A_{self.k} ({self.blowups} blow-ups)"
        if self.kind == "mult_ge_3":
            return f"multiplicity {self.multiplicity}"
        return self.kind.replace("_", " ")


class ClassificationError(RuntimeError):
    pass


# -- Newton triangle ------------------------------------------------------

def has_bidegree(F: MultiPoly, a: int, b: int) -> bool:
    """Newton polygon of F(x, y) inside the triangle (0,0), (a,0), (0,b)."""
    for i, j in F.terms:
        if i > a or j > b or b * i + a * j > a * b:
            return False
    return True


def minimal_b(F: MultiPoly, a: int) -> Optional[int]:
    """Smallest b with has_bidegree(F, a, b), or None if deg_x F > a."""
    if F.is_zero():
        return 0
    if F.degree_in(0) > a:
        return None
    b = F.degree_in(1)
    while not has_bidegree(F, a, b):
        b += 1
    return max(b, 0)


# -- points and translation -------------------------------------------------

def _scalar(c, d) -> QuadFieldElement:
    return c if isinstance(c, QuadFieldElement) else QuadFieldElement(c, 0, d)


def normalize_projective(p: Sequence) -> Tuple[QuadFieldElement, ...]:
    """Scale so the last nonzero coordinate is 1."""
    d = next((c.d for c in p if isinstance(c, QuadFieldElement) and c.im), 0)
    p = [_scalar(c, d) for c in p]
    last = next((c for c in reversed(p) if c), None)
    if last is None:
        raise ValueError("the zero vector is not a projective point")
    return tuple(c / last for c in p)


def translate(F: MultiPoly, p: Sequence) -> MultiPoly:
    """F(v + p): moves the point p to the origin."""
    gens = MultiPoly.gens(F.vars, F.d)
    d = F.d
    for c in p:
        if isinstance(c, QuadFieldElement) and c.im:
            d = c.d
    return F.substitute([g + _scalar(c, d) for g, c in zip(gens, p)])


def projective_chart(F: MultiPoly, p: Sequence) -> Tuple[MultiPoly, Tuple]:
    """Dehomogenize a ternary form at the chart of p's last nonzero coordinate.

    Returns the affine polynomial in (x, y) and p's affine coordinates there.
    """
    p = normalize_projective(p)
    j = max(i for i in range(3) if p[i])
    rest = [i for i in range(3) if i != j]
    x, y = MultiPoly.gens(("x", "y"), F.d)
    images = [None, None, None]
    images[rest[0]], images[rest[1]] = x, y
    images[j] = MultiPoly.const(("x", "y"), 1, F.d)
    return F.substitute(images), (p[rest[0]], p[rest[1]])


def _local(F: MultiPoly, p) -> MultiPoly:
    """Local equation of F at p, translated to the origin."""
    if F.arity == 3:
        F, p = projective_chart(F, p)
    elif p is None:
        return F
    return translate(F, p)


# -- multiplicity and tangent cone -----------------------------------------

def multiplicity_at(F: MultiPoly, p=None) -> int:
    G = _local(F, p)
    if G.is_zero():
        raise ValueError("the zero polynomial has no multiplicity")
    return G.lowest_degree()


def tangent_cone(F: MultiPoly, p=None) -> Tuple[MultiPoly, Optional[str]]:
    """Lowest-degree part at p and, in multiplicity 2, 'double_line' or 'two_lines'."""
    G = _local(F, p)
    m = G.lowest_degree()
    if m <= 0:
        raise ValueError("point is off the curve")
    cone = G.homogeneous_part(m)
    shape = None
    if m == 2:
        shape = "two_lines" if quadratic_discriminant(cone) else "double_line"
    return cone, shape


def quadratic_discriminant(q: MultiPoly) -> QuadFieldElement:
    """B^2 - 4AC for q = A x^2 + B x y + C y^2."""
    A = q.terms.get((2, 0), QuadFieldElement(0, 0, q.d))
    B = q.terms.get((1, 1), QuadFieldElement(0, 0, q.d))
    C = q.terms.get((0, 2), QuadFieldElement(0, 0, q.d))
    return B * B - 4 * A * C


# -- classification ---------------------------------------------------------

def _blowup_rounds(G: MultiPoly, precision: int, cap: int):
    """Run the double-tangent recursion on a multiplicity-2 germ G.

    G is only trusted modulo terms of degree >= precision.  A linear change
    keeps that precision; the chart substitution (x, y) -> (x, x y) divided by
    x^2 can lower it by 2.  Returns (k, blowups) or None when the precision
    ran out before a decision.
    """
    k = 0
    rounds = 0
    vars = G.vars
    x, y = MultiPoly.gens(vars, G.d)
    while True:
        if precision < 3:
            return None
        q = G.homogeneous_part(2)
        if quadratic_discriminant(q):
            return k + 1, rounds + 1
        C = q.terms.get((0, 2))
        if C:
            beta = q.terms.get((1, 1), QuadFieldElement(0, 0, G.d)) / (2 * C)
            # q = C (y + beta x)^2 becomes C y^2
            G = G.substitute([x, y - x * beta])
        else:
            G = G.substitute([y, x])
        # strict transform in the chart (x, x y); every term has degree >= 2
        G = MultiPoly(vars, {(i + j - 2, j): c for (i, j), c in G.terms.items()}, G.d)
        precision -= 2
        G = G.truncate(precision)
        rounds += 1
        k += 2
        if rounds > cap:
            raise ClassificationError(f"blow-up recursion exceeded its cap of {cap} rounds")
        m = G.lowest_degree()
        if m < 0 or m >= precision:
            return None
        if m == 1:
            return k, rounds
        if m != 2:
            raise ClassificationError(f"strict transform has multiplicity {m} at the chart origin")


def classify_singularity(F: MultiPoly, p=None) -> SingularityReport:
    """A_k type of the affine curve F = 0 at p (default: the origin).

    Ternary forms are accepted too; p is then a projective point.
    """
    if F.is_zero():
        raise ValueError("the zero polynomial is not a curve")
    G = _local(F, p)
    m = G.lowest_degree()
    if m > 0 and m != 1:
        R = repeated_part(F)
        if not R.is_constant():
            if F.arity == 3:
                Rl = _local(R, p)
            else:
                Rl = translate(R, p) if p is not None else R
            if not Rl.constant_term():
                return SingularityReport("non_reduced")
    if m == 0:
        return SingularityReport("off_curve")
    if m == 1:
        return SingularityReport("smooth", k=0)
    if m >= 3:
        return SingularityReport("mult_ge_3", multiplicity=m)
    deg = F.total_degree()
    cap = (deg - 1) * (deg - 2) + 2
    precision = 12
    while True:
        got = _blowup_rounds(G.truncate(precision), precision, cap)
        if got is not None:
            k, rounds = got
            return SingularityReport("A", k=k, blowups=rounds)
        if precision > 2 * cap + 6:
            raise ClassificationError("precision bound exceeded")
        precision *= 2


# -- intersection multiplicity ----------------------------------------------

def _restrict_y0(F: MultiPoly) -> dict:
    return {e[0]: c for e, c in F.terms.items() if e[1] == 0}


def _fulton(F: MultiPoly, G: MultiPoly) -> Union[int, float]:
    total = 0
    x, y = MultiPoly.gens(F.vars, F.d or G.d)
    while True:
        if F.constant_term() or G.constant_term():
            return total
        f0, g0 = _restrict_y0(F), _restrict_y0(G)
        if not f0 and not g0:
            return INFINITE
        if not f0 or not g0:
            if not g0:
                F, G = G, F
                f0, g0 = g0, f0
            # F = y H, and I(y, G) is the order of G(x, 0) at 0
            total += min(g0)
            F = MultiPoly(F.vars, {(i, j - 1): c for (i, j), c in F.terms.items()}, F.d)
            continue
        r, s = max(f0), max(g0)
        if r > s:
            F, G = G, F
            f0, g0 = g0, f0
            r, s = s, r
        shift = [0, 0]
        shift[0] = s - r
        G = G - F.scale_monomial(tuple(shift), g0[s] / f0[r])


def intersection_multiplicity(F: MultiPoly, G: MultiPoly, p=None) -> Union[int, float]:
    """Local intersection number of two affine curves at p (math.inf on a common component)."""
    Fl = translate(F, p) if p is not None else F
    Gl = translate(G, p) if p is not None else G
    if Fl.constant_term() or Gl.constant_term():
        return 0
    common = gcd(Fl, Gl)
    if not common.is_constant() and not common.constant_term():
        return INFINITE
    return _fulton(Fl, Gl)


# -- projective coordinate changes -------------------------------------------

def _det3(M) -> QuadFieldElement:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def inverse3(M):
    det = _det3(M)
    if not det:
        raise ValueError("singular coordinate change")
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    return [[cof[j][i] / det for j in range(3)] for i in range(3)]


def projective_change(F: MultiPoly, M) -> MultiPoly:
    """F(M v): a point v of the new curve corresponds to the point M v of the old one."""
    d = F.d
    for row in M:
        for c in row:
            if isinstance(c, QuadFieldElement) and c.im:
                d = c.d
    M = [[_scalar(c, d) for c in row] for row in M]
    if not _det3(M):
        raise ValueError("singular coordinate change")
    gens = MultiPoly.gens(F.vars, d)
    images = [sum((g * c for g, c in zip(gens, row) if c), MultiPoly.zero(F.vars, d)) for row in M]
    return F.substitute(images)


def apply_matrix(M, p: Sequence) -> Tuple[QuadFieldElement, ...]:
    return normalize_projective([sum((c * v for c, v in zip(row, p)), 0) for row in M])


# -- irreducibility certificate --------------------------------------------------

def certify_irreducible_via_bound(F: MultiPoly, b: int, k: int) -> bool:
    """True when an A_k point on a (3, b) curve is too deep for a reducible curve.

    With b = 3m - r, a reducible curve of that bidegree carries at most
    A_{4m-1-r}; False means there is no certificate, not that F is reducible.
    """
    m = -(-b // 3)
    r = 3 * m - b
    if m < 2:
        raise ValueError(f"the reducible bound needs m >= 2, got b={b}")
    if not has_bidegree(F, 3, b):
        raise ValueError(f"curve is not of bidegree (3, {b})")
    return k > 4 * m - 1 - r
