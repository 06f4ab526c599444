"""Sparse multivariate polynomials over Q(sqrt(d)).

A polynomial is a map from exponent tuples to nonzero field elements, tagged
with its variable names and field descriptor.  Terms are printed in increasing
graded-lex order, so ``y^2 - x^5`` prints with the low degree term first.
"""

from fractions import Fraction
from functools import reduce
from math import lcm, gcd as igcd
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .field import FieldError, QuadFieldElement, field_sqrt, format_scalar

Exps = Tuple[int, ...]


def _grlex(e: Exps):
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("vars", "d", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Optional[Dict[Exps, object]] = None, d: int = 0):
        self.vars = tuple(vars)
        terms = terms or {}
        for c in terms.values():
            if isinstance(c, QuadFieldElement) and c.im:
                if d == 0:
                    d = c.d
                elif c.d != d:
                    raise FieldError(f"coefficient in Q(sqrt({c.d})) inside a Q(sqrt({d})) polynomial")
        self.d = d
        n = len(self.vars)
        clean = {}
        for e, c in terms.items():
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match variables {self.vars}")
            if not isinstance(c, QuadFieldElement):
                c = QuadFieldElement(c, 0, d)
            elif c.d != d:
                c = QuadFieldElement(c.re, c.im, d)
            if c:
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, vars, d=0):
        return cls(vars, {}, d)

    @classmethod
    def const(cls, vars, c, d=0):
        return cls(vars, {(0,) * len(vars): c}, d)

    @classmethod
    def var(cls, vars, name, d=0):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1}, d)

    @classmethod
    def gens(cls, vars, d=0):
        return tuple(cls.var(vars, v, d) for v in vars)

    def _new(self, terms, d=None):
        p = MultiPoly.__new__(MultiPoly)
        p.vars = self.vars
        p.d = self.d if d is None else d
        p.terms = terms
        p._hash = None
        return p

    # -- basic queries ----------------------------------------------------
    @property
    def arity(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> QuadFieldElement:
        return self.terms.get((0,) * self.arity, QuadFieldElement(0, 0, self.d))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, v) -> int:
        i = self._index(v)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def order_in(self, v) -> int:
        """Largest power of v dividing the polynomial."""
        i = self._index(v)
        if not self.terms:
            return 0
        return min(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def used_vars(self) -> List[int]:
        return [i for i in range(self.arity) if any(e[i] for e in self.terms)]

    def leading(self) -> Tuple[Exps, QuadFieldElement]:
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def _index(self, v) -> int:
        return v if isinstance(v, int) else self.vars.index(v)

    def homogeneous_part(self, deg: int) -> "MultiPoly":
        return self._new({e: c for e, c in self.terms.items() if sum(e) == deg})

    def lowest_degree(self) -> int:
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def truncate(self, deg: int) -> "MultiPoly":
        """Drop all terms of total degree >= deg."""
        return self._new({e: c for e, c in self.terms.items() if sum(e) < deg})

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other) -> Optional["MultiPoly"]:
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction, QuadFieldElement)):
            d = other.d if isinstance(other, QuadFieldElement) and other.im else self.d
            return MultiPoly.const(self.vars, other, d)
        return None

    def _field(self, other: "MultiPoly") -> int:
        if self.d == other.d:
            return self.d
        if self.d == 0 and all(not c.im for c in self.terms.values()):
            return other.d
        if other.d == 0:
            return self.d
        raise FieldError(f"field mismatch: Q(sqrt({self.d})) vs Q(sqrt({other.d}))")

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return self._retag(out, d)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadFieldElement)):
            if not other:
                return self._new({})
            d = self.d
            if isinstance(other, QuadFieldElement) and other.im:
                d = self._field(MultiPoly.const(self.vars, other, other.d))
            return self._retag({e: c * other for e, c in self.terms.items()}, d)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        out: Dict[Exps, QuadFieldElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return self._retag({e: c for e, c in out.items() if c}, d)

    __rmul__ = __mul__

    def _retag(self, terms, d):
        if d != self.d:
            terms = {e: QuadFieldElement(c.re, c.im, d) for e, c in terms.items()}
        return self._new(terms, d)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MultiPoly.const(self.vars, 1, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            if not c.is_constant():
                raise TypeError("use exact_div for polynomial division")
            c = c.constant_term()
        if isinstance(c, int):
            c = Fraction(c)
        if isinstance(c, Fraction):
            c = QuadFieldElement(c, 0, self.d)
        return self * c.inverse()

    def scale_monomial(self, exps: Exps, c=1) -> "MultiPoly":
        c = c if isinstance(c, QuadFieldElement) else QuadFieldElement(c, 0, self.d)
        return self._new({tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadFieldElement)):
            other = MultiPoly.const(self.vars, other, self.d)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and evaluation ------------------------------------------
    def derivative(self, v) -> "MultiPoly":
        i = self._index(v)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return self._new(out)

    def evaluate(self, point: Sequence) -> QuadFieldElement:
        d = self.d
        for p in point:
            if isinstance(p, QuadFieldElement) and p.im:
                d = p.d
        total = QuadFieldElement(0, 0, d)
        powers = [dict() for _ in point]
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    pw = powers[i].get(k)
                    if pw is None:
                        pw = QuadFieldElement(point[i], 0, d) ** k if not isinstance(point[i], QuadFieldElement) else point[i] ** k
                        powers[i][k] = pw
                    t = t * pw
            total = total + t
        return total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose with images, one polynomial per variable (all in a common ring)."""
        if len(images) != self.arity:
            raise ValueError(f"need {self.arity} images, got {len(images)}")
        images = list(images)
        target = next((im for im in images if isinstance(im, MultiPoly)), None)
        if target is None:
            raise ValueError("images must include at least one polynomial")
        for k, im in enumerate(images):
            if not isinstance(im, MultiPoly):
                images[k] = MultiPoly.const(target.vars, im, target.d)
            elif im.vars != target.vars:
                raise ValueError("images must share their variables")
        d = self.d
        for im in images:
            if im.d != d:
                d = im.d if d == 0 else d
        cache: List[Dict[int, MultiPoly]] = [dict() for _ in images]

        def power(i, k):
            got = cache[i].get(k)
            if got is None:
                got = images[i] ** k
                cache[i][k] = got
            return got

        result = MultiPoly.zero(target.vars, d)
        acc: Dict[Exps, QuadFieldElement] = {}
        for e, c in self.terms.items():
            t = MultiPoly.const(target.vars, c, c.d)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            for f, v in t.terms.items():
                s = acc.get(f)
                acc[f] = v if s is None else s + v
        result = MultiPoly(target.vars, {f: v for f, v in acc.items() if v}, d)
        return result

    def with_vars(self, vars: Sequence[str]) -> "MultiPoly":
        """Rename variables, keeping exponent positions."""
        if len(vars) != self.arity:
            raise ValueError("arity change is not a renaming")
        p = self._new(self.terms)
        p.vars = tuple(vars)
        return p

    def embed(self, vars: Sequence[str]) -> "MultiPoly":
        """Move into a ring whose variables contain ours (matched by name)."""
        vars = tuple(vars)
        pos = [vars.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            f = [0] * len(vars)
            for i, k in zip(pos, e):
                f[i] = k
            out[tuple(f)] = c
        return MultiPoly(vars, out, self.d)

    def coefficients_in(self, v) -> Dict[int, "MultiPoly"]:
        """Map k -> coefficient of v^k (still in the same ring, free of v)."""
        i = self._index(v)
        out: Dict[int, Dict[Exps, QuadFieldElement]] = {}
        for e, c in self.terms.items():
            f = list(e)
            k = f[i]
            f[i] = 0
            out.setdefault(k, {})[tuple(f)] = c
        return {k: self._new(t) for k, t in out.items()}

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        _, c = self.leading()
        return self * c.inverse()

    def is_rational(self) -> bool:
        return all(not c.im for c in self.terms.values())

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            neg = (not c.im and c.re < 0) or (not c.re and c.im < 0)
            mag = -c if neg else c
            if mono:
                coef = "" if mag == 1 else format_scalar(mag) + "*"
                body = coef + mono
            else:
                body = format_scalar(mag)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.vars}, {str(self)!r}, d={self.d})"


# -- division ------------------------------------------------------------

def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def divide(F: MultiPoly, G: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    """Multivariate division by one divisor in graded-lex order: F = Q*G + R."""
    if G.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    eg, cg = G.leading()
    cg_inv = cg.inverse()
    q: Dict[Exps, QuadFieldElement] = {}
    r: Dict[Exps, QuadFieldElement] = {}
    p = dict(F.terms)
    gterms = list(G.terms.items())
    while p:
        ep = max(p, key=_grlex)
        cp = p[ep]
        if _divides(eg, ep):
            shift = tuple(a - b for a, b in zip(ep, eg))
            t = cp * cg_inv
            q[shift] = q[shift] + t if shift in q else t
            for e, c in gterms:
                f = tuple(a + b for a, b in zip(e, shift))
                v = p.get(f)
                v = -(c * t) if v is None else v - c * t
                if v:
                    p[f] = v
                else:
                    p.pop(f, None)
        else:
            r[ep] = cp
            del p[ep]
    d = F.d if F.d else G.d
    return MultiPoly(F.vars, q, d), MultiPoly(F.vars, r, d)


def exact_div(F: MultiPoly, G: MultiPoly) -> MultiPoly:
    q, r = divide(F, G)
    if not r.is_zero():
        raise ArithmeticError(f"{G} does not divide {F}")
    return q


# -- gcd -----------------------------------------------------------------

def _content(F: MultiPoly, i: int) -> MultiPoly:
    coeffs = sorted(F.coefficients_in(i).values(), key=lambda c: len(c.terms))
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd(g, c)
    return g.monic()


def _prem(A: MultiPoly, B: MultiPoly, i: int) -> MultiPoly:
    db = B.degree_in(i)
    lb = B.coefficients_in(i)[db]
    R = A
    while not R.is_zero() and R.degree_in(i) >= db:
        dr = R.degree_in(i)
        lr = R.coefficients_in(i)[dr]
        shift = [0] * A.arity
        shift[i] = dr - db
        if lb.is_constant():
            R = R - (lr * (lb.constant_term().inverse())) * B.scale_monomial(tuple(shift))
        else:
            R = lb * R - lr * B.scale_monomial(tuple(shift))
    return R


def _primitive(F: MultiPoly, i: int) -> MultiPoly:
    c = _content(F, i)
    if c.is_constant():
        return F.monic()
    return exact_div(F, c).monic()


def _gcd(F: MultiPoly, G: MultiPoly) -> MultiPoly:
    if F.is_zero():
        return G.monic()
    if G.is_zero():
        return F.monic()
    if F.is_constant() or G.is_constant():
        return MultiPoly.const(F.vars, 1, F.d)
    uf, ug = set(F.used_vars()), set(G.used_vars())
    both = uf & ug
    if not both:
        # no shared variable: the gcd lives in the contents
        i = min(uf)
        return _gcd(_content(F, i), G)
    i = min(both, key=lambda k: (max(F.degree_in(k), G.degree_in(k)), k))
    cf, cg = _content(F, i), _content(G, i)
    c = _gcd(cf, cg)
    A = F if cf.is_constant() else exact_div(F, cf)
    B = G if cg.is_constant() else exact_div(G, cg)
    if A.degree_in(i) < B.degree_in(i):
        A, B = B, A
    while True:
        R = _prem(A, B, i)
        if R.is_zero():
            break
        if R.degree_in(i) == 0:
            B = MultiPoly.const(F.vars, 1, F.d)
            break
        A, B = B, _primitive(R, i)
    if B.degree_in(i) > 0:
        B = _primitive(B, i)
    return (c * B).monic()


def gcd(*polys: MultiPoly) -> MultiPoly:
    """Monic gcd of one or more polynomials (not all zero)."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise ValueError("gcd of zero polynomials is undefined")
    d = 0
    for p in nonzero:
        d = p.d or d
    nonzero = [p if p.d == d else p._retag(p.terms, d) for p in nonzero]
    return reduce(_gcd, nonzero[1:], nonzero[0].monic())


def squarefree_test(F: MultiPoly) -> bool:
    if F.is_zero():
        raise ValueError("squarefree test of the zero polynomial")
    parts = [F.derivative(i) for i in F.used_vars()]
    return gcd(F, *parts).is_constant()


def repeated_part(F: MultiPoly) -> MultiPoly:
    """gcd(F, all partials): constant iff F is squarefree; its zeros are the non-reduced locus."""
    parts = [F.derivative(i) for i in F.used_vars()]
    return gcd(F, *parts)


# -- resultants and univariate roots ----------------------------------------

def resultant(F: MultiPoly, G: MultiPoly, v) -> MultiPoly:
    """Sylvester resultant in v, by fraction-free (Bareiss) elimination."""
    i = F._index(v)
    n, m = F.degree_in(i), G.degree_in(i)
    if n < 0 or m < 0:
        return MultiPoly.zero(F.vars, F.d)
    if n == 0 and m == 0:
        return MultiPoly.const(F.vars, 1, F.d)
    cf, cg = F.coefficients_in(i), G.coefficients_in(i)
    zero = MultiPoly.zero(F.vars, F.d or G.d)
    size = n + m
    M = [[zero] * size for _ in range(size)]
    for r in range(m):
        for k in range(n + 1):
            M[r][r + n - k] = cf.get(k, zero)
    for r in range(n):
        for k in range(m + 1):
            M[m + r][r + m - k] = cg.get(k, zero)
    sign = 1
    prev = MultiPoly.const(F.vars, 1, F.d or G.d)
    for k in range(size - 1):
        if M[k][k].is_zero():
            swap = next((r for r in range(k + 1, size) if not M[r][k].is_zero()), None)
            if swap is None:
                return zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for r in range(k + 1, size):
            for c in range(k + 1, size):
                num = M[k][k] * M[r][c] - M[r][k] * M[k][c]
                M[r][c] = exact_div(num, prev) if not prev.is_constant() else num / prev.constant_term()
            M[r][k] = zero
        prev = M[k][k]
    det = M[size - 1][size - 1]
    return det if sign == 1 else -det


def _rational_roots(coeffs: Sequence[Fraction]) -> List[Fraction]:
    """Rational roots of sum coeffs[k] t^k by the rational root test."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    roots = []
    low = 0
    while coeffs[low] == 0:
        low += 1
    if low:
        roots.append(Fraction(0))
    coeffs = coeffs[low:]
    if len(coeffs) == 1:
        return roots
    den = lcm(*[Fraction(c).denominator for c in coeffs])
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = reduce(igcd, ints)
    ints = [c // g for c in ints]
    a0, an = abs(ints[0]), abs(ints[-1])
    found = set()
    for p in sympy.divisors(a0):
        for q in sympy.divisors(an):
            for s in (1, -1):
                t = Fraction(s * p, q)
                if t in found:
                    continue
                if sum(c * t ** k for k, c in enumerate(ints)) == 0:
                    found.add(t)
    return roots + sorted(found)


def _univariate_coeffs(f: MultiPoly) -> List[QuadFieldElement]:
    n = f.degree_in(0)
    out = [QuadFieldElement(0, 0, f.d)] * (n + 1)
    for e, c in f.terms.items():
        out[e[0]] = c
    return out


def _field_roots(f: MultiPoly) -> List[QuadFieldElement]:
    """Roots in the coefficient field of a univariate squarefree polynomial."""
    c = _univariate_coeffs(f)
    n = len(c) - 1
    d = f.d
    if n <= 0:
        return []
    if n == 1:
        return [-c[0] / c[1]]
    if n == 2:
        disc = c[1] * c[1] - 4 * c[2] * c[0]
        r = field_sqrt(disc)
        if r is None:
            return []
        return [(-c[1] + r) / (2 * c[2]), (-c[1] - r) / (2 * c[2])]
    if d == 0:
        return [QuadFieldElement(t, 0, 0) for t in _rational_roots([x.re for x in c])]
    # a root u + v*sqrt(d) makes both rational components of f(u + v sqrt d) vanish
    uv = ("u", "v")
    u, v = MultiPoly.gens(uv, 0)
    A = MultiPoly.zero(uv)
    B = MultiPoly.zero(uv)
    # powers of (u + v sqrt d) split as P + Q sqrt d
    P, Q = MultiPoly.const(uv, 1), MultiPoly.zero(uv)
    for k in range(n + 1):
        a, b = c[k].re, c[k].im
        A = A + P * a + Q * (b * d)
        B = B + Q * a + P * b
        P, Q = P * u + Q * v * d, P * v + Q * u
    R = resultant(A, B, 1)
    roots = []
    for u0 in _rational_roots(_univariate_coeffs_rational(R, 0)):
        Au = A.substitute([MultiPoly.const(uv, u0), v])
        Bu = B.substitute([MultiPoly.const(uv, u0), v])
        H = gcd(Au, Bu) if not (Au.is_zero() and Bu.is_zero()) else None
        if H is None or H.is_constant():
            continue
        for v0 in _rational_roots(_univariate_coeffs_rational(H, 1)):
            t = QuadFieldElement(u0, v0, d)
            if f.evaluate([t]) == 0 and t not in roots:
                roots.append(t)
    return roots


def _univariate_coeffs_rational(f: MultiPoly, i: int) -> List[Fraction]:
    n = f.degree_in(i)
    out = [Fraction(0)] * (n + 1)
    for e, c in f.terms.items():
        out[e[i]] = c.re
    return out


def squarefree_decomposition(f: MultiPoly) -> List[Tuple[MultiPoly, int]]:
    """Yun's algorithm for a univariate polynomial: f = lc * prod g_k^k."""
    if f.degree_in(0) <= 0:
        return []
    df = f.derivative(0)
    a = gcd(f, df)
    b = exact_div(f, a)
    cpart = exact_div(df, a)
    dpart = cpart - b.derivative(0)
    out = []
    k = 1
    while b.degree_in(0) > 0:
        g = gcd(b, dpart) if not dpart.is_zero() else b.monic()
        if g.degree_in(0) > 0:
            out.append((g, k))
        b = exact_div(b, g)
        cpart = exact_div(dpart, g)
        dpart = cpart - b.derivative(0)
        k += 1
    return out


def binary_form_roots(B: MultiPoly):
    """Linear factors over the field of a binary form.

    Returns (roots, residual) where roots is a list of ((r0, r1), multiplicity)
    with [r0:r1] normalized so the last nonzero entry is 1, and
    prod (r1*v0 - r0*v1)^mult * residual == B exactly.
    """
    if B.arity != 2 or B.is_zero() or not B.is_homogeneous():
        raise ValueError("binary_form_roots needs a nonzero binary form")
    d = B.d
    one = QuadFieldElement(1, 0, d)
    zero = QuadFieldElement(0, 0, d)
    roots = []
    v0, v1 = MultiPoly.gens(B.vars, d)
    e = B.order_in(1)
    if e:
        roots.append(((one, zero), e))
    rest = exact_div(B, v1 ** e) if e else B
    t = ("t",)
    f = MultiPoly(t, {(k[0],): c for k, c in rest.terms.items()}, d)
    for g, mult in squarefree_decomposition(f):
        for r in _field_roots(g):
            roots.append(((r, one), mult))
    residual = B
    for (r0, r1), mult in roots:
        residual = exact_div(residual, (v0 * r1 - v1 * r0) ** mult)
    return roots, residual
