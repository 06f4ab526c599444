"""Elementary links F_m --> F_{m+-1} and chains of them on 3-section configurations.

A link blows up a center and contracts the strict transform of its fiber.
With the center moved to a standard position it is a monomial substitution:

    down (center [0:1;1:0], off S_-):  G'(X) = G(X0*Y1, X1, Y0, Y1) / Y1^e
    up   (center [1:0;1:0], on S_-):   G'(X) = G(X0, X1*Y1, Y0, Y1) / Y1^e

The contracted fiber becomes the inverse point [1:0;1:0] resp. [0:1;1:0].
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from .hirzebruch import (VARS, FmAutomorphism, FmCurve, FmPoint, center_normalization,
                         classify_at_fm_point, fiber_intersection, intersection_at_fm_point,
                         multiplicity_at_fm_point, restrict_to_fiber, same_fiber)
from .poly import MultiPoly, binary_form_roots, exact_div


class ConsistencyError(AssertionError):
    """A recomputed invariant disagrees with its predicted value."""


def _strip_y1(G: MultiPoly) -> Tuple[MultiPoly, int]:
    e = G.order_in(3)
    if not e:
        return G, 0
    return MultiPoly(VARS, {(i, j, k, l - e): c for (i, j, k, l), c in G.terms.items()}, G.d), e


def elementary_link(C: FmCurve, direction: str) -> Tuple[FmCurve, int]:
    """Pushforward through the standard link; returns the curve and the stripped y1-power."""
    d = C.d
    X0, X1, Y0, Y1 = MultiPoly.gens(VARS, d)
    if direction == "down":
        if C.m == 0:
            raise ValueError("there is no down-link from F_0")
        G = C.G.substitute([X0 * Y1, X1, Y0, Y1])
        target = C.m - 1
    elif direction == "up":
        G = C.G.substitute([X0, X1 * Y1, Y0, Y1])
        target = C.m + 1
    else:
        raise ValueError(f"unknown link direction {direction!r}")
    G, e = _strip_y1(G)
    return FmCurve(target, G).monic(), e


@dataclass(frozen=True)
class LinkDescriptor:
    source_m: int
    target_m: int
    center: FmPoint
    inverse_point: FmPoint
    direction: str
    pre: FmAutomorphism
    post: FmAutomorphism

    def apply(self, C: FmCurve) -> FmCurve:
        if C.m != self.source_m:
            raise ValueError(f"link from F_{self.source_m} applied to a curve on F_{C.m}")
        D, _ = elementary_link(self.pre.apply_curve(C), self.direction)
        return self.post.apply_curve(D)

    def map_fiber(self, direction):
        """Image of a fiber other than the center's, given by its (y0, y1) direction."""
        pt = [0, 0, direction[0], direction[1]]
        y = [self.pre.forward[k].evaluate(pt) for k in (2, 3)]
        pt = [0, 0, y[0], y[1]]
        y = [self.post.forward[k].evaluate(pt) for k in (2, 3)]
        last = y[1] if y[1] else y[0]
        return (y[0] / last, y[1] / last)

    def inverse(self) -> "LinkDescriptor":
        return LinkDescriptor(
            source_m=self.target_m,
            target_m=self.source_m,
            center=self.inverse_point,
            inverse_point=self.center,
            direction="down" if self.direction == "up" else "up",
            pre=self.post.inverse(),
            post=self.pre.inverse(),
        )

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "source_m": self.source_m,
            "target_m": self.target_m,
            "center": str(self.center),
            "inverse_point": str(self.inverse_point),
        }


def make_link(m: int, center: FmPoint) -> LinkDescriptor:
    """The canonical link centered at a point of F_m."""
    if center.m != m:
        raise ValueError("center does not lie on F_m")
    d = next((c.d for c in center.coords if c.im), 0)
    pre = center_normalization(center)
    if center.on_s_minus():
        direction = "up"
    elif m == 0:
        # F_0 has no down-link: x0 <-> x1 puts the center on S_- first
        pre = pre.then(FmAutomorphism.swap(d))
        direction = "up"
    else:
        direction = "down"
    target = m + 1 if direction == "up" else m - 1
    inverse_point = FmPoint(0, 1, 1, 0, target) if direction == "up" else FmPoint(1, 0, 1, 0, target)
    return LinkDescriptor(m, target, center, inverse_point, direction, pre,
                          FmAutomorphism.identity(target, d))


def apply_link(L: LinkDescriptor, C: FmCurve) -> FmCurve:
    return L.apply(C)


# -- configurations ----------------------------------------------------------------

@dataclass(frozen=True)
class Info:
    """[C^2, S^2, type, I_p(C, S); m]; S-entries are None without a section."""

    C2: int
    S2: Optional[int]
    k: int
    I: Optional[int]
    m: int

    def as_list(self) -> list:
        return [self.C2, self.S2, self.k, self.I, self.m]

    def __str__(self):
        show = ["." if v is None else str(v) for v in (self.C2, self.S2, self.k, self.I)]
        return "[{};{}]".format(",".join(show), self.m)


def _remove_point(B: MultiPoly, p: FmPoint, times: int) -> MultiPoly:
    x0, x1 = MultiPoly.gens(B.vars, B.d)
    form = x0 * p.x1 - x1 * p.x0
    return exact_div(B, form ** times)


def configuration_type(C: FmCurve, p: FmPoint, s: Optional[FmPoint] = None) -> Tuple[int, Optional[FmPoint]]:
    """Type of the 3-section C at its transversal point p, and the companion point s.

    -1 when the fiber of p meets C in three distinct points, 0 when C is smooth
    and tangent to the fiber at s, and k when s is an A_k point.
    """
    if C.a != 3:
        raise ValueError("configuration types are defined for 3-sections")
    B = restrict_to_fiber(C, p.fiber)
    if B.is_zero():
        raise ValueError("the fiber through p is a component of C")
    if fiber_intersection(C, p) != 1:
        raise ValueError(f"{p} is not a transversal point of C")
    rest = _remove_point(B, p, 1)
    roots, residual = binary_form_roots(rest)
    double = [r for r, k in roots if k == 2]
    if not double:
        if s is not None:
            raise ConsistencyError("a companion point was given but the fiber has three points")
        return -1, None
    r0, r1 = double[0]
    found = FmPoint(r0, r1, p.y0, p.y1, C.m)
    if s is not None and s != found:
        raise ConsistencyError(f"companion point {s} differs from the fiber's double point {found}")
    report = classify_at_fm_point(C, found)
    if report.kind == "smooth":
        return 0, found
    if report.kind == "A":
        return report.k, found
    raise ValueError(f"companion point {found} is {report.kind}")


@dataclass(frozen=True)
class Configuration:
    m: int
    C: FmCurve
    p: FmPoint
    S: Optional[FmCurve] = None
    s: Optional[FmPoint] = None
    info: Optional[Info] = None

    def recompute_info(self) -> Info:
        k, _ = configuration_type(self.C, self.p, self.s)
        S2 = I = None
        if self.S is not None:
            S2 = self.S.self_intersection
            I = intersection_at_fm_point(self.C, self.S, self.p)
        return Info(self.C.self_intersection, S2, k, I, self.m)

    def with_info(self) -> "Configuration":
        return replace(self, info=self.recompute_info())


def make_configuration(C: FmCurve, p: FmPoint, S: Optional[FmCurve] = None) -> Configuration:
    """Configuration with the companion point located on the fiber of p."""
    if C.has_fiber_component():
        raise ValueError("C contains a fiber")
    _, s = configuration_type(C, p)
    return Configuration(C.m, C, p, S, s).with_info()


# -- chains -----------------------------------------------------------------------

@dataclass(frozen=True)
class ChainStep:
    link: LinkDescriptor
    config: Configuration
    predicted: Info
    checks: Tuple[Tuple[str, bool], ...]

    def to_dict(self) -> dict:
        return {
            "link": self.link.to_dict(),
            "predicted": self.predicted.as_list(),
            "actual": self.config.info.as_list(),
            "checks": {name: ok for name, ok in self.checks},
        }


@dataclass(frozen=True)
class ChainTrace:
    kind: str
    initial: Configuration
    steps: Tuple[ChainStep, ...] = ()
    landing: Tuple[Tuple[str, bool], ...] = ()

    @property
    def final(self) -> Configuration:
        return self.steps[-1].config if self.steps else self.initial

    @property
    def links(self) -> List[LinkDescriptor]:
        return [st.link for st in self.steps]

    def ok(self) -> bool:
        return all(ok for st in self.steps for _, ok in st.checks) and all(ok for _, ok in self.landing)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "initial": self.initial.info.as_list(),
            "steps": [st.to_dict() for st in self.steps],
            "landing": {name: ok for name, ok in self.landing},
            "final": self.final.info.as_list(),
        }


def _require(checks, strict: bool):
    bad = [name for name, ok in checks if not ok]
    if bad and strict:
        raise ConsistencyError("failed: " + ", ".join(bad))


def transversal_link_step(cfg: Configuration, link: Optional[LinkDescriptor] = None,
                          strict: bool = True) -> ChainStep:
    """One link centered at the transversal point p."""
    info = cfg.info or cfg.recompute_info()
    L = link or make_link(cfg.m, cfg.p)
    if L.center != cfg.p:
        raise ValueError("a transversal link must be centered at p")
    a = cfg.C.a
    C2 = L.apply(cfg.C)
    S2 = L.apply(cfg.S) if cfg.S is not None else None
    s2 = L.inverse_point
    B = restrict_to_fiber(C2, s2.fiber)
    rest = _remove_point(B, s2, a - 1)
    roots, _ = binary_form_roots(rest)
    if len(roots) != 1 or roots[0][1] != 1:
        raise ConsistencyError("the new fiber does not split as (a-1) s' + p'")
    (r0, r1), _ = roots[0]
    p2 = FmPoint(r0, r1, s2.y0, s2.y1, C2.m)
    new = Configuration(C2.m, C2, p2, S2, s2 if info.k + 2 >= 0 else None)
    new = new.with_info()
    predicted = Info(info.C2 + a * a - 2 * a,
                     None if info.S2 is None else info.S2 - 1,
                     info.k + 2,
                     None if info.I is None else info.I - 1,
                     L.target_m)
    checks = [
        ("C'^2 = C^2 + a^2 - 2a", new.info.C2 == predicted.C2),
        ("m_s'(C') = a - 1", multiplicity_at_fm_point(C2, s2) == a - 1),
        ("p' cofibered with s'", same_fiber(p2, s2) and p2 != s2),
        ("type + 2", new.info.k == predicted.k),
        ("a preserved", C2.a == a),
        ("m changes by 1", abs(L.target_m - cfg.m) == 1),
    ]
    if predicted.S2 is not None:
        checks.append(("S'^2 = S^2 - 1", new.info.S2 == predicted.S2))
    if info.I is not None and info.I >= 1:
        checks.append(("I - 1", new.info.I == predicted.I))
    else:
        predicted = replace(predicted, I=new.info.I)
    _require(checks, strict)
    return ChainStep(L, new, predicted, tuple(checks))


def singular_link_step(cfg: Configuration, link: Optional[LinkDescriptor] = None,
                       strict: bool = True) -> ChainStep:
    """One link centered at the companion singular point s (type >= 1)."""
    info = cfg.info or cfg.recompute_info()
    if info.k < 1 or cfg.s is None:
        raise ValueError("a singular link needs a configuration of type >= 1")
    L = link or make_link(cfg.m, cfg.s)
    if L.center != cfg.s:
        raise ValueError("a singular link must be centered at s")
    a = cfg.C.a
    C2 = L.apply(cfg.C)
    S2 = L.apply(cfg.S) if cfg.S is not None else None
    p2 = L.inverse_point
    new = Configuration(C2.m, C2, p2, S2, None)
    _, s2 = configuration_type(C2, p2)
    new = replace(new, s=s2).with_info()
    predicted = Info(info.C2 - 3,
                     None if info.S2 is None else info.S2 + 1,
                     info.k - 2,
                     None if info.I is None else info.I + 1,
                     L.target_m)
    checks = [
        ("C'^2 = C^2 - 3", new.info.C2 == predicted.C2),
        ("type - 2", new.info.k == predicted.k),
        ("a preserved", C2.a == a),
        ("m changes by 1", abs(L.target_m - cfg.m) == 1),
    ]
    if predicted.S2 is not None:
        checks.append(("S'^2 = S^2 + 1", new.info.S2 == predicted.S2))
        checks.append(("I + 1", new.info.I == predicted.I))
    _require(checks, strict)
    return ChainStep(L, new, predicted, tuple(checks))


def _is_s_minus(S: FmCurve) -> bool:
    return S.a == 1 and S.b == 0


def transversal_chain(cfg: Configuration, n: int, links: Optional[List[LinkDescriptor]] = None,
                      strict: bool = True) -> ChainTrace:
    """n links centered at the successive transversal points."""
    cfg = cfg if cfg.info is not None else cfg.with_info()
    start = cfg.info
    if start.I is not None and n > start.I and cfg.S is not None:
        raise ValueError(f"n={n} exceeds I_p(S, C)={start.I}")
    steps = []
    cur = cfg
    for j in range(n):
        st = transversal_link_step(cur, links[j] if links else None, strict)
        steps.append(st)
        cur = st.config
    a = cfg.C.a
    end = cur.info
    landing = [
        ("final C^2 prediction", end.C2 == start.C2 + n * (a * a - 2 * a)),
        ("final type prediction", end.k == start.k + 2 * n),
    ]
    if start.S2 is not None:
        landing.append(("final S^2 prediction", end.S2 == start.S2 - n))
        landing.append(("final I prediction", end.I == start.I - n))
        if start.S2 <= n and start.C2 == 2 * a * n - a * a * start.S2:
            landing.append(("m' = n - S^2", end.m == n - start.S2))
            landing.append(("S' = S_-", _is_s_minus(cur.S)))
            landing.append(("C' ~ aS_+", cur.C.b == a * cur.C.m))
    _require(landing, strict)
    return ChainTrace("transversal", cfg, tuple(steps), tuple(landing))


def singular_chain(cfg: Configuration, n: int, links: Optional[List[LinkDescriptor]] = None,
                   strict: bool = True) -> ChainTrace:
    """n links centered at the successive singular points."""
    cfg = cfg if cfg.info is not None else cfg.with_info()
    start = cfg.info
    if n > (start.k + 1) // 2:
        raise ValueError(f"a type {start.k} configuration allows at most {(start.k + 1) // 2} singular links")
    steps = []
    cur = cfg
    for j in range(n):
        st = singular_link_step(cur, links[j] if links else None, strict)
        steps.append(st)
        cur = st.config
    end = cur.info
    landing = [
        ("final C^2 prediction", end.C2 == start.C2 - 3 * n),
        ("final type prediction", end.k == start.k - 2 * n),
    ]
    if start.S2 is not None:
        landing.append(("final S^2 prediction", end.S2 == start.S2 + n))
        landing.append(("final I prediction", end.I == start.I + n))
        m = cfg.m
        if (cfg.C.a == 3 and cfg.C.b == 3 * m and _is_s_minus(cfg.S)
                and (n - m) % 2 == 1 and start.C2 - 3 * n <= 17):
            expect = [9 * m - 3 * n, -m + n, start.k - 2 * n, n, 1]
            landing.append(("lands on F_1 with [9m-3n,-m+n,k-2n,n;1]", end.as_list() == expect))
    _require(landing, strict)
    return ChainTrace("singular", cfg, tuple(steps), tuple(landing))


def verify_trace(trace: ChainTrace) -> dict:
    """Recompute every cached invariant; report the first mismatch, never raise."""
    nodes = [trace.initial] + [st.config for st in trace.steps]
    report = {"ok": True, "first_mismatch": None, "nodes": len(nodes)}
    for idx, cfg in enumerate(nodes):
        try:
            fresh = cfg.recompute_info()
            fresh_C2 = FmCurve(cfg.C.m, cfg.C.G).self_intersection
        except Exception as exc:  # report, never throw
            report.update(ok=False, first_mismatch={"node": idx, "field": "recompute", "error": str(exc)})
            return report
        cached = cfg.info
        fresh = replace(fresh, C2=fresh_C2)
        for name in ("C2", "S2", "k", "I", "m"):
            if getattr(cached, name) != getattr(fresh, name):
                report.update(ok=False, first_mismatch={
                    "node": idx, "field": name,
                    "cached": getattr(cached, name), "recomputed": getattr(fresh, name)})
                return report
        if idx and cfg.m != trace.steps[idx - 1].link.target_m:
            report.update(ok=False, first_mismatch={"node": idx, "field": "m", "cached": cfg.m,
                                                     "recomputed": trace.steps[idx - 1].link.target_m})
            return report
    return report


def same_configuration(c1: Configuration, c2: Configuration) -> bool:
    if c1.m != c2.m or c1.p != c2.p or c1.s != c2.s or not c1.C.same_as(c2.C):
        return False
    if (c1.S is None) != (c2.S is None):
        return False
    if c1.S is not None and not c1.S.same_as(c2.S):
        return False
    return c1.recompute_info() == c2.recompute_info()
