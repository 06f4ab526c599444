"""Acceptance criteria, one test each.

Every test prints a single "CRITERION n: PASS|FAIL (detail)" line; the lines
are repeated in the pytest terminal summary. Run this file directly to get the
lines without pytest.
"""

import math
import random
import time
from fractions import Fraction

from akcurves.catalog import (CHAIN_LENGTHS, N_SMALL, N_TABLE, bounds, knot_bound, ratio_inequality_rows,
                              identity_suite, verify_table_row, witness)
from akcurves.hirzebruch import (arithmetic_genus, divisor_to_poly, intersection_at_fm_point,
                                 multiplicity_at_fm_point, poly_to_divisor, s_plus)
from akcurves.links import (apply_link, configuration_type, make_link, same_configuration,
                            singular_chain, transversal_chain)
from akcurves.parse import parse_poly
from akcurves.plane import classify_singularity, has_bidegree, intersection_multiplicity
from akcurves.poly import MultiPoly

from oracles import random_fraction, sheared_intersection

LINES = {}


def report(n: int, ok: bool, detail: str):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    LINES[n] = line
    print(line)
    assert ok, line


def P(text):
    return parse_poly(text, 0, ("x", "y"))


def test_criterion_1_table():
    start = time.perf_counter()
    rows = [verify_table_row(b) for b in range(3, 13)]
    elapsed = time.perf_counter() - start
    ks = [r["k"] for r in rows]
    bideg = all(has_bidegree(witness(3, b).polynomial, 3, b) for b in range(3, 13))
    ok = (ks == [3, 5, 7, 8, 10, 12, 13, 15, 17, 18] and all(r["pass"] for r in rows)
          and bideg and elapsed < 300)
    report(1, ok, f"N(3,3..12) = {ks}, {elapsed:.1f}s")


def test_criterion_2_normal_forms():
    bad = []
    for k in range(1, 31):
        rep = classify_singularity(P(f"y^2 - x^{k + 1}"))
        if rep.ak != k or rep.blowups != math.ceil(k / 2):
            bad.append(k)
    report(2, not bad, "y^2 - x^(k+1) is A_k with ceil(k/2) blow-ups, k = 1..30"
           + (f"; wrong for {bad}" if bad else ""))


def test_criterion_3_feller():
    got = {b: classify_singularity(P(f"y^3 - (x^{b} - y)^2")).ak for b in range(2, 9)}
    bad = [b for b, k in got.items() if k != 3 * b - 1]
    report(3, not bad, f"y^3 - (x^b - y)^2 types {list(got.values())}")


def test_criterion_4_binomial_chain():
    entry = witness(3, 9)
    start = entry.initial
    I = intersection_at_fm_point(start.C, start.S, start.p)
    trace = transversal_chain(start, 7)
    end = trace.final
    ok = (I == 7 and len(trace.steps) == 7 and end.m == 3 and end.C.divisor_class == 3 * s_plus(3)
          and end.info.k == 13 and has_bidegree(divisor_to_poly(end.C), 3, 9)
          and has_bidegree(entry.polynomial, 3, 9) and entry.k == 13)
    report(4, ok, f"I_p(S,C) = {I}, lands on F_{end.m} with {end.info}, witness A_{entry.k}")


def _step_invariants(prev, step):
    """Recompute the per-link laws from the curves themselves."""
    cur = step.config
    a = prev.C.a
    k_prev, _ = configuration_type(prev.C, prev.p, prev.s)
    k_cur, _ = configuration_type(cur.C, cur.p, cur.s)
    ok = cur.C.self_intersection == prev.C.self_intersection + a * a - 2 * a
    ok &= multiplicity_at_fm_point(cur.C, step.link.inverse_point) == a - 1
    ok &= k_cur - k_prev == 2
    ok &= abs(cur.m - prev.m) == 1
    if prev.S is not None:
        I_prev = intersection_at_fm_point(prev.C, prev.S, prev.p)
        I_cur = intersection_at_fm_point(cur.C, cur.S, cur.p)
        if I_prev >= 1:
            ok &= I_cur - I_prev == -1
        ok &= cur.S.self_intersection == prev.S.self_intersection - 1
    return ok


def test_criterion_5_link_invariants():
    chains = links = 0
    bad = []
    for b in sorted(CHAIN_LENGTHS):
        trace = witness(3, b).trace
        chains += 1
        nodes = [trace.initial] + [st.config for st in trace.steps]
        for prev, st in zip(nodes, trace.steps):
            links += 1
            if not _step_invariants(prev, st):
                bad.append(b)
        s0, n, a = trace.initial.info, len(trace.steps), trace.initial.C.a
        if s0.S2 is not None and s0.S2 <= n and s0.C2 == 2 * a * n - a * a * s0.S2:
            if trace.final.m != n - s0.S2:
                bad.append(b)
    ok = not bad and chains >= 7 and links >= 40
    report(5, ok, f"{chains} chains, {links} links" + (f"; violations in b = {sorted(set(bad))}" if bad else ""))


def test_criterion_6_genus_and_bounds():
    genus_ok = all(arithmetic_genus(a * s_plus(m)) == Fraction(a * ((a - 1) * m - 2), 2) + 1
                   for a in range(1, 5) for m in range(0, 7))
    rows = [bounds(3, b) for b in range(3, 13)]
    irr = [r.genus_bound for r in rows]
    red = [r.reducible_bound for r in rows]
    knot = [knot_bound(b) for b in range(3, 13) if b % 3]
    ok = (genus_ok and irr == [2, 6, 8, 8, 12, 14, 14, 18, 20, 20]
          and red == [3, 5, 6, 7, 9, 10, 11, 13, 14, 15] and knot == [5, 7, 10, 12, 15, 17])
    report(6, ok, f"genus formula {'holds' if genus_ok else 'fails'}; rows {irr} / {red} / {knot}")


def _random_curve_through_origin(rng):
    terms = {}
    for _ in range(rng.randint(2, 4)):
        i, j = rng.randint(0, 4), rng.randint(0, 4)
        if i + j:
            terms[(i, j)] = random_fraction(rng) or 1
    return MultiPoly(("x", "y"), terms)


def test_criterion_7_intersection_oracle():
    rng = random.Random(7)
    pairs = [(P("y^2 - x^3"), P("y^2 - x^5")), (P("y - x^4"), P("y - x^4 - x^9")),
             (P("y^3 - x^7"), P("y^2 - x^3 + x^4"))]
    while len(pairs) < 25:
        F, G = _random_curve_through_origin(rng), _random_curve_through_origin(rng)
        if intersection_multiplicity(F, G) != math.inf:
            pairs.append((F, G))
    bad = [i for i, (F, G) in enumerate(pairs) if intersection_multiplicity(F, G) != sheared_intersection(F, G)]
    report(7, not bad, f"{len(pairs)} pairs over Q" + (f"; disagreement at {bad}" if bad else ""))


def test_criterion_8_identities():
    rows = identity_suite()
    bad = [r["name"] for r in rows if not r["equal"]]
    detail = f"{len(rows) - len(bad)}/{len(rows)} identities exact"
    if bad:
        detail += "; unequal: " + ", ".join(f"{r['name']} gives {r['lhs']}" for r in rows if not r["equal"])
    report(8, not bad, detail)


def test_criterion_9_round_trips():
    rng = random.Random(9)
    rt = 0
    for n in range(20):
        a, m = 1 + n % 3, n % 4
        terms = {(a, 0): Fraction(1)}
        for _ in range(5):
            i = rng.randint(0, a)
            terms[(i, rng.randint(0, m * (a - i)))] = random_fraction(rng) or 1
        F = MultiPoly(("x", "y"), terms)
        rt += divisor_to_poly(poly_to_divisor(F, m, a)) == F

    inv = 0
    for b in sorted(CHAIN_LENGTHS):
        for st in witness(3, b).trace.steps[:3]:
            if inv == 20:
                break
            C = st.config.C
            L = make_link(C.m, st.config.p)
            inv += apply_link(L.inverse(), apply_link(L, C)).same_as(C)

    chain_ok = []
    for b, n in ((9, 6), (12, 9)):
        end = witness(3, b).trace.final
        back = singular_chain(end, n)
        again = transversal_chain(back.final, n, links=[L.inverse() for L in reversed(back.links)])
        chain_ok.append(same_configuration(again.final, end))
    ok = rt == 20 and inv == 20 and all(chain_ok)
    report(9, ok, f"poly/divisor {rt}/20, link/inverse {inv}/20, singular-transversal (3,9),(3,12) {chain_ok}")


def test_criterion_10_ratio_inequality():
    rows = ratio_inequality_rows(100)
    table_ok = all(r["source"] in ("table", "small bidegree") for r in rows[:12])
    table_ok &= all(r["N"] == {**N_SMALL, **N_TABLE}[r["b"]] for r in rows[:12])
    worst = max(rows, key=lambda r: r["ratio"])
    ok = table_ok and all(r["ok"] for r in rows)
    report(10, ok, f"2(N+1)/(3b) < 7/6 for b = 1..100, max {worst['ratio']} at b = {worst['b']}")


if __name__ == "__main__":
    tests = [(int(name.split("_")[2]), fn) for name, fn in globals().items()
             if name.startswith("test_criterion_")]
    for _, fn in sorted(tests, key=lambda t: t[0]):
        try:
            fn()
        except AssertionError:
            pass
