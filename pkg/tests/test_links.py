import random
from dataclasses import replace

import pytest

from akcurves.catalog import BINOMIAL_CURVE, BINOMIAL_SECTION, witness
from akcurves.hirzebruch import (FmPoint, divisor_to_poly, fm_curve, intersection_at_fm_point,
                                 multiplicity_at_fm_point, restrict_to_fiber, s_minus)
from akcurves.links import (Info, apply_link, configuration_type, elementary_link,
                            make_configuration, make_link, same_configuration, singular_chain,
                            transversal_chain, verify_trace)
from akcurves.plane import classify_singularity, has_bidegree
from akcurves.poly import MultiPoly

from test_hirzebruch import nonzero, random_curve, random_fraction


def binomial_configuration():
    C = fm_curve(BINOMIAL_CURVE, 0)
    S = fm_curve(BINOMIAL_SECTION, 0)
    return make_configuration(C, FmPoint(1, 1, 1, -1, 0), S)


def test_binomial_configuration():
    cfg = binomial_configuration()
    assert intersection_at_fm_point(cfg.C, cfg.S, cfg.p) == 7
    assert cfg.info == Info(6, 4, -1, 7, 0)
    assert str(cfg.info) == "[6,4,-1,7;0]"


def test_binomial_fiber_restriction():
    # three distinct points on the fiber of p, so p is transversal
    B = restrict_to_fiber(fm_curve(BINOMIAL_CURVE, 0), (1, -1))
    x0, x1 = MultiPoly.gens(B.vars)
    assert B == (3 * x0 + x1) * (x0 + 3 * x1) * (x0 - x1) * -2


def test_seven_link_chain_lands_on_f3():
    trace = transversal_chain(binomial_configuration(), 7)
    assert trace.ok() and verify_trace(trace)["ok"]
    end = trace.final
    assert end.info.as_list() == [27, -3, 13, 0, 3]
    assert end.C.b == 3 * end.m and end.S.divisor_class == s_minus(3)
    assert has_bidegree(divisor_to_poly(end.C), 3, 9)
    assert classify_singularity(witness(3, 9).polynomial).ak == 13


def test_chain_too_long_rejected():
    with pytest.raises(ValueError):
        transversal_chain(binomial_configuration(), 8)


def test_zero_length_chain_is_identity():
    cfg = binomial_configuration()
    trace = transversal_chain(cfg, 0)
    assert trace.steps == () and trace.final is cfg and trace.ok()
    assert verify_trace(trace) == {"ok": True, "first_mismatch": None, "nodes": 1}
    assert singular_chain(transversal_chain(cfg, 3).final, 0).final.info.k == 5


def test_link_then_inverse():
    rng = random.Random(21)
    done = 0
    while done < 20:
        m = rng.randint(0, 3)
        a = rng.randint(1, 3)
        C = random_curve(rng, m, a, a * m + rng.randint(0, 2))
        if C.has_fiber_component():
            continue
        on_s_minus = rng.random() < 0.3
        p = FmPoint(1, 0 if on_s_minus else nonzero(rng), random_fraction(rng), 1, m)
        L = make_link(m, p)
        D = apply_link(L, C)
        assert D.m == L.target_m and abs(D.m - m) == 1
        assert apply_link(L.inverse(), D).same_as(C)
        assert L.inverse().inverse().center == L.center
        done += 1


def test_s_minus_under_down_link():
    for m in range(1, 5):
        L = make_link(m, FmPoint(2, 1, 3, 1, m))
        assert L.direction == "down"
        image = apply_link(L, fm_curve("x1", m))
        assert image.divisor_class == s_minus(m - 1)


def test_contracted_fiber_lands_on_inverse_point():
    rng = random.Random(4)
    for m in range(0, 4):
        C = random_curve(rng, m, 3, 3 * m + 1)
        p = FmPoint(nonzero(rng), 1, 1, 0, m)
        if C.G.evaluate(p.coords) == 0:
            continue
        L = make_link(m, p)
        # the three points of C on the fiber of p all collapse to the inverse point
        assert multiplicity_at_fm_point(apply_link(L, C), L.inverse_point) == 3


def test_elementary_link_bookkeeping():
    C = fm_curve("x0 - x1*y0", 1)
    D, e = elementary_link(C, "down")
    assert D.m == 0 and e == 0
    with pytest.raises(ValueError):
        elementary_link(fm_curve("x0 - x1", 0), "down")
    with pytest.raises(ValueError):
        elementary_link(C, "sideways")


def test_singular_then_transversal_on_binomial():
    end = transversal_chain(binomial_configuration(), 7).final
    back = singular_chain(end, 6)
    assert back.ok()
    assert back.final.info.as_list() == [9, 3, 1, 6, 1]
    links = [L.inverse() for L in reversed(back.links)]
    again = transversal_chain(back.final, 6, links=links)
    assert same_configuration(again.final, end)


def test_singular_then_transversal_on_b12():
    end = witness(3, 12).trace.final
    assert end.info.as_list() == [36, -4, 18, 0, 4]
    back = singular_chain(end, 9)
    assert back.ok() and back.final.info.as_list() == [9, 5, 0, 9, 1]
    assert dict(back.landing)["lands on F_1 with [9m-3n,-m+n,k-2n,n;1]"]
    links = [L.inverse() for L in reversed(back.links)]
    again = transversal_chain(back.final, 9, links=links)
    assert same_configuration(again.final, end)


def test_singular_chain_length_cap():
    cfg = transversal_chain(binomial_configuration(), 2).final
    assert cfg.info.k == 3
    with pytest.raises(ValueError):
        singular_chain(cfg, 3)


def test_verify_trace_detects_corruption():
    trace = transversal_chain(binomial_configuration(), 4)
    step = trace.steps[2]
    bad_cfg = replace(step.config, info=replace(step.config.info, C2=step.config.info.C2 + 1))
    steps = trace.steps[:2] + (replace(step, config=bad_cfg),) + trace.steps[3:]
    report = verify_trace(replace(trace, steps=steps))
    assert not report["ok"]
    assert report["first_mismatch"]["node"] == 3 and report["first_mismatch"]["field"] == "C2"
    # a corrupted type is found as well
    bad_cfg = replace(step.config, info=replace(step.config.info, k=0))
    steps = trace.steps[:2] + (replace(step, config=bad_cfg),) + trace.steps[3:]
    assert verify_trace(replace(trace, steps=steps))["first_mismatch"]["field"] == "k"


def test_strict_steps_raise_on_wrong_center():
    cfg = binomial_configuration()
    other = make_link(0, FmPoint(1, 2, 1, 1, 0))
    with pytest.raises(ValueError):
        transversal_chain(cfg, 1, links=[other])


def test_configuration_types():
    cfg = binomial_configuration()
    assert configuration_type(cfg.C, cfg.p)[0] == -1
    steps = transversal_chain(cfg, 3).steps
    assert [st.config.info.k for st in steps] == [1, 3, 5]
    assert all(st.config.s is not None for st in steps)
