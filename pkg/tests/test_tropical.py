import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logfan.conecomplex import INF, ExtendedComplex
from logfan.errors import ValidationError, ZeroPolynomial
from logfan.io import parse_model_corpus
from logfan.katofan import ClassicalFan, kato_fan_from_classical
from logfan.selftest import load_corpus
from logfan.tropical import (
    CLOSED,
    MONOMIAL,
    LogPolynomial,
    ModelPoint,
    parse_polynomial,
    retraction_p,
    section_J,
    strata_cone_correspondence,
    trop,
)

LINE = ClassicalFan(1, [(1,)], [[0]])
A2 = ClassicalFan(2, [(1, 0), (0, 1)], [[0, 1]])
P2 = ClassicalFan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])

GRID = (0, Fraction(1, 2), 1, 3, INF)


def _line():
    F = kato_fan_from_classical(LINE)
    ray = next(p for p in F.points if F.cones[p].dim == 1)
    return F, ExtendedComplex(F), ray


def test_affine_line_trop_examples():
    F, C, ray = _line()
    torus = trop(ModelPoint(CLOSED, cone=0), C)
    assert C.values(torus, ray) == [0]
    origin = trop(ModelPoint(CLOSED, cone=ray), C)
    assert C.values(origin, ray) == [INF]
    u = C.from_values(ray, [3])
    assert trop(ModelPoint(MONOMIAL, point=u), C) == u


def test_section_j_examples():
    F, C, ray = _line()
    u = C.from_values(ray, [3])
    assert section_J(u, parse_polynomial("1+x", 1), C).neglog == 0
    assert section_J(u, parse_polynomial("1+x", 1), C).value == 1.0
    t = section_J(u, parse_polynomial("x", 1), C)
    assert t.neglog == 3
    assert t.value == pytest.approx(0.049787068, rel=1e-8)
    F2 = kato_fan_from_classical(A2)
    C2 = ExtendedComplex(F2)
    top = max(F2.points, key=lambda p: F2.cones[p].dim)
    hb = F2.cones[top].monoid.local_hilbert_basis
    e1 = F2.cones[top].embedding.T @ (1, 0)
    w = C2.from_values(top, [1 if h == e1 else 2 for h in hb])
    assert section_J(w, parse_polynomial("x*y^2", 2), C2).neglog == 5
    assert section_J(w, parse_polynomial("x*y^2", 2), C2).value == pytest.approx(math.exp(-5), rel=1e-12)


def test_section_j_zero_polynomial():
    F, C, ray = _line()
    with pytest.raises(ZeroPolynomial):
        section_J(C.from_values(ray, [1]), LogPolynomial(), C)


def test_retraction_examples():
    F, C, ray = _line()
    assert C.values(retraction_p(ModelPoint(CLOSED, cone=0), C).point, ray) == [0]
    assert C.values(retraction_p(ModelPoint(CLOSED, cone=ray), C).point, ray) == [INF]
    u = C.from_values(ray, [Fraction(7, 3)])
    assert retraction_p(ModelPoint(MONOMIAL, point=u), C).point == u


def test_model_point_validation():
    with pytest.raises(ValidationError):
        ModelPoint(MONOMIAL)
    with pytest.raises(ValidationError):
        ModelPoint(CLOSED)
    with pytest.raises(ValidationError):
        ModelPoint("generic", cone=0)


def test_parser():
    assert parse_polynomial("1+x*y^2", 2).terms == {(0, 0): 1, (1, 2): 1}
    assert parse_polynomial("x1^-1*x2", 2).terms == {(-1, 1): 1}
    assert parse_polynomial("y*x*x", 2).terms == {(2, 1): 1}
    assert parse_polynomial("2*x + 3*x", 2).terms == {(1, 0): 5}
    assert parse_polynomial("x3", 3).terms == {(0, 0, 1): 1}
    for bad in ("", "q", "x^", "x3", "1++x"):
        with pytest.raises(ValidationError):
            parse_polynomial(bad, 2)


def test_polynomial_arithmetic_and_str():
    f = parse_polynomial("1+x", 1)
    assert (f * f).terms == {(0,): 1, (1,): 2, (2,): 1}
    assert (f + LogPolynomial.monomial((0,), -1)).terms == {(1,): 1}
    assert str(parse_polynomial("1+x*y^2", 2)) == "1 + x*y^2"
    assert parse_polynomial(str(f * f), 1) == f * f


def _trop_grid_mismatches(fan):
    F = kato_fan_from_classical(fan)
    C = ExtendedComplex(F)
    bad = 0
    for q in F.maximal_points:
        for vals in itertools.product(GRID, repeat=len(F.cones[q].monoid.local_hilbert_basis)):
            u = C.from_values(q, list(vals))
            if trop(ModelPoint(MONOMIAL, point=u), C) != u:
                bad += 1
    return bad


@pytest.mark.parametrize("fan", [P2, A2, LINE])
def test_trop_after_section_is_identity(fan):
    assert _trop_grid_mismatches(fan) == 0


def test_retraction_idempotent_on_corpus():
    _, C, pts = parse_model_corpus(load_corpus("model_points.json"))
    assert len(pts) >= 7
    for x in pts:
        once = retraction_p(x, C)
        assert retraction_p(once, C) == once
        if x.kind == MONOMIAL:
            assert once.point == x.point


def test_restriction_compatibility():
    F = kato_fan_from_classical(P2)
    C = ExtendedComplex(F)
    for q in F.maximal_points:
        for tau in F.points:
            if not F.leq(tau, q):
                continue
            dual = F.cones[q].monoid.hilbert_basis
            f = LogPolynomial({tuple(h): 1 for h in dual})
            for vals in itertools.product((0, 1, INF), repeat=len(dual)):
                u = C.from_values(q, list(vals))
                if not F.leq(u.cone, tau):
                    continue
                assert section_J(u, f, C, tau).neglog == section_J(u, f, C, q).neglog


def _ambient_dual(F, q):
    return [tuple(h) for h in F.cones[q].monoid.hilbert_basis]


def _draw_setting(data):
    F = kato_fan_from_classical(data.draw(st.sampled_from([P2, A2])))
    C = ExtendedComplex(F)
    q = data.draw(st.sampled_from(F.maximal_points))
    n = len(F.cones[q].monoid.local_hilbert_basis)
    value = st.one_of(st.just(INF), st.fractions(0, 5, max_denominator=5))
    u = C.from_values(q, data.draw(st.lists(value, min_size=n, max_size=n)))
    return C, q, u, _ambient_dual(F, q)


def _draw_character(data, hb):
    cs = data.draw(st.lists(st.integers(0, 3), min_size=len(hb), max_size=len(hb)))
    return tuple(sum(c * h[k] for c, h in zip(cs, hb)) for k in range(2))


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_monomial_multiplicativity(data):
    C, q, u, hb = _draw_setting(data)
    s, t = _draw_character(data, hb), _draw_character(data, hb)
    js = section_J(u, LogPolynomial.monomial(s), C, q)
    jt = section_J(u, LogPolynomial.monomial(t), C, q)
    jst = section_J(u, LogPolynomial.monomial(s) * LogPolynomial.monomial(t), C, q)
    assert jst.neglog == js.neglog + jt.neglog
    assert jst.value == pytest.approx(js.value * jt.value, rel=1e-12, abs=0)


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_non_archimedean(data):
    C, q, u, hb = _draw_setting(data)

    def poly():
        k = data.draw(st.integers(1, 3))
        return LogPolynomial({_draw_character(data, hb): data.draw(st.sampled_from([-2, -1, 1, 2])) for _ in range(k)})

    f, g = poly(), poly()
    if (f + g).is_zero():
        return
    a, b, c = (section_J(u, h, C, q) for h in (f, g, f + g))
    assert c.neglog >= min(a.neglog, b.neglog)
    assert c.value <= max(a.value, b.value) * (1 + 1e-12)


def test_strata_correspondence_p2():
    out = strata_cone_correspondence(P2)
    assert len(out) == 7
    assert sorted(s.orbit_dim for s in out) == [0, 0, 0, 1, 1, 1, 2]
    for s in out:
        assert s.orbit_dim == 2 - len(s.rays)


def test_strata_correspondence_small():
    assert [s.orbit_dim for s in strata_cone_correspondence(ClassicalFan(2, [], []))] == [2]
    assert sorted(s.orbit_dim for s in strata_cone_correspondence(A2)) == [0, 1, 1, 2]
