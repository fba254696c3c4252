import json
from fractions import Fraction

import pytest

from logfan import io as fio
from logfan.conecomplex import INF, TORIC, ExtendedComplex
from logfan.errors import ValidationError
from logfan.katofan import ClassicalFan, kato_fan_from_classical
from logfan.selftest import CORPUS, load_corpus
from logfan.tropical import CLOSED, MONOMIAL, ModelPoint

P2 = ClassicalFan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])


def _same(kind, x, y):
    if kind == "model_points":
        (raw_x, cx, px), (raw_y, cy, py) = x, y
        return raw_x == raw_y and cx.fan == cy.fan and px == py
    return x == y


@pytest.mark.parametrize("name", CORPUS)
def test_parse_emit_round_trip(name):
    kind, x = fio.parse_any(load_corpus(name))
    data = fio.emit_any(kind, x)
    kind2, y = fio.parse_any(json.loads(fio.dumps(data)))
    assert kind2 == kind
    assert _same(kind, x, y)
    assert fio.emit_any(kind2, y) == data


def test_detect_kind():
    assert fio.detect_kind(load_corpus("p2.json")) == "classical_fan"
    assert fio.detect_kind(load_corpus("spec_n2.json")) == "kato_fan"
    assert fio.detect_kind(load_corpus("nodal_cubic.json")) == "stack"
    assert fio.detect_kind(load_corpus("a1_monoid.json")) == "monoid"
    assert fio.detect_kind(load_corpus("model_points.json")) == "model_points"
    with pytest.raises(ValidationError):
        fio.detect_kind([1, 2])
    with pytest.raises(ValidationError):
        fio.detect_kind({"colour": "red"})


def test_json_errors_carry_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "lattice_rank": 2,\n  "rays": [1, 2,\n}\n')
    with pytest.raises(fio.JsonInputError) as e:
        fio.load_json(bad)
    assert str(e.value).startswith(f"{bad}:4:1:")
    with pytest.raises(ValidationError):
        fio.load_json(tmp_path / "missing.json")


def test_schema_errors_are_validation_errors():
    with pytest.raises(ValidationError):
        fio.parse_classical_fan({"lattice_rank": 2, "rays": [[1, 0]]})
    with pytest.raises(ValidationError):
        fio.parse_classical_fan({"lattice_rank": 2, "rays": [["a", 0]], "cones": [[0]]})
    with pytest.raises(ValidationError):
        fio.parse_stack({"cones": [{"ambient_rank": 1, "facets": [[1]]}], "arrows": [{"src": 0, "dst": 0, "matrix": [[2]]}]})


def test_dumps_is_stable():
    data = {"b": [1, 2], "a": {"y": [[1, 0], [0, 1]], "x": "s"}}
    text = fio.dumps(data)
    assert json.loads(text) == data
    assert text.index('"a"') < text.index('"b"')
    assert "[1, 2]" in text


def test_extended_point_json():
    F = kato_fan_from_classical(P2)
    C = ExtendedComplex(F)
    top = max(F.points, key=lambda p: F.cones[p].dim)
    n = len(F.cones[top].monoid.local_hilbert_basis)
    for vals in ([1, 2], [INF, 3], [INF, INF], [0, 0]):
        u = C.from_values(top, vals[:n])
        data = fio.emit_extended_point(u, C)
        assert fio.parse_extended_point(json.loads(fio.dumps(data)), C) == u
    T = ExtendedComplex(F, TORIC)
    ray = next(p for p in F.points if F.cones[p].dim == 1)
    v = T.make(ray, F.cones[ray].full_face, (3, -5))
    data = fio.emit_extended_point(v, T)
    assert data["mode"] == "toric"
    assert fio.parse_extended_point(data, T) == v


def test_rational_strings():
    assert fio._fmt(INF) == "inf"
    assert fio._fmt(3) == "3"
    assert fio._fmt(Fraction(-1, 2)) == "-1/2"
    assert fio._rational("-1/2", "x") == Fraction(-1, 2)
    with pytest.raises(ValidationError):
        fio._rational("1/0", "x")


def test_model_point_json():
    F = kato_fan_from_classical(P2)
    C = ExtendedComplex(F)
    for x in (ModelPoint(CLOSED, cone=4), ModelPoint(MONOMIAL, point=C.make(0, [], ()))):
        assert fio.parse_model_point(fio.emit_model_point(x, C), C) == x


def test_dot_output():
    F = fio.parse_fan(load_corpus("p2.json"))
    dot = fio.fan_dot(F)
    assert dot.startswith("digraph")
    assert dot.count("->") == len(F.hasse())
    S = fio.parse_stack(load_corpus("whitney_umbrella.json"))
    assert "->" in fio.stack_dot(S)
