"""JSON and DOT formats for monoids, fans, stacks and extended points.

Every ``emit_*`` function returns plain JSON data with canonical ordering,
and the matching ``parse_*`` function rebuilds an equal object.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .conecomplex import INF, TORIC, ExtendedComplex, ExtendedPoint
from .conestack import Arrow, ConeStack
from .errors import ValidationError
from .katofan import (
    ClassicalFan,
    Gluing,
    KatoCone,
    KatoFan,
    _check_face_iso,
    find_face_isomorphisms,
    kato_fan_from_classical,
)
from .lattice import IntMatrix, dot
from .monoid import FsMonoid
from .tropical import CLOSED, MONOMIAL, ModelPoint


class JsonInputError(ValidationError):
    """Malformed JSON, reported with file and position."""


def load_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ValidationError(f"{path}: {e.strerror}") from None
    return loads(text, str(path))


def loads(text: str, source: str = "<input>") -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise JsonInputError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from None


def dumps(data, indent: int = 2) -> str:
    """Stable JSON with sorted keys; lists of scalars stay on one line."""
    return _dump(data, 0, indent)


def _dump(x, level: int, indent: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_dump(x[k], level + 1, indent)}" for k in sorted(x)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in x):
            return "[" + ", ".join(json.dumps(v) for v in x) + "]"
        return "[\n" + ",\n".join(inner + _dump(v, level + 1, indent) for v in x) + "\n" + pad + "]"
    return json.dumps(x)


def _require(obj, key: str, where: str):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    if key not in obj:
        raise ValidationError(f"{where}: missing key {key!r}")
    return obj[key]


def _int_rows(rows, where: str) -> list[list[int]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{where}: expected a list of integer vectors")
    for r in rows:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise ValidationError(f"{where}: non-integer entry in {r}")
    return rows


def _matrix(rows, ncols: int, where: str) -> IntMatrix:
    rows = _int_rows(rows, where)
    return IntMatrix(rows, ncols if not rows else len(rows[0]))


# monoids and cones


def parse_monoid(obj, where: str = "monoid") -> FsMonoid:
    n = _require(obj, "ambient_rank", where)
    if "generators" in obj:
        return FsMonoid.from_generators(_int_rows(obj["generators"], where), n)
    if "facets" in obj:
        return FsMonoid.from_facets(_int_rows(obj["facets"], where), n)
    raise ValidationError(f"{where}: needs 'generators' or 'facets'")


def emit_monoid(M: FsMonoid) -> dict:
    return {"ambient_rank": M.ambient_rank, "generators": [list(h) for h in sorted(M.hilbert_basis)]}


def parse_kato_cone(obj, where: str = "cone") -> KatoCone:
    M = parse_monoid(obj, where)
    E = None
    if "embedding" in obj:
        E = _matrix(obj["embedding"], M.rank, f"{where}.embedding")
    return KatoCone(M, E)


def emit_kato_cone(c: KatoCone) -> dict:
    out = {"ambient_rank": c.dim, "facets": [list(r) for r in c.rays]}
    if c.embedding is not None:
        out["embedding"] = c.embedding.tolist()
    return out


# fans


def parse_classical_fan(obj) -> ClassicalFan:
    n = _require(obj, "lattice_rank", "fan")
    rays = _int_rows(_require(obj, "rays", "fan"), "fan.rays")
    cones = _int_rows(_require(obj, "cones", "fan"), "fan.cones")
    return ClassicalFan(n, rays, cones)


def emit_classical_fan(fan: ClassicalFan) -> dict:
    return {
        "lattice_rank": fan.lattice_rank,
        "rays": [list(r) for r in fan.rays],
        "cones": [sorted(c) for c in fan.maximal_cones()],
    }


def parse_kato_fan(obj) -> KatoFan:
    raw = _require(obj, "cones", "fan")
    cones = [parse_kato_cone(c, f"fan.cones[{i}]") for i, c in enumerate(raw)]
    gluings = []
    for k, g in enumerate(obj.get("gluing", [])):
        where = f"fan.gluing[{k}]"
        s, b = _require(g, "small", where), _require(g, "big", where)
        if not (0 <= s < len(cones) and 0 <= b < len(cones)):
            raise ValidationError(f"{where}: cone index out of range")
        face = frozenset(_require(g, "face", where))
        if "matrix" in g:
            A = _matrix(g["matrix"], cones[s].dim, f"{where}.matrix")
            gl = Gluing(s, b, A)
            if _check_face_iso(cones[s], cones[b], A) != face:
                raise ValidationError(f"{where}: matrix does not map onto the stated face")
        else:
            isos = find_face_isomorphisms(cones[s], cones[b], face)
            if not isos:
                raise ValidationError(f"{where}: cone {s} is not isomorphic to face {sorted(face)} of cone {b}")
            gl = Gluing(s, b, isos[0])
        gluings.append(gl)
    return KatoFan(cones, gluings)


def emit_kato_fan(F: KatoFan) -> dict:
    return {
        "cones": [emit_kato_cone(c) for c in F.cones],
        "gluing": [
            {"small": g.small, "big": g.big, "face": sorted(g.face(F)), "matrix": g.matrix.tolist()}
            for g in F.gluings
        ],
    }


def parse_fan(obj) -> KatoFan:
    """A Kato fan from either a classical or a Kato fan object."""
    if isinstance(obj, dict) and "lattice_rank" in obj:
        return kato_fan_from_classical(parse_classical_fan(obj))
    return parse_kato_fan(obj)


# stacks


def parse_stack(obj) -> ConeStack:
    raw = _require(obj, "cones", "stack")
    cones = [parse_kato_cone(c, f"stack.cones[{i}]") for i, c in enumerate(raw)]
    arrows = []
    for k, a in enumerate(_require(obj, "arrows", "stack")):
        where = f"stack.arrows[{k}]"
        s, d = _require(a, "src", where), _require(a, "dst", where)
        if not (0 <= s < len(cones) and 0 <= d < len(cones)):
            raise ValidationError(f"{where}: object index out of range")
        arrows.append(Arrow(s, d, _matrix(_require(a, "matrix", where), cones[s].dim, f"{where}.matrix")))
    return ConeStack(cones, arrows)


def emit_stack(S: ConeStack) -> dict:
    return {
        "cones": [emit_kato_cone(c) for c in S.cones],
        "arrows": [{"src": a.src, "dst": a.dst, "matrix": a.matrix.tolist()} for a in S.arrows],
    }


# extended and model points


def _rational(x, where: str) -> Fraction:
    try:
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise ValueError
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{where}: {x!r} is not a rational 'p/q'") from None


def _fmt(q) -> str:
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_extended_point(obj, C: ExtendedComplex, where: str = "point") -> ExtendedPoint:
    F = C.fan
    c = _require(obj, "cone", where)
    if not isinstance(c, int) or not 0 <= c < len(F.cones):
        raise ValidationError(f"{where}: no cone {c!r}")
    mode = obj.get("mode", "skeleton")
    if mode != C.mode:
        raise ValidationError(f"{where}: point mode {mode!r} does not match the complex ({C.mode!r})")
    cone = F.cones[c]
    hb = cone.monoid.local_hilbert_basis
    comp = frozenset(_require(obj, "infinity_face_complement", where))
    if not all(isinstance(i, int) and 0 <= i < len(hb) for i in comp):
        raise ValidationError(f"{where}: Hilbert basis index out of range")
    x = [_rational(t, f"{where}.functional") for t in _require(obj, "functional", where)]
    tau = frozenset(i for i, r in enumerate(cone.rays) if all(dot(r, hb[j]) == 0 for j in comp))
    if mode == TORIC:
        if comp:
            raise ValidationError(f"{where}: toric points carry an empty complement")
        return C.make(c, cone.full_face, x)
    if frozenset(j for j, h in enumerate(hb) if all(dot(cone.rays[i], h) == 0 for i in tau)) != comp:
        raise ValidationError(f"{where}: infinity_face_complement is not a face")
    return C.make(c, tau, x)


def emit_extended_point(u: ExtendedPoint, C: ExtendedComplex) -> dict:
    cone = C.fan.cones[u.cone]
    hb = cone.monoid.local_hilbert_basis
    comp = [] if u.mode == TORIC else [
        j for j, h in enumerate(hb) if all(dot(cone.rays[i], h) == 0 for i in u.infinity_face)
    ]
    out = {"cone": u.cone, "infinity_face_complement": comp, "functional": [_fmt(t) for t in u.functional]}
    if u.mode == TORIC:
        out["mode"] = TORIC
    return out


def parse_model_point(obj, C: ExtendedComplex, where: str = "point") -> ModelPoint:
    kind = _require(obj, "kind", where)
    if kind == MONOMIAL:
        return ModelPoint(MONOMIAL, point=parse_extended_point(_require(obj, "point", where), C, f"{where}.point"))
    if kind == CLOSED:
        c = _require(obj, "cone", where)
        if not isinstance(c, int) or not 0 <= c < len(C.fan.cones):
            raise ValidationError(f"{where}: no cone {c!r}")
        return ModelPoint(CLOSED, cone=c)
    raise ValidationError(f"{where}: unknown kind {kind!r}")


def emit_model_point(x: ModelPoint, C: ExtendedComplex) -> dict:
    if x.kind == MONOMIAL:
        return {"kind": MONOMIAL, "point": emit_extended_point(x.point, C)}
    return {"kind": CLOSED, "cone": x.cone}


def parse_model_corpus(obj) -> tuple[dict, ExtendedComplex, list[ModelPoint]]:
    """A ``{"fan": ..., "points": [...]}`` corpus; returns the raw fan too."""
    raw = _require(obj, "fan", "corpus")
    C = ExtendedComplex(parse_fan(raw))
    pts = [parse_model_point(p, C, f"corpus.points[{i}]") for i, p in enumerate(_require(obj, "points", "corpus"))]
    return raw, C, pts


def emit_model_corpus(raw_fan: dict, C: ExtendedComplex, points) -> dict:
    return {"fan": raw_fan, "points": [emit_model_point(p, C) for p in points]}


# dispatch


def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise ValidationError("top-level JSON value must be an object")
    if "points" in obj and "fan" in obj:
        return "model_points"
    if "lattice_rank" in obj:
        return "classical_fan"
    if "arrows" in obj:
        return "stack"
    if "cones" in obj:
        return "kato_fan"
    if "ambient_rank" in obj:
        return "monoid"
    raise ValidationError("cannot tell what kind of object this JSON describes")


def parse_any(obj):
    kind = detect_kind(obj)
    return kind, {
        "classical_fan": parse_classical_fan,
        "kato_fan": parse_kato_fan,
        "stack": parse_stack,
        "monoid": parse_monoid,
        "model_points": parse_model_corpus,
    }[kind](obj)


def emit_any(kind: str, x) -> dict:
    if kind == "model_points":
        return emit_model_corpus(*x)
    return {
        "classical_fan": emit_classical_fan,
        "kato_fan": emit_kato_fan,
        "stack": emit_stack,
        "monoid": emit_monoid,
    }[kind](x)


# DOT


def _label(rays) -> str:
    return "<" + ",".join("(" + ",".join(map(str, r)) + ")" for r in rays) + ">" if rays else "0"


def fan_dot(F: KatoFan, name: str = "fan") -> str:
    """Specialization Hasse diagram of a Kato fan (edges point to specializations)."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for p in F.points:
        lines.append(f'  p{p} [label="{p}: {_label(F.display_rays(p))}"];')
    for a, b in F.hasse():
        lines.append(f"  p{a} -> p{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def stack_dot(S: ConeStack, name: str = "stack") -> str:
    lines = [f"digraph {name} {{"]
    for i, c in enumerate(S.cones):
        lines.append(f'  c{i} [label="{i}: {_label(c.display_rays)}"];')
    for a in S.arrows:
        m = ";".join(",".join(map(str, r)) for r in a.matrix.tolist())
        lines.append(f'  c{a.src} -> c{a.dst} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
