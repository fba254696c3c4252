"""Command-line interface: ``logfan <verb> ...``.

Exit codes: 0 on success, 1 on invalid input, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import io as fio
from .conecomplex import ExtendedComplex
from .conestack import integral_points_up_to_iso
from .errors import LogFanError
from .katofan import KatoCone, KatoFan, classical_from_kato_fan, kato_fan_from_classical
from .lattice import left_inverse
from .monoid import spec
from .subdivision import Subdivision, barycentric_subdivision, resolve, star_subdivide
from .tropical import parse_polynomial, section_J, trop

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _load(path: str):
    return fio.parse_any(fio.load_json(path))


def _load_fan(path: str) -> tuple[str, KatoFan]:
    kind, x = _load(path)
    if kind == "classical_fan":
        return kind, kato_fan_from_classical(x)
    if kind == "kato_fan":
        return kind, x
    if kind == "monoid":
        return kind, KatoFan([KatoCone(x)])
    raise UsageError(f"{path} holds a {kind.replace('_', ' ')}, not a fan")


def _json_or_path(text: str):
    if text.lstrip().startswith(("{", "[")):
        return fio.loads(text, "<argument>")
    return fio.load_json(text)


# describe


def _describe_fan(F: KatoFan, fmt: str) -> str:
    if fmt == "dot":
        return fio.fan_dot(F)
    points = [{"index": p, "dim": F.cones[p].dim, "rays": [list(r) for r in F.display_rays(p)]} for p in F.points]
    hasse = [list(e) for e in F.hasse()]
    if fmt == "json":
        return fio.dumps({"points": points, "hasse": hasse}) + "\n"
    lines = [f"{len(points)} points"]
    for p in points:
        lines.append(f"  {p['index']}: dim {p['dim']} rays {' '.join(_fmt_vec(r) for r in p['rays']) or '-'}")
    lines.append("specialization (covering pairs):")
    lines.extend(f"  {a} < {b}" for a, b in hasse)
    return "\n".join(lines) + "\n"


def _describe_stack(S, fmt: str) -> str:
    if fmt == "dot":
        return fio.stack_dot(S)
    cl = S.closure()
    objs = [
        {"index": i, "dim": c.dim, "rays": [list(r) for r in c.display_rays], "automorphisms": len(cl[(i, i)])}
        for i, c in enumerate(S.cones)
    ]
    arrows = [{"src": a.src, "dst": a.dst, "matrix": a.matrix.tolist()} for a in S.arrows]
    if fmt == "json":
        return fio.dumps({"objects": objs, "arrows": arrows}) + "\n"
    lines = [f"{len(objs)} objects, {len(arrows)} arrows"]
    for o in objs:
        lines.append(f"  {o['index']}: dim {o['dim']} rays {' '.join(_fmt_vec(r) for r in o['rays'])} automorphisms {o['automorphisms']}")
    for a in arrows:
        lines.append(f"  {a['src']} -> {a['dst']} matrix {a['matrix']}")
    return "\n".join(lines) + "\n"


def cmd_describe(args) -> str:
    kind, x = _load(args.file)
    fmt = args.format or "text"
    if kind == "stack":
        return _describe_stack(x, fmt)
    if kind == "model_points":
        raise UsageError("describe takes a fan, monoid or stack file")
    if kind == "monoid" and fmt == "text":
        sp = spec(x)
        head = [f"monoid of rank {x.rank} in Z^{x.ambient_rank}", "hilbert basis: " + " ".join(_fmt_vec(h) for h in x.hilbert_basis)]
        head.append(f"{len(sp)} primes")
        for i, p in enumerate(sp):
            gens = [x.hilbert_basis[j] for j in sorted(p.complement_face)]
            head.append(f"  {i}: complement face generated by {' '.join(_fmt_vec(g) for g in gens) or '-'}")
        return "\n".join(head) + "\n"
    _, F = _load_fan(args.file)
    return _describe_fan(F, fmt)


def cmd_convert(args) -> str:
    kind, x = _load(args.file)
    if args.to == "katofan":
        if kind == "classical_fan":
            return fio.dumps(fio.emit_kato_fan(kato_fan_from_classical(x))) + "\n"
        if kind == "kato_fan":
            return fio.dumps(fio.emit_kato_fan(x)) + "\n"
        if kind == "monoid":
            return fio.dumps(fio.emit_kato_fan(KatoFan([KatoCone(x)]))) + "\n"
    if args.to == "classical":
        if kind == "classical_fan":
            return fio.dumps(fio.emit_classical_fan(x)) + "\n"
        if kind == "kato_fan":
            return fio.dumps(fio.emit_classical_fan(classical_from_kato_fan(x))) + "\n"
    if args.to == "json":
        return fio.dumps(fio.emit_any(kind, x)) + "\n"
    raise UsageError(f"cannot convert a {kind.replace('_', ' ')} to {args.to}")


def _emit_subdivision(kind: str, s: Subdivision, trace: bool, fmt: str) -> str:
    if fmt == "dot":
        return fio.fan_dot(s.source)
    if fmt == "text":
        F = s.source
        lines = [f"{len(F.maximal_points)} maximal cones"]
        for p in F.maximal_points:
            lines.append("  " + " ".join(_fmt_vec(r) for r in F.display_rays(p)))
        if trace:
            lines.append("centers: " + " ".join(_fmt_vec(c) for c in s.trace))
        return "\n".join(lines) + "\n"
    fan = fio.emit_classical_fan(s.to_classical()) if kind == "classical_fan" else fio.emit_kato_fan(s.source)
    if not trace:
        return fio.dumps(fan) + "\n"
    steps = [
        {"kind": st.kind, "center": list(st.center), "multiplicities": None if st.multiplicities is None else list(st.multiplicities)}
        for st in s.steps
    ]
    return fio.dumps({"fan": fan, "trace": [list(c) for c in s.trace], "steps": steps}) + "\n"


def cmd_resolve(args) -> str:
    kind, F = _load_fan(args.file)
    return _emit_subdivision(kind, resolve(F), args.trace, args.format or "json")


def _parse_star(text: str, F: KatoFan) -> tuple[int, tuple]:
    try:
        head, vec = text.split(":")
        c = int(head)
        v = tuple(int(t) for t in vec.split(","))
    except ValueError:
        raise UsageError(f"--star expects 'cone:v1,v2,...', got {text!r}") from None
    if not 0 <= c < len(F.cones):
        raise UsageError(f"no cone {c}")
    cone = F.cones[c]
    if cone.embedding is None:
        return c, v
    if len(v) != cone.embedding.rows:
        raise UsageError(f"--star vector must have length {cone.embedding.rows}")
    local = left_inverse(cone.embedding) @ v
    if cone.embedding @ local != v:
        raise UsageError(f"{list(v)} is not in the span of cone {c}")
    return c, local


def cmd_subdivide(args) -> str:
    kind, F = _load_fan(args.file)
    if args.barycentric:
        s = barycentric_subdivision(F)
    else:
        s = star_subdivide(F, _parse_star(args.star, F))
    return _emit_subdivision(kind, s, args.trace, args.format or "json")


def cmd_tropicalize(args) -> str:
    _, F = _load_fan(args.file)
    C = ExtendedComplex(F)
    x = fio.parse_model_point(_json_or_path(args.point), C, "--point")
    return fio.dumps(fio.emit_extended_point(trop(x, C), C)) + "\n"


def cmd_skeleton_eval(args) -> str:
    _, F = _load_fan(args.file)
    C = ExtendedComplex(F)
    u = fio.parse_extended_point(_json_or_path(args.u), C, "--u")
    n = F.ambient_rank if F.ambient_rank is not None else F.cones[u.cone].dim
    f = parse_polynomial(args.poly, n)
    v = section_J(u, f, C)
    if (args.format or "json") == "text":
        return f"-log|f| = {fio._fmt(v.neglog)}\n|f| = {v.value!r}\n"
    return fio.dumps({"neglog": fio._fmt(v.neglog), "value": v.value}) + "\n"


def _load_stack(path: str):
    kind, x = _load(path)
    if kind == "stack":
        return x
    if kind in ("classical_fan", "kato_fan", "monoid"):
        from .conestack import from_kato_fan

        return from_kato_fan(_load_fan(path)[1])
    raise UsageError(f"{path} is not a stack")


def cmd_stack_points(args) -> str:
    S = _load_stack(args.file)
    if args.bound < 0:
        raise UsageError("--bound must be nonnegative")
    pts = integral_points_up_to_iso(S, args.bound)
    if (args.format or "json") == "text":
        lines = [f"{len(pts)} orbits"]
        for p in pts:
            lines.append(f"  {p.representative[0]}:{_fmt_vec(p.representative[1])}  size {len(p.members)}")
        return "\n".join(lines) + "\n"
    data = {
        "count": len(pts),
        "orbits": [
            {
                "representative": {"object": p.representative[0], "coords": list(p.representative[1])},
                "members": [{"object": o, "coords": list(v)} for o, v in p.members],
            }
            for p in pts
        ],
    }
    return fio.dumps(data) + "\n"


def cmd_stack_autos(args) -> str:
    S = _load_stack(args.file)
    if not 0 <= args.cone < len(S.cones):
        raise UsageError(f"no object {args.cone}")
    G = S.automorphism_group(args.cone)
    if (args.format or "json") == "text":
        return f"object {args.cone}: group of order {len(G)}\n" + "".join(f"  {m.tolist()}\n" for m in G)
    return fio.dumps({"object": args.cone, "order": len(G), "matrices": [m.tolist() for m in G]}) + "\n"


def cmd_selftest(args) -> str:
    from .selftest import format_table, run_checks, seed_from_env

    seed = seed_from_env()
    results = run_checks(seed)
    args._failed = not all(r.ok for r in results)
    if (args.format or "text") == "json":
        return fio.dumps({"seed": seed, "results": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]}) + "\n"
    return format_table(results, seed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logfan", description="Kato fans, subdivisions, cone complexes and cone stacks.")
    p.add_argument("--version", action="version", version=f"logfan {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, func, help_, formats=("json", "text")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=formats, default=None)
        sp.set_defaults(func=func)
        return sp

    sp = verb("describe", cmd_describe, "print the point poset of a fan, monoid or stack", ("text", "json", "dot"))
    sp.add_argument("file")
    sp = verb("convert", cmd_convert, "convert between fan formats", ("json",))
    sp.add_argument("file")
    sp.add_argument("--to", choices=("katofan", "classical", "json"), required=True)
    sp = verb("resolve", cmd_resolve, "resolve a fan by star subdivisions", ("json", "text", "dot"))
    sp.add_argument("file")
    sp.add_argument("--trace", action="store_true", help="include the subdivision centers")
    sp = verb("subdivide", cmd_subdivide, "star or barycentric subdivision", ("json", "text", "dot"))
    sp.add_argument("file")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--star", metavar="I:V1,V2,...", help="star at vector V of cone I")
    group.add_argument("--barycentric", action="store_true")
    sp.add_argument("--trace", action="store_true")
    sp = verb("tropicalize", cmd_tropicalize, "tropicalize a model point", ("json",))
    sp.add_argument("file")
    sp.add_argument("--point", required=True, help="model point JSON text or file")
    sp = verb("skeleton-eval", cmd_skeleton_eval, "evaluate the skeleton seminorm on a polynomial")
    sp.add_argument("file")
    sp.add_argument("--u", required=True, help="extended point JSON text or file")
    sp.add_argument("--poly", required=True, help='polynomial such as "1+x*y^2"')
    sp = verb("stack-points", cmd_stack_points, "lattice points of a stack up to isomorphism")
    sp.add_argument("file")
    sp.add_argument("--bound", type=int, required=True)
    sp = verb("stack-autos", cmd_stack_autos, "automorphism group of a stack object")
    sp.add_argument("file")
    sp.add_argument("--cone", type=int, required=True)
    verb("selftest", cmd_selftest, "run the bundled checks", ("text", "json"))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        out = args.func(args)
    except UsageError as e:
        print(f"logfan: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (LogFanError, ValueError) as e:
        print(f"logfan: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(out)
    return EXIT_INVALID if getattr(args, "_failed", False) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
