"""Bundled self-check: runs the example corpus and seeded random checks.

The output depends only on the corpus and on ``LOGFAN_SEED`` so that two
runs with the same seed print identical text.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .conecomplex import ExtendedComplex
from .conestack import artin_hom, from_kato_fan, integral_points_up_to_iso
from .cones import is_pointed
from .katofan import ClassicalFan, KatoCone, KatoFan, cone_from_rays, integral_points, kato_fan_from_classical
from .monoid import FsMonoid, MonoidHom, check_log_smooth, spec
from .subdivision import is_proper_subdivision, is_smooth, multiplicity, resolve
from .tropical import LogPolynomial, ModelPoint, retraction_p, section_J, strata_cone_correspondence, trop

DEFAULT_SEED = 0
CORPUS = (
    "p2.json",
    "a2.json",
    "a1_line.json",
    "a1_cone.json",
    "cone_1_3.json",
    "a1_monoid.json",
    "spec_n2.json",
    "nodal_cubic.json",
    "whitney_umbrella.json",
    "model_points.json",
)


def corpus_path(name: str):
    return resources.files("logfan") / "data" / name


def load_corpus(name: str):
    return json.loads(corpus_path(name).read_text())


def seed_from_env() -> int:
    raw = os.environ.get("LOGFAN_SEED", "")
    try:
        return int(raw) if raw.strip() else DEFAULT_SEED
    except ValueError:
        return DEFAULT_SEED


def random_cone_fan(rng: random.Random, max_dim: int = 3, entry: int = 4) -> KatoFan:
    """A single strongly convex cone (and its faces) with random rays."""
    d = rng.randint(1, max_dim)
    while True:
        k = rng.randint(1, d + 2)
        rays = [tuple(rng.randint(-entry, entry) for _ in range(d)) for _ in range(k)]
        rays = [r for r in rays if any(r)]
        if rays and is_pointed(rays, d):
            break
    c = cone_from_rays(d, rays)
    disp = list(c.display_rays)
    return kato_fan_from_classical(ClassicalFan(d, disp, [list(range(len(disp)))]))


def resolution_holds(F: KatoFan) -> bool:
    """Resolve and check smoothness, properness and the strict multiplicity drop."""
    s = resolve(F)
    if not is_smooth(s.source) or not is_proper_subdivision(s, 4):
        return False
    seq = [st.multiplicities for st in s.steps if st.multiplicities is not None]
    return all(b < a for a, b in zip(seq, seq[1:]))


def brute_hilbert_basis(M: FsMonoid, box: int) -> list[tuple]:
    """Minimal nonzero lattice points of the monoid inside a box."""
    pts = [v for v in itertools.product(range(-box, box + 1), repeat=M.ambient_rank) if any(v) and M.contains(v)]
    pset = set(pts)
    out = []
    for v in pts:
        if not any(
            w != v and tuple(a - b for a, b in zip(v, w)) in pset for w in pts
        ):
            out.append(v)
    return sorted(out)


@dataclass
class Result:
    name: str
    ok: bool
    detail: str


def _spec_n2() -> Result:
    sp = spec(FsMonoid.free(2))
    dims = sorted(len(p.complement_face) for p in sp)
    return Result("spec N^2 points", len(sp) == 4 and dims == [0, 1, 1, 2], f"{len(sp)} points")


def _p2() -> Result:
    fan = ClassicalFan(**_classical("p2.json"))
    F = kato_fan_from_classical(fan)
    dims = sorted((s.orbit_dim for s in strata_cone_correspondence(fan)), reverse=True)
    ok = len(F.points) == 7 and dims == [2, 1, 1, 1, 0, 0, 0]
    return Result("P^2 points and strata", ok, f"{len(F.points)} points, orbit dims {dims}")


def _classical(name: str) -> dict:
    raw = load_corpus(name)
    return {"lattice_rank": raw["lattice_rank"], "rays": raw["rays"], "cones": raw["cones"]}


def _resolve_examples() -> Result:
    s1 = resolve(kato_fan_from_classical(ClassicalFan(**_classical("a1_cone.json"))))
    s2 = resolve(kato_fan_from_classical(ClassicalFan(**_classical("cone_1_3.json"))))
    m1 = [multiplicity(s1.source.cones[p]) for p in s1.source.maximal_points]
    ok = len(m1) == 2 and set(m1) == {1} and s1.trace == [(1, 1)] and len(s2.source.maximal_points) == 3
    return Result("resolve A1 and (1,3) cones", ok, f"trace {s1.trace}, {len(s2.source.maximal_points)} cones")


def _random_resolutions(rng: random.Random) -> Result:
    n = 20
    good = sum(resolution_holds(random_cone_fan(rng)) for _ in range(n))
    return Result("random resolutions", good == n, f"{good}/{n}")


def _hilbert(rng: random.Random) -> Result:
    n = 10
    good = 0
    for _ in range(n):
        F = random_cone_fan(rng, max_dim=2, entry=3)
        cone = F.cones[F.maximal_points[0]]
        M = cone.monoid
        box = max(max(abs(x) for x in h) for h in M.hilbert_basis) if M.hilbert_basis else 0
        good += sorted(M.hilbert_basis) == brute_hilbert_basis(M, box + 1)
    return Result("Hilbert basis oracle", good == n, f"{good}/{n}")


def _trop() -> Result:
    from .io import parse_model_corpus

    _, C, pts = parse_model_corpus(load_corpus("model_points.json"))
    ok = True
    for x in pts:
        if x.kind == "monomial" and trop(x, C) != x.point:
            ok = False
        p = retraction_p(x, C)
        if retraction_p(p, C) != p:
            ok = False
    return Result("trop and retraction", ok, f"{len(pts)} model points")


def _seminorm(rng: random.Random) -> Result:
    C = ExtendedComplex(kato_fan_from_classical(ClassicalFan(**_classical("a2.json"))))
    top = C.fan.maximal_points[0]
    n = 50
    good = 0
    for _ in range(n):
        u = C.make(top, frozenset(), (rng.randint(0, 5), rng.randint(0, 5)))
        f = LogPolynomial({(rng.randint(0, 3), rng.randint(0, 3)): 1 for _ in range(3)})
        g = LogPolynomial({(rng.randint(0, 3), rng.randint(0, 3)): rng.choice((1, -1)) for _ in range(3)})
        s, t = (rng.randint(0, 3), rng.randint(0, 3)), (rng.randint(0, 3), rng.randint(0, 3))
        st = tuple(a + b for a, b in zip(s, t))
        mult = section_J(u, LogPolynomial.monomial(st), C).neglog == (
            section_J(u, LogPolynomial.monomial(s), C).neglog + section_J(u, LogPolynomial.monomial(t), C).neglog
        )
        h = f + g
        ultra = h.is_zero() or section_J(u, h, C).neglog >= min(section_J(u, f, C).neglog, section_J(u, g, C).neglog)
        good += mult and ultra
    return Result("seminorm identities", good == n, f"{good}/{n}")


def _stacks() -> Result:
    from .io import parse_stack

    nod = parse_stack(load_corpus("nodal_cubic.json"))
    umb = parse_stack(load_corpus("whitney_umbrella.json"))
    a = len(integral_points_up_to_iso(nod, 2))
    b = len(integral_points_up_to_iso(umb, 1))
    g = len(umb.automorphism_group(0))
    F = kato_fan_from_classical(ClassicalFan(**_classical("p2.json")))
    plain = all(len(integral_points_up_to_iso(from_kato_fan(F), B)) == len(integral_points(F, B)) for B in range(3))
    ok = a == 7 and b == 3 and g == 2 and plain
    return Result("cone stack orbits", ok, f"nodal {a}, umbrella {b}, group {g}")


def _log_smooth() -> Result:
    N = FsMonoid.free(1)
    h = MonoidHom([[2]], N, N)
    ok = check_log_smooth(h, 0).smooth and check_log_smooth(h, 3).smooth and not check_log_smooth(h, 2).smooth
    homs = len(artin_hom(N, FsMonoid.free(2), 2))
    return Result("log smoothness, artin homs", ok and homs == 9, f"x2 fails only in char 2; {homs} homs N^2 -> N")


def _round_trip() -> Result:
    from .io import dumps, emit_any, parse_any

    bad = []
    for name in CORPUS:
        kind, x = parse_any(load_corpus(name))
        data = emit_any(kind, x)
        kind2, y = parse_any(json.loads(dumps(data)))
        if kind2 != kind or emit_any(kind2, y) != data:
            bad.append(name)
    return Result("corpus round trip", not bad, f"{len(CORPUS) - len(bad)}/{len(CORPUS)} files")


def run_checks(seed: int | None = None) -> list[Result]:
    seed = seed_from_env() if seed is None else seed
    rng = random.Random(seed)
    checks: list[Callable[[], Result]] = [
        _spec_n2,
        _p2,
        _resolve_examples,
        lambda: _random_resolutions(rng),
        lambda: _hilbert(rng),
        _trop,
        lambda: _seminorm(rng),
        _stacks,
        _log_smooth,
        _round_trip,
    ]
    out = []
    for check in checks:
        try:
            out.append(check())
        except Exception as e:  # report, keep going
            out.append(Result(getattr(check, "__name__", "check"), False, f"{type(e).__name__}: {e}"))
    return out


def format_table(results: list[Result], seed: int) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"logfan selftest (seed {seed})"]
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'}  {r.name.ljust(width)}  {r.detail}")
    passed = sum(r.ok for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
