"""The eleven acceptance criteria, each at its stated limit.

Every test prints one ``criterion N: PASS|FAIL`` line; the lines are also
collected and repeated in the pytest terminal summary.  Run this file
directly (``python tests/test_acceptance.py``) for the table alone.
"""

import itertools
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from sympy import Matrix

from conftest import ACCEPTANCE_LINES
from oracles import brute_hilbert_basis, snf_invariants
from logfan.cones import is_pointed
from logfan.conecomplex import INF, ExtendedComplex
from logfan.conestack import from_kato_fan, integral_points_up_to_iso
from logfan.io import dumps, emit_any, parse_any, parse_model_corpus, parse_stack
from logfan.katofan import ClassicalFan, integral_points, kato_fan_from_classical
from logfan.lattice import IntMatrix, cokernel_invariants, left_inverse
from logfan.monoid import FsMonoid, MonoidHom, check_log_smooth, log_differentials_cokernel, spec
from logfan.selftest import CORPUS, load_corpus, random_cone_fan
from logfan.subdivision import is_proper_subdivision, is_smooth, multiplicity, resolve, star_subdivide
from logfan.tropical import MONOMIAL, LogPolynomial, ModelPoint, retraction_p, section_J, strata_cone_correspondence, trop

P2 = ClassicalFan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
A2 = ClassicalFan(2, [(1, 0), (0, 1)], [[0, 1]])
A1 = ClassicalFan(2, [(1, 0), (1, 2)], [[0, 1]])
C13 = ClassicalFan(2, [(1, 0), (1, 3)], [[0, 1]])


def _run(n, limit, check):
    """Run ``check`` (returning ``(ok, detail)``), print the verdict and assert it."""
    t0 = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as e:  # a crash is a failure of the criterion
        ok, detail = False, f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - t0
    in_time = elapsed < limit
    verdict = "PASS" if ok and in_time else "FAIL"
    timing = f"{elapsed:.2f}s < {limit}s" if in_time else f"{elapsed:.2f}s over the {limit}s limit"
    line = f"criterion {n}: {verdict}  {detail} ({timing})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, detail
    assert in_time, timing


# 1


def _spec_n2():
    sp = spec(FsMonoid.free(2))
    pts = list(sp)
    below = {p: sum(sp.leq(q, p) and q != p for q in pts) for p in pts}
    layers = sorted(below.values())
    strict = [(p, q) for p, q in itertools.product(pts, repeat=2) if p != q and sp.leq(p, q)]
    ok = len(pts) == 4 and layers == [0, 1, 1, 3] and len(strict) == 5
    ok = ok and below[sp.generic] == 0 and below[sp.closed] == 3
    return ok, f"{len(pts)} points, specialization layers {layers}"


def test_criterion_01_spec_n2():
    _run(1, 1, _spec_n2)


# 2


def _p2():
    F = kato_fan_from_classical(P2)
    pairs = strata_cone_correspondence(P2)
    dims = sorted((s.orbit_dim for s in pairs), reverse=True)
    ok = len(F.points) == 7 and len(pairs) == 7 and dims == [2, 1, 1, 1, 0, 0, 0]
    return ok, f"{len(F.points)} points, orbit dims {dims}"


def test_criterion_02_p2():
    _run(2, 1, _p2)


# 3


def _det_one(F):
    return all(abs(Matrix(list(F.display_rays(p))).det()) == 1 for p in F.maximal_points)


def _resolve_examples():
    a = resolve(kato_fan_from_classical(A1))
    b = resolve(kato_fan_from_classical(C13))
    ok = (
        len(a.source.maximal_points) == 2
        and all(multiplicity(a.source.cones[p]) == 1 for p in a.source.maximal_points)
        and a.trace == [(1, 1)]
        and _det_one(a.source)
        and len(b.source.maximal_points) == 3
        and _det_one(b.source)
    )
    return ok, f"A1 -> {len(a.source.maximal_points)} cones trace {a.trace}, (1,3) -> {len(b.source.maximal_points)} cones"


def test_criterion_03_resolve_examples():
    _run(3, 1, _resolve_examples)


# 4


def _initial_multiplicities(F):
    if not all(F.cones[p].is_simplicial() for p in F.maximal_points):
        return None
    return tuple(sorted((multiplicity(F.cones[p]) for p in F.maximal_points), reverse=True))


def _random_resolutions():
    rng = random.Random(20240)
    counts = {"exact": 0, "sampled": 0}
    for i in range(200):
        F = random_cone_fan(rng, max_dim=3, entry=4)
        s = resolve(F)
        if not is_smooth(s.source):
            return False, f"fan {i}: result not smooth"
        mode = "exact" if _initial_multiplicities(F) is not None else "sampled"
        counts[mode] += 1
        if not is_proper_subdivision(s, 4, mode=mode):
            return False, f"fan {i}: not proper ({mode})"
        seq = [_initial_multiplicities(F)] + [st.multiplicities for st in s.steps]
        seq = [m for m in seq if m is not None]
        if any(not b < a for a, b in zip(seq, seq[1:])):
            return False, f"fan {i}: multiplicities {seq} do not drop"
    return True, f"200 fans resolved ({counts['exact']} exact, {counts['sampled']} sampled B=4)"


def test_criterion_04_random_resolutions():
    _run(4, 60, _random_resolutions)


# 5


def _random_pointed_cone(rng, d):
    while True:
        rays = [tuple(rng.randint(-4, 4) for _ in range(d)) for _ in range(rng.randint(1, d + 1))]
        rays = [r for r in rays if any(r)]
        if rays and is_pointed(rays, d):
            return rays


def _hilbert_oracle():
    rng = random.Random(5005)
    for i in range(100):
        d = rng.randint(1, 3)
        rays = _random_pointed_cone(rng, d)
        ours = sorted(FsMonoid.from_generators(rays, d).hilbert_basis)
        if ours != brute_hilbert_basis(rays, d):
            return False, f"cone {i} {rays}: mismatch"
    return True, "100 random cones agree with the box-scan oracle"


def test_criterion_05_hilbert_basis_oracle():
    _run(5, 30, _hilbert_oracle)


# 6


def _star_formula_scan(fan, v):
    F = kato_fan_from_classical(fan)
    top = max(F.points, key=lambda p: F.cones[p].dim)
    s = star_subdivide(F, (top, left_inverse(F.cones[top].embedding) @ v))
    checked = 0
    for p in s.source.points:
        cone = s.source.cones[p]
        if tuple(v) not in cone.display_rays:
            continue
        V = [r for r in cone.display_rays if r != tuple(v)]
        for alpha in itertools.product(range(-6, 7), repeat=2):
            inside = cone.monoid.contains_local(cone.embedding.T @ alpha)
            formula = all(alpha[0] * r[0] + alpha[1] * r[1] >= 0 for r in V) and alpha[0] * v[0] + alpha[1] * v[1] >= 0
            if inside != formula:
                return False, checked
            checked += 1
    return True, checked


def _star_formula():
    ok_a, n_a = _star_formula_scan(A1, (1, 1))
    ok_b, n_b = _star_formula_scan(A2, (1, 1))
    return ok_a and ok_b, f"{n_a + n_b} lattice points scanned on the A1 and N^2 subdivisions"


def test_criterion_06_star_monoid_formula():
    _run(6, 5, _star_formula)


# 7


GRID = (0, Fraction(1, 3), 1, Fraction(5, 2), INF)


def _trop_section():
    checked = 0
    for fan in (P2, A2):
        F = kato_fan_from_classical(fan)
        C = ExtendedComplex(F)
        for q in F.maximal_points:
            for vals in itertools.product(GRID, repeat=len(F.cones[q].monoid.local_hilbert_basis)):
                u = C.from_values(q, list(vals))
                if trop(ModelPoint(MONOMIAL, point=u), C) != u:
                    return False, f"trop(J(u)) != u for {vals} on cone {q}"
                checked += 1
    _, C, pts = parse_model_corpus(load_corpus("model_points.json"))
    for x in pts:
        once = retraction_p(x, C)
        if retraction_p(once, C) != once:
            return False, "retraction is not idempotent"
    return True, f"{checked} grid points, {len(pts)} model points"


def test_criterion_07_trop_section():
    _run(7, 5, _trop_section)


# 8


def _seminorms():
    rng = random.Random(808)
    fans = [kato_fan_from_classical(f) for f in (P2, A2)]
    values = (0, Fraction(1, 2), 1, 2, Fraction(7, 3), INF)
    for _ in range(500):
        F = rng.choice(fans)
        C = ExtendedComplex(F)
        q = rng.choice(F.maximal_points)
        hb = [tuple(h) for h in F.cones[q].monoid.hilbert_basis]
        u = C.from_values(q, [rng.choice(values) for _ in hb])

        def char():
            cs = [rng.randint(0, 3) for _ in hb]
            return tuple(sum(c * h[k] for c, h in zip(cs, hb)) for k in range(2))

        def poly():
            return LogPolynomial({char(): rng.choice((-2, -1, 1, 3)) for _ in range(rng.randint(1, 3))})

        s, t = char(), char()
        js, jt = (section_J(u, LogPolynomial.monomial(x), C, q) for x in (s, t))
        jst = section_J(u, LogPolynomial.monomial(s) * LogPolynomial.monomial(t), C, q)
        if jst.neglog != js.neglog + jt.neglog:
            return False, f"multiplicativity fails in exponent space at {s}, {t}"
        prod = js.value * jt.value
        if abs(jst.value - prod) > 1e-12 * max(abs(prod), abs(jst.value)):
            return False, "multiplicativity fails in the float view"
        f, g = poly(), poly()
        if (f + g).is_zero():
            continue
        a, b, c = (section_J(u, h, C, q) for h in (f, g, f + g))
        if c.neglog < min(a.neglog, b.neglog):
            return False, "non-Archimedean inequality fails"
        if c.value > max(a.value, b.value) * (1 + 1e-12):
            return False, "non-Archimedean inequality fails in the float view"
    return True, "500 random (u, f) pairs"


def test_criterion_08_seminorm_identities():
    _run(8, 5, _seminorms)


# 9


def _stacks():
    nodal = parse_stack(load_corpus("nodal_cubic.json"))
    umbrella = parse_stack(load_corpus("whitney_umbrella.json"))
    n_nodal = len(integral_points_up_to_iso(nodal, 2))
    n_umb = len(integral_points_up_to_iso(umbrella, 1))
    order = len(umbrella.automorphism_group(0))
    plain_ok = all(
        len(integral_points_up_to_iso(from_kato_fan(F), B)) == len(integral_points(F, B))
        for F in (kato_fan_from_classical(f) for f in (P2, A2, A1))
        for B in range(5)
    )
    ok = n_nodal == 7 and n_umb == 3 and order == 2 and plain_ok
    return ok, f"nodal {n_nodal} orbits, umbrella {n_umb} orbits, group order {order}, fan import {'matches' if plain_ok else 'differs'}"


def test_criterion_09_cone_stacks():
    _run(9, 5, _stacks)


# 10


def _log_smooth():
    N = FsMonoid.free(1)
    double = MonoidHom([[2]], N, N)
    for c in (0, 2, 3, 5, 7, 11):
        if check_log_smooth(double, c).smooth != (c != 2):
            return False, f"x2 on N misjudged in characteristic {c}"
    rng = random.Random(1010)
    for i in range(100):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        signed = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        if cokernel_invariants(IntMatrix(signed, n)) != snf_invariants(signed, n):
            return False, f"matrix {i}: cokernel mismatch"
        positive = [[rng.randint(0, 5) for _ in range(n)] for _ in range(m)]
        h = MonoidHom(positive, FsMonoid.free(n), FsMonoid.free(m))
        if log_differentials_cokernel(h) != snf_invariants(positive, n):
            return False, f"matrix {i}: log differentials mismatch"
    return True, "x2 on N smooth exactly off characteristic 2; 100 random matrices agree with SNF"


def test_criterion_10_log_smoothness():
    _run(10, 5, _log_smooth)


# 11


def _selftest_output(seed):
    env = dict(os.environ, LOGFAN_SEED=str(seed))
    return subprocess.run([sys.executable, "-m", "logfan.cli", "selftest"], env=env, capture_output=True).stdout


def _cli_round_trip():
    for name in CORPUS:
        kind, x = parse_any(load_corpus(name))
        data = emit_any(kind, x)
        kind2, y = parse_any(json.loads(dumps(data)))
        if kind2 != kind or emit_any(kind2, y) != data:
            return False, f"{name} does not round-trip"
    a, b = _selftest_output(3), _selftest_output(3)
    if a != b or not a:
        return False, "selftest output differs between runs"
    return True, f"{len(CORPUS)} corpus files round-trip; selftest byte-identical"


def test_criterion_11_round_trip_and_determinism():
    _run(11, 10, _cli_round_trip)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
