"""Star and barycentric subdivision, smoothness, properness and resolution.

Subdivisions are computed on a working complex of rays.  Each ray gets a
*home*: the smallest point (cone object) of the original fan containing it,
plus its coordinates in that cone's lattice.  The charts are the maximal
cones of the original fan; a current cone is a set of ray ids inside one
chart.  Cones in different charts are the same cone exactly when they have
the same rays and the same home.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cones import facet_normals, kernel_line
from .errors import NotInFan, ValidationError, ZeroVector
from .katofan import (
    Gluing,
    KatoCone,
    KatoFan,
    classical_from_kato_fan,
    cone_from_rays,
    cone_points,
    fan_morphism_check,
)
from .lattice import (
    IntMatrix,
    Vector,
    as_matrix,
    determinant,
    dot,
    echelon_coordinates,
    left_inverse,
    parallelepiped_points,
    primitive,
    rank,
)


def barycenter(c: KatoCone) -> Vector:
    """Sum of the primitive rays of a cone (display coordinates)."""
    if not c.rays:
        raise ZeroVector("the zero cone has no barycenter")
    s = tuple(sum(col) for col in zip(*c.rays))
    return c.display(s)


def multiplicity(c: KatoCone) -> int:
    """Index of the sublattice spanned by the rays of a simplicial cone."""
    if not c.is_simplicial():
        raise ValidationError("multiplicity is defined for simplicial cones only")
    if c.dim == 0:
        return 1
    return abs(determinant(IntMatrix(c.rays, c.dim)))


def is_smooth(F: KatoFan) -> bool:
    """Every maximal cone is simplicial of multiplicity one."""
    return all(F.cones[p].is_simplicial() and multiplicity(F.cones[p]) == 1 for p in F.maximal_points)


@dataclass
class Step:
    """One star subdivision: its kind, center (display coordinates) and the
    sorted-descending multiplicities of the maximal cones afterwards (``None``
    while some maximal cone is not simplicial)."""

    kind: str
    center: tuple
    multiplicities: tuple | None = None


@dataclass
class Subdivision:
    """A refinement ``source -> target`` with per-cone lattice maps.

    ``morphism[i] = (j, A)`` sends cone ``i`` of the source into cone ``j`` of
    the target by the matrix ``A`` (own lattice to own lattice).
    """

    source: KatoFan
    target: KatoFan
    morphism: dict
    steps: list = field(default_factory=list)

    @property
    def trace(self) -> list[tuple]:
        return [s.center for s in self.steps]

    def is_morphism(self) -> bool:
        return fan_morphism_check(self.morphism, self.source, self.target)

    def compose(self, other: "Subdivision") -> "Subdivision":
        """``self`` after ``other``: requires ``self.target is other.source``."""
        if self.target is not other.source:
            raise ValidationError("subdivisions do not compose")
        mor = {}
        for i, (j, A) in self.morphism.items():
            k, B = other.morphism[j]
            mor[i] = (k, B @ A)
        return Subdivision(self.source, other.target, mor, other.steps + self.steps)

    def to_classical(self):
        return classical_from_kato_fan(self.source)


def identity_subdivision(F: KatoFan) -> Subdivision:
    return Subdivision(F, F, {p: (p, IntMatrix.identity(F.cones[p].dim)) for p in F.points})


class _RayComplex:
    def __init__(self, F: KatoFan):
        self.F = F
        self.charts = list(F.maximal_points)
        self.ray_home: list[int] = []
        self.ray_vec: list[Vector] = []
        self._ray_of_point: dict = {}
        for p in F.points:
            if F.cones[p].dim == 1:
                self._ray_of_point[p] = len(self.ray_home)
                self.ray_home.append(p)
                self.ray_vec.append(F.cones[p].rays[0])
        self.cones: list[tuple[int, frozenset]] = []
        for c in self.charts:
            ids = frozenset(self._ray_of_point[F.point(c, frozenset([i]))] for i in range(len(F.cones[c].rays)))
            self.cones.append((c, ids))
        self._vec: dict = {}
        self._normals: dict = {}
        self._display: dict = {}

    def dim(self, c: int) -> int:
        return self.F.cones[c].dim

    def vec(self, r: int, c: int) -> Vector:
        key = (r, c)
        v = self._vec.get(key)
        if v is None:
            v = self.F.face_map(self.ray_home[r], c) @ self.ray_vec[r]
            self._vec[key] = v
        return v

    def display(self, r: int) -> tuple:
        d = self._display.get(r)
        if d is None:
            d = self.F.cones[self.ray_home[r]].display(self.ray_vec[r])
            self._display[r] = d
        return d

    def cone_key(self, c: int, R: frozenset):
        return sorted(self.display(r) for r in R)

    def home_of(self, R: frozenset, c: int) -> int:
        cone = self.F.cones[c]
        face = cone.minimal_face(*[self.vec(r, c) for r in R])
        return self.F.point(c, face)

    def normals(self, c: int, R: frozenset) -> list[Vector]:
        key = (c, R)
        n = self._normals.get(key)
        if n is None:
            n = facet_normals([self.vec(r, c) for r in R], self.dim(c))
            self._normals[key] = n
        return n

    def facets(self, c: int, R: frozenset) -> list[frozenset]:
        if len(R) == self.dim(c):
            return [R - {r} for r in R]
        return [frozenset(r for r in R if dot(n, self.vec(r, c)) == 0) for n in self.normals(c, R)]

    def faces(self, c: int, R: frozenset) -> list[frozenset]:
        if len(R) == self.dim(c):
            rs = sorted(R)
            return [frozenset(s) for k in range(len(rs) + 1) for s in itertools.combinations(rs, k)]
        from .cones import incidence_faces

        rs = sorted(R)
        vecs = [self.vec(r, c) for r in rs]
        return [frozenset(rs[i] for i in f) for f in incidence_faces(vecs, self.normals(c, R))]

    def contains(self, c: int, R: frozenset, v: Sequence) -> bool:
        return all(dot(n, v) >= 0 for n in self.normals(c, R))

    def multiplicity(self, c: int, R: frozenset) -> int:
        d = self.dim(c)
        if d == 0:
            return 1
        return abs(determinant(IntMatrix([self.vec(r, c) for r in sorted(R)], d)))

    def star(self, P: int, v: Sequence[int]) -> tuple[int, frozenset]:
        """Star subdivide at the lattice point ``v`` of point ``P``; return the center ray."""
        F = self.F
        v = tuple(int(x) for x in v)
        if not any(v):
            raise ZeroVector("subdivision center is zero")
        if not F.cones[P].contains(v):
            raise NotInFan(f"{list(v)} is not in cone {P}")
        v = primitive(v)
        c = next(c for c in self.charts if F.leq(P, c))
        vc = F.face_map(P, c) @ v
        host = next((R for (cc, R) in self.cones if cc == c and self.contains(c, R, vc)), None)
        if host is None:
            raise NotInFan(f"{list(v)} is not covered by the current fan")
        tight = [n for n in self.normals(c, host) if dot(n, vc) == 0]
        S0 = frozenset(r for r in host if all(dot(n, self.vec(r, c)) == 0 for n in tight))
        H0 = self.home_of(S0, c)
        if len(S0) == 1 and self.vec(next(iter(S0)), c) == vc:
            w = next(iter(S0))
        else:
            w = len(self.ray_home)
            A = F.face_map(H0, c)
            self.ray_home.append(H0)
            self.ray_vec.append(left_inverse(A) @ vc)
        new_cones = []
        for cc, R in self.cones:
            if S0 <= R and self.home_of(S0, cc) == H0:
                for f in self.facets(cc, R):
                    if not S0 <= f:
                        new_cones.append((cc, f | {w}))
            else:
                new_cones.append((cc, R))
        self.cones = new_cones
        return w, S0

    def is_simplicial(self) -> bool:
        return all(len(R) == self.dim(c) for c, R in self.cones)

    def multiplicities(self) -> tuple:
        return tuple(sorted((self.multiplicity(c, R) for c, R in self.cones), reverse=True))

    def to_subdivision(self, steps) -> Subdivision:
        F = self.F
        objs: dict = {}
        for c, R in self.cones:
            for T in self.faces(c, R):
                key = (T, self.home_of(T, c))
                objs.setdefault(key, None)
        built = {}
        for T, H in objs:
            rs = sorted(T, key=self.display)
            vecs = [self.vec(r, H) for r in rs]
            hc = F.cones[H]
            kc = cone_from_rays(hc.dim, vecs)
            E = kc.embedding
            emb = None if hc.embedding is None else hc.embedding @ E
            cone = KatoCone(kc.monoid, emb)
            basis = E.columns()
            ray_index = {}
            for r, vv in zip(rs, vecs):
                ray_index[echelon_coordinates(basis, vv)] = r
            ids = tuple(ray_index[tuple(x)] for x in cone.rays)
            built[(T, H)] = (cone, E, ids)
        order = sorted(built, key=lambda k: (len(k[0]), self.cone_key(0, k[0]), k[1]))
        index = {k: i for i, k in enumerate(order)}
        cones = [built[k][0] for k in order]
        gluings = []
        for k in order:
            T, H = k
            cone, E, ids = built[k]
            if not T:
                continue
            Einv = left_inverse(E)
            for f in cone.faces:
                if cone.face_dim(f) != cone.dim - 1:
                    continue
                T2 = frozenset(ids[i] for i in f)
                k2 = (T2, self._home_in(T2, H))
                E2 = built[k2][1]
                gluings.append(Gluing(index[k2], index[k], Einv @ self.F.face_map(k2[1], H) @ E2))
        source = KatoFan(cones, gluings, close=False)
        morphism = {index[k]: (k[1], built[k][1]) for k in order}
        return Subdivision(source, F, morphism, list(steps))

    def _home_in(self, T: frozenset, Q: int) -> int:
        cone = self.F.cones[Q]
        face = cone.minimal_face(*[self.vec(r, Q) for r in T])
        return self.F.point(Q, face)


def star_subdivide(F: KatoFan, v: tuple[int, Sequence[int]]) -> Subdivision:
    """Star subdivision of ``F`` at a lattice point ``v = (cone, coordinates)``.

    The coordinates are in the cone's own lattice.  The center is made
    primitive before subdividing.

    Raises:
        ZeroVector: if the point is zero.
        NotInFan: if the point is not in the cone.
    """
    P, coords = v
    if not 0 <= P < len(F.cones):
        raise NotInFan(f"no cone {P}")
    rc = _RayComplex(F)
    w, _ = rc.star(P, coords)
    mult = rc.multiplicities() if rc.is_simplicial() else None
    return rc.to_subdivision([Step("star", rc.display(w), mult)])


def barycentric_subdivision(F: KatoFan) -> Subdivision:
    """Star subdivide at the barycenters of all cones of dimension two or more,
    largest dimension first."""
    rc = _RayComplex(F)
    steps = []
    order = sorted((p for p in F.points if F.cones[p].dim >= 2), key=lambda p: (-F.cones[p].dim, F.sort_key(p)))
    for p in order:
        cone = F.cones[p]
        b = tuple(sum(col) for col in zip(*cone.rays))
        w, _ = rc.star(p, b)
        steps.append(Step("barycenter", rc.display(w)))
    return rc.to_subdivision(steps)


def _lex_less(a: Sequence, b: Sequence) -> bool:
    return tuple(a) < tuple(b)


def resolve(F: KatoFan) -> Subdivision:
    """Proper subdivision of ``F`` by a smooth fan.

    First the fan is made simplicial by starring at rays of non-simplicial
    cones (the lexicographically smallest ray that is not an apex of the
    cone).  Then the cone of largest multiplicity is starred at the nonzero
    lattice point ``sum c_i u_i`` (``0 <= c_i < 1``) with the smallest
    ``sum c_i``, ties broken by the display vector, until every cone has
    multiplicity one.  The sorted multiplicity list is asserted to drop
    strictly at every reduction step.
    """
    rc = _RayComplex(F)
    steps: list[Step] = []
    while True:
        bad = [(rc.cone_key(c, R), c, R) for c, R in rc.cones if len(R) > rc.dim(c)]
        if not bad:
            break
        _, c, R = min(bad, key=lambda t: t[0])
        d = rc.dim(c)
        r = None
        for cand in sorted(R, key=rc.display):
            others = [rc.vec(x, c) for x in R if x != cand]
            if rank(others, d) == d:
                r = cand
                break
        assert r is not None, "a non-simplicial cone is a pyramid over each of its rays"
        rc.star(rc.ray_home[r], rc.ray_vec[r])
        steps.append(Step("simplicialize", rc.display(r), rc.multiplicities() if rc.is_simplicial() else None))
    current = rc.multiplicities()
    while current and current[0] > 1:
        cands = [(-rc.multiplicity(c, R), rc.cone_key(c, R), c, R) for c, R in rc.cones]
        _, _, c, R = min(cands, key=lambda t: (t[0], t[1]))
        rs = sorted(R, key=rc.display)
        U = [rc.vec(r, c) for r in rs]
        cone = F.cones[c]
        best = None
        for pt, coeffs in parallelepiped_points(U):
            if not any(pt):
                continue
            key = (sum(coeffs, Fraction(0)), cone.display(pt))
            if best is None or key < best[0]:
                best = (key, pt)
        w, _ = rc.star(c, best[1])
        after = rc.multiplicities()
        assert _lex_less(after, current), f"multiplicities did not drop: {current} -> {after}"
        steps.append(Step("reduce", rc.display(w), after))
        current = after
    return rc.to_subdivision(steps)


@dataclass
class ProperCheck:
    """Outcome of :func:`is_proper_subdivision`."""

    ok: bool
    mode: str
    reason: str = ""
    source_points: int | None = None
    target_points: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _all_simplicial(F: KatoFan) -> bool:
    return all(c.is_simplicial() for c in F.cones)


def is_proper_subdivision(s: Subdivision, bound: int = 4, mode: str | None = None) -> ProperCheck:
    """Check that ``s`` is a proper subdivision.

    Exact mode (default when both fans are simplicial) decides that the
    images of the source cones' relative interiors partition every target
    cone and that every source lattice is mapped onto the lattice of its
    image.  Sampled mode counts preimages of every target lattice point with
    display sup-norm ``<= bound``; each must have exactly one.
    """
    if mode is None:
        mode = "exact" if _all_simplicial(s.source) and _all_simplicial(s.target) else "sampled"
    if not s.is_morphism():
        return ProperCheck(False, mode, "cone maps do not form a fan morphism")
    if mode == "exact":
        return _proper_exact(s)
    if mode == "sampled":
        return _proper_sampled(s, bound)
    raise ValidationError(f"unknown mode {mode!r}")


def _proper_exact(s: Subdivision) -> ProperCheck:
    src, tgt = s.source, s.target
    keys = set()
    for i, cone in enumerate(src.cones):
        H, A = s.morphism[i]
        A = as_matrix(A)
        hc = tgt.cones[H]
        if cone.dim:
            try:
                left_inverse(A)
            except ValueError:
                return ProperCheck(False, "exact", f"cone {i} is not mapped isomorphically onto its image lattice")
        imgs = [A @ r for r in cone.rays]
        centre = tuple(sum(col) for col in zip(*imgs)) if imgs else (0,) * hc.dim
        if not hc.in_relative_interior(centre):
            return ProperCheck(False, "exact", f"cone {i} does not map into the relative interior of cone {H}")
        key = (H, frozenset(imgs))
        if key in keys:
            return ProperCheck(False, "exact", f"cone {i} duplicates the image of another cone")
        keys.add(key)
    by_chart: dict = {c: [] for c in tgt.maximal_points}
    for i in src.maximal_points:
        H, A = s.morphism[i]
        if H not in by_chart or src.cones[i].dim != tgt.cones[H].dim:
            return ProperCheck(False, "exact", f"maximal cone {i} is not full-dimensional in a maximal cone")
        by_chart[H].append([as_matrix(A) @ r for r in src.cones[i].rays])
    for c, cells in by_chart.items():
        ok, why = _covers_once(tgt.cones[c], cells)
        if not ok:
            return ProperCheck(False, "exact", f"cone {c}: {why}")
    return ProperCheck(True, "exact")


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _covers_once(cone: KatoCone, cells: list[list[Vector]]) -> tuple[bool, str]:
    d = cone.dim
    if d == 0:
        return (len(cells) == 1, "expected exactly one cell")
    if not cells:
        return False, "no cells"
    facets: dict = {}
    normals = []
    for vecs in cells:
        if any(not cone.contains(v) for v in vecs):
            return False, "cell leaves the cone"
        own = []
        for i in range(d):
            rest = vecs[:i] + vecs[i + 1:]
            n = kernel_line(rest, d) if d > 1 else (1,)
            if dot(n, vecs[i]) < 0:
                n = tuple(-x for x in n)
            own.append(n)
            facets.setdefault(frozenset(rest), []).append(n)
        normals.append(own)
    for key, ns in facets.items():
        n = ns[0]
        boundary = all(dot(n, r) >= 0 for r in cone.rays)
        if boundary:
            if len(ns) != 1:
                return False, "boundary facet covered more than once"
        else:
            if len(ns) != 2 or ns[0] != tuple(-x for x in ns[1]):
                return False, "interior facet not shared by exactly two cells on opposite sides"
    for t in itertools.count(1):
        w = [Fraction(p) ** t / (1 + p) for p in _PRIMES[: len(cone.rays)]] if len(cone.rays) <= len(_PRIMES) else None
        if w is None:
            w = [Fraction(1, i + 2) ** t for i in range(len(cone.rays))]
        g = tuple(sum(wi * r[k] for wi, r in zip(w, cone.rays)) for k in range(d))
        if all(dot(n, g) != 0 for own in normals for n in own):
            break
        if t > 50:
            return False, "no generic point found"
    count = sum(1 for own in normals if all(dot(n, g) > 0 for n in own))
    return (count == 1, f"generic point covered {count} times")


class _Preimage:
    """Integer solver for ``A x = t`` with ``A`` injective."""

    def __init__(self, A: IntMatrix):
        self.A = A
        k = A.cols
        self.k = k
        if k == 0:
            self.rows = ()
            return
        for rows in itertools.combinations(range(A.rows), k):
            sub = IntMatrix([A.row(i) for i in rows], k)
            det = determinant(sub)
            if det:
                break
        self.rows = rows
        self.det = det
        # adjugate via cofactors
        M = sub.tolist()
        adj = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                minor = [row[:j] + row[j + 1:] for t, row in enumerate(M) if t != i]
                c = determinant(IntMatrix(minor, k - 1)) if k > 1 else 1
                adj[j][i] = (-1) ** (i + j) * c
        self.adj = adj

    def solve(self, t: Sequence[int]) -> Vector | None:
        if self.k == 0:
            return () if not any(t) else None
        ts = [t[i] for i in self.rows]
        x = []
        for row in self.adj:
            num = dot(row, ts)
            if num % self.det:
                return None
            x.append(num // self.det)
        x = tuple(x)
        return x if self.A @ x == tuple(t) else None


def _proper_sampled(s: Subdivision, bound: int) -> ProperCheck:
    src, tgt = s.source, s.target
    by_target: dict = {}
    for i, cone in enumerate(src.cones):
        H, A = s.morphism[i]
        by_target.setdefault(H, []).append((cone, _Preimage(as_matrix(A))))
    total = 0
    src_total = 0
    for Q, qc in enumerate(tgt.cones):
        ups = [(P, tgt.face_map(Q, P)) for P in tgt.cofaces_of(Q)]
        for t in cone_points(qc, bound, interior=True):
            total += 1
            count = 0
            for P, B in ups:
                tP = B @ t
                for cone, pre in by_target.get(P, ()):
                    x = pre.solve(tP)
                    if x is not None and cone.in_relative_interior(x):
                        count += 1
            src_total += count
            if count != 1:
                return ProperCheck(
                    False, "sampled", f"point {list(qc.display(t))} of cone {Q} has {count} preimages", src_total, total
                )
    return ProperCheck(True, "sampled", "", src_total, total)
