"""Kato cones, Kato fans and classical fans.

A :class:`KatoCone` is the spectrum of an fs sharp monoid.  It is stored as
the monoid together with the dual picture: the monoid's facet normals are the
primitive rays of a full-dimensional strongly convex cone ``sigma`` in the
cone's own lattice ``N = Z^k``.  Points of the cone correspond to faces of
``sigma`` (the zero face is the generic point, ``sigma`` itself the closed
point).

A :class:`KatoFan` is a finite set of cones glued by face maps.  Each gluing
is an injective lattice map ``N_small -> N_big`` sending ``small``
isomorphically onto a face of ``big``.  Points of the fan are the cones
themselves (one cone object per point after face closure).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .cones import incidence_faces, minimal_face
from .errors import NotStronglyConvex, NotSharp, SelfGluingError, ValidationError
from .lattice import (
    IntMatrix,
    Vector,
    as_matrix,
    dot,
    echelon_coordinates,
    left_inverse,
    primitive,
    rank,
    saturated_span_basis,
    solve_rational,
)
from .monoid import FsMonoid, PrimeIdeal, localize_sharpen, saturate, spec


class KatoCone:
    """Spectrum of an fs sharp monoid, with its dual cone of rays.

    Args:
        monoid: The monoid; its facet normals become the rays.
        embedding: Optional ``n x k`` matrix embedding the cone's lattice into
            an ambient ``Z^n`` (used for display and for classical fans).
    """

    def __init__(self, monoid: FsMonoid, embedding: IntMatrix | None = None):
        if monoid.embedding is not None:
            monoid = FsMonoid(monoid.rank, monoid.facets)
        self.monoid = monoid
        if embedding is not None:
            embedding = as_matrix(embedding)
            if embedding.cols != monoid.rank:
                raise ValidationError("cone embedding has the wrong number of columns")
        self.embedding = embedding

    @property
    def dim(self) -> int:
        return self.monoid.rank

    @property
    def rays(self) -> tuple[Vector, ...]:
        """Primitive rays in the cone's own lattice (the monoid's facets)."""
        return self.monoid.facets

    @property
    def dual_rays(self) -> tuple[Vector, ...]:
        """Facet normals of the cone (extreme rays of the monoid)."""
        return self.monoid.extreme_rays

    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    def display(self, v: Sequence) -> tuple:
        return tuple(v) if self.embedding is None else self.embedding @ v

    @cached_property
    def display_rays(self) -> tuple[Vector, ...]:
        return tuple(self.display(r) for r in self.rays)

    @cached_property
    def faces(self) -> tuple[frozenset, ...]:
        """Faces as frozensets of ray indices, smallest first."""
        return tuple(incidence_faces(self.rays, self.dual_rays))

    @property
    def full_face(self) -> frozenset:
        return frozenset(range(len(self.rays)))

    def face_dim(self, face: frozenset) -> int:
        return rank([self.rays[i] for i in face], self.dim) if face else 0

    def contains(self, v: Sequence) -> bool:
        return all(dot(u, v) >= 0 for u in self.dual_rays)

    def in_relative_interior(self, v: Sequence) -> bool:
        return all(dot(u, v) > 0 for u in self.dual_rays)

    def minimal_face(self, *points) -> frozenset:
        return minimal_face(self.rays, self.dual_rays, points)

    # points of the spectrum

    def face_to_prime(self, face: frozenset) -> PrimeIdeal:
        """Prime ideal of the point attached to an N-side face."""
        hb = self.monoid.local_hilbert_basis
        rays = [self.rays[i] for i in face]
        comp = frozenset(i for i, h in enumerate(hb) if all(dot(r, h) == 0 for r in rays))
        return PrimeIdeal(comp)

    def prime_to_face(self, p: PrimeIdeal) -> frozenset:
        hb = self.monoid.local_hilbert_basis
        comp = [hb[i] for i in p.complement_face]
        return frozenset(i for i, r in enumerate(self.rays) if all(dot(r, h) == 0 for h in comp))

    def points(self):
        return spec(self.monoid)

    def stalk(self, p: PrimeIdeal) -> FsMonoid:
        return localize_sharpen(self.monoid, p)

    def face_embedding(self, face: frozenset) -> IntMatrix:
        """Basis matrix (``k x dim face``) of the saturated span of a face."""
        basis = saturated_span_basis([self.rays[i] for i in face], self.dim)
        return IntMatrix.from_columns(basis, self.dim)

    def face_cone(self, face: frozenset) -> tuple["KatoCone", IntMatrix]:
        """The face as a cone in its own lattice, with its embedding into ``N``."""
        E = self.face_embedding(face)
        basis = E.columns()
        local = [echelon_coordinates(basis, self.rays[i]) for i in sorted(face)]
        emb = None if self.embedding is None else self.embedding @ E
        return KatoCone(FsMonoid(len(basis), tuple(local)), emb), E

    def __eq__(self, other) -> bool:
        return isinstance(other, KatoCone) and self.monoid == other.monoid and self.embedding == other.embedding

    def __hash__(self) -> int:
        return hash((self.monoid, self.embedding))

    def __repr__(self) -> str:
        return f"KatoCone(rays={list(self.display_rays)})"


def cone_from_rays(lattice_rank: int, rays: Sequence[Sequence[int]]) -> KatoCone:
    """Kato cone ``Spec(M cap sigma^vee)`` (sharpened) for ``sigma = cone(rays)``.

    The cone is stored in the saturated sublattice spanned by the rays; the
    embedding into ``Z^lattice_rank`` is kept for display.

    Raises:
        NotStronglyConvex: if the rays span a cone containing a line.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    for r in rays:
        if len(r) != lattice_rank:
            raise ValidationError(f"ray {list(r)} does not have length {lattice_rank}")
    rays = [r for r in rays if any(r)]
    basis = saturated_span_basis(rays, lattice_rank)
    k = len(basis)
    local = [echelon_coordinates(basis, r) for r in rays]
    try:
        m = saturate(local, k) if k else FsMonoid(0, ())
    except NotSharp:
        raise NotStronglyConvex("rays span a cone containing a line") from None
    # the cone sigma = cone(local); its dual monoid has the extreme rays as facets
    monoid = FsMonoid(k, m.extreme_rays)
    return KatoCone(monoid, IntMatrix.from_columns(basis, lattice_rank))


@dataclass(frozen=True)
class Gluing:
    """Face map ``N_small -> N_big`` onto a face of ``big``."""

    small: int
    big: int
    matrix: IntMatrix

    def face(self, fan: "KatoFan") -> frozenset:
        return _image_face(fan.cones[self.small], fan.cones[self.big], self.matrix)


def _image_face(small: KatoCone, big: KatoCone, A: IntMatrix) -> frozenset:
    index = {r: i for i, r in enumerate(big.rays)}
    out = []
    for r in small.rays:
        img = A @ r
        if img not in index:
            raise ValidationError(f"gluing sends ray {list(r)} to {list(img)}, not a ray of the big cone")
        out.append(index[img])
    face = frozenset(out)
    if face not in set(big.faces):
        raise ValidationError("gluing image is not a face of the big cone")
    return face


def _check_face_iso(small: KatoCone, big: KatoCone, A: IntMatrix) -> frozenset:
    if A.shape != (big.dim, small.dim):
        raise ValidationError(f"gluing matrix has shape {A.shape}, expected {(big.dim, small.dim)}")
    face = _image_face(small, big, A)
    if len(face) != len(small.rays) or big.face_dim(face) != small.dim:
        raise ValidationError("gluing is not an isomorphism onto a face")
    try:
        left_inverse(A)
    except ValueError:
        raise ValidationError("gluing is not a lattice isomorphism onto the face lattice") from None
    # rays correspond and the image is saturated, so the image lattice is the face lattice
    return face


def find_face_isomorphisms(small: KatoCone, big: KatoCone, face: frozenset) -> list[IntMatrix]:
    """All lattice isomorphisms of ``small`` onto the given face of ``big``."""
    face_rays = [big.rays[i] for i in sorted(face)]
    if len(face_rays) != len(small.rays):
        return []
    k = small.dim
    if k == 0:
        return [IntMatrix.zeros(big.dim, 0)]
    src_idx = []
    for i, r in enumerate(small.rays):
        if rank([small.rays[j] for j in src_idx] + [r], k) > len(src_idx):
            src_idx.append(i)
    src = [small.rays[i] for i in src_idx]
    found = []
    for img in itertools.permutations(face_rays, k):
        rows = []
        ok = True
        for c in range(big.dim):
            col = solve_rational([list(v) for v in src], [v[c] for v in img])
            if col is None or any(x.denominator != 1 for x in col):
                ok = False
                break
            rows.append([int(x) for x in col])
        if not ok:
            continue
        A = IntMatrix(rows, k)
        try:
            _check_face_iso(small, big, A)
        except ValidationError:
            continue
        if _image_face(small, big, A) == face and A not in found:
            found.append(A)
    return found


class KatoFan:
    """A finite Kato fan: cones glued along faces, closed under faces.

    Args:
        cones: The cone objects.
        gluings: Face maps between them.
        close: Add a cone object for every face that is not yet represented.

    Raises:
        ValidationError: on malformed gluings or duplicated points.
        SelfGluingError: when two faces of one cone get identified, or when
            gluing paths disagree (monodromy); use a ConeStack for those.
    """

    def __init__(self, cones: Sequence[KatoCone], gluings: Iterable[Gluing] = (), close: bool = True):
        self.cones: list[KatoCone] = list(cones)
        self.gluings: list[Gluing] = [Gluing(g.small, g.big, as_matrix(g.matrix)) for g in gluings]
        for g in self.gluings:
            for c in (g.small, g.big):
                if not 0 <= c < len(self.cones):
                    raise ValidationError(f"gluing refers to missing cone {c}")
            if g.small == g.big:
                raise SelfGluingError("a cone is glued to itself; encode this as a ConeStack")
            _check_face_iso(self.cones[g.small], self.cones[g.big], g.matrix)
        self._build(close)

    # validation and indexing

    def _build(self, close: bool) -> None:
        while True:
            missing = self._index()
            if not missing:
                return
            if not close:
                c, face = missing[0]
                raise ValidationError(f"face {sorted(face)} of cone {c} is not in the fan")
            for c, face in missing:
                small, E = self.cones[c].face_cone(face)
                self.cones.append(small)
                self.gluings.append(Gluing(len(self.cones) - 1, c, E))

    def _index(self) -> list:
        """Union the (cone, face) nodes; return faces lacking a cone object."""
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for c, cone in enumerate(self.cones):
            for f in cone.faces:
                parent[(c, f)] = (c, f)
        adj: dict = {}
        for gi, g in enumerate(self.gluings):
            small, big = self.cones[g.small], self.cones[g.big]
            rmap = {i: big.rays.index(g.matrix @ r) for i, r in enumerate(small.rays)}
            for f in small.faces:
                img = frozenset(rmap[i] for i in f)
                union((g.small, f), (g.big, img))
        classes: dict = {}
        for node in parent:
            classes.setdefault(find(node), []).append(node)
        missing = []
        self._point_of: dict = {}
        for members in classes.values():
            owners = [c for c, f in members if f == self.cones[c].full_face]
            seen: dict = {}
            for c, f in members:
                if c in seen and seen[c] != f:
                    raise SelfGluingError(
                        f"faces {sorted(seen[c])} and {sorted(f)} of cone {c} are identified; "
                        "self-gluing needs a ConeStack"
                    )
                seen[c] = f
            if len(owners) > 1:
                raise ValidationError(f"cones {sorted(owners)} represent the same point")
            if not owners:
                c, f = min(members, key=lambda m: (m[0], sorted(m[1])))
                missing.append((c, f))
                continue
            for node in members:
                self._point_of[node] = owners[0]
        if missing:
            missing.sort(key=lambda m: (m[0], len(m[1]), sorted(m[1])))
            # one representative per class is enough
            return missing
        self._transport()
        return []

    def _transport(self) -> None:
        """Compute face maps ``N_p -> N_c`` for every node and check they agree."""
        out_edges: dict = {}
        for g in self.gluings:
            out_edges.setdefault(g.small, []).append(g)
        in_edges: dict = {}
        for g in self.gluings:
            in_edges.setdefault(g.big, []).append(g)
        self._face_maps: dict = {}
        for p, cone in enumerate(self.cones):
            maps = {p: IntMatrix.identity(cone.dim)}
            queue = deque([p])
            while queue:
                c = queue.popleft()
                A = maps[c]
                nbrs = []
                for g in out_edges.get(c, []):
                    nbrs.append((g.big, g.matrix @ A))
                for g in in_edges.get(c, []):
                    # pull back through the small cone if the image lies in its face
                    face_img = _image_face(self.cones[g.small], self.cones[g.big], g.matrix)
                    here = frozenset(self.cones[c].rays.index(r) for r in (A @ q for q in cone.rays)) if cone.rays else frozenset()
                    if not here <= face_img:
                        continue
                    Linv = left_inverse(g.matrix)
                    nbrs.append((g.small, Linv @ A))
                for d, B in nbrs:
                    if d in maps:
                        if maps[d] != B:
                            raise SelfGluingError(
                                f"gluing paths from cone {p} to cone {d} disagree (monodromy); use a ConeStack"
                            )
                        continue
                    maps[d] = B
                    queue.append(d)
            for c, A in maps.items():
                face = frozenset(self.cones[c].rays.index(A @ r) for r in cone.rays)
                self._face_maps[(p, c)] = (face, A)

    # queries

    @property
    def points(self) -> list[int]:
        return list(range(len(self.cones)))

    def point(self, c: int, face: frozenset) -> int:
        """The point (cone object) representing ``face`` of cone ``c``."""
        return self._point_of[(c, frozenset(face))]

    def face_map(self, small: int, big: int) -> IntMatrix:
        """The lattice map ``N_small -> N_big`` of a face relation."""
        try:
            return self._face_maps[(small, big)][1]
        except KeyError:
            raise ValidationError(f"cone {small} is not a face of cone {big}") from None

    def face_in(self, small: int, big: int) -> frozenset:
        return self._face_maps[(small, big)][0]

    def leq(self, p: int, q: int) -> bool:
        """``p`` is a face of ``q`` (``q`` is a specialization of ``p``)."""
        return (p, q) in self._face_maps

    def faces_of(self, c: int) -> list[int]:
        return [p for p in self.points if self.leq(p, c)]

    def cofaces_of(self, c: int) -> list[int]:
        return [q for q in self.points if self.leq(c, q)]

    @cached_property
    def maximal_points(self) -> list[int]:
        return [p for p in self.points if not any(q != p and self.leq(p, q) for q in self.points)]

    @cached_property
    def generic_points(self) -> list[int]:
        return [p for p in self.points if not any(q != p and self.leq(q, p) for q in self.points)]

    def hasse(self) -> list[tuple[int, int]]:
        pts = self.points
        out = []
        for p in pts:
            for q in pts:
                if p != q and self.leq(p, q) and self.cones[q].dim == self.cones[p].dim + 1:
                    out.append((p, q))
        return sorted(out)

    @property
    def ambient_rank(self) -> int | None:
        ranks = {c.embedding.rows if c.embedding is not None else None for c in self.cones}
        if len(ranks) == 1 and None not in ranks:
            return ranks.pop()
        return None

    def display_rays(self, c: int) -> tuple:
        return self.cones[c].display_rays

    def sort_key(self, c: int):
        return (self.cones[c].dim, sorted(self.cones[c].display_rays))

    def __len__(self) -> int:
        return len(self.cones)

    def __eq__(self, other) -> bool:
        return isinstance(other, KatoFan) and self.cones == other.cones and self.gluings == other.gluings

    __hash__ = None

    def __repr__(self) -> str:
        return f"KatoFan({len(self.cones)} points)"


@dataclass
class ClassicalFan:
    """A fan in ``N_R = R^n``: primitive rays and cones as ray-index sets.

    On construction the rays are made primitive and sorted, the cones are
    closed under faces and sorted by ``(dim, indices)``, and the fan axioms are
    checked exactly (pass ``validate=False`` for trusted internal data).
    """

    lattice_rank: int
    rays: list
    cones: list
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        n = self.lattice_rank
        raw = [tuple(int(x) for x in r) for r in self.rays]
        for r in raw:
            if len(r) != n:
                raise ValidationError(f"ray {list(r)} does not have length {n}")
            if not any(r):
                raise ValidationError("zero ray")
        prim = [primitive(r) for r in raw]
        if len(set(prim)) != len(prim):
            raise ValidationError("duplicate rays")
        order = sorted(range(len(prim)), key=lambda i: prim[i])
        new_index = {old: new for new, old in enumerate(order)}
        self.rays = [prim[i] for i in order]
        cones = set()
        for c in self.cones:
            idx = [int(i) for i in c]
            for i in idx:
                if not 0 <= i < len(prim):
                    raise ValidationError(f"cone refers to missing ray {i}")
            cones.add(frozenset(new_index[i] for i in idx))
        closed = set()
        for c in cones:
            kc = cone_from_rays(n, [self.rays[i] for i in sorted(c)])
            if len(kc.rays) != len(c):
                raise ValidationError(f"cone {sorted(c)} has a listed ray that is not extreme")
            for f in self._faces(c):
                closed.add(f)
        closed.add(frozenset())
        self.cones = sorted(closed, key=lambda s: (len(s), sorted(s)))
        if self.validate:
            self._check_intersections()

    def _faces(self, c: frozenset) -> list[frozenset]:
        idx = sorted(c)
        vecs = [self.rays[i] for i in idx]
        if not vecs:
            return [frozenset()]
        kc = cone_from_rays(self.lattice_rank, vecs)
        loc = {kc.display(r): i for i, r in enumerate(kc.rays)}
        pos = {i: loc[self.rays[i]] for i in idx}
        back = {v: k for k, v in pos.items()}
        return [frozenset(back[j] for j in f) for f in kc.faces]

    def _check_intersections(self) -> None:
        from .cones import cone_inequalities

        n = self.lattice_rank
        maximal = self.maximal_cones()
        ineq = {}
        for c in maximal:
            ineq[c] = cone_inequalities([self.rays[i] for i in sorted(c)], n)
        from .cones import pointed_rays

        for a, b in itertools.combinations(maximal, 2):
            common = a & b
            if common not in set(self._faces(a)) or common not in set(self._faces(b)):
                raise ValidationError(f"cones {sorted(a)} and {sorted(b)} do not meet in a common face")
            G = []
            for c in (a, b):
                eqs, nrm = ineq[c]
                G += list(nrm) + list(eqs) + [tuple(-x for x in e) for e in eqs]
            meet = pointed_rays(G, n)
            target = {self.rays[i] for i in common}
            if set(meet) != target:
                raise ValidationError(
                    f"cones {sorted(a)} and {sorted(b)} overlap beyond their common face {sorted(common)}"
                )

    def maximal_cones(self) -> list[frozenset]:
        return [c for c in self.cones if not any(c < d for d in self.cones)]

    def dim(self, c: frozenset) -> int:
        return rank([self.rays[i] for i in c], self.lattice_rank) if c else 0

    def is_simplicial(self) -> bool:
        return all(len(c) == self.dim(c) for c in self.cones)

    def cone_index(self, rays: Iterable[int]) -> int:
        return self.cones.index(frozenset(rays))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassicalFan)
            and self.lattice_rank == other.lattice_rank
            and self.rays == other.rays
            and self.cones == other.cones
        )


def kato_fan_from_classical(fan: ClassicalFan) -> KatoFan:
    """Kato fan with one point per cone of ``fan`` (same indexing)."""
    n = fan.lattice_rank
    cones = [cone_from_rays(n, [fan.rays[i] for i in sorted(c)]) for c in fan.cones]
    index = {c: i for i, c in enumerate(fan.cones)}
    gluings = []
    for i, c in enumerate(fan.cones):
        dc = fan.dim(c)
        for sub in fan._faces(c):
            if fan.dim(sub) == dc - 1:
                small, big = cones[index[sub]], cones[i]
                A = left_inverse(big.embedding) @ small.embedding
                gluings.append(Gluing(index[sub], i, A))
    return KatoFan(cones, gluings, close=False)


def classical_from_kato_fan(F: KatoFan) -> ClassicalFan:
    """Inverse of :func:`kato_fan_from_classical` for embedded fans."""
    n = F.ambient_rank
    if n is None:
        raise ValidationError("the Kato fan has no common ambient lattice")
    rays = sorted({r for c in F.cones for r in c.display_rays})
    idx = {r: i for i, r in enumerate(rays)}
    cones = [[idx[r] for r in F.cones[p].display_rays] for p in F.maximal_points]
    return ClassicalFan(n, rays, cones)


@dataclass(frozen=True)
class IntegralPoint:
    """A morphism ``Spec N -> F``: a lattice point in the relative interior of a cone."""

    cone: int
    coords: Vector
    vector: Vector


def integral_points(F: KatoFan, bound: int) -> list[IntegralPoint]:
    """Lattice points of the fan with display sup-norm at most ``bound``.

    Each point is reported once, for the cone whose relative interior holds
    it.  Display coordinates are ambient when the cone is embedded and the
    cone's own coordinates otherwise.
    """
    if bound < 0:
        raise ValidationError("bound must be nonnegative")
    out = []
    for p, cone in enumerate(F.cones):
        for v in cone_points(cone, bound, interior=True):
            out.append(IntegralPoint(p, v, cone.display(v)))
    out.sort(key=lambda q: (q.vector, F.sort_key(q.cone)))
    return out


def cone_points(cone: KatoCone, bound: int, interior: bool = False) -> list[Vector]:
    """Lattice points (own coordinates) of a cone with display sup-norm ``<= bound``."""
    k = cone.dim
    if k == 0:
        return [()]
    test = cone.in_relative_interior if interior else cone.contains
    pts = []
    if cone.embedding is None:
        for v in itertools.product(range(-bound, bound + 1), repeat=k):
            if test(v):
                pts.append(v)
        return pts
    E = cone.embedding
    for w in _box_in_image(E, left_inverse(E), bound):
        if test(w):
            pts.append(w)
    return pts


def _box_in_image(E: IntMatrix, Linv: IntMatrix, bound: int):
    n, k = E.shape
    if k == n:
        for w in itertools.product(range(-bound, bound + 1), repeat=n):
            v = Linv @ w
            yield v
        return
    # pick k coordinates where E is invertible; points are determined by them
    from .lattice import determinant

    for rows in itertools.combinations(range(n), k):
        sub = IntMatrix([E.row(i) for i in rows], k)
        if determinant(sub) != 0:
            break
    seen = set()
    for w in itertools.product(range(-bound, bound + 1), repeat=k):
        x = solve_rational(sub.tolist(), w)
        if any(c.denominator != 1 for c in x):
            continue
        v = tuple(int(c) for c in x)
        full = E @ v
        if max((abs(t) for t in full), default=0) <= bound and v not in seen:
            seen.add(v)
            yield v


def locate(F: KatoFan, c: int, v: Sequence[int]) -> tuple[int, Vector]:
    """Minimal point of ``F`` whose relative interior holds ``v`` (in cone ``c``)."""
    cone = F.cones[c]
    if not cone.contains(v):
        from .errors import NotInFan

        raise NotInFan(f"{list(v)} is not in cone {c}")
    face = cone.minimal_face(v)
    p = F.point(c, face)
    A = F.face_map(p, c)
    return p, left_inverse(A) @ v


def fan_morphism_check(morphism: dict, F: KatoFan, G: KatoFan) -> bool:
    """Whether per-cone lattice maps define a morphism of Kato fans ``F -> G``.

    Args:
        morphism: Maps each cone index of ``F`` to ``(cone index of G, matrix)``
            where the matrix sends ``N`` of the source cone into ``N`` of the
            target cone.
    """
    for c in F.points:
        if c not in morphism:
            return False
        d, A = morphism[c]
        A = as_matrix(A)
        if A.shape != (G.cones[d].dim, F.cones[c].dim):
            return False
        if not all(G.cones[d].contains(A @ r) for r in F.cones[c].rays):
            return False
    for g in F.gluings:
        ds, As = morphism[g.small]
        db, Ab = morphism[g.big]
        As, Ab = as_matrix(As), as_matrix(Ab)
        if not G.leq(ds, db):
            return False
        if G.face_map(ds, db) @ As != Ab @ g.matrix:
            return False
    return True
