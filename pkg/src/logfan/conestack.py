"""Cone stacks: cones with face isomorphisms that need not be injective on points.

A cone stack is a category whose objects are Kato cones and whose arrows are
isomorphisms onto faces.  Unlike a Kato fan, a cone may map onto several
faces of another cone (or onto itself), so points are counted up to the
equivalence generated by the arrows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .conecomplex import INF, ExtendedPoint, cone_values, point_from_values, reduce_mod_span
from .errors import ValidationError
from .katofan import KatoCone, KatoFan, _check_face_iso, cone_points
from .lattice import IntMatrix, as_matrix, dot, solve_rational
from .monoid import FsMonoid, is_monoid_hom

DEFAULT_CLOSURE_BOUND = 10000


@dataclass(frozen=True)
class Arrow:
    """Face isomorphism ``N_src -> N_dst`` onto a face of ``dst``."""

    src: int
    dst: int
    matrix: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))


class ConeStack:
    """Objects (Kato cones) and generating arrows; identities are implicit.

    Args:
        cones: The objects.
        arrows: Generating face isomorphisms.
        closure_bound: Maximum number of arrows in the composition closure.

    Raises:
        ValidationError: if an arrow is not a face isomorphism.
    """

    def __init__(self, cones: Sequence[KatoCone], arrows: Sequence[Arrow] = (), closure_bound: int = DEFAULT_CLOSURE_BOUND):
        self.cones = list(cones)
        self.arrows = list(arrows)
        self.closure_bound = closure_bound
        self.validate()

    def validate(self) -> None:
        n = len(self.cones)
        keys = [(a.src, a.dst, a.matrix) for a in self.arrows]
        if len(set(keys)) != len(keys):
            raise ValidationError("an arrow is declared twice")
        for a in self.arrows:
            if not (0 <= a.src < n and 0 <= a.dst < n):
                raise ValidationError(f"arrow {a.src}->{a.dst} refers to a missing object")
            _check_face_iso(self.cones[a.src], self.cones[a.dst], a.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConeStack) and self.cones == other.cones and self.arrows == other.arrows

    __hash__ = None

    def face_of(self, a: Arrow) -> frozenset:
        """Ray indices of the face of ``dst`` hit by an arrow."""
        src, dst = self.cones[a.src], self.cones[a.dst]
        index = {r: i for i, r in enumerate(dst.rays)}
        return frozenset(index[a.matrix @ r] for r in src.rays)

    def closure(self) -> dict:
        """All composites, keyed by ``(src, dst)``, identities included.

        Raises:
            ValidationError: if the closure exceeds ``closure_bound`` arrows.
        """
        maps: dict = {(i, i): [IntMatrix.identity(c.dim)] for i, c in enumerate(self.cones)}
        seen = {(i, i, m) for (i, _), ms in maps.items() for m in ms}
        frontier = []
        for a in self.arrows:
            if (a.src, a.dst, a.matrix) not in seen:
                seen.add((a.src, a.dst, a.matrix))
                maps.setdefault((a.src, a.dst), []).append(a.matrix)
                frontier.append((a.src, a.dst, a.matrix))
        while frontier:
            nxt = []
            for s, d, m in frontier:
                for a in self.arrows:
                    if a.src != d:
                        continue
                    comp = (s, a.dst, a.matrix @ m)
                    if comp in seen:
                        continue
                    seen.add(comp)
                    if len(seen) > self.closure_bound:
                        raise ValidationError(f"arrow closure exceeds {self.closure_bound} arrows")
                    maps.setdefault((s, a.dst), []).append(comp[2])
                    nxt.append(comp)
            frontier = nxt
        return maps

    def automorphism_group(self, obj: int) -> list[IntMatrix]:
        """Automorphisms of one object, identity first."""
        return self.closure()[(obj, obj)]

    def has_nontrivial_automorphisms(self) -> bool:
        cl = self.closure()
        return any(len(cl[(i, i)]) > 1 for i in range(len(self.cones)))

    def display(self, obj: int, v: Sequence) -> tuple:
        return self.cones[obj].display(v)


@dataclass(frozen=True)
class StackPoint:
    """An isomorphism class of lattice points, with its members inside the bound."""

    representative: tuple
    members: tuple


def _union_find():
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    return find, union


def integral_points_up_to_iso(S: ConeStack, bound: int) -> list[StackPoint]:
    """Lattice points of all objects with display sup-norm at most ``bound``,
    modulo the equivalence generated by the arrows.

    Points are ``(object, coords)`` pairs.  Images of bounded points are joined
    even when they fall outside the bound, so classes are never split by the
    cutoff.
    """
    if bound < 0:
        raise ValidationError("bound must be nonnegative")
    find, union = _union_find()
    bounded = set()
    for i, c in enumerate(S.cones):
        for v in cone_points(c, bound):
            bounded.add((i, tuple(v)))
            find((i, tuple(v)))
    for a in S.arrows:
        src, dst = S.cones[a.src], S.cones[a.dst]
        for v in cone_points(src, bound):
            union((a.src, tuple(v)), (a.dst, a.matrix @ v))
        if src.dim == 0:
            continue
        cols = a.matrix.tolist()
        for w in cone_points(dst, bound):
            x = solve_rational(cols, list(w))
            if x is None or any(t.denominator != 1 for t in x):
                continue
            v = tuple(int(t) for t in x)
            if a.matrix @ v == tuple(w) and src.contains(v):
                union((a.src, v), (a.dst, tuple(w)))
    classes: dict = {}
    for p in bounded:
        classes.setdefault(find(p), []).append(p)
    out = [StackPoint(min(m), tuple(sorted(m))) for m in classes.values()]
    out.sort(key=lambda s: (S.cones[s.representative[0]].dim, s.representative))
    return out


def from_kato_fan(F: KatoFan) -> ConeStack:
    """The cone stack with the fan's cones as objects and its gluings as arrows."""
    return ConeStack(F.cones, [Arrow(g.small, g.big, g.matrix) for g in F.gluings])


def artin_hom(M: FsMonoid, N: FsMonoid, bound: int) -> list[IntMatrix]:
    """Morphisms of Artin cones ``A_M -> A_N``, i.e. monoid homomorphisms ``N -> M``.

    Matrices act on ambient coordinates (``rank M x rank N``) and have
    entries in ``[-bound, bound]``.
    """
    if bound < 0:
        raise ValidationError("bound must be nonnegative")
    rows, cols = M.ambient_rank, N.ambient_rank
    out = []
    for entries in itertools.product(range(-bound, bound + 1), repeat=rows * cols):
        A = IntMatrix([entries[i * cols:(i + 1) * cols] for i in range(rows)], cols)
        if is_monoid_hom(A, N, M):
            out.append(A)
    return out


class StackExtendedComplex:
    """Extended points of a cone stack, modulo the arrows (skeleton mode)."""

    def __init__(self, stack: ConeStack):
        self.stack = stack

    def make(self, obj: int, infinity_face: Sequence[int], functional: Sequence) -> ExtendedPoint:
        """Canonical representative of the class of ``(obj, infinity_face, functional)``."""
        c = self.stack.cones[obj]
        tau = frozenset(infinity_face)
        if tau not in set(c.faces):
            raise ValidationError(f"{sorted(tau)} is not a face of object {obj}")
        if len(functional) != c.dim:
            raise ValidationError(f"functional must have length {c.dim}")
        tau2, x, _ = point_from_values(c, cone_values(c, tau, functional))
        return min(self.orbit(ExtendedPoint(obj, tau2, x)), key=ExtendedPoint.key)

    def orbit(self, u: ExtendedPoint) -> list[ExtendedPoint]:
        """All representatives of ``u`` reachable through arrows in either direction."""
        seen = {u.key(): u}
        frontier = [u]
        while frontier:
            nxt = []
            for p in frontier:
                for q in self._neighbours(p):
                    if q.key() not in seen:
                        seen[q.key()] = q
                        nxt.append(q)
            frontier = nxt
        return sorted(seen.values(), key=ExtendedPoint.key)

    def _neighbours(self, u: ExtendedPoint):
        S = self.stack
        for a in S.arrows:
            if a.src == u.cone:
                dst = S.cones[a.dst]
                index = {r: i for i, r in enumerate(dst.rays)}
                tau = frozenset(index[a.matrix @ S.cones[a.src].rays[j]] for j in u.infinity_face)
                x = reduce_mod_span(a.matrix @ u.functional, [dst.rays[i] for i in tau])
                yield ExtendedPoint(a.dst, tau, x)
            if a.dst == u.cone:
                back = self._pull_back(a, u)
                if back is not None:
                    yield back

    def _pull_back(self, a: Arrow, u: ExtendedPoint) -> ExtendedPoint | None:
        S = self.stack
        src, dst = S.cones[a.src], S.cones[a.dst]
        vals = cone_values(dst, u.infinity_face, u.functional)
        _, _, zero_face = point_from_values(dst, vals)
        image = S.face_of(a)
        if not zero_face <= image:
            return None
        hb = dst.monoid.local_hilbert_basis
        finite = [i for i, v in enumerate(vals) if v != INF]
        At = a.matrix.T
        if src.dim == 0:
            return ExtendedPoint(a.src, frozenset(), ())
        rows = [list(At @ hb[i]) for i in finite]
        x = solve_rational(rows, [vals[i] for i in finite]) if rows else (0,) * src.dim
        tau_rays = {dst.rays[i] for i in u.infinity_face}
        tau = frozenset(j for j, r in enumerate(src.rays) if a.matrix @ r in tau_rays)
        return ExtendedPoint(a.src, tau, reduce_mod_span(x, [src.rays[j] for j in tau]))

    def same_point(self, u: ExtendedPoint, v: ExtendedPoint) -> bool:
        return v.key() in {p.key() for p in self.orbit(u)}

    def values(self, u: ExtendedPoint) -> list:
        c = self.stack.cones[u.cone]
        return cone_values(c, u.infinity_face, u.functional)


def extended_points_of_stack(S: ConeStack) -> StackExtendedComplex:
    return StackExtendedComplex(S)
