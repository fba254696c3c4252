"""Small exact polyhedral routines shared by the monoid and fan modules.

Cones here are always rational polyhedral cones in ``Q^n`` given either by
generators (columns of a ray list) or by inequalities ``<g, x> >= 0``.  The
dimension is small (at most four in practice) so subset enumeration is fine.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .lattice import (
    IntMatrix,
    Vector,
    dot,
    echelon_coordinates,
    kernel_basis,
    left_inverse,
    primitive,
    rank,
    saturated_span_basis,
)


def kernel_line(rows: Sequence[Sequence[int]], n: int) -> Vector | None:
    """Primitive generator of a one-dimensional integer kernel, else ``None``."""
    if n == 2 and len(rows) == 1:
        a, b = rows[0]
        if a == 0 and b == 0:
            return None
        return primitive((-b, a)) if (a, b) != (0, 0) else None
    if n == 3 and len(rows) == 2:
        (a1, a2, a3), (b1, b2, b3) = rows
        c = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
        return primitive(c) if any(c) else None
    K = kernel_basis(IntMatrix(rows, n))
    if K.cols != 1:
        return None
    return K.col(0)


def pointed_rays(G: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Primitive extreme rays of the pointed cone ``{x : G x >= 0}``.

    Raises ``ValueError`` if the cone contains a line (``rank G < n``).
    """
    G = [tuple(g) for g in G if any(g)]
    if n == 0:
        return []
    if rank(G, n) < n:
        raise ValueError("cone is not pointed")
    found = set()
    for sub in itertools.combinations(range(len(G)), n - 1):
        rows = [G[i] for i in sub]
        v = kernel_line(rows, n)
        if v is None:
            continue
        vals = [dot(g, v) for g in G]
        if all(x >= 0 for x in vals):
            found.add(v)
        elif all(x <= 0 for x in vals):
            found.add(tuple(-x for x in v))
    return sorted(found)


def facet_normals(V: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Inward primitive facet normals of ``cone(V)``, assuming ``V`` spans ``Q^n``."""
    return pointed_rays(V, n)


def extreme_rays(V: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Primitive extreme rays of a pointed full-dimensional ``cone(V)``."""
    return pointed_rays(facet_normals(V, n), n)


def incidence_faces(rays: Sequence[Sequence[int]], normals: Sequence[Sequence[int]]) -> list[frozenset]:
    """All faces of a cone, as frozensets of ray indices.

    ``normals`` are the facet normals; the faces are the intersections of the
    facet zero-sets, plus the whole cone.
    """
    full = frozenset(range(len(rays)))
    facets = {frozenset(i for i, r in enumerate(rays) if dot(nv, r) == 0) for nv in normals}
    faces = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for f in frontier:
            for g in facets:
                h = f & g
                if h not in faces:
                    faces.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(faces, key=lambda s: (len(s), sorted(s)))


def minimal_face(rays: Sequence[Sequence[int]], normals: Sequence[Sequence[int]], points) -> frozenset:
    """Ray indices of the smallest face containing all ``points``."""
    tight = [nv for nv in normals if all(dot(nv, p) == 0 for p in points)]
    return frozenset(i for i, r in enumerate(rays) if all(dot(nv, r) == 0 for nv in tight))


def cone_inequalities(gens: Sequence[Sequence[int]], n: int) -> tuple[list[Vector], list[Vector]]:
    """Equations and inequalities describing ``cone(gens)`` in ``Q^n``.

    Returns ``(equations, normals)`` with ``cone = {x : E x = 0, N x >= 0}``.
    The normals are integer vectors of ``Z^n`` restricting to the primitive
    facet normals inside the span.
    """
    gens = [tuple(g) for g in gens if any(g)]
    basis = saturated_span_basis(gens, n)
    k = len(basis)
    if k == 0:
        eqs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return eqs, []
    eqs = [tuple(c) for c in kernel_basis(IntMatrix(basis, n)).columns()]
    local = [echelon_coordinates(basis, g) for g in gens]
    local_normals = facet_normals(local, k)
    # lift: find m in Z^n with B m = f; B^T has an integral left inverse
    Linv = left_inverse(IntMatrix(basis, n).T)  # k x n
    lift = Linv.T
    normals = [lift @ f for f in local_normals]
    return eqs, normals


def in_cone(gens: Sequence[Sequence[int]], x: Sequence, n: int) -> bool:
    eqs, normals = cone_inequalities(gens, n)
    return all(dot(e, x) == 0 for e in eqs) and all(dot(nv, x) >= 0 for nv in normals)


def is_pointed(gens: Sequence[Sequence[int]], n: int) -> bool:
    gens = [tuple(g) for g in gens if any(g)]
    basis = saturated_span_basis(gens, n)
    k = len(basis)
    if k == 0:
        return True
    local = [echelon_coordinates(basis, g) for g in gens]
    return rank(facet_normals(local, k), k) == k
