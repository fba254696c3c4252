"""Fine, saturated, sharp monoids.

An :class:`FsMonoid` is stored in facet form inside its own lattice ``Z^r``
(``r`` = rank of the groupification): the monoid is the set of lattice points
``v`` with ``<n, v> >= 0`` for every stored facet normal ``n``.  If it was built
from vectors in a bigger lattice ``Z^d``, an ``embedding`` (a ``d x r`` integer
matrix with saturated image) records where it sits.

Facet normals of the monoid are the primitive rays of the dual cone, so a
monoid in facet form is the same data as a strongly convex cone on the
``N`` side; the Kato fan code relies on that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .cones import facet_normals, incidence_faces, pointed_rays
from .errors import NotAMonoidHom, NotSharp, ValidationError
from .lattice import (
    IntMatrix,
    Vector,
    as_matrix,
    cokernel_invariants,
    dot,
    echelon_coordinates,
    kernel_basis,
    left_inverse,
    parallelepiped_points,
    primitive,
    rank,
    saturated_span_basis,
    smith_normal_form,
)


@dataclass(frozen=True)
class FsMonoid:
    """Fine saturated sharp monoid ``{v in Z^rank : F v >= 0}``.

    Attributes:
        rank: Rank of the groupification.
        facets: Sorted primitive inward facet normals, in local coordinates.
        embedding: Optional ``ambient_rank x rank`` matrix placing the monoid
            in a bigger lattice; ``None`` means the monoid is its own ambient.
    """

    rank: int
    facets: tuple[Vector, ...]
    embedding: IntMatrix | None = field(default=None, compare=True)

    def __post_init__(self):
        facets = tuple(sorted({primitive(tuple(f)) for f in self.facets}))
        object.__setattr__(self, "facets", facets)
        if any(len(f) != self.rank for f in facets):
            raise ValidationError("facet normal length does not match rank")
        if self.embedding is not None and self.embedding.cols != self.rank:
            raise ValidationError("embedding has the wrong number of columns")

    # construction

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence[int]], ambient_rank: int) -> "FsMonoid":
        return saturate(generators, ambient_rank)

    @classmethod
    def from_facets(cls, facets: Sequence[Sequence[int]], ambient_rank: int) -> "FsMonoid":
        """Monoid of lattice points of ``{v : <f, v> >= 0}`` in ``Z^ambient_rank``.

        The inequalities may be redundant or cut out a lower-dimensional cone.
        Raises ``NotSharp`` when the cone contains a line.
        """
        try:
            rays = pointed_rays(facets, ambient_rank)
        except ValueError:
            raise NotSharp("inequalities define a cone containing a line") from None
        return saturate(rays, ambient_rank)

    @classmethod
    def free(cls, r: int) -> "FsMonoid":
        """The monoid ``N^r``."""
        return cls(r, tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))

    # basic data

    @property
    def ambient_rank(self) -> int:
        return self.embedding.rows if self.embedding is not None else self.rank

    def to_ambient(self, v: Sequence[int]) -> Vector:
        return tuple(v) if self.embedding is None else self.embedding @ v

    def to_local(self, v: Sequence[int]) -> Vector | None:
        """Local coordinates of an ambient lattice vector, or ``None`` if outside."""
        if self.embedding is None:
            return tuple(v)
        loc = self._left_inverse @ v
        return loc if self.embedding @ loc == tuple(v) else None

    @cached_property
    def _left_inverse(self) -> IntMatrix:
        return left_inverse(self.embedding)

    @cached_property
    def extreme_rays(self) -> tuple[Vector, ...]:
        """Primitive extreme rays of the monoid's cone, in local coordinates."""
        return tuple(pointed_rays(self.facets, self.rank))

    @cached_property
    def local_hilbert_basis(self) -> tuple[Vector, ...]:
        """Hilbert basis in local coordinates, ordered like :attr:`hilbert_basis`."""
        hb = _hilbert_basis_local(self.facets, self.extreme_rays, self.rank)
        return tuple(sorted(hb, key=self.to_ambient))

    @cached_property
    def hilbert_basis(self) -> tuple[Vector, ...]:
        """Minimal generators in ambient coordinates, sorted lexicographically."""
        return tuple(self.to_ambient(h) for h in self.local_hilbert_basis)

    def contains_local(self, v: Sequence[int]) -> bool:
        return all(dot(f, v) >= 0 for f in self.facets)

    def contains(self, v: Sequence[int]) -> bool:
        """Membership of an ambient lattice vector."""
        loc = self.to_local(v)
        return loc is not None and self.contains_local(loc)

    @cached_property
    def faces(self) -> tuple[frozenset, ...]:
        """All faces as frozensets of Hilbert basis indices, smallest first."""
        hb = self.local_hilbert_basis
        return tuple(incidence_faces(hb, self.facets))

    def face_of(self, indices) -> frozenset:
        """Smallest face containing the given Hilbert basis indices."""
        hb = self.local_hilbert_basis
        pts = [hb[i] for i in indices]
        tight = [f for f in self.facets if all(dot(f, p) == 0 for p in pts)]
        return frozenset(i for i, h in enumerate(hb) if all(dot(f, h) == 0 for f in tight))

    def is_trivial(self) -> bool:
        return self.rank == 0

    def __repr__(self) -> str:
        return f"FsMonoid(rank={self.rank}, facets={list(self.facets)})"


def _hilbert_basis_local(facets, rays, r) -> list[Vector]:
    if r == 0:
        return []
    cands = set(rays)
    for sub in itertools.combinations(rays, r):
        if rank(sub, r) < r:
            continue
        for pt, _ in parallelepiped_points(sub):
            if any(pt):
                cands.add(pt)
    # degree: a strictly positive functional on the pointed cone
    deg = tuple(sum(col) for col in zip(*facets))

    def key(v):
        return (dot(deg, v), v)

    kept: list[Vector] = []
    for x in sorted(cands, key=key):
        reducible = False
        for h in kept:
            diff = tuple(a - b for a, b in zip(x, h))
            if all(dot(f, diff) >= 0 for f in facets):
                reducible = True
                break
        if not reducible:
            kept.append(x)
    return kept


def saturate(generators: Sequence[Sequence[int]], ambient_rank: int) -> FsMonoid:
    """Saturation of the monoid generated by ``generators`` in ``Z^ambient_rank``.

    The result lives in the saturated sublattice spanned by the generators;
    its embedding is recorded when that sublattice is proper (or not the
    standard coordinate lattice).

    Raises:
        NotSharp: if the generated cone contains a line.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != ambient_rank:
            raise ValidationError(f"generator {list(g)} does not have length {ambient_rank}")
    gens = [g for g in gens if any(g)]
    basis = saturated_span_basis(gens, ambient_rank)
    k = len(basis)
    if k == 0:
        emb = None if ambient_rank == 0 else IntMatrix.zeros(ambient_rank, 0)
        return FsMonoid(0, (), emb)
    local = [echelon_coordinates(basis, g) for g in gens]
    normals = facet_normals(local, k)
    if rank(normals, k) < k:
        raise NotSharp("generated cone contains a line")
    emb = IntMatrix.from_columns(basis, ambient_rank)
    if k == ambient_rank and emb == IntMatrix.identity(k):
        emb = None
    return FsMonoid(k, tuple(normals), emb)


def hilbert_basis(cone_facets: Sequence[Sequence[int]], ambient_rank: int) -> list[Vector]:
    """Hilbert basis of the lattice points of ``{v : <f, v> >= 0}``."""
    return list(FsMonoid.from_facets(cone_facets, ambient_rank).hilbert_basis)


def dual_cone(rays: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Primitive generators of the dual cone ``{m : <m, r> >= 0 for all rays}``.

    The generators are the extreme rays of the part of the dual inside the
    span of the rays, followed by plus and minus a basis of the orthogonal
    complement (the lineality space).  Dualizing the output again returns
    the extreme rays of the input cone.
    """
    rays = [tuple(r) for r in rays if any(r)]
    basis = saturated_span_basis(rays, n)
    k = len(basis)
    out = set()
    if k:
        # dual inside span: m = B^T y with (rays . B^T) y >= 0
        G = [tuple(dot(r, b) for b in basis) for r in rays]
        try:
            ys = pointed_rays(G, k)
        except ValueError:
            raise NotSharp("rays do not span a strongly convex cone") from None
        for y in ys:
            m = tuple(sum(y[i] * basis[i][j] for i in range(k)) for j in range(n))
            out.add(primitive(m))
    perp = kernel_basis(IntMatrix(rays, n)) if rays else IntMatrix.identity(n)
    for c in perp.columns():
        out.add(tuple(c))
        out.add(tuple(-x for x in c))
    return sorted(out)


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime ideal, recorded by its complement face (Hilbert basis indices)."""

    complement_face: frozenset

    def __post_init__(self):
        object.__setattr__(self, "complement_face", frozenset(self.complement_face))

    def __repr__(self) -> str:
        return f"PrimeIdeal(complement_face={sorted(self.complement_face)})"

    def contains_index(self, i: int) -> bool:
        return i not in self.complement_face


@dataclass
class Spectrum:
    """The finite poset of prime ideals of a monoid, ordered by inclusion."""

    monoid: FsMonoid
    primes: list[PrimeIdeal]

    @property
    def generic(self) -> PrimeIdeal:
        return PrimeIdeal(frozenset(range(len(self.monoid.hilbert_basis))))

    @property
    def closed(self) -> PrimeIdeal:
        return PrimeIdeal(frozenset())

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def leq(self, p: PrimeIdeal, q: PrimeIdeal) -> bool:
        """``p`` is contained in ``q`` (``q`` is a specialization of ``p``)."""
        return q.complement_face <= p.complement_face

    def hasse(self) -> list[tuple[int, int]]:
        """Covering pairs ``(i, j)`` with ``primes[i]`` covered by ``primes[j]``."""
        P = self.primes
        out = []
        for i, p in enumerate(P):
            for j, q in enumerate(P):
                if i == j or not self.leq(p, q):
                    continue
                if any(k not in (i, j) and self.leq(p, r) and self.leq(r, q) for k, r in enumerate(P)):
                    continue
                out.append((i, j))
        return out

    def join(self, p: PrimeIdeal, q: PrimeIdeal) -> PrimeIdeal:
        """Smallest prime containing both."""
        return PrimeIdeal(p.complement_face & q.complement_face)

    def meet(self, p: PrimeIdeal, q: PrimeIdeal) -> PrimeIdeal:
        """Largest prime contained in both."""
        return PrimeIdeal(self.monoid.face_of(p.complement_face | q.complement_face))


def spec(M: FsMonoid) -> Spectrum:
    """All prime ideals of ``M``; they correspond to the faces of its cone.

    Ordered from the generic point (the empty ideal) to the maximal ideal.
    """
    primes = [PrimeIdeal(f) for f in sorted(M.faces, key=lambda f: (-len(f), sorted(f)))]
    return Spectrum(M, primes)


def is_prime(M: FsMonoid, p: PrimeIdeal) -> bool:
    return p.complement_face in set(M.faces)


def face_quotient(M: FsMonoid, face: frozenset) -> IntMatrix:
    """Quotient map ``Z^rank -> Z^rank / span(face)`` (local coordinates)."""
    hb = M.local_hilbert_basis
    cols = [hb[i] for i in sorted(face)]
    if not cols:
        return IntMatrix.identity(M.rank)
    snf = smith_normal_form(IntMatrix.from_columns(cols, M.rank))
    f = snf.rank
    return IntMatrix(snf.left.tolist()[f:], M.rank)


def localize_sharpen(M: FsMonoid, p: PrimeIdeal) -> FsMonoid:
    """Localize ``M`` at the complement of ``p`` and divide out the units.

    The result is the image of ``M`` in ``M^gp / face^gp``, in that quotient
    lattice's coordinates.
    """
    if not is_prime(M, p):
        raise ValidationError(f"{p} is not a prime of the monoid")
    Q = face_quotient(M, p.complement_face)
    imgs = [Q @ h for h in M.local_hilbert_basis]
    return saturate(imgs, Q.rows)


@dataclass(frozen=True)
class LogSmoothness:
    smooth: bool
    etale: bool
    kernel_order: float | int
    torsion_orders: tuple[int, ...]
    free_rank: int


def _local_matrix(matrix, source: FsMonoid, target: FsMonoid) -> IntMatrix:
    A = as_matrix(matrix)
    if source.embedding is not None:
        A = A @ source.embedding
    if target.embedding is not None:
        A = target._left_inverse @ A
    return A


def is_monoid_hom(matrix, source: FsMonoid, target: FsMonoid) -> bool:
    """Whether ``matrix`` (ambient coordinates) maps ``source`` into ``target``."""
    A = as_matrix(matrix)
    if A.shape != (target.ambient_rank, source.ambient_rank):
        return False
    return all(target.contains(A @ h) for h in source.hilbert_basis)


@dataclass(frozen=True)
class MonoidHom:
    """A validated monoid homomorphism given by its matrix on ambient lattices."""

    matrix: IntMatrix
    source: FsMonoid
    target: FsMonoid

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        if not is_monoid_hom(self.matrix, self.source, self.target):
            raise NotAMonoidHom("matrix does not map the source monoid into the target")

    @property
    def gp_matrix(self) -> IntMatrix:
        """The map on groupifications in local coordinates."""
        return _local_matrix(self.matrix, self.source, self.target)


def log_differentials_cokernel(h: MonoidHom) -> tuple[int, tuple[int, ...]]:
    """Structure ``(free rank, torsion invariants)`` of ``cok(h^gp)``."""
    return cokernel_invariants(h.gp_matrix)


def check_log_smooth(h: MonoidHom, characteristic: int = 0) -> LogSmoothness:
    """Kernel/cokernel smoothness test for a monoid homomorphism.

    Smooth means the kernel of ``h^gp`` is finite (hence zero) and every
    torsion order of the cokernel is prime to ``characteristic``; etale also
    needs a finite cokernel.  ``characteristic == 0`` imposes no constraint.
    """
    if characteristic < 0:
        raise ValidationError("characteristic must be nonnegative")
    A = h.gp_matrix
    ker = kernel_basis(A)
    kernel_order = 1 if ker.cols == 0 else float("inf")
    free, torsion = cokernel_invariants(A)

    def invertible(d):
        return characteristic == 0 or d % characteristic != 0

    smooth = kernel_order == 1 and all(invertible(d) for d in torsion)
    etale = smooth and free == 0
    return LogSmoothness(smooth, etale, kernel_order, torsion, free)


def is_isomorphic(M: FsMonoid, N: FsMonoid) -> bool:
    """Search for a lattice isomorphism carrying ``M``'s Hilbert basis onto ``N``'s."""
    return find_isomorphism(M, N) is not None


def find_isomorphism(M: FsMonoid, N: FsMonoid) -> IntMatrix | None:
    """A local-coordinate isomorphism ``M -> N`` or ``None``."""
    if M.rank != N.rank or len(M.facets) != len(N.facets):
        return None
    hm, hn = M.local_hilbert_basis, N.local_hilbert_basis
    if len(hm) != len(hn):
        return None
    r = M.rank
    if r == 0:
        return IntMatrix((), 0)
    rays_m = list(M.extreme_rays)
    # pick a spanning subset of M's rays, then try all images among N's rays
    basis_idx = _spanning_subset(rays_m, r)
    src = [rays_m[i] for i in basis_idx]
    for img in itertools.permutations(N.extreme_rays, r):
        A = _solve_map(src, img, r)
        if A is None:
            continue
        if abs(A.det()) != 1:
            continue
        if sorted(A @ v for v in M.extreme_rays) == sorted(N.extreme_rays):
            return A
    return None


def _spanning_subset(vecs, r) -> list[int]:
    chosen: list[int] = []
    for i, v in enumerate(vecs):
        if rank([vecs[j] for j in chosen] + [v], r) > len(chosen):
            chosen.append(i)
        if len(chosen) == r:
            break
    return chosen


def _solve_map(src, img, r) -> IntMatrix | None:
    """Integer matrix ``A`` with ``A src_i = img_i`` for ``r`` independent ``src``."""
    from .lattice import solve_rational

    S = [list(v) for v in src]  # rows are src vectors: S A^T = Img
    rows = []
    for k in range(len(img[0])):
        col = solve_rational(S, [v[k] for v in img])
        if col is None or any(c.denominator != 1 for c in col):
            return None
        rows.append([int(c) for c in col])
    return IntMatrix(rows, r)
