"""Extended cone complexes of a Kato fan.

A point of the extended cone of ``sigma`` is a monoid homomorphism
``u: S_sigma -> [0, inf]``.  It is stored as a triple: the cone, the face
``tau`` of ``sigma`` "at infinity" (``u(s) = inf`` exactly when ``s`` does
not vanish on ``tau``) and a rational functional ``x`` on the cone's lattice,
defined modulo ``span(tau)``, with ``u(s) = <x, s>`` for the other ``s``.

In canonical form the cone is the smallest cone of the fan whose extended
cone contains ``u`` and ``x`` is reduced against the row-reduced basis of
``span(tau)``.

The toric mode models the partial compactification ``N_R(Delta)`` of a
classical fan: values lie in ``R`` or ``inf``, the functional lives in the
ambient ``Q^n`` and the home of a point is its face at infinity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .katofan import KatoCone, KatoFan
from .lattice import dot, rank, solve_rational
from .monoid import PrimeIdeal

INF = math.inf

SKELETON = "skeleton"
TORIC = "toric"


@dataclass(frozen=True)
class ExtendedPoint:
    """A point of an extended cone complex (see module docstring).

    Attributes:
        cone: Index of the home cone in the fan.
        infinity_face: Ray indices (of the home cone) of the face at infinity.
        functional: Exact rational coordinates of the finite part.
        mode: ``"skeleton"`` or ``"toric"``.
    """

    cone: int
    infinity_face: frozenset
    functional: tuple
    mode: str = SKELETON

    def __post_init__(self):
        object.__setattr__(self, "infinity_face", frozenset(self.infinity_face))
        object.__setattr__(self, "functional", tuple(Fraction(x) for x in self.functional))

    def key(self) -> tuple:
        return (self.cone, tuple(sorted(self.infinity_face)), self.functional)


def reduce_mod_span(x: Sequence, vectors: Sequence[Sequence]) -> tuple:
    """Canonical representative of ``x`` modulo the rational span of ``vectors``."""
    x = [Fraction(a) for a in x]
    rows = _rref([[Fraction(a) for a in v] for v in vectors])
    for row in rows:
        p = next(j for j, a in enumerate(row) if a)
        if x[p]:
            c = x[p]
            x = [a - c * b for a, b in zip(x, row)]
    return tuple(x)


def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    n = len(rows[0])
    out = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return rows[:r]


def cone_values(cone: KatoCone, tau: frozenset, x: Sequence) -> list:
    """Values of the point ``(tau, x)`` on the cone's Hilbert basis."""
    rays = [cone.rays[i] for i in tau]
    out = []
    for h in cone.monoid.local_hilbert_basis:
        if all(dot(r, h) == 0 for r in rays):
            out.append(dot(x, h))
        else:
            out.append(INF)
    return out


def point_from_values(cone: KatoCone, values: Sequence, nonnegative: bool = True):
    """Decode values on the Hilbert basis into ``(tau, x, zero_face)``.

    ``zero_face`` is the N-side face dual to ``{s : u(s) = 0}``: the smallest
    face whose extended cone contains the point.

    Raises:
        ValidationError: if the values do not define a homomorphism.
    """
    hb = cone.monoid.local_hilbert_basis
    if len(values) != len(hb):
        raise ValidationError(f"expected {len(hb)} values, got {len(values)}")
    vals = [INF if v == INF else Fraction(v) for v in values]
    finite = frozenset(i for i, v in enumerate(vals) if v != INF)
    if cone.monoid.face_of(finite) != finite:
        raise ValidationError("finite values are not supported on a face")
    if nonnegative and any(v < 0 for v in vals if v != INF):
        raise ValidationError("negative value in a nonnegative extended cone")
    tau = frozenset(i for i, r in enumerate(cone.rays) if all(dot(r, hb[j]) == 0 for j in finite))
    if finite:
        x = solve_rational([list(hb[i]) for i in sorted(finite)], [vals[i] for i in sorted(finite)])
        if x is None:
            raise ValidationError("values are not additive")
    else:
        x = (Fraction(0),) * cone.dim
    x = reduce_mod_span(x, [cone.rays[i] for i in tau])
    zeros = [hb[i] for i, v in enumerate(vals) if v == 0]
    zero_face = frozenset(i for i, r in enumerate(cone.rays) if all(dot(r, h) == 0 for h in zeros))
    return tau, x, zero_face


@dataclass(frozen=True)
class Stratum:
    """Stratum ``rho^{-1}(point)`` of an extended complex, with its dimension."""

    point: int
    dim: int


class ExtendedComplex:
    """The extended cone complex of a Kato fan.

    Args:
        fan: The Kato fan.
        mode: ``"skeleton"`` (values in ``[0, inf]``) or ``"toric"`` (values in
            ``R`` or ``inf``; needs an embedded fan).
    """

    def __init__(self, fan: KatoFan, mode: str = SKELETON):
        if mode not in (SKELETON, TORIC):
            raise ValidationError(f"unknown mode {mode!r}")
        if mode == TORIC and fan.ambient_rank is None:
            raise ValidationError("toric mode needs a fan in a common lattice")
        self.fan = fan
        self.mode = mode

    # construction

    def make(self, cone: int, infinity_face: Sequence[int], functional: Sequence) -> ExtendedPoint:
        """Canonical point from a cone, a face at infinity and a functional."""
        F = self.fan
        c = F.cones[cone]
        tau = frozenset(infinity_face)
        if tau not in set(c.faces):
            raise ValidationError(f"{sorted(tau)} is not a face of cone {cone}")
        if self.mode == TORIC:
            n = F.ambient_rank
            if len(functional) != n:
                raise ValidationError(f"functional must have length {n}")
            home = F.point(cone, tau)
            rays = F.cones[home].display_rays
            x = reduce_mod_span(functional, rays)
            return ExtendedPoint(home, F.cones[home].full_face, x, TORIC)
        if len(functional) != c.dim:
            raise ValidationError(f"functional must have length {c.dim}")
        vals = cone_values(c, tau, functional)
        return self.from_values(cone, vals)

    def from_values(self, cone: int, values: Sequence) -> ExtendedPoint:
        """Canonical point from its values on the Hilbert basis of ``cone``."""
        if self.mode == TORIC:
            raise ValidationError("from_values is only available in skeleton mode")
        F = self.fan
        c = F.cones[cone]
        tau, x, zero_face = point_from_values(c, values)
        home = F.point(cone, zero_face)
        A = F.face_map(home, cone)
        hc = F.cones[home]
        hb = c.monoid.local_hilbert_basis
        finite = [i for i, v in enumerate(values) if v != INF]
        tau_rays = {c.rays[i] for i in tau}
        tau_home = frozenset(j for j, r in enumerate(hc.rays) if A @ r in tau_rays)
        if hc.dim == 0:
            return ExtendedPoint(home, frozenset(), (), SKELETON)
        At = A.T
        rows = [list(At @ hb[i]) for i in finite]
        rhs = [Fraction(values[i]) for i in finite]
        if rows:
            xh = solve_rational(rows, rhs)
        else:
            xh = (Fraction(0),) * hc.dim
        xh = reduce_mod_span(xh, [hc.rays[j] for j in tau_home])
        return ExtendedPoint(home, tau_home, xh, SKELETON)

    def canonical(self, u: ExtendedPoint) -> ExtendedPoint:
        return self.make(u.cone, u.infinity_face, u.functional) if self.mode == TORIC else self.from_values(
            u.cone, self.values(u)
        )

    # evaluation

    def eval(self, u: ExtendedPoint, s: Sequence[int], cone: int | None = None):
        """``u(s)`` for ``s`` in the monoid of ``cone`` (default: the home cone).

        In toric mode ``s`` is an ambient character in the dual of the home cone.
        """
        F = self.fan
        if self.mode == TORIC:
            home = F.cones[u.cone]
            rays = home.display_rays
            pair = [dot(r, s) for r in rays]
            if any(p < 0 for p in pair):
                raise ValidationError(f"character {list(s)} is not in the dual of cone {u.cone}")
            if any(pair):
                return INF
            return dot(u.functional, s)
        c = u.cone if cone is None else cone
        cc = F.cones[c]
        if not cc.monoid.contains_local(s) or len(s) != cc.dim:
            raise ValidationError(f"{list(s)} is not in the monoid of cone {c}")
        A = F.face_map(u.cone, c)
        t = A.T @ s
        hc = F.cones[u.cone]
        if any(dot(hc.rays[j], t) != 0 for j in u.infinity_face):
            return INF
        return dot(u.functional, t)

    def values(self, u: ExtendedPoint, cone: int | None = None) -> list:
        c = u.cone if cone is None else cone
        return [self.eval(u, h, c) for h in self.fan.cones[c].monoid.local_hilbert_basis]

    # maps to the fan

    def reduction_map(self, u: ExtendedPoint, cone: int | None = None) -> PrimeIdeal:
        """The prime ``{s : u(s) > 0}`` of the monoid of ``cone`` (default: home)."""
        vals = self.values(u, cone)
        return PrimeIdeal(frozenset(i for i, v in enumerate(vals) if v == 0))

    def structure_map(self, u: ExtendedPoint, cone: int | None = None) -> PrimeIdeal:
        """The prime ``{s : u(s) = inf}`` of the monoid of ``cone`` (default: home)."""
        vals = self.values(u, cone)
        return PrimeIdeal(frozenset(i for i, v in enumerate(vals) if v != INF))

    def reduction_point(self, u: ExtendedPoint) -> int:
        """The point of the fan hit by the reduction map."""
        return u.cone

    def structure_point(self, u: ExtendedPoint) -> int:
        return self.fan.point(u.cone, u.infinity_face)

    def stratum_of(self, u: ExtendedPoint) -> int:
        return self.structure_point(u)

    def strata(self) -> list[Stratum]:
        """One stratum per point of the fan, with its dimension."""
        F = self.fan
        out = []
        for p in F.points:
            d = F.cones[p].dim
            if self.mode == TORIC:
                out.append(Stratum(p, F.ambient_rank - d))
            else:
                top = max(F.cones[q].dim for q in F.cofaces_of(p))
                out.append(Stratum(p, top - d))
        return out


def compactified_cone_check(C: ExtendedComplex, U: int) -> bool:
    """Compare ``r^{-1}(U)`` with the extended cone of ``U`` on a sample grid.

    Sample points are ``(cone, tau, sum a_i r_i)`` for every cone, every face
    ``tau`` and coefficients ``a_i`` in ``{0, 1, 2}``.  Membership in the
    extended cone of ``U`` is decided from the rays involved; membership in
    ``r^{-1}(U)`` from the zero set of the values on the Hilbert basis.  For
    finite points whose reduction is ``U`` itself, the point must lie in the
    relative interior of ``U``.
    """
    if C.mode != SKELETON:
        raise ValidationError("compactified_cone_check works in skeleton mode")
    F = C.fan
    for c, cone in enumerate(F.cones):
        rays = cone.rays
        for tau in cone.faces:
            for coeffs in itertools.product((0, 1, 2), repeat=len(rays)):
                x = tuple(sum(a * r[k] for a, r in zip(coeffs, rays)) for k in range(cone.dim))
                supp = [rays[i] for i, a in enumerate(coeffs) if a] + [rays[i] for i in tau]
                phi = cone.minimal_face(*supp) if supp else frozenset()
                home = F.point(c, phi)
                in_closure = F.leq(home, U)
                vals = cone_values(cone, tau, x)
                hb = cone.monoid.local_hilbert_basis
                zeros = [hb[i] for i, v in enumerate(vals) if v == 0]
                zface = frozenset(i for i, r in enumerate(rays) if all(dot(r, h) == 0 for h in zeros))
                red = F.point(c, zface)
                if F.leq(red, U) != in_closure:
                    return False
                if not tau and red == U and home != U:
                    return False
    return True
