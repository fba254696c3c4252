"""Skeletons and tropicalization for toroidal models.

A point of the analytic space is modelled by one of two kinds:

* ``monomial``: a multiplicative seminorm ``J(u)`` attached to an extended
  point ``u``.  For ``f = sum c_s chi^s`` with nonzero trivially valued
  coefficients, ``-log |f|_u = min_s u(s)``.
* ``closed``: a closed point of the torus orbit of a cone, where ``chi^s``
  is a unit when ``s`` vanishes on the cone and zero otherwise.

Characters are written in the display lattice of the fan: ambient ``Z^n``
for embedded fans, the cone's own lattice otherwise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .conecomplex import INF, SKELETON, ExtendedComplex, ExtendedPoint
from .errors import ValidationError, ZeroPolynomial
from .katofan import ClassicalFan, KatoFan, kato_fan_from_classical
from .lattice import dot, left_inverse

MONOMIAL = "monomial"
CLOSED = "closed"


@dataclass(frozen=True)
class ModelPoint:
    """A point of the model, either monomial (``point``) or closed (``cone``)."""

    kind: str
    point: ExtendedPoint | None = None
    cone: int | None = None

    def __post_init__(self):
        if self.kind == MONOMIAL and self.point is None:
            raise ValidationError("a monomial point needs an extended point")
        if self.kind == CLOSED and self.cone is None:
            raise ValidationError("a closed point needs a cone")
        if self.kind not in (MONOMIAL, CLOSED):
            raise ValidationError(f"unknown point kind {self.kind!r}")


@dataclass(frozen=True)
class LogPolynomial:
    """Finite sum ``sum c_s chi^s`` with nonzero integer coefficients."""

    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(int(a) for a in s): int(c) for s, c in dict(self.terms).items() if c}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, s: Sequence[int], c: int = 1) -> "LogPolynomial":
        return cls({tuple(s): c})

    @property
    def support(self) -> list[tuple]:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LogPolynomial") -> "LogPolynomial":
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + c
        return LogPolynomial(out)

    def __mul__(self, other: "LogPolynomial") -> "LogPolynomial":
        out: dict = {}
        for s, a in self.terms.items():
            for t, b in other.terms.items():
                k = tuple(x + y for x, y in zip(s, t))
                out[k] = out.get(k, 0) + a * b
        return LogPolynomial(out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(_format_term(s, c) for s, c in sorted(self.terms.items()))


_VAR_NAMES = ("x", "y", "z", "w")
_TERM = re.compile(r"^\s*(?:(-?\d+)\s*\*?\s*)?(.*?)\s*$")
_FACTOR = re.compile(r"^([a-z])(\d*)(?:\^(-?\d+))?$")


def _format_term(s, c) -> str:
    names = _VAR_NAMES if len(s) <= len(_VAR_NAMES) else [f"x{i + 1}" for i in range(len(s))]
    parts = []
    for name, e in zip(names, s):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    mono = "*".join(parts)
    if not mono:
        return str(c)
    return mono if c == 1 else f"{c}*{mono}"


def parse_polynomial(text: str, n: int) -> LogPolynomial:
    """Parse ``"1 + x*y^2 + 3*z^-1"`` style text in ``n`` variables.

    Variables are ``x, y, z, w`` (for ``n <= 4``) or ``x1 .. xn``; exponents
    may be negative.  Terms are separated by ``+``.
    """
    if not text.strip():
        raise ValidationError("empty polynomial")
    out = LogPolynomial()
    for raw in text.split("+"):
        m = _TERM.match(raw)
        coeff = int(m.group(1)) if m.group(1) else 1
        rest = m.group(2).strip()
        exps = [0] * n
        if rest:
            for fac in rest.split("*"):
                fac = fac.strip()
                if fac.lstrip("-").isdigit():
                    coeff *= int(fac)
                    continue
                fm = _FACTOR.match(fac)
                if not fm:
                    raise ValidationError(f"cannot parse factor {fac!r}")
                exps[_var_index(fm.group(1), fm.group(2), n)] += int(fm.group(3) or 1)
        elif not m.group(1):
            raise ValidationError(f"empty term in {text!r}")
        out = out + LogPolynomial.monomial(exps, coeff)
    return out


def _var_index(letter: str, digits: str, n: int) -> int:
    if digits:
        if letter != "x":
            raise ValidationError(f"unknown variable {letter}{digits}")
        i = int(digits) - 1
    elif letter in _VAR_NAMES[:n] and n <= len(_VAR_NAMES):
        i = _VAR_NAMES.index(letter)
    else:
        raise ValidationError(f"unknown variable {letter!r}")
    if not 0 <= i < n:
        raise ValidationError(f"variable index out of range for {n} variables")
    return i


@dataclass(frozen=True)
class Seminorm:
    """``|f|`` at a point, kept as ``-log |f|`` (exact) with a float view."""

    neglog: object

    @property
    def value(self) -> float:
        return 0.0 if self.neglog == INF else math.exp(-float(self.neglog))


def _local_character(fan: KatoFan, cone: int, s: Sequence[int]) -> tuple:
    c = fan.cones[cone]
    if c.embedding is None:
        if len(s) != c.dim:
            raise ValidationError(f"character {list(s)} must have length {c.dim}")
        return tuple(s)
    if len(s) != c.embedding.rows:
        raise ValidationError(f"character {list(s)} must have length {c.embedding.rows}")
    return c.embedding.T @ s


def _chart_of(C: ExtendedComplex, f: LogPolynomial, home: int) -> int:
    """A cone over ``home`` whose monoid holds every character of ``f``."""
    F = C.fan
    for q in sorted(F.cofaces_of(home), key=lambda q: F.cones[q].dim):
        cq = F.cones[q]
        if all(cq.monoid.contains_local(_local_character(F, q, s)) for s in f.terms):
            return q
    raise ValidationError(f"{f} is not regular on the chart of cone {home}")


def section_J(u: ExtendedPoint, f: LogPolynomial, C: ExtendedComplex, cone: int | None = None) -> Seminorm:
    """Evaluate the seminorm ``J(u)`` on ``f``.

    Args:
        u: An extended point.
        f: A nonzero polynomial in the characters of ``cone``.
        C: The extended complex holding ``u``.
        cone: Chart where ``f`` lives; defaults to the smallest cone above the
            home of ``u`` whose monoid holds the support of ``f``.

    Raises:
        ZeroPolynomial: if ``f`` is zero.
    """
    if f.is_zero():
        raise ZeroPolynomial("the seminorm of the zero polynomial is not defined")
    if C.mode != SKELETON:
        raise ValidationError("section_J needs a skeleton-mode complex")
    F = C.fan
    q = _chart_of(C, f, u.cone) if cone is None else cone
    if not F.leq(u.cone, q):
        raise ValidationError(f"cone {q} does not contain the home of the point")
    vals = [C.eval(u, _local_character(F, q, s), q) for s in f.terms]
    return Seminorm(min(vals))


def _closed_values(C: ExtendedComplex, cone: int, chart: int) -> list:
    F = C.fan
    A = F.face_map(cone, chart)
    rays = [A @ r for r in F.cones[cone].rays]
    return [0 if all(dot(r, h) == 0 for r in rays) else INF for h in F.cones[chart].monoid.local_hilbert_basis]


def trop(x: ModelPoint, C: ExtendedComplex) -> ExtendedPoint:
    """Tropicalization: read off ``-log |chi^h|`` on the Hilbert basis of a chart."""
    F = C.fan
    if x.kind == CLOSED:
        chart = next(q for q in F.maximal_points if F.leq(x.cone, q))
        return C.from_values(chart, _closed_values(C, x.cone, chart))
    u = x.point
    chart = next(q for q in F.maximal_points if F.leq(u.cone, q))
    cq = F.cones[chart]
    vals = []
    for h in cq.monoid.local_hilbert_basis:
        s = h if cq.embedding is None else left_inverse(cq.embedding).T @ h
        vals.append(section_J(u, LogPolynomial.monomial(s), C, chart).neglog)
    return C.from_values(chart, vals)


def retraction_p(x: ModelPoint, C: ExtendedComplex) -> ModelPoint:
    """Retraction onto the skeleton: ``J(trop(x))``."""
    return ModelPoint(MONOMIAL, point=trop(x, C))


@dataclass(frozen=True)
class OrbitStratum:
    """Cone of a classical fan paired with the dimension of its torus orbit."""

    cone: int
    rays: tuple
    orbit_dim: int


def strata_cone_correspondence(fan: ClassicalFan) -> list[OrbitStratum]:
    """Orbit-cone correspondence for a classical fan, checked on closed points.

    The closure of the orbit of ``sigma`` contains the orbit of ``sigma'``
    exactly when ``sigma`` is a face of ``sigma'``.  This is checked through
    the vanishing pattern of the tropicalized closed points.

    Raises:
        ValidationError: if the order reversal fails (it should not).
    """
    F = kato_fan_from_classical(fan)
    C = ExtendedComplex(F)
    n = fan.lattice_rank
    trops = {c: trop(ModelPoint(CLOSED, cone=c), C) for c in F.points}
    for a in F.points:
        for b in F.points:
            # is the orbit of b inside the closure of the orbit of a?
            inside = False
            for q in F.maximal_points:
                if not F.leq(b, q):
                    continue
                Aq = F.face_map(a, q) if F.leq(a, q) else None
                if Aq is None:
                    continue
                rays = [Aq @ r for r in F.cones[a].rays]
                vals = C.values(trops[b], q)
                hb = F.cones[q].monoid.local_hilbert_basis
                if all(vals[i] == INF for i, h in enumerate(hb) if any(dot(r, h) for r in rays)):
                    inside = True
                break
            if inside != F.leq(a, b):
                raise ValidationError(f"orbit closure relation fails for cones {a} and {b}")
    return [OrbitStratum(c, F.cones[c].display_rays, n - F.cones[c].dim) for c in F.points]
