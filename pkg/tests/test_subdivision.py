import itertools
import random

import pytest

from logfan.errors import NotInFan, ZeroVector
from logfan.katofan import ClassicalFan, cone_from_rays, kato_fan_from_classical
from logfan.lattice import left_inverse
from logfan.selftest import random_cone_fan, resolution_holds
from logfan.subdivision import (
    Subdivision,
    barycenter,
    barycentric_subdivision,
    identity_subdivision,
    is_proper_subdivision,
    is_smooth,
    multiplicity,
    resolve,
    star_subdivide,
)

P2 = ClassicalFan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
A2 = ClassicalFan(2, [(1, 0), (0, 1)], [[0, 1]])
A1 = ClassicalFan(2, [(1, 0), (1, 2)], [[0, 1]])
C13 = ClassicalFan(2, [(1, 0), (1, 3)], [[0, 1]])


def _top(F):
    return max(F.points, key=lambda p: F.cones[p].dim)


def _star(fan, v):
    F = kato_fan_from_classical(fan)
    c = _top(F)
    return star_subdivide(F, (c, left_inverse(F.cones[c].embedding) @ v))


def _max_rays(F):
    return sorted(sorted(F.display_rays(p)) for p in F.maximal_points)


def test_barycenter_examples():
    assert barycenter(cone_from_rays(2, [(1, 0), (0, 1)])) == (1, 1)
    assert barycenter(cone_from_rays(2, [(1, 2)])) == (1, 2)
    assert barycenter(cone_from_rays(2, [(1, 0), (1, 2)])) == (2, 2)
    with pytest.raises(ZeroVector):
        barycenter(cone_from_rays(2, []))


def test_multiplicity_examples():
    assert multiplicity(cone_from_rays(2, [(1, 0), (0, 1)])) == 1
    assert multiplicity(cone_from_rays(2, [(1, 0), (1, 2)])) == 2
    assert multiplicity(cone_from_rays(2, [(1, 0), (1, 3)])) == 3


def test_is_smooth_examples():
    assert is_smooth(kato_fan_from_classical(P2))
    assert not is_smooth(kato_fan_from_classical(A1))
    assert is_smooth(kato_fan_from_classical(ClassicalFan(2, [], [])))


def test_star_a1():
    s = _star(A1, (1, 1))
    assert _max_rays(s.source) == [[(1, 0), (1, 1)], [(1, 1), (1, 2)]]
    assert all(multiplicity(s.source.cones[p]) == 1 for p in s.source.maximal_points)
    assert is_proper_subdivision(s)


def test_star_n2_and_at_existing_ray():
    s = _star(A2, (1, 1))
    assert len(s.source.maximal_points) == 2
    assert is_smooth(s.source)
    same = _star(A2, (1, 0))
    assert _max_rays(same.source) == _max_rays(kato_fan_from_classical(A2))


def test_star_makes_center_primitive():
    s = _star(A2, (2, 2))
    assert s.trace == [(1, 1)]


def test_star_errors():
    F = kato_fan_from_classical(A2)
    with pytest.raises(ZeroVector):
        star_subdivide(F, (3, (0, 0)))
    with pytest.raises(NotInFan):
        star_subdivide(F, (3, (-1, 1)))


@pytest.mark.parametrize("fan,v", [(A1, (1, 1)), (A2, (1, 1))])
def test_star_monoid_formula(fan, v):
    s = _star(fan, v)
    F = s.source
    for p in F.points:
        cone = F.cones[p]
        rays = cone.display_rays
        if tuple(v) not in rays:
            continue
        V = [r for r in rays if r != tuple(v)]
        E = cone.embedding
        for alpha in itertools.product(range(-6, 7), repeat=2):
            inside = cone.monoid.contains_local(E.T @ alpha)
            formula = all(sum(a * b for a, b in zip(alpha, r)) >= 0 for r in V) and sum(
                a * b for a, b in zip(alpha, v)
            ) >= 0
            assert inside == formula


def test_barycentric_examples():
    s = barycentric_subdivision(kato_fan_from_classical(P2))
    assert len(s.source.maximal_points) == 6
    rays = {r for p in s.source.points if s.source.cones[p].dim == 1 for r in s.source.display_rays(p)}
    assert rays == {(1, 0), (0, 1), (-1, -1), (1, 1), (-1, 0), (0, -1)}
    check = is_proper_subdivision(s, 5, mode="sampled")
    assert check and check.source_points == check.target_points == 121
    assert is_proper_subdivision(s, mode="exact")
    line = barycentric_subdivision(kato_fan_from_classical(ClassicalFan(1, [(1,)], [[0]])))
    assert len(line.source.points) == 2
    n2 = barycentric_subdivision(kato_fan_from_classical(A2))
    assert len(n2.source.maximal_points) == 2


def test_barycentric_flag_count():
    n3 = kato_fan_from_classical(ClassicalFan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [[0, 1, 2]]))
    s = barycentric_subdivision(n3)
    assert len(s.source.maximal_points) == 6
    assert is_proper_subdivision(s)


def test_proper_identity_and_dropped_cone():
    F = kato_fan_from_classical(P2)
    assert is_proper_subdivision(identity_subdivision(F))
    part = kato_fan_from_classical(ClassicalFan(2, P2.rays, [[0, 1], [1, 2]]))
    mor = {}
    for i, c in enumerate(part.cones):
        j = next(j for j in F.points if sorted(F.display_rays(j)) == sorted(c.display_rays))
        E_s, E_t = c.embedding, F.cones[j].embedding
        mor[i] = (j, left_inverse(E_t) @ E_s)
    s = Subdivision(part, F, mor)
    assert s.is_morphism()
    assert not is_proper_subdivision(s, mode="exact")
    assert not is_proper_subdivision(s, 3, mode="sampled")


def test_properness_survives_composition():
    F = kato_fan_from_classical(A2)
    s1 = star_subdivide(F, (3, (1, 1)))
    top = max(s1.source.points, key=lambda p: (s1.source.cones[p].dim, sorted(s1.source.display_rays(p))))
    cone = s1.source.cones[top]
    b = tuple(sum(col) for col in zip(*cone.rays))
    s2 = star_subdivide(s1.source, (top, b))
    both = s2.compose(s1)
    assert is_proper_subdivision(both)
    assert is_proper_subdivision(both, 4, mode="sampled")


def test_resolve_examples():
    s = resolve(kato_fan_from_classical(A1))
    assert s.trace == [(1, 1)]
    assert len(s.source.maximal_points) == 2
    s3 = resolve(kato_fan_from_classical(C13))
    assert _max_rays(s3.source) == [[(1, 0), (1, 1)], [(1, 1), (1, 2)], [(1, 2), (1, 3)]]
    smooth = resolve(kato_fan_from_classical(P2))
    assert smooth.steps == []


def test_resolve_non_simplicial():
    fan = ClassicalFan(3, [(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)], [[0, 1, 2, 3]])
    s = resolve(kato_fan_from_classical(fan))
    assert s.steps[0].kind == "simplicialize"
    assert is_smooth(s.source)
    assert is_proper_subdivision(s, 3)


def test_resolve_random():
    rng = random.Random(21)
    for _ in range(25):
        assert resolution_holds(random_cone_fan(rng))


def test_resolve_is_deterministic():
    a = resolve(kato_fan_from_classical(C13))
    b = resolve(kato_fan_from_classical(C13))
    assert a.trace == b.trace and _max_rays(a.source) == _max_rays(b.source)
