import random
from fractions import Fraction as F

import pytest

from plstab.complexes import Complex
from plstab.geometry import Mat, primitive_direction
from plstab.plmap import PLMap, plmap_from_vertex_images
from plstab.tangent import (Fan, Germ, build_germ, canonical_germ,
                            compose_germs, fan_of_star, germs_equal,
                            identity_germ, in_cone,
                            is_trivial_on_tangent_sphere, ray_map,
                            refine_fans, tangent_sphere_type)

from support import quarter_rotation, square_complex


def rot_germ():
    return build_germ(quarter_rotation(), 4)


def shear_map():
    """Center fixed; extra vertex m below the center slides upward."""
    pts = [(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2)),
           (F(1, 2), F(1, 4))]
    sq = Complex(pts, [(0, 1, 5), (0, 4, 5), (1, 4, 5), (1, 2, 4),
                       (2, 3, 4), (3, 0, 4)])
    imgs = [(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2)),
            (F(1, 2), F(3, 8))]
    return plmap_from_vertex_images(sq, imgs)


def test_fan_of_star_interior():
    sq = square_complex()
    fan = fan_of_star(sq, 4)
    assert fan.closed
    assert len(fan.cones) == 4
    assert tangent_sphere_type(fan) == "Circle"


def test_fan_of_star_corner_is_arc():
    fan = fan_of_star(square_complex(), 0)
    assert not fan.closed
    assert tangent_sphere_type(fan) == "Arc"


def test_rotation_germ_is_rotation_matrix():
    g = rot_germ()
    wanted = Mat([[0, -1], [1, 0]])
    assert all(m == wanted for m in g.matrices)
    assert not is_trivial_on_tangent_sphere(g)


def test_identity_germ_trivial():
    fan = fan_of_star(square_complex(), 4)
    assert is_trivial_on_tangent_sphere(identity_germ(fan))


def test_compose_germs_rotation_squared():
    g = rot_germ()
    g2 = compose_germs(g, g)
    minus = Mat([[-1, 0], [0, -1]])
    assert all(m == minus for m in g2.matrices)
    g4 = compose_germs(g2, g2)
    assert is_trivial_on_tangent_sphere(g4)


def test_shear_germ_piecewise():
    g = build_germ(shear_map(), 4)
    mats = set(g.matrices)
    assert Mat([[1, 0], [0, 1]]) in mats
    assert len(mats) > 1
    assert not is_trivial_on_tangent_sphere(g)


def test_germs_equal_across_refinements():
    g = rot_germ()
    gs = refine_fans([g, build_germ(quarter_rotation(), 4)])
    assert germs_equal(gs[0], gs[1])
    assert germs_equal(g, gs[0])
    assert not germs_equal(g, identity_germ(g.fan))


def test_canonical_germ_merges_cones():
    fan = fan_of_star(square_complex(), 4)
    g = identity_germ(fan)
    cg = canonical_germ(g)
    assert is_trivial_on_tangent_sphere(cg)
    assert len(cg.fan.cones) <= len(fan.cones)


def test_ray_map_rotation():
    rm = ray_map(rot_germ())
    n = len(rm.germ.fan.cones)
    # the quarter turn sends each cone to the next one around
    assert sorted(rm.cone_assignment) == sorted(range(n))
    for i, tgt in enumerate(rm.cone_assignment):
        u, _ = rm.germ.fan.cones[i]
        img = primitive_direction(rm.germ.matrices[i].apply(u))
        tu, tv = rot_germ().fan.cones[tgt]
        assert in_cone(img, tu, tv)


def _sample_directions(u, v, count):
    """Rational directions strictly inside the cone spanned by u and v."""
    out = []
    for k in range(1, count + 1):
        a, b = F(k, count + 1), F(count + 1 - k, count + 1)
        d = (a * u[0] + b * v[0], a * u[1] + b * v[1])
        if d != (0, 0):
            out.append(d)
    return out


def direction_sampling_trivial(g, samples=8):
    for (u, v), m in zip(g.fan.cones, g.matrices):
        for d in [u, v] + _sample_directions(u, v, samples):
            img = m.apply(d)
            if primitive_direction(img) != primitive_direction(d):
                return False
    return True


def random_germ(rng):
    """Random fan with scalar, rotation, or piecewise-shear matrices."""
    sq = square_complex()
    fan = fan_of_star(sq, 4)
    kind = rng.choice(["scalar", "rotation", "shear", "global-linear"])
    if kind == "scalar":
        lam = F(rng.randint(1, 9), rng.randint(1, 9))
        mats = [Mat([[lam, 0], [0, lam]])] * len(fan.cones)
    elif kind == "rotation":
        mats = [Mat([[0, -1], [1, 0]])] * len(fan.cones)
    elif kind == "global-linear":
        while True:
            m = Mat([[rng.randint(-3, 3), rng.randint(-3, 3)],
                     [rng.randint(-3, 3), rng.randint(-3, 3)]])
            if m.det() != 0:
                break
        mats = [m] * len(fan.cones)
    else:
        # shear fixing the diagonal rays, mixed with the identity
        c = F(rng.randint(1, 4))
        up = Mat([[1 + c, -c], [c, 1 - c]])  # fixes direction (1,1)
        mats = []
        for u, v in fan.cones:
            mats.append(up if u == (1, 1) or v == (1, 1) else Mat.identity(2))
        if up.det() == 0:
            return random_germ(rng)
        try:
            return Germ(fan=fan, matrices=tuple(mats))
        except Exception:
            return random_germ(rng)
    return Germ(fan=fan, matrices=tuple(mats))


def test_sampling_oracle_agrees():
    rng = random.Random(17)
    for _ in range(60):
        g = random_germ(rng)
        assert is_trivial_on_tangent_sphere(g) == direction_sampling_trivial(g)


def test_in_cone():
    assert in_cone((1, 1), (1, 0), (0, 1))
    assert in_cone((1, 0), (1, 0), (0, 1))
    assert not in_cone((-1, 0), (1, 0), (0, 1))
