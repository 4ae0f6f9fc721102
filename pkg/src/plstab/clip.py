"""Exact convex clipping and triangulation helpers in the plane."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .geometry import Point, orient2, vadd, vscale, vsub


def polygon_area2(poly: Sequence[Point]) -> Fraction:
    """Twice the signed area of a polygon given by its vertex cycle."""
    total = Fraction(0)
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        total += a[0] * b[1] - a[1] * b[0]
    return total


def _clip_halfplane(poly: List[Point], a: Point, b: Point) -> List[Point]:
    """Keep the part of `poly` with orient2(a, b, x) >= 0 (left of a->b)."""
    if not poly:
        return []
    out: List[Point] = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp, sq = orient2(a, b, p), orient2(a, b, q)
        if sp >= 0:
            out.append(p)
        if (sp > 0 > sq) or (sp < 0 < sq):
            t = Fraction(sp, sp - sq)
            out.append(vadd(p, vscale(t, vsub(q, p))))
    # drop consecutive duplicates
    dedup: List[Point] = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def ccw_triangle(tri: Sequence[Point]) -> List[Point]:
    t = list(tri)
    if orient2(*t) < 0:
        t.reverse()
    return t


def clip_polygon_to_triangle(poly: Sequence[Point], tri: Sequence[Point]) -> List[Point]:
    """Intersection of a convex polygon with a triangle, as a vertex cycle."""
    t = ccw_triangle(tri)
    out = list(poly)
    if polygon_area2(out) < 0:
        out.reverse()
    for i in range(3):
        out = _clip_halfplane(out, t[i], t[(i + 1) % 3])
        if not out:
            return []
    return out


def triangle_intersection(t1: Sequence[Point], t2: Sequence[Point]) -> List[Point]:
    return clip_polygon_to_triangle(ccw_triangle(t1), t2)


def point_in_triangle(x: Point, tri: Sequence[Point], strict: bool = False) -> bool:
    t = ccw_triangle(tri)
    for i in range(3):
        s = orient2(t[i], t[(i + 1) % 3], x)
        if s < 0 or (strict and s == 0):
            return False
    return True


def polygon_centroid(poly: Sequence[Point]) -> Point:
    """Area centroid of a polygon with nonzero area (exact)."""
    a2 = polygon_area2(poly)
    cx = Fraction(0)
    cy = Fraction(0)
    for i in range(len(poly)):
        p, q = poly[i], poly[(i + 1) % len(poly)]
        w = p[0] * q[1] - q[0] * p[1]
        cx += (p[0] + q[0]) * w
        cy += (p[1] + q[1]) * w
    return (cx / (3 * a2), cy / (3 * a2))


def triangulate_convex(poly: Sequence[Point]) -> List[Tuple[Point, Point, Point]]:
    """Triangulate a convex polygon keeping every boundary vertex.

    Fans from the lexicographically smallest vertex.  When collinear boundary
    chains adjacent to that vertex would make a fan triangle degenerate (which
    would silently drop a boundary vertex and create a T-junction against the
    neighboring cell), falls back to coning from the centroid, which preserves
    every boundary edge.
    """
    pts = list(poly)
    if polygon_area2(pts) < 0:
        pts.reverse()
    if len(pts) < 3:
        return []
    apex_i = min(range(len(pts)), key=lambda i: pts[i])
    apex = pts[apex_i]
    rest = pts[apex_i + 1:] + pts[:apex_i]
    tris = []
    degenerate = False
    for i in range(len(rest) - 1):
        tri = (apex, rest[i], rest[i + 1])
        if orient2(*tri) == 0:
            degenerate = True
            break
        tris.append(tri)
    if not degenerate:
        return tris
    c = polygon_centroid(pts)
    tris = []
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        if orient2(c, a, b) != 0:
            tris.append((c, a, b))
    return tris
