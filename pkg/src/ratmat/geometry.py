"""Planar convex geometry on points of the complex plane.

Points are complex numbers; polygons are vertex arrays in counterclockwise
order.  Everything here is exact enough for sets with diameters well above
machine precision, which is all the bound evaluation needs.
"""

from __future__ import annotations

import numpy as np

from .linalg import as_vector


def _cross(o: complex, a: complex, b: complex) -> float:
    # z-component of (a-o) x (b-o); > 0 for a left turn
    return (a - o).real * (b - o).imag - (a - o).imag * (b - o).real


def _lex_key(z: complex):
    return (z.real, z.imag)


def convex_hull(points) -> np.ndarray:
    """Convex hull vertices in counterclockwise order (monotone chain).

    Collinear points on hull edges are dropped.  Degenerate inputs collapse:
    a single distinct point gives a one-vertex hull, collinear points give the
    two extreme ones.  The vertex list starts at the lexicographically
    smallest point (by real part, then imaginary part).
    """
    pts = sorted(set(complex(z) for z in as_vector(points, "points")), key=_lex_key)
    if not pts:
        raise ValueError("no points given")
    if len(pts) == 1:
        return np.array(pts)
    if len(pts) == 2:
        return np.array(pts)

    lower: list[complex] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[complex] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return np.array(hull)


def polygon_contains(vertices, z: complex, slack: float = 0.0) -> bool:
    """Point-in-convex-polygon test with absolute slack outward.

    ``vertices`` must be in counterclockwise order; degenerate polygons
    (segments, single points) are handled by distance.
    """
    verts = as_vector(vertices, "vertices")
    m = verts.size
    if m == 0:
        raise ValueError("empty polygon")
    if m == 1:
        return abs(z - verts[0]) <= slack
    if m == 2:
        return _point_segment_distance(z, verts[0], verts[1]) <= slack
    for i in range(m):
        a, b = verts[i], verts[(i + 1) % m]
        edge = b - a
        # signed distance of z from edge line, positive inside (ccw order)
        s = _cross(a, b, z) / abs(edge)
        if s < -slack:
            return False
    return True


def _point_segment_distance(z: complex, a: complex, b: complex) -> float:
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0.0:
        return abs(z - a)
    t = ((z - a).real * d.real + (z - a).imag * d.imag) / L2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * d))


def hull_boundary_samples(vertices, count: int) -> np.ndarray:
    """``count`` points on the boundary of a convex polygon.

    All vertices are included; the remaining points are distributed over the
    edges proportionally to edge length (largest-remainder rounding) and
    spaced uniformly within each edge.  Degenerate hulls: a single point just
    returns that point; a segment is traversed once end to end.
    """
    verts = as_vector(vertices, "vertices")
    m = verts.size
    if m == 0:
        raise ValueError("empty polygon")
    if m == 1:
        return verts.copy()
    if count < m:
        raise ValueError(f"count {count} is below the vertex count {m}")
    if m == 2:
        t = np.linspace(0.0, 1.0, count)
        return verts[0] + t * (verts[1] - verts[0])

    closed = np.append(verts, verts[0])
    seg = np.diff(closed)
    lengths = np.abs(seg)
    total = lengths.sum()
    if total == 0.0:
        return np.full(count, verts[0])

    extra = count - m
    quota = extra * lengths / total
    alloc = np.floor(quota).astype(int)
    short = extra - alloc.sum()
    if short > 0:
        order = np.argsort(quota - alloc)[::-1]
        alloc[order[:short]] += 1

    out: list[complex] = []
    for i in range(m):
        out.append(closed[i])
        k = alloc[i]
        for j in range(1, k + 1):
            out.append(closed[i] + seg[i] * (j / (k + 1)))
    return np.array(out)


def clip_polygon_halfplane(vertices, a: complex, n: complex) -> np.ndarray:
    """Clip a ccw convex polygon to the half-plane Re(conj(n) (z - a)) <= 0.

    ``n`` is the outward normal of the boundary line through ``a``.
    Returns the (possibly empty) clipped vertex array.
    """
    verts = as_vector(vertices, "vertices")
    if verts.size == 0:
        return verts

    def side(z: complex) -> float:
        return (np.conj(n) * (z - a)).real

    out: list[complex] = []
    m = verts.size
    for i in range(m):
        p, q = verts[i], verts[(i + 1) % m]
        sp, sq = side(p), side(q)
        if sp <= 0:
            out.append(p)
            if sq > 0:
                out.append(p + (q - p) * (sp / (sp - sq)))
        elif sq <= 0:
            out.append(p + (q - p) * (sp / (sp - sq)))
    if not out:
        return np.array([], dtype=np.complex128)
    # dedup consecutive near-identical corners from tangential cuts
    scale = max(abs(z) for z in out) or 1.0
    dedup: list[complex] = []
    for z in out:
        if not dedup or abs(z - dedup[-1]) > 1e-14 * scale:
            dedup.append(z)
    if len(dedup) > 1 and abs(dedup[0] - dedup[-1]) <= 1e-14 * scale:
        dedup.pop()
    return np.array(dedup)
