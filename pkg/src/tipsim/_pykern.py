"""Pure-Python geometry kernels.

Twin of the compiled module ``tipsim._ckern``; both expose the same functions
over flat (x0, y0, x1, y1, ...) vertex tuples. Keep the two in sync: the test
suite asserts they agree bit-for-bit on random inputs when the compiled module
is available.
"""

from math import atan2, cos, sin, tau

GEOM_EPS = 1e-12

BACKEND = "python"


def reflect_point(px, py, ax, ay, bx, by):
    """Mirror (px,py) across the infinite line through (ax,ay)-(bx,by)."""
    dx = bx - ax
    dy = by - ay
    d2 = dx * dx + dy * dy
    t = ((px - ax) * dx + (py - ay) * dy) / d2
    fx = ax + t * dx
    fy = ay + t * dy
    return 2.0 * fx - px, 2.0 * fy - py


def transform_poly(flat, ca, sa, tx, ty):
    """Rotate a flat vertex tuple by (ca,sa) then translate by (tx,ty)."""
    out = []
    for i in range(0, len(flat), 2):
        x = flat[i]
        y = flat[i + 1]
        out.append(ca * x - sa * y + tx)
        out.append(sa * x + ca * y + ty)
    return tuple(out)


def _axis_separates(flat_a, flat_b):
    # True if some edge normal of polygon a strictly separates a from b.
    n = len(flat_a)
    for i in range(0, n, 2):
        j = (i + 2) % n
        # outward normal of CCW edge i->j is (ey, -ex)
        nx = flat_a[j + 1] - flat_a[i + 1]
        ny = flat_a[i] - flat_a[j]
        amin = amax = flat_a[0] * nx + flat_a[1] * ny
        for k in range(2, n, 2):
            d = flat_a[k] * nx + flat_a[k + 1] * ny
            if d < amin:
                amin = d
            elif d > amax:
                amax = d
        m = len(flat_b)
        bmin = bmax = flat_b[0] * nx + flat_b[1] * ny
        for k in range(2, m, 2):
            d = flat_b[k] * nx + flat_b[k + 1] * ny
            if d < bmin:
                bmin = d
            elif d > bmax:
                bmax = d
        if bmin > amax + GEOM_EPS or amin > bmax + GEOM_EPS:
            return True
    return False


def convex_overlap(flat_a, flat_b):
    """Separating-axis test on CCW convex polygons; touching counts as overlap."""
    if _axis_separates(flat_a, flat_b):
        return False
    if _axis_separates(flat_b, flat_a):
        return False
    return True


def point_in_convex(px, py, flat):
    """Point-in-CCW-convex-polygon, boundary inclusive."""
    n = len(flat)
    for i in range(0, n, 2):
        j = (i + 2) % n
        ex = flat[j] - flat[i]
        ey = flat[j + 1] - flat[i + 1]
        if ex * (py - flat[i + 1]) - ey * (px - flat[i]) < -GEOM_EPS:
            return False
    return True


def poly_in_rect(flat, minx, miny, maxx, maxy):
    """All vertices inside the axis-aligned rectangle, boundary inclusive."""
    for i in range(0, len(flat), 2):
        x = flat[i]
        y = flat[i + 1]
        if x < minx - GEOM_EPS or x > maxx + GEOM_EPS:
            return False
        if y < miny - GEOM_EPS or y > maxy + GEOM_EPS:
            return False
    return True


def place_on_edge(ux0, uy0, ux1, uy1, px0, py0, px1, py1):
    """Pose (gx, gy, theta) putting canonical edge u0->u1 onto world edge p1->p0.

    The canonical edge is CCW on the arriving polygon and the world edge CCW on
    the polygon being left, so reversing the mapping puts the two interiors on
    opposite sides of the shared segment.
    """
    theta = atan2(py0 - py1, px0 - px1) - atan2(uy1 - uy0, ux1 - ux0)
    theta %= tau
    ca = cos(theta)
    sa = sin(theta)
    return px1 - (ca * ux0 - sa * uy0), py1 - (sa * ux0 + ca * uy0), theta


def revolve_step(ex0, ey0, ex1, ey1, ca, sa, gx, gy, vx0, vy0, vx1, vy1):
    """One tip: canonical pivot edge e under pose (ca,sa,g), arrival edge v.

    Returns (gx', gy', theta') of the configuration landed on the far side of
    the pivot segment.
    """
    px0 = gx + ca * ex0 - sa * ey0
    py0 = gy + sa * ex0 + ca * ey0
    px1 = gx + ca * ex1 - sa * ey1
    py1 = gy + sa * ex1 + ca * ey1
    return place_on_edge(vx0, vy0, vx1, vy1, px0, py0, px1, py1)
