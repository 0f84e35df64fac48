# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels; see tipsim._pykern for the reference twin."""

from libc.math cimport atan2, cos, sin
from libc.stdlib cimport malloc, free

cdef double GEOM_EPS = 1e-12
cdef double TAU = 6.283185307179586476925287

BACKEND = "compiled"

DEF STACK_FLOATS = 64


def reflect_point(double px, double py, double ax, double ay, double bx, double by):
    cdef double dx = bx - ax
    cdef double dy = by - ay
    cdef double d2 = dx * dx + dy * dy
    cdef double t = ((px - ax) * dx + (py - ay) * dy) / d2
    cdef double fx = ax + t * dx
    cdef double fy = ay + t * dy
    return 2.0 * fx - px, 2.0 * fy - py


def transform_poly(flat, double ca, double sa, double tx, double ty):
    cdef Py_ssize_t n = len(flat)
    cdef Py_ssize_t i
    cdef double x, y
    out = [0.0] * n
    for i in range(0, n, 2):
        x = flat[i]
        y = flat[i + 1]
        out[i] = ca * x - sa * y + tx
        out[i + 1] = sa * x + ca * y + ty
    return tuple(out)


cdef bint _axis_separates(double *a, Py_ssize_t n, double *b, Py_ssize_t m) noexcept:
    cdef Py_ssize_t i, j, k
    cdef double nx, ny, d, amin, amax, bmin, bmax
    for i in range(0, n, 2):
        j = (i + 2) % n
        nx = a[j + 1] - a[i + 1]
        ny = a[i] - a[j]
        amin = amax = a[0] * nx + a[1] * ny
        for k in range(2, n, 2):
            d = a[k] * nx + a[k + 1] * ny
            if d < amin:
                amin = d
            elif d > amax:
                amax = d
        bmin = bmax = b[0] * nx + b[1] * ny
        for k in range(2, m, 2):
            d = b[k] * nx + b[k + 1] * ny
            if d < bmin:
                bmin = d
            elif d > bmax:
                bmax = d
        if bmin > amax + GEOM_EPS or amin > bmax + GEOM_EPS:
            return True
    return False


cdef Py_ssize_t _load(flat, double *stack, double **out) except -1:
    cdef Py_ssize_t n = len(flat)
    cdef Py_ssize_t i
    cdef double *buf = stack
    if n > STACK_FLOATS:
        buf = <double *> malloc(n * sizeof(double))
        if buf == NULL:
            raise MemoryError()
    for i in range(n):
        buf[i] = flat[i]
    out[0] = buf
    return n


def convex_overlap(flat_a, flat_b):
    cdef double sa[STACK_FLOATS]
    cdef double sb[STACK_FLOATS]
    cdef double *a
    cdef double *b
    cdef Py_ssize_t n = _load(flat_a, sa, &a)
    cdef Py_ssize_t m
    cdef bint sep
    try:
        m = _load(flat_b, sb, &b)
        try:
            sep = _axis_separates(a, n, b, m) or _axis_separates(b, m, a, n)
        finally:
            if b != sb:
                free(b)
    finally:
        if a != sa:
            free(a)
    return not sep


def point_in_convex(double px, double py, flat):
    cdef double stack[STACK_FLOATS]
    cdef double *a
    cdef Py_ssize_t n = _load(flat, stack, &a)
    cdef Py_ssize_t i, j
    cdef double ex, ey
    cdef bint inside = True
    for i in range(0, n, 2):
        j = (i + 2) % n
        ex = a[j] - a[i]
        ey = a[j + 1] - a[i + 1]
        if ex * (py - a[i + 1]) - ey * (px - a[i]) < -GEOM_EPS:
            inside = False
            break
    if a != stack:
        free(a)
    return inside


def poly_in_rect(flat, double minx, double miny, double maxx, double maxy):
    cdef Py_ssize_t n = len(flat)
    cdef Py_ssize_t i
    cdef double x, y
    for i in range(0, n, 2):
        x = flat[i]
        y = flat[i + 1]
        if x < minx - GEOM_EPS or x > maxx + GEOM_EPS:
            return False
        if y < miny - GEOM_EPS or y > maxy + GEOM_EPS:
            return False
    return True


def place_on_edge(double ux0, double uy0, double ux1, double uy1,
                  double px0, double py0, double px1, double py1):
    cdef double theta = atan2(py0 - py1, px0 - px1) - atan2(uy1 - uy0, ux1 - ux0)
    theta = theta % TAU
    if theta < 0.0:
        theta += TAU
    cdef double ca = cos(theta)
    cdef double sa = sin(theta)
    return px1 - (ca * ux0 - sa * uy0), py1 - (sa * ux0 + ca * uy0), theta


def revolve_step(double ex0, double ey0, double ex1, double ey1,
                 double ca, double sa, double gx, double gy,
                 double vx0, double vy0, double vx1, double vy1):
    cdef double px0 = gx + ca * ex0 - sa * ey0
    cdef double py0 = gy + sa * ex0 + ca * ey0
    cdef double px1 = gx + ca * ex1 - sa * ey1
    cdef double py1 = gy + sa * ex1 + ca * ey1
    return place_on_edge(vx0, vy0, vx1, vy1, px0, py0, px1, py1)
