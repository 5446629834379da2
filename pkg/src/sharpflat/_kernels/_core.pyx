# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels.

Mirrors pure.py exactly: tube_tiles, pair_candidates, oracle_count,
limit_set_points, bq_scan, bq_row.  The pure module is the reference; any
behavioral difference between the two is a bug (the test suite compares
them directly).
"""

from collections import deque

import numpy as np

cimport numpy as cnp
from libc.math cimport asinh, atan, cosh, fabs, floor, isinf, log, sqrt, exp

INF = float("inf")

cdef double C_INF = float("inf")
cdef double PI = 3.141592653589793238462643383279502884


# ---------------------------------------------------------------------------
# scalar helpers (real UHP points as (x, y) pairs, matrices as double[4])


cdef inline double _apply_re(double a, double b, double c, double d,
                             double x) nogil:
    # real boundary action; returns +-inf for poles
    cdef double den
    if isinf(x):
        if fabs(c) < 1e-300:
            return C_INF
        return a / c
    den = c * x + d
    if fabs(den) < 1e-300:
        return C_INF
    return (a * x + b) / den


cdef inline int _apply_pt(double a, double b, double c, double d,
                          double x, double y, double* ox, double* oy) nogil:
    # interior action; returns 0 on degenerate output
    cdef double rnum_x = a * x + b
    cdef double rnum_y = a * y
    cdef double rden_x = c * x + d
    cdef double rden_y = c * y
    cdef double n2 = rden_x * rden_x + rden_y * rden_y
    if n2 < 1e-300:
        return 0
    ox[0] = (rnum_x * rden_x + rnum_y * rden_y) / n2
    oy[0] = (rnum_y * rden_x - rnum_x * rden_y) / n2
    return 1


cdef inline void _frame_of(double p, double q, double* f) nogil:
    if isinf(p):
        f[0] = 0.0; f[1] = 1.0; f[2] = 1.0; f[3] = -q
    elif isinf(q):
        f[0] = 1.0; f[1] = -p; f[2] = 0.0; f[3] = 1.0
    else:
        f[0] = 1.0; f[1] = -p; f[2] = 1.0; f[3] = -q


cdef inline int _dist_param(double* f, double x, double y,
                            double* dist, double* par, double* sgn) nogil:
    cdef double wx, wy
    if not _apply_pt(f[0], f[1], f[2], f[3], x, y, &wx, &wy):
        return 0
    wy = fabs(wy)
    if wy <= 0.0 or wx != wx:
        return 0
    dist[0] = asinh(fabs(wx) / wy)
    par[0] = 0.5 * log(wx * wx + wy * wy)
    sgn[0] = 1.0 if wx >= 0 else -1.0
    return 1


cdef inline double _uhp_dist_c(double x1, double y1, double x2, double y2) nogil:
    cdef double dx = x1 - x2
    cdef double dy = y1 - y2
    cdef double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2)
    return log(arg + sqrt(arg * arg - 1.0))


cdef inline void _mul4(double* m, double* n, double* out) nogil:
    out[0] = m[0] * n[0] + m[1] * n[2]
    out[1] = m[0] * n[1] + m[1] * n[3]
    out[2] = m[2] * n[0] + m[3] * n[2]
    out[3] = m[2] * n[1] + m[3] * n[3]


cdef inline void _canon4_c(double* m) nogil:
    cdef int i
    for i in range(4):
        if fabs(m[i]) > 1e-12:
            if m[i] < 0:
                m[0] = -m[0]; m[1] = -m[1]; m[2] = -m[2]; m[3] = -m[3]
            return


cdef inline double _circ(double x) nogil:
    cdef double a
    if isinf(x):
        return PI if x > 0 else -PI + 0.0  # both wrap below
    a = 2.0 * atan(x)
    if a >= PI - 1e-15:
        a -= 2.0 * PI
    return a




# ---------------------------------------------------------------------------
# tube walk


def tube_tiles(ext_mats, ext_words, double p, double q, double lo, double hi,
               double r_filter, double rc, double foot_t, double r_corr,
               double sep, long max_tiles):
    """Same contract as pure.tube_tiles."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nbr = np.ascontiguousarray(
        np.asarray(ext_mats, dtype=np.float64).reshape(-1, 4))
    cdef int n_nbr = nbr.shape[0]
    words = [tuple(w) for w in ext_words]

    cdef double f[4]
    _frame_of(p, q, f)
    cdef double det = f[0] * f[3] - f[1] * f[2]
    cdef double fi0 = f[3] / det, fi1 = -f[1] / det
    cdef double fi2 = -f[2] / det, fi3 = f[0] / det
    cdef double r_keep = r_filter + rc + 0.5

    # corridor endpoints: base i and the axis foot
    cdef double ex = exp(foot_t)
    cdef double foot_x, foot_y
    if not _apply_pt(fi0, fi1, fi2, fi3, 0.0, ex, &foot_x, &foot_y):
        foot_x, foot_y = 0.0, 1.0
    foot_y = fabs(foot_y)
    # full geodesic through base and foot, for the corridor distance
    cdef double cg_p = 0.0, cg_q = 0.0
    cdef int corr_vertical = 0
    cdef double cx
    if fabs(foot_x - 0.0) < 1e-12:
        corr_vertical = 1
        cg_p = 0.0
        cg_q = C_INF
    else:
        cx = ((foot_x * foot_x + foot_y * foot_y) - 1.0) / (2.0 * foot_x)
        cg_p = cx - sqrt(cx * cx + 1.0)
        cg_q = cx + sqrt(cx * cx + 1.0)
    cdef double cf[4]
    _frame_of(cg_p, cg_q, cf)
    cdef double c_ta, c_tb, dd, tt, ss
    if not _dist_param(cf, 0.0, 1.0, &dd, &c_ta, &ss):
        c_ta = 0.0
    if not _dist_param(cf, foot_x, foot_y, &dd, &c_tb, &ss):
        c_tb = 0.0
    cdef double c_lo = c_ta if c_ta < c_tb else c_tb
    cdef double c_hi = c_tb if c_ta < c_tb else c_ta

    cdef double walk_lo = (lo if lo < foot_t or r_corr <= 0 else foot_t) - r_keep
    cdef double walk_hi = (hi if hi > foot_t or r_corr <= 0 else foot_t) + r_keep

    cells = set()
    cdef double CELL = 1e-5
    out_mats = []
    out_words = []
    out_params = []

    cdef double m_cur[4]
    cdef double m_new[4]
    cdef double zx, zy, d2, t2, sg2, dseg
    cdef long kd, kt
    cdef int i, keep
    cdef long count = 0

    # seed with the identity
    queue = deque()
    queue.append(((1.0, 0.0, 0.0, 1.0), ()))
    if _dist_param(f, 0.0, 1.0, &d2, &t2, &sg2):
        kd = <long>floor(sg2 * d2 / CELL)
        kt = <long>floor(t2 / CELL)
        cells.add((kd, kt))
        if d2 <= r_filter and lo <= t2 <= hi:
            out_mats.append((1.0, 0.0, 0.0, 1.0))
            out_words.append(())
            out_params.append(t2)

    while queue:
        mt, wt = queue.popleft()
        count += 1
        if count > max_tiles:
            return None
        m_cur[0] = mt[0]; m_cur[1] = mt[1]; m_cur[2] = mt[2]; m_cur[3] = mt[3]
        for i in range(n_nbr):
            _mul4(m_cur, &nbr[i, 0], m_new)
            _canon4_c(m_new)
            if not _apply_pt(m_new[0], m_new[1], m_new[2], m_new[3],
                             0.0, 1.0, &zx, &zy):
                continue
            if zy <= 0.0 or fabs(zx) > 1e150:
                continue
            if not _dist_param(f, zx, zy, &d2, &t2, &sg2):
                continue
            keep = 1 if (d2 <= r_keep and walk_lo <= t2 <= walk_hi) else 0
            if not keep and r_corr > 0.0:
                if not _dist_param(cf, zx, zy, &dseg, &tt, &ss):
                    dseg = C_INF
                else:
                    if tt < c_lo or tt > c_hi:
                        dseg = min(_uhp_dist_c(zx, zy, 0.0, 1.0),
                                   _uhp_dist_c(zx, zy, foot_x, foot_y))
                if dseg <= r_corr:
                    keep = 1
            if not keep:
                continue
            kd = <long>floor(sg2 * d2 / CELL)
            kt = <long>floor(t2 / CELL)
            if ((kd, kt) in cells or (kd - 1, kt) in cells or (kd + 1, kt) in cells
                    or (kd, kt - 1) in cells or (kd, kt + 1) in cells
                    or (kd - 1, kt - 1) in cells or (kd - 1, kt + 1) in cells
                    or (kd + 1, kt - 1) in cells or (kd + 1, kt + 1) in cells):
                continue
            cells.add((kd, kt))
            nt = (m_new[0], m_new[1], m_new[2], m_new[3])
            nw = wt + words[i]
            queue.append((nt, nw))
            if d2 <= r_filter and lo <= t2 <= hi:
                out_mats.append(nt)
                out_words.append(nw)
                out_params.append(t2)
    return (np.array(out_mats, dtype=np.float64).reshape(-1, 4), out_words,
            np.array(out_params, dtype=np.float64))


# ---------------------------------------------------------------------------
# candidate translate axes


def pair_candidates(seg_mats, loc_mats, double p_d, double q_d,
                    double p_c, double q_c, double t_lo, double t_hi):
    """Same contract as pure.pair_candidates."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] A = np.ascontiguousarray(
        np.asarray(seg_mats, dtype=np.float64).reshape(-1, 4))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] B = np.ascontiguousarray(
        np.asarray(loc_mats, dtype=np.float64).reshape(-1, 4))
    cdef int n = A.shape[0], m = B.shape[0]
    cdef double f[4]
    _frame_of(p_c, q_c, f)
    cdef double a_c = _circ(p_c)
    cdef double b_c = _circ(q_c)
    cdef double arc_lo = a_c if a_c < b_c else b_c
    cdef double arc_hi = b_c if a_c < b_c else a_c

    out = []
    cdef double g[4]
    cdef double r, s, tr, ts, rp, sp, prod, t
    cdef int i, j, in_r, in_s
    for i in range(n):
        for j in range(m):
            _mul4(&A[i, 0], &B[j, 0], g)
            r = _apply_re(g[0], g[1], g[2], g[3], p_d)
            s = _apply_re(g[0], g[1], g[2], g[3], q_d)
            tr = _circ(r)
            ts = _circ(s)
            in_r = 1 if (arc_lo < tr and tr < arc_hi) else 0
            in_s = 1 if (arc_lo < ts and ts < arc_hi) else 0
            if in_r == in_s:
                continue
            rp = _apply_re(f[0], f[1], f[2], f[3], r)
            sp = _apply_re(f[0], f[1], f[2], f[3], s)
            if isinf(rp) or isinf(sp):
                continue
            prod = -rp * sp
            if prod <= 0.0:
                continue
            t = 0.5 * log(prod)
            if t_lo - 1e-12 <= t < t_hi - 1e-12:
                out.append((i, j, t, r, s))
    return out


# ---------------------------------------------------------------------------
# brute-force oracle


def oracle_count(gen_mats, double p_c, double q_c, double t_lo, double t_hi,
                 double p_d, double q_d, int max_len):
    """Same contract as pure.oracle_count."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] G = np.ascontiguousarray(
        np.asarray(gen_mats, dtype=np.float64).reshape(-1, 4))
    cdef int n_let = G.shape[0]
    cdef double f[4]
    _frame_of(p_c, q_c, f)
    cdef double ell = t_hi - t_lo

    found = []
    # explicit DFS stack of matrices
    cdef cnp.ndarray[cnp.float64_t, ndim=2] stack_m = np.zeros(
        (max_len + 1, 4), dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] stack_k = np.zeros(
        max_len + 1, dtype=np.int32)
    stack_m[0, 0] = 1.0; stack_m[0, 3] = 1.0
    stack_k[0] = 0
    cdef int depth = 0
    cdef int k, last
    cdef double r, s, span, num, den, rp, sp, prod, tt, dtt
    cdef double dr, dsv
    cdef int found_n, fi, dup

    while depth >= 0:
        k = stack_k[depth]
        if k >= n_let or depth >= max_len:
            depth -= 1
            if depth >= 0:
                stack_k[depth] += 1
            continue
        last = stack_k[depth - 1] if depth > 0 else -1
        if depth > 0 and (k ^ 1) == last:
            stack_k[depth] += 1
            continue
        _mul4(&stack_m[depth, 0], &G[k, 0], &stack_m[depth + 1, 0])
        # consider this element
        r = _apply_re(stack_m[depth + 1, 0], stack_m[depth + 1, 1],
                      stack_m[depth + 1, 2], stack_m[depth + 1, 3], p_d)
        s = _apply_re(stack_m[depth + 1, 0], stack_m[depth + 1, 1],
                      stack_m[depth + 1, 2], stack_m[depth + 1, 3], q_d)
        while True:  # single-pass block, breaks out
            if not (isinf(r) or isinf(s)):
                span = 2.0 * fabs(r - s) / sqrt((1.0 + r * r) * (1.0 + s * s))
                if span < 1e-7:
                    break
            dr = 1.0 if isinf(r) else r - p_c
            dsv = 1.0 if isinf(s) else s - q_c
            num = dr * dsv
            dr = 1.0 if isinf(r) else r - q_c
            dsv = 1.0 if isinf(s) else s - p_c
            den = dr * dsv
            if den == 0.0 or num == 0.0:
                break
            if num / den >= -1e-12:
                break
            rp = _apply_re(f[0], f[1], f[2], f[3], r)
            sp = _apply_re(f[0], f[1], f[2], f[3], s)
            if isinf(rp) or isinf(sp):
                break
            prod = -rp * sp
            if prod <= 0.0:
                break
            tt = (0.5 * log(prod) - t_lo) % ell
            found_n = len(found)
            dup = 0
            for fi in range(found_n):
                dtt = fabs(<double>found[fi] - tt)
                if dtt > ell - dtt:
                    dtt = ell - dtt
                if dtt < 1e-6:
                    dup = 1
                    break
            if not dup:
                found.append(tt)
            break
        # descend
        depth += 1
        stack_k[depth] = 0
    return len(found)


# ---------------------------------------------------------------------------
# limit-set DFS


def limit_set_points(gen_mats, anchors, double eps, int max_depth,
                     long max_points):
    """Same contract as pure.limit_set_points."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] G = np.ascontiguousarray(
        np.asarray(gen_mats, dtype=complex).reshape(-1, 4))
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] anc = np.ascontiguousarray(
        np.asarray(anchors, dtype=complex))
    cdef int n_let = G.shape[0]
    cdef int n_anc = anc.shape[1]

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] stack_m = np.zeros(
        (max_depth + 2, 4), dtype=complex)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] stack_k = np.zeros(
        max_depth + 2, dtype=np.int32)
    stack_m[0, 0] = 1.0; stack_m[0, 3] = 1.0
    stack_k[0] = 0

    points = []
    cdef int complete = 1
    cdef int depth = 0
    cdef int k, last, ai, bi
    cdef double complex den, val
    cdef double complex imgs[16]
    cdef double diam, dcur, n1, n2, dx
    cdef double complex z, wz

    if n_anc > 16:
        raise ValueError("too many anchors")

    while depth >= 0:
        k = stack_k[depth]
        if k >= n_let or depth >= max_depth:
            if depth >= max_depth and k == 0:
                complete = 0
            depth -= 1
            if depth >= 0:
                stack_k[depth] += 1
            continue
        last = stack_k[depth - 1] if depth > 0 else -1
        if depth > 0 and (k ^ 1) == last:
            stack_k[depth] += 1
            continue
        stack_m[depth + 1, 0] = stack_m[depth, 0] * G[k, 0] + stack_m[depth, 1] * G[k, 2]
        stack_m[depth + 1, 1] = stack_m[depth, 0] * G[k, 1] + stack_m[depth, 1] * G[k, 3]
        stack_m[depth + 1, 2] = stack_m[depth, 2] * G[k, 0] + stack_m[depth, 3] * G[k, 2]
        stack_m[depth + 1, 3] = stack_m[depth, 2] * G[k, 1] + stack_m[depth, 3] * G[k, 3]

        # emit anchor images and measure their chordal diameter
        diam = 0.0
        for ai in range(n_anc):
            z = anc[k, ai]
            den = stack_m[depth + 1, 2] * z + stack_m[depth + 1, 3]
            if den.real * den.real + den.imag * den.imag < 1e-280:
                val = 1e301
            else:
                val = (stack_m[depth + 1, 0] * z + stack_m[depth + 1, 1]) / den
            imgs[ai] = val
            points.append(complex(val))
        if len(points) > max_points:
            return points, False
        for ai in range(n_anc):
            for bi in range(ai + 1, n_anc):
                n1 = 1.0 + (imgs[ai].real * imgs[ai].real + imgs[ai].imag * imgs[ai].imag)
                n2 = 1.0 + (imgs[bi].real * imgs[bi].real + imgs[bi].imag * imgs[bi].imag)
                wz = imgs[ai] - imgs[bi]
                dx = 2.0 * sqrt(wz.real * wz.real + wz.imag * wz.imag) / sqrt(n1 * n2)
                if n1 > 1e280 or n2 > 1e280:
                    # a point at infinity: chordal distance via the other one
                    if n1 > 1e280 and n2 > 1e280:
                        dx = 0.0
                    elif n1 > 1e280:
                        dx = 2.0 / sqrt(n2)
                    else:
                        dx = 2.0 / sqrt(n1)
                if dx > diam:
                    diam = dx
        if diam < eps:
            stack_k[depth] += 1
            continue
        depth += 1
        stack_k[depth] = 0
    return points, bool(complete)


# ---------------------------------------------------------------------------
# Farey trace scan


def bq_scan(double complex x, double complex y, double complex z,
            int depth, double tol):
    """Same contract as pure.bq_scan."""
    cdef double complex tl, tr_, tm, t1, t2
    cdef long pl, ql, pr, qr, pm, qm, p1v, q1v, p2v, q2v
    cdef int d

    if _bad(x, tol):
        return False, 0, 1
    if _bad(y, tol):
        return False, 1, 0
    if _bad(z, tol):
        return False, 1, 1

    stack = [(x, 0, 1, y, 1, 0, z, 0)]
    while stack:
        tl, pl, ql, tr_, pr, qr, tm, d = stack.pop()
        if d >= depth:
            continue
        pm = pl + pr
        qm = ql + qr
        t1 = tl * tm - tr_
        p1v = pl + pm; q1v = ql + qm
        if _bad(t1, tol):
            return False, p1v, q1v
        t2 = tm * tr_ - tl
        p2v = pm + pr; q2v = qm + qr
        if _bad(t2, tol):
            return False, p2v, q2v
        stack.append((tl, pl, ql, tm, pm, qm, t1, d + 1))
        stack.append((tm, pm, qm, tr_, pr, qr, t2, d + 1))
    return True, 0, 0


cdef inline int _bad(double complex t, double tol) nogil:
    cdef double mod2 = t.real * t.real + t.imag * t.imag
    if mod2 < (2.0 - tol) * (2.0 - tol):
        return 1
    if fabs(t.imag) <= tol and fabs(t.real) < 2.0 - tol:
        return 1
    return 0


def bq_row(xs, double complex y, z_of, int depth, double tol):
    """Same contract as pure.bq_row."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] xa = np.ascontiguousarray(
        np.asarray(xs, dtype=complex))
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] za = np.ascontiguousarray(
        np.asarray(z_of, dtype=complex))
    cdef cnp.ndarray[cnp.int8_t, ndim=1] out = np.zeros(len(xa), dtype=np.int8)
    cdef int i
    cdef double complex zz
    for i in range(xa.shape[0]):
        zz = za[i]
        if zz != zz:
            out[i] = 2
            continue
        ok, _, _ = bq_scan(xa[i], y, zz, depth, tol)
        out[i] = 0 if ok else 1
    return out
