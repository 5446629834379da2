"""Pure-Python kernels.

Same contracts as the Cython module _core; see that file for the hot
versions.  These are the reference implementations and the import-time
fallback when the extension is not built.
"""

from __future__ import annotations

import cmath
import math
from collections import deque

import numpy as np

INF = float("inf")


# ---------------------------------------------------------------------------
# scalar UHP helpers


def _apply4(m, z):
    """Apply a flat (a, b, c, d) real matrix to a complex or real point."""
    a, b, c, d = m
    if isinstance(z, float) and math.isinf(z):
        return a / c if abs(c) > 1e-300 else INF
    den = c * z + d
    if abs(den) < 1e-300:
        return INF
    return (a * z + b) / den


def _axis_frame(p, q):
    """Flat matrix sending the geodesic (p, q) to (0, inf)."""
    if p == INF:
        return (0.0, 1.0, 1.0, -q)
    if q == INF:
        return (1.0, -p, 0.0, 1.0)
    return (1.0, -p, 1.0, -q)


def _dist_and_param(z, frame):
    w = _apply4(frame, z)
    if not isinstance(w, complex):
        return INF, INF
    x, y = w.real, abs(w.imag)
    if y <= 0.0 or x != x:
        return INF, INF
    return math.asinh(abs(x) / y), 0.5 * math.log(x * x + y * y)


def _uhp_dist(z1, z2):
    d2 = abs(z1 - z2) ** 2
    return math.acosh(1.0 + d2 / (2.0 * z1.imag * z2.imag))


def _geodesic_through(z1, z2):
    """Real endpoints (p, q) of the UHP geodesic through two interior points."""
    if abs(z1.real - z2.real) < 1e-12:
        return (z1.real, INF)
    c = (abs(z1) ** 2 - abs(z2) ** 2) / (2.0 * (z1.real - z2.real))
    r = abs(z1 - c)
    return (c - r, c + r)


def _dist_to_segment(z, a_pt, b_pt):
    """Distance from z to the geodesic segment [a_pt, b_pt]."""
    if abs(a_pt - b_pt) < 1e-12:
        return _uhp_dist(z, a_pt)
    p, q = _geodesic_through(a_pt, b_pt)
    fr = _axis_frame(p, q)
    d, t = _dist_and_param(z, fr)
    ta = _dist_and_param(a_pt, fr)[1]
    tb = _dist_and_param(b_pt, fr)[1]
    lo, hi = (ta, tb) if ta < tb else (tb, ta)
    if lo <= t <= hi:
        return d
    return min(_uhp_dist(z, a_pt), _uhp_dist(z, b_pt))


def _axis_point(frame_inv, t):
    z = _apply4(frame_inv, complex(0.0, math.exp(t)))
    # a negative-determinant frame lands in the lower half plane; reflect
    return complex(z.real, abs(z.imag))


def _mat_mul4(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _canon4(m):
    """Canonical sign only; products of det-1 matrices keep det 1 to rounding."""
    a, b, c, d = m
    for e in (a, b, c, d):
        if abs(e) > 1e-12:
            if e < 0:
                return (-a, -b, -c, -d)
            return (a, b, c, d)
    return (a, b, c, d)


def _key4(m):
    return (round(m[0] * 1e9), round(m[1] * 1e9), round(m[2] * 1e9), round(m[3] * 1e9))


# ---------------------------------------------------------------------------
# tile walk


class _CellSet:
    """Dedup of orbit points in Fermi coordinates (dist-to-axis, parameter).

    Re-walks of one tile land within float drift (<< 1e-9) of each other in
    both coordinates, while distinct tiles are separated by at least the
    minimal orbit distance, which forces |dt| >= sep/cosh(d_max) >> cell.
    Membership probes the 3x3 neighborhood of fixed 1e-5 cells.
    """

    CELL = 1e-5

    def __init__(self, sep):
        self.cells: set[tuple[int, int]] = set()

    def add(self, d, t):
        """True if (d, t) is new; registers it."""
        kd = math.floor(d / self.CELL)
        kt = math.floor(t / self.CELL)
        probes = [(kd + i, kt + j) for i in (-1, 0, 1) for j in (-1, 0, 1)]
        if any(p in self.cells for p in probes):
            return False
        self.cells.add((kd, kt))
        return True


def tube_tiles(ext_mats, ext_words, p, q, lo, hi, r_filter, rc, foot_t,
               r_corr, sep, max_tiles):
    """Breadth-first walk over tiles near the axis (p, q).

    ext_mats/ext_words: flat matrices and letter words of the extended
    neighbor set (side and vertex neighbors of the base tile), so that any
    geodesic chain of tiles is connected in one step per crossed tile.
    Keeps tiles with center within r_filter + rc + 0.5 of the axis in a
    parameter slab, or (r_corr > 0) near the access corridor from the base
    point to its axis foot.  Returns (mats[N,4], words, params[N]) for
    tiles with center within r_filter of the axis and parameter in
    [lo, hi]; None over budget.

    The caller is responsible for keeping |lo|, |hi| bounded (a handful of
    units) by conjugating into a frame anchored near the window: a single
    frame cannot resolve the ends of a long window in double precision.
    """
    frame = _axis_frame(p, q)
    det = frame[0] * frame[3] - frame[1] * frame[2]
    fi = (frame[3] / det, -frame[1] / det, -frame[2] / det, frame[0] / det)
    base = complex(0.0, 1.0)
    foot = _axis_point(fi, foot_t)
    r_keep = r_filter + rc + 0.5

    nbrs = list(zip([tuple(m) for m in ext_mats], [tuple(w) for w in ext_words]))
    ident = (1.0, 0.0, 0.0, 1.0)
    cells = _CellSet(sep)
    d0, t0 = _dist_and_param(base, frame)
    cells.add(_signed_dist(base, frame), t0)
    queue = deque([(ident, ())])
    out_mats = []
    out_words = []
    out_params = []
    if d0 <= r_filter and lo <= t0 <= hi:
        out_mats.append(ident)
        out_words.append(())
        out_params.append(t0)
    # the walk slab must reach the corridor foot or the regions disconnect
    walk_lo = (min(lo, foot_t) if r_corr > 0 else lo) - r_keep
    walk_hi = (max(hi, foot_t) if r_corr > 0 else hi) + r_keep
    count = 0
    while queue:
        m, w = queue.popleft()
        count += 1
        if count > max_tiles:
            return None
        for nm, nw in nbrs:
            m2 = _canon4(_mat_mul4(m, nm))
            z2 = _apply4(m2, base)
            if not isinstance(z2, complex) or abs(z2.real) > 1e150 or z2.imag <= 0.0:
                continue
            d2, t2 = _dist_and_param(z2, frame)
            keep = d2 <= r_keep and walk_lo <= t2 <= walk_hi
            if not keep and r_corr > 0 and _dist_to_segment(z2, base, foot) <= r_corr:
                keep = True
            if not keep:
                continue
            if not cells.add(_signed_dist(z2, frame), t2):
                continue
            queue.append((m2, w + nw))
            if d2 <= r_filter and lo <= t2 <= hi:
                out_mats.append(m2)
                out_words.append(w + nw)
                out_params.append(t2)
    return (np.array(out_mats, dtype=np.float64).reshape(-1, 4), out_words,
            np.array(out_params, dtype=np.float64))


def _signed_dist(z, frame):
    w = _apply4(frame, z)
    d = math.asinh(abs(w.real) / abs(w.imag))
    return d if w.real >= 0 else -d


# ---------------------------------------------------------------------------
# candidate translate axes


def _circ(x):
    if x == INF or x != x:
        return math.pi - 2.0e-15
    a = 2.0 * math.atan(x)
    if a >= math.pi - 1e-15:
        a -= 2.0 * math.pi
    return a


def pair_candidates(seg_mats, loc_mats, p_d, q_d, p_c, q_c, t_lo, t_hi):
    """Products seg * loc whose image of d's axis crosses the c window.

    Returns a list of (i, j, t, p_image, q_image) with t the absolute
    parameter along c's axis, t_lo <= t < t_hi.
    """
    n, m = len(seg_mats), len(loc_mats)
    if n == 0 or m == 0:
        return []
    frame = _axis_frame(p_c, q_c)
    a_c, b_c = _circ(p_c), _circ(q_c)
    arc_lo, arc_hi = (a_c, b_c) if a_c < b_c else (b_c, a_c)

    T = np.asarray(seg_mats, dtype=np.float64).reshape(n, 1, 2, 2)
    U = np.asarray(loc_mats, dtype=np.float64).reshape(1, m, 2, 2)
    G = T @ U

    def image(e):
        with np.errstate(divide="ignore", invalid="ignore"):
            if e == INF:
                return G[..., 0, 0] / G[..., 1, 0]
            return (G[..., 0, 0] * e + G[..., 0, 1]) / (G[..., 1, 0] * e + G[..., 1, 1])

    r = image(p_d)
    s = image(q_d)
    with np.errstate(invalid="ignore"):
        tr_ = 2.0 * np.arctan(r)
        ts_ = 2.0 * np.arctan(s)
    tr_ = np.where(tr_ >= math.pi - 1e-15, tr_ - 2.0 * math.pi, tr_)
    ts_ = np.where(ts_ >= math.pi - 1e-15, ts_ - 2.0 * math.pi, ts_)
    tr_ = np.nan_to_num(tr_, nan=math.pi - 2e-15)
    ts_ = np.nan_to_num(ts_, nan=math.pi - 2e-15)
    in_r = (arc_lo < tr_) & (tr_ < arc_hi)
    in_s = (arc_lo < ts_) & (ts_ < arc_hi)
    link = in_r ^ in_s

    out = []
    fa, fb, fc, fd = frame
    for i, j in zip(*np.nonzero(link)):
        ri, si = r[i, j], s[i, j]
        rp = _apply4(frame, float(ri)) if not math.isinf(ri) else fa / fc if abs(fc) > 1e-300 else INF
        sp = _apply4(frame, float(si)) if not math.isinf(si) else fa / fc if abs(fc) > 1e-300 else INF
        if rp == INF or sp == INF:
            continue
        prod = -float(rp) * float(sp)
        if prod <= 0.0:
            continue
        t = 0.5 * math.log(prod)
        if t_lo - 1e-12 <= t < t_hi - 1e-12:
            out.append((int(i), int(j), t, float(ri), float(si)))
    return out


# ---------------------------------------------------------------------------
# brute-force oracle


def oracle_count(gen_mats, p_c, q_c, t_lo, t_hi, p_d, q_d, max_len):
    """Crossing count over every reduced conjugating word up to max_len.

    Linking is the cross-ratio sign test; crossings are deduplicated by
    their parameter along c's axis folded into one fundamental window.
    """
    gens = [tuple(g) for g in np.asarray(gen_mats, dtype=np.float64)]
    n_let = len(gens)
    frame = _axis_frame(p_c, q_c)
    ell = t_hi - t_lo
    found: list[float] = []

    def consider(m):
        r = _apply4(m, p_d)
        s = _apply4(m, q_d)
        # translates collapsed to one boundary point are rounding ghosts
        ri = isinstance(r, float) and math.isinf(r)
        si = isinstance(s, float) and math.isinf(s)
        if not (ri or si):
            span = 2.0 * abs(r - s) / math.sqrt((1.0 + r * r) * (1.0 + s * s))
            if span < 1e-7:
                return
        # cross ratio (r-p)(s-q) / ((r-q)(s-p)) < 0  <=>  linking
        def diff(u, v):
            if isinstance(u, float) and math.isinf(u):
                return 1.0
            if isinstance(v, float) and math.isinf(v):
                return -1.0
            return u - v
        num = diff(r, p_c) * diff(s, q_c)
        den = diff(r, q_c) * diff(s, p_c)
        if den == 0.0 or num == 0.0:
            return
        # the sign change must be macroscopic: translates of the axis itself
        # produce cross-ratios at rounding-noise scale
        if num / den >= -1e-12:
            return
        rp = _apply4(frame, r)
        sp = _apply4(frame, s)
        if isinstance(rp, float) and math.isinf(rp):
            return
        if isinstance(sp, float) and math.isinf(sp):
            return
        prod = -float(rp) * float(sp)
        if prod <= 0.0:
            return
        tt = (0.5 * math.log(prod) - t_lo) % ell
        for t1 in found:
            dt = abs(t1 - tt)
            if min(dt, ell - dt) < 1e-6:
                return
        found.append(tt)

    ident = (1.0, 0.0, 0.0, 1.0)
    stack = [(ident, -1, 0)]
    while stack:
        m, last, depth = stack.pop()
        if depth > 0:
            consider(m)
        if depth == max_len:
            continue
        for k in range(n_let):
            if last >= 0 and (k ^ 1) == last:
                continue  # reduced words only
            stack.append((_mat_mul4(m, gens[k]), k, depth + 1))
    return len(found)


# ---------------------------------------------------------------------------
# limit-set DFS (complex 2x2, letters 0..2r-1, inverse of k is k^1)


def _capply(m, z):
    a, b, c, d = m
    if z == INF or (isinstance(z, complex) and (math.isinf(z.real) or math.isinf(z.imag))):
        return a / c if abs(c) > 1e-300 else INF
    den = c * z + d
    if abs(den) < 1e-300:
        return INF
    return (a * z + b) / den


def _chordal(z, w):
    zi = z == INF or (isinstance(z, complex) and (math.isinf(z.real) or math.isinf(z.imag)))
    wi = w == INF or (isinstance(w, complex) and (math.isinf(w.real) or math.isinf(w.imag)))
    if zi and wi:
        return 0.0
    if zi:
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if wi:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


def limit_set_points(gen_mats, anchors, eps, max_depth, max_points):
    """Depth-first limit-set sampler.

    gen_mats: flat complex (2r, 4) array of letters (k^1 = inverse of k).
    anchors: (2r, n_anchor) complex array of per-letter anchor points; the
    images an active word sends them to are emitted at every node, and a
    branch stops once their chordal diameter drops below eps.

    Returns (points list, complete flag).
    """
    gens = [tuple(g) for g in np.asarray(gen_mats)]
    n_let = len(gens)
    anchor_pts = [list(anchors[k]) for k in range(n_let)]
    points: list[complex] = []
    complete = True

    ident = (1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j)
    stack = [(ident, -1, 0)]
    while stack:
        m, last, depth = stack.pop()
        if last >= 0:
            imgs = [_capply(m, z) for z in anchor_pts[last]]
            points.extend(imgs)
            if len(points) > max_points:
                return points, False
            diam = 0.0
            for i in range(len(imgs)):
                for j in range(i + 1, len(imgs)):
                    diam = max(diam, _chordal(imgs[i], imgs[j]))
            if diam < eps:
                continue
            if depth >= max_depth:
                complete = False
                continue
        for k in range(n_let):
            if last >= 0 and (k ^ 1) == last:
                continue
            stack.append((_mat_mul4_c(m, gens[k]), k, depth + 1))
    return points, complete


def _mat_mul4_c(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


# ---------------------------------------------------------------------------
# Farey / trace scan


def bq_scan(x, y, z, depth, tol):
    """Scan primitive traces over the Stern-Brocot tree to the given depth.

    Returns (ok, p, q): ok is False with the witness fraction p/q when some
    trace is real in (-2, 2) or has modulus < 2; (0, 0) stands for no
    witness.  Depth 0 checks exactly the three base fractions.
    """
    def bad(t):
        if abs(t) < 2.0 - tol:
            return True
        return abs(t.imag) <= tol and abs(t.real) < 2.0 - tol

    base = ((x, 0, 1), (y, 1, 0), (z, 1, 1))
    for t, p, q in base:
        if bad(t):
            return False, p, q
    # stack entries: left/right traces and fractions, mediant trace, depth
    stack = [(x, 0, 1, y, 1, 0, z, 0)]
    while stack:
        tl, pl, ql, tr, pr, qr, tm, d = stack.pop()
        if d >= depth:
            continue
        pm, qm = pl + pr, ql + qr
        # children of the (left, mediant) and (mediant, right) edges
        t1 = tl * tm - tr
        p1, q1 = pl + pm, ql + qm
        if bad(t1):
            return False, p1, q1
        t2 = tm * tr - tl
        p2, q2 = pm + pr, qm + qr
        if bad(t2):
            return False, p2, q2
        stack.append((tl, pl, ql, tm, pm, qm, t1, d + 1))
        stack.append((tm, pm, qm, tr, pr, qr, t2, d + 1))
    return True, 0, 0


def bq_row(xs, y, z_of, depth, tol):
    """Classify a row of complex x values; returns int8 codes (0 pass, 1 fail, 2 error)."""
    out = np.zeros(len(xs), dtype=np.int8)
    for i, x in enumerate(xs):
        z = z_of[i]
        if z != z:  # nan marks construction failure
            out[i] = 2
            continue
        ok, _, _ = bq_scan(complex(x), complex(y), complex(z), depth, tol)
        out[i] = 0 if ok else 1
    return out
