"""Fuchsian model of the genus-g surface and the geodesic crossing kernel.

The model is the regular 4g-gon side-pairing group.  The polygon is built
in the unit-disk model (vertex angle 2pi/4g, so all 4g vertices glue to a
single point of total angle 2pi), its sides are labelled by the relator
word a1 b1 a1' b1' a2 ..., and the pairing transformation of a generator
maps the side carrying the inverse label onto the side carrying the label,
reversing the boundary orientation.  Everything is then moved to the upper
half-plane, where group elements are real 2x2 matrices of determinant one.

Geodesic crossings of two classes c, d are enumerated by intersecting one
fundamental segment of c's axis with translates of d's axis.  Translates
are generated soundly from two tile sets:

  * tiles meeting the segment (any crossing point lies in one of them), and
  * translates of d's axis passing within one tile-circumradius of the
    base point (one representative per coset of <M_d>).

Every translate crossing the segment factors as (segment tile) * (local
axis), so scanning the product of the two sets cannot undercount.  Both
sets come from a breadth-first tile walk over the tiling, kept inside a
tube around the relevant axis plus an access corridor from the base point;
tubes are convex, which is what makes the walk complete.  A brute-force
oracle (all reduced conjugating words up to a length cap, cross-ratio sign
test for linking) double-checks the kernel in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import (
    DegenerateCrossing,
    EnumerationBudgetExceeded,
    GenusTooSmall,
    NoAxis,
)
from .words import CurveWord, Letter, SurfaceSpec

INF = float("inf")

RELATOR_TOL = 1e-9
# distinct axes in the discrete group stay far apart; float noise on long
# products reaches ~1e-9, so the own-axis and tangency cutoffs sit at 1e-7
ENDPOINT_TOL = 1e-7
ANGLE_TOL = 1e-7
CROSSING_DEDUP_TOL = 1e-6
BFS_SLACK = 0.75
MAX_TILES = 400_000


# ---------------------------------------------------------------------------
# disk-model helpers used only while building the polygon


def _disk_apply(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def _disk_pair_map(A, B):
    """SU(1,1)-like matrix sending A to 0 and B to the positive real axis."""
    t = np.array([[1.0, -A], [-A.conjugate(), 1.0]], dtype=complex)
    t /= math.sqrt(1.0 - abs(A) ** 2)
    w = _disk_apply(t, B)
    phase = w / abs(w)
    half = np.sqrt(phase)
    rot = np.array([[1.0 / half, 0.0], [0.0, half]], dtype=complex)
    return rot @ t


def _to_uhp_matrix(md):
    """Conjugate a disk-model matrix to a real UHP matrix (PSL(2,R))."""
    cay = np.array([[1.0, -1j], [1.0, 1j]], dtype=complex)  # z -> (z-i)/(z+i)
    cay_inv = np.linalg.inv(cay)
    mu = cay_inv @ md @ cay
    mu /= np.sqrt(np.linalg.det(mu))
    # kill the residual global phase using the largest entry
    k = np.argmax(np.abs(mu))
    entry = mu.flat[k]
    mu = mu * (abs(entry) / entry)
    if np.max(np.abs(mu.imag)) > 1e-9:
        raise RuntimeError("disk matrix did not conjugate to a real matrix")
    out = mu.real.astype(np.float64)
    out /= math.sqrt(abs(float(np.linalg.det(out))))
    return _canon_sign(out)


def _canon_sign(m):
    for e in (m[0, 0], m[0, 1], m[1, 0], m[1, 1]):
        if abs(e) > 1e-12:
            return -m if e < 0 else m
    return m


def _disk_to_uhp(w):
    if abs(1.0 - w) < 1e-15:
        return INF
    return complex(1j * (1.0 + w) / (1.0 - w))


# ---------------------------------------------------------------------------
# UHP geometry helpers (shared with the crossing driver)


def uhp_dist(z1, z2):
    d2 = abs(z1 - z2) ** 2
    return math.acosh(1.0 + d2 / (2.0 * z1.imag * z2.imag))


def _axis_map(p, q):
    """Matrix sending the geodesic (p, q) to (0, inf); p, q real or INF."""
    if p == INF:
        return np.array([[0.0, 1.0], [1.0, -q]], dtype=np.float64)
    if q == INF:
        return np.array([[1.0, -p], [0.0, 1.0]], dtype=np.float64)
    return np.array([[1.0, -p], [1.0, -q]], dtype=np.float64)


def _apply_real(m, z):
    """Moebius action preserving the input flavor (real stays real)."""
    if isinstance(z, float) and math.isinf(z):
        if abs(m[1, 0]) < 1e-300:
            return INF
        return float(m[0, 0] / m[1, 0])
    den = m[1, 0] * z + m[1, 1]
    if abs(den) < 1e-300:
        return INF
    out = (m[0, 0] * z + m[0, 1]) / den
    return out if isinstance(z, complex) else float(out)


def dist_to_axis(z, p, q):
    """Hyperbolic distance from z (UHP) to the geodesic with endpoints p, q."""
    w = _apply_real(_axis_map(p, q), z)
    return math.asinh(abs(w.real) / abs(w.imag))


def axis_param(z, p, q):
    """Signed parameter of the projection of z on the geodesic (p, q).

    Zero at the point the map sends to i; increases toward q.
    """
    w = _apply_real(_axis_map(p, q), z)
    return 0.5 * math.log((w.real * w.real + w.imag * w.imag))


def axis_point(p, q, t):
    """Point at parameter t on the geodesic (p, q), in UHP coordinates."""
    m = _axis_map(p, q)
    mi = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=np.float64)
    z = _apply_real(mi, complex(0.0, math.exp(t)))
    return complex(z.real, abs(z.imag))


def translation_length(tr):
    return 2.0 * math.acosh(abs(tr) / 2.0)


def _circ_angle(x):
    """Continuous cyclic coordinate on the UHP boundary, INF included."""
    if x == INF:
        return math.pi
    a = 2.0 * math.atan(x)
    if a >= math.pi - 1e-15:
        a -= 2.0 * math.pi
    return a


def _chordal_pts(x, y):
    """Chordal distance of two boundary points (INF allowed)."""
    xi = isinstance(x, float) and math.isinf(x)
    yi = isinstance(y, float) and math.isinf(y)
    if xi and yi:
        return 0.0
    if xi:
        return 2.0 / math.sqrt(1.0 + y * y)
    if yi:
        return 2.0 / math.sqrt(1.0 + x * x)
    return 2.0 * abs(x - y) / math.sqrt((1.0 + x * x) * (1.0 + y * y))


def endpoints_link(p1, q1, p2, q2):
    """True when the pairs (p1,q1) and (p2,q2) separate each other on the circle."""
    a, b = _circ_angle(p1), _circ_angle(q1)
    lo, hi = (a, b) if a < b else (b, a)
    inside = 0
    for x in (p2, q2):
        t = _circ_angle(x)
        if lo < t < hi:
            inside += 1
    return inside == 1


def geodesic_meet(p1, q1, p2, q2):
    """Intersection point (UHP) of two crossing geodesics, or None."""
    e1 = sorted([p1, q1], key=lambda v: (v == INF, v))
    e2 = sorted([p2, q2], key=lambda v: (v == INF, v))
    if e1[1] == INF and e2[1] == INF:
        return None
    if e1[1] == INF:
        x = e1[0]
        c2, r2 = (e2[0] + e2[1]) / 2.0, abs(e2[1] - e2[0]) / 2.0
        y2 = r2 * r2 - (x - c2) ** 2
        return complex(x, math.sqrt(y2)) if y2 > 0 else None
    if e2[1] == INF:
        return geodesic_meet(p2, q2, p1, q1)
    c1, r1 = (e1[0] + e1[1]) / 2.0, (e1[1] - e1[0]) / 2.0
    c2, r2 = (e2[0] + e2[1]) / 2.0, (e2[1] - e2[0]) / 2.0
    if abs(c1 - c2) < 1e-300:
        return None
    x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1))
    y2 = r1 * r1 - (x - c1) ** 2
    if y2 <= 0:
        return None
    return complex(x, math.sqrt(y2))


def geodesic_tangent(p, q, z):
    """Unit (euclidean) tangent of the geodesic (p, q) at z, pointing toward q."""
    if p == INF:
        return complex(0.0, -1.0)  # descending vertical line toward finite q
    if q == INF:
        return complex(0.0, 1.0)
    c = (p + q) / 2.0
    t = 1j * (z - c)
    t /= abs(t)
    # i*(z-c) points counterclockwise, i.e. toward the smaller endpoint
    if q > p:
        t = -t
    return t


# ---------------------------------------------------------------------------
# model construction


@dataclass
class Geodesic:
    """Axis of a hyperbolic element: attracting endpoint first."""

    att: float
    rep: float
    element: np.ndarray
    word: tuple[Letter, ...] | None = None

    @property
    def endpoints(self):
        return (self.att, self.rep)


class FuchsianModel:
    """Regular 4g-gon side-pairing group in the upper half-plane."""

    def __init__(self, surface: SurfaceSpec, tolerance: float = RELATOR_TOL):
        self.surface = surface
        self.tolerance = tolerance
        g = surface.genus
        n = 4 * g

        # polygon in the disk: vertex angle 2pi/n forces cosh R = cot(pi/n)^2
        R = math.acosh(1.0 / math.tan(math.pi / n) ** 2)
        r_e = math.tanh(R / 2.0)
        verts = [r_e * np.exp(1j * math.pi * (2 * k + 1) / n) for k in range(n)]

        relator = surface.relator()
        side_label = list(relator)  # label of side k, in ccw order
        pos = {lab: k for k, lab in enumerate(side_label)}

        disk_gens: list[np.ndarray] = []
        for idx in range(surface.rank):
            p = pos[(idx, 1)]
            q = pos[(idx, -1)]
            m_from = _disk_pair_map(verts[q], verts[(q + 1) % n])
            m_to = _disk_pair_map(verts[(p + 1) % n], verts[p])
            t = np.linalg.inv(m_to) @ m_from
            if idx % 2 == 1:
                # vertex cycle of this polygon reads [a1,b1^-1][a2,b2^-1]...;
                # inverting the b pairings restores the canonical relator
                t = np.linalg.inv(t)
            disk_gens.append(t)

        resid = self._relator_residual(disk_gens, g)
        if resid > tolerance:
            raise RuntimeError(f"side pairing relator residual {resid:.3e}")

        self.generators = [_to_uhp_matrix(m) for m in disk_gens]
        self.vertices_disk = verts
        self.vertices = [_disk_to_uhp(w) for w in verts]
        self.base = complex(0.0, 1.0)  # image of the disk center
        self.circumradius = R
        self.side_label = side_label

        # neighbor across each side, found by probing a point just outside
        # the side midpoint and asking which letter's tile contains it
        letters_all = [(idx, sg) for idx in range(surface.rank) for sg in (1, -1)]
        mats_all = [self.letter_matrix(lt) for lt in letters_all]
        mats = []
        lets = []
        for k in range(n):
            mid_disk = (verts[k] + verts[(k + 1) % n]) / 2.0
            probe_disk = mid_disk * (1.0 + 0.12 * (1.0 - abs(mid_disk)))
            probe = _disk_to_uhp(probe_disk)
            best, best_d = None, uhp_dist(complex(probe), self.base)
            for lt, m in zip(letters_all, mats_all):
                zi = _apply_real(m, self.base)
                dd = uhp_dist(complex(probe), complex(zi))
                if dd < best_d:
                    best, best_d = lt, dd
            if best is None:
                raise RuntimeError(f"no neighbor found across side {k}")
            mats.append(self.letter_matrix(best))
            lets.append(best)
        for k in range(n):
            idx, sg = lets[k]
            partner = lets.index((idx, -sg))
            if partner == k:
                raise RuntimeError("side pairing self-matched")
        self.side_neighbor_mats = np.array([m.reshape(4) for m in mats])
        self.side_neighbor_letters = lets

        self._word_cache: dict[tuple[Letter, ...], np.ndarray] = {}
        self._tube_cache: dict = {}
        self._crossing_cache: dict = {}

        self._build_extended_neighbors()

    def _build_extended_neighbors(self):
        """All nonidentity tiles sharing a point with the base tile.

        A geodesic chain of tiles advances by one extended neighbor per
        crossed tile (consecutive crossed tiles share a side or a vertex),
        which lets the tube walk use a tight keep radius.
        """
        n = len(self.side_neighbor_letters)
        base = self.base
        seen = {(1.0, 0.0, 0.0, 1.0): ()}
        frontier = [(np.eye(2), ())]
        ball = 2.0 * self.circumradius + 1e-6
        for _ in range(n):  # enough side-steps to wind around any vertex
            nxt = []
            for m, w in frontier:
                for k in range(n):
                    m2 = _canon_sign(m @ self.side_neighbor_mats[k].reshape(2, 2))
                    z2 = _apply_real(m2, base)
                    if uhp_dist(complex(z2), base) > ball:
                        continue
                    key = tuple(round(v, 7) for v in m2.reshape(4))
                    if key in seen:
                        continue
                    w2 = w + (self.side_neighbor_letters[k],)
                    seen[key] = w2
                    nxt.append((m2, w2))
            frontier = nxt
        vset = self.vertices_disk
        ext_mats, ext_words, sep = [], [], math.inf
        for key, w in seen.items():
            if not w:
                continue
            m = np.array(key, dtype=np.float64).reshape(2, 2)
            md = self.word_matrix(w)
            touches = False
            for vd in vset:
                vz = _disk_to_uhp(vd)
                img = _apply_real(md, vz)
                for vd2 in vset:
                    if abs(complex(img) - complex(_disk_to_uhp(vd2))) < 1e-6:
                        touches = True
                        break
                if touches:
                    break
            if touches:
                ext_mats.append(md.reshape(4))
                ext_words.append(w)
                sep = min(sep, uhp_dist(complex(_apply_real(md, base)), base))
        self.ext_neighbor_mats = np.array(ext_mats)
        self.ext_neighbor_words = ext_words
        self.orbit_sep = sep

    @staticmethod
    def _inv(m):
        return _canon_sign(np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]))

    @staticmethod
    def _relator_residual(gens, g):
        acc = np.eye(2, dtype=complex)
        for k in range(g):
            a, b = gens[2 * k], gens[2 * k + 1]
            acc = acc @ a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)
        return min(
            float(np.max(np.abs(acc - np.eye(2)))),
            float(np.max(np.abs(acc + np.eye(2)))),
        )

    def relator_residual(self) -> float:
        return self._relator_residual([m.astype(complex) for m in self.generators],
                                      self.surface.genus)

    def letter_matrix(self, letter: Letter) -> np.ndarray:
        idx, sign = letter
        m = self.generators[idx]
        return self._inv(m) if sign < 0 else m

    def word_matrix(self, letters) -> np.ndarray:
        """Product of generator matrices.

        The determinant stays 1 to relative rounding drift, and is never
        recomputed from the product: for long words ad - bc loses all its
        digits to cancellation.
        """
        key = tuple(letters)
        hit = self._word_cache.get(key)
        if hit is not None:
            return hit
        m = np.eye(2, dtype=np.float64)
        for lt in key:
            m = m @ self.letter_matrix(lt)
        m = _canon_sign(m)
        self._word_cache[key] = m
        return m

    def dump_text(self) -> str:
        """Generator matrices, 17 significant digits, for reproducibility."""
        lines = [f"genus {self.surface.genus}"]
        for idx in range(self.surface.rank):
            name = self.surface.letter_name((idx, 1))
            vals = " ".join(f"{v:.17g}" for v in self.generators[idx].reshape(4))
            lines.append(f"{name} {vals}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=8)
def standard_fuchsian(genus: int) -> FuchsianModel:
    """The regular-4g-gon side-pairing model; relator residual <= 1e-9."""
    if not isinstance(genus, int) or genus < 2:
        raise GenusTooSmall(f"genus must be an integer >= 2, got {genus!r}")
    return FuchsianModel(SurfaceSpec(genus))


# ---------------------------------------------------------------------------
# axes


def axis(mat) -> tuple[float, float]:
    """Real fixed points of a hyperbolic real matrix, attracting first."""
    m = np.asarray(mat, dtype=np.float64)
    tr = m[0, 0] + m[1, 1]
    if abs(tr) <= 2.0 + 1e-12:
        kind = "parabolic" if abs(tr * tr - 4.0) <= 1e-9 else "elliptic"
        raise NoAxis(f"{kind} matrix (trace {tr:.6g}) has no axis")
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if abs(c) < 1e-14 * max(abs(a), abs(d)):
        other = b / (d - a)
        att_inf = abs(a) > abs(d)
        return (INF, float(other)) if att_inf else (float(other), INF)
    # stable roots of c z^2 + (d - a) z - b = 0
    disc = math.sqrt(tr * tr - 4.0)
    bq = d - a
    qq = -0.5 * (bq + math.copysign(disc, bq))
    p1 = qq / c
    p2 = -b / qq
    # the attracting fixed point has |derivative| = 1/|c p + d|^2 < 1
    if abs(c * p1 + d) > 1.0:
        return (float(p1), float(p2))
    return (float(p2), float(p1))


def word_matrix(word, model: FuchsianModel) -> np.ndarray:
    """Product of generator matrices for a word (CurveWord or letter list)."""
    letters = word.letters if isinstance(word, CurveWord) else tuple(word)
    return model.word_matrix(letters)


def word_axis(word, model: FuchsianModel) -> Geodesic:
    m = word_matrix(word, model)
    att, rep = axis(m)
    letters = word.letters if isinstance(word, CurveWord) else tuple(word)
    return Geodesic(att, rep, m, letters)


# ---------------------------------------------------------------------------
# crossing enumeration


@dataclass
class Crossing:
    """One transverse crossing of d's geodesic with one period of c's."""

    point: complex          # crossing point in the UHP model
    t: float                 # parameter along c's axis, in [t0, t0 + len_c)
    s: float                 # parameter along d's geodesic, in [0, len_d)
    sign: int                # orientation of (c-tangent, d-tangent) frame
    angle: float             # signed angle from c-tangent to d-tangent
    glue_word: tuple         # word of the element g with  c-lift = g * d-lift
    glue_mat: np.ndarray


def _letters_inverse(letters):
    return tuple((i, -s) for i, s in reversed(letters))


@dataclass
class _TubeSegment:
    """Tiles near one bounded stretch of an axis, in anchored coordinates.

    Local matrices are anchor^-1 * (global tile); the local axis is the
    anchor^-1 image of (p, q); `off` converts local parameters to global
    ones (global = local + off).
    """

    anchor_mat: np.ndarray
    anchor_word: tuple
    mats: np.ndarray
    words: list
    params: np.ndarray       # local parameters of tile centers
    p_l: float
    q_l: float
    off: float
    lo: float                # global window of this segment
    hi: float


def _axis_segments(model: FuchsianModel, p, q, lo, hi, seg_pad,
                   max_tiles=MAX_TILES) -> list[_TubeSegment]:
    """Anchored tile walks covering the parameter window [lo, hi].

    The window splits into stretches of at most SEGMENT_LEN; each stretch
    is walked in coordinates conjugated by a tile near it (the anchors
    chain along the axis), so every number stays moderate regardless of
    the total window length.  Each segment's filter window is its stretch
    widened by seg_pad on both sides.
    """
    key = (round(p, 12) if p != INF else INF,
           round(q, 12) if q != INF else INF,
           round(lo, 9), round(hi, 9), round(seg_pad, 9))
    hit = model._tube_cache.get(key)
    if hit is not None:
        return hit

    n_seg = max(1, math.ceil((hi - lo) / SEGMENT_LEN))
    seg_len = (hi - lo) / n_seg
    rc = model.circumradius
    segments: list[_TubeSegment] = []
    anchor_mat = np.eye(2, dtype=np.float64)
    anchor_word: tuple = ()
    off = 0.0
    p_l, q_l = p, q
    for k in range(n_seg):
        s_lo = lo + k * seg_len
        s_hi = s_lo + seg_len
        if k == 0:
            foot_t = axis_param(model.base, p, q)
            r_corr = rc + 0.5
        else:
            foot_t = 0.0
            r_corr = 0.0
        res = _kernels.active.tube_tiles(
            model.ext_neighbor_mats,
            model.ext_neighbor_words,
            float(p_l) if p_l != INF else INF,
            float(q_l) if q_l != INF else INF,
            float(s_lo - seg_pad - off), float(s_hi + seg_pad - off),
            float(rc + 0.25),
            float(rc),
            float(foot_t),
            float(r_corr),
            float(model.orbit_sep),
            int(max_tiles),
        )
        if res is None:
            raise EnumerationBudgetExceeded(
                f"tile walk exceeded {max_tiles} tiles; raise the budget "
                f"or shorten the words")
        mats_l, words_l, params_l = res
        if len(mats_l) == 0:
            raise EnumerationBudgetExceeded(
                "tile walk found no tiles on an axis stretch")
        seg = _TubeSegment(anchor_mat, anchor_word, mats_l, words_l, params_l,
                           p_l, q_l, off, s_lo, s_hi)
        segments.append(seg)
        if k + 1 < n_seg:
            # chain the anchor toward the next stretch midpoint; the offset
            # accumulates from local parameters only, so window boundaries
            # agree between neighboring frames to rounding precision
            target = (s_hi + seg_len / 2.0) - off
            best = int(np.argmin(np.abs(params_l - target)))
            step = mats_l[best].reshape(2, 2)
            anchor_mat = _canon_sign(anchor_mat @ step)
            anchor_word = anchor_word + tuple(words_l[best])
            step_inv = _adjugate(step)
            p_next = _apply_real(step_inv, p_l)
            q_next = _apply_real(step_inv, q_l)
            off = off + float(params_l[best]) \
                - axis_param(model.base, p_next, q_next)
            p_l, q_l = p_next, q_next
    model._tube_cache[key] = segments
    return segments


def _glue_normalize(model, word_d, mat_d, ell_d, G_mat, G_word, s):
    """Shift G by powers of M_d so the d-parameter s lands in [0, ell_d).

    s is the global parameter of the crossing pulled back to d's canonical
    axis, computed by the caller in a well-conditioned frame.
    """
    k = math.floor(s / ell_d)
    s -= k * ell_d
    if k != 0:
        step = mat_d if k > 0 else FuchsianModel._inv(mat_d)
        m = G_mat.copy()
        w = list(G_word)
        piece = tuple(word_d) if k > 0 else _letters_inverse(word_d)
        for _ in range(abs(k)):
            m = m @ step
            w.extend(piece)
        G_mat, G_word = _canon_sign(m), tuple(w)
    return s, G_mat, tuple(G_word)


SEGMENT_LEN = 6.0


def _adjugate(m):
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=np.float64)


def _mat_cell_keys(m):
    """Quantized keys of a sign-normalized, max-scaled matrix (16 cells)."""
    flat = m.reshape(4) / float(np.max(np.abs(m)))
    for e in flat:
        if abs(e) > 1e-12:
            if e < 0:
                flat = -flat
            break
    cells = [(math.floor(v), math.floor(v) + 1) for v in (e / 1e-9 for e in flat)]
    return [(k0, k1, k2, k3)
            for k0 in cells[0] for k1 in cells[1]
            for k2 in cells[2] for k3 in cells[3]]


def geodesic_crossings(c, d, model: FuchsianModel, t0: float = 0.0,
                       max_tiles: int = MAX_TILES):
    """Crossings of d-axis translates with one period of c's axis.

    Returns Crossing records sorted by the parameter t; the count is the
    geometric intersection number i(c, d) of the two classes.

    The window is enumerated in segments of bounded length, each handled in
    coordinates conjugated by a tile element near the segment, so that a
    long axis never forces a single frame to resolve both of its ends
    (point separations there shrink like exp(-length)).
    """
    word_c = c.letters if isinstance(c, CurveWord) else tuple(c)
    word_d = d.letters if isinstance(d, CurveWord) else tuple(d)
    key = (word_c, word_d, round(t0, 12))
    hit = model._crossing_cache.get(key)
    if hit is not None:
        return hit

    mat_c = model.word_matrix(word_c)
    mat_d = model.word_matrix(word_d)
    att_c, rep_c = axis(mat_c)
    att_d, rep_d = axis(mat_d)
    ell_c = translation_length(mat_c[0, 0] + mat_c[1, 1])
    ell_d = translation_length(mat_d[0, 0] + mat_d[1, 1])
    rc = model.circumradius

    # parameters measured toward the attracting endpoint
    p_c, q_c = rep_c, att_c
    p_d, q_d = rep_d, att_d

    # re-anchor the window so t0 is relative to the base-point foot
    base_t = axis_param(model.base, p_c, q_c)
    t_lo = base_t + t0
    t_hi = t_lo + ell_c

    pad = rc + 0.25
    c_segs = _axis_segments(model, p_c, q_c, t_lo, t_hi, pad, max_tiles)
    # exact windows on the d side: one normalized representative per coset
    d_segs = _axis_segments(model, p_d, q_d, 0.0, ell_d, 0.0, max_tiles)

    # duplicates of one crossing found through different anchor chains carry
    # noise that grows with the total length; the merge tolerance follows it
    dedup_tol = min(1e-3, max(CROSSING_DEDUP_TOL,
                              2e-11 * math.exp((ell_c + ell_d) / 2.0)))

    crossings: list[Crossing] = []

    def same_axis(rec, pd_g, qd_g, tol):
        """The stored crossing and (pd_g, qd_g) differ by a power of M_c."""
        for k in (-1, 0, 1):
            if k == 0:
                pe, qe = rec._pd, rec._qd
            else:
                m = mat_c if k > 0 else FuchsianModel._inv(mat_c)
                pe, qe = _apply_real(m, rec._pd), _apply_real(m, rec._qd)
            e1 = tuple(sorted([_circ_angle(pe), _circ_angle(qe)]))
            e2 = tuple(sorted([_circ_angle(pd_g), _circ_angle(qd_g)]))
            if abs(e1[0] - e2[0]) < tol and abs(e1[1] - e2[1]) < tol:
                return True
        return False

    for cs in c_segs:
        own = tuple(sorted([_circ_angle(cs.p_l), _circ_angle(cs.q_l)]))
        for ds in d_segs:
            # translates of d's axis: u^-1 h_d^-1 for walked d tiles u; the
            # local d axis endpoints absorb the big anchor factor
            u_inv = np.empty_like(ds.mats)
            u_inv[:, 0] = ds.mats[:, 3]
            u_inv[:, 1] = -ds.mats[:, 1]
            u_inv[:, 2] = -ds.mats[:, 2]
            u_inv[:, 3] = ds.mats[:, 0]
            cand = _kernels.active.pair_candidates(
                cs.mats, u_inv,
                float(ds.p_l) if ds.p_l != INF else INF,
                float(ds.q_l) if ds.q_l != INF else INF,
                float(cs.p_l) if cs.p_l != INF else INF,
                float(cs.q_l) if cs.q_l != INF else INF,
                float(cs.lo - cs.off) - 1e-9, float(cs.hi - cs.off) + 1e-9,
            )
            seen_mats: set = set()
            for (i, j, t, pd_im, qd_im) in cand:
                # translates collapsed near one boundary point are rounding
                # ghosts; genuine transverse crossings keep a healthy span
                if _chordal_pts(pd_im, qd_im) < 1e-7:
                    continue
                im = tuple(sorted([_circ_angle(pd_im), _circ_angle(qd_im)]))
                near_own = (abs(im[0] - own[0]) < 1e-4
                            and abs(im[1] - own[1]) < 1e-4)
                if (abs(im[0] - own[0]) < ENDPOINT_TOL
                        and abs(im[1] - own[1]) < ENDPOINT_TOL):
                    continue
                z_l = geodesic_meet(cs.p_l, cs.q_l, pd_im, qd_im)
                if z_l is None:
                    continue
                tan_c = geodesic_tangent(cs.p_l, cs.q_l, z_l)
                tan_d = geodesic_tangent(pd_im, qd_im, z_l)
                ang = math.atan2((tan_c.conjugate() * tan_d).imag,
                                 (tan_c.conjugate() * tan_d).real)
                if abs(math.sin(ang)) < ANGLE_TOL:
                    if near_own:
                        continue
                    raise DegenerateCrossing("near-tangent crossing")
                glocal = _canon_sign(
                    cs.mats[i].reshape(2, 2) @ u_inv[j].reshape(2, 2))
                keys = _mat_cell_keys(glocal)
                if any(kk in seen_mats for kk in keys):
                    continue
                seen_mats.update(keys)
                g_mat = _canon_sign(
                    cs.anchor_mat @ glocal @ _adjugate(ds.anchor_mat))
                g_word = (tuple(cs.anchor_word) + tuple(cs.words[i])
                          + _letters_inverse(tuple(ds.words[j]))
                          + _letters_inverse(tuple(ds.anchor_word)))
                z = _apply_real(cs.anchor_mat, z_l)
                # pullback staged through the local frames: the point on
                # d's local axis is glocal^-1 z_local
                v = _apply_real(_adjugate(glocal), z_l)
                s_local = axis_param(v, ds.p_l, ds.q_l)
                s, g_mat, g_word = _glue_normalize(
                    model, word_d, mat_d, ell_d, g_mat, g_word,
                    s_local + ds.off)
                tt = (t + cs.off - t_lo) % ell_c  # fold boundary straddlers
                pd_g = _apply_real(cs.anchor_mat, pd_im)
                qd_g = _apply_real(cs.anchor_mat, qd_im)
                dup = False
                for rec in crossings:
                    dt = abs(rec.t - tt)
                    dt = min(dt, ell_c - dt)
                    if dt < dedup_tol:
                        if same_axis(rec, pd_g, qd_g, 1e-4):
                            dup = True
                            break
                        if dt < CROSSING_DEDUP_TOL:
                            raise DegenerateCrossing(
                                f"two crossings within {CROSSING_DEDUP_TOL} "
                                f"at t={tt:.9f}")
                if dup:
                    continue
                rec = Crossing(point=complex(z), t=tt, s=s,
                               sign=1 if ang > 0 else -1, angle=ang,
                               glue_word=g_word, glue_mat=g_mat)
                rec._pd = pd_g
                rec._qd = qd_g
                crossings.append(rec)

    crossings.sort(key=lambda r: r.t)
    model._crossing_cache[key] = crossings
    return crossings


def crossing_count(c, d, model: FuchsianModel) -> int:
    return len(geodesic_crossings(c, d, model))


# ---------------------------------------------------------------------------
# brute-force oracle


def oracle_crossing_count(c, d, model: FuchsianModel, max_len: int = 10) -> int:
    """Intersection count by enumerating every reduced conjugating word.

    Walks all reduced words g up to max_len, tests whether g applied to
    d's axis links c's axis with the cross-ratio sign test, keeps crossings
    whose parameter falls in one fundamental window, and counts distinct
    translate axes.  No pruning, no tiling; this is the independent check
    for geodesic_crossings.
    """
    word_c = c.letters if isinstance(c, CurveWord) else tuple(c)
    word_d = d.letters if isinstance(d, CurveWord) else tuple(d)
    mat_c = model.word_matrix(word_c)
    mat_d = model.word_matrix(word_d)
    att_c, rep_c = axis(mat_c)
    att_d, rep_d = axis(mat_d)
    ell_c = translation_length(mat_c[0, 0] + mat_c[1, 1])
    base_t = axis_param(model.base, rep_c, att_c)

    gens = []
    for idx in range(model.surface.rank):
        for sign in (1, -1):
            gens.append(model.letter_matrix((idx, sign)).reshape(4))
    return _kernels.active.oracle_count(
        np.array(gens), float(rep_c), float(att_c), float(base_t),
        float(base_t + ell_c), float(rep_d), float(att_d), int(max_len))
