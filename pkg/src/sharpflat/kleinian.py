"""Punctured-torus groups from trace data, limit sets, and torus pullbacks.

Groups come from a pair of traces (x, y): the third trace z solves
x^2 + y^2 + z^2 = xyz, the relation forced by a parabolic commutator, and
the generator matrices realize the triple in an explicitly symmetric
normalization: X translates along a diameter of the unit disk, Y along a
rotated copy, so real trace pairs on the Fuchsian locus get the unit
circle as their limit set.

The limit set sampler does a depth-first walk over reduced words emitting
images of per-letter anchor points (attracting fixed points of the letter
and of its two allowed successors); a branch stops when its anchors have
chordal diameter below eps.  Emitting at every node, not only at leaves,
makes the sample at eps/2 a superset of the sample at eps.

The quotient torus of a loxodromic eta is coordinatized by conjugating
eta to w -> k w, taking logarithms and reducing modulo the lattice
(log k, 2 pi i); pullback points are stored as lattice fractions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import (
    DegenerateTraces,
    Degenerate,
    DiscretenessUnknown,
    Elementary,
    EmptyGroup,
    EmptySet,
    NotLoxodromic,
    NotReduced,
)
from .mobius import (
    INF,
    Mobius,
    classify,
    fixed_points,
    is_inf,
    multiplier,
    sl2_commutator_trace,
)

LIMSET_EPS = 1e-3
LIMSET_DEPTH = 18
LIMSET_MAX_POINTS = 2_000_000
BQ_TOL = 1e-9


def chordal(z, w) -> float:
    """Chordal distance on the Riemann sphere (diameter 2)."""
    zi, wi = is_inf(z), is_inf(w)
    if zi and wi:
        return 0.0
    if zi:
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if wi:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


# ---------------------------------------------------------------------------
# groups from traces


@dataclass
class GroupSpec:
    generators: list[Mobius]
    kind: str = "unknown"   # fuchsian | quasifuchsian-candidate | unknown
    trace_triple: tuple[complex, complex, complex] | None = None

    def letters(self) -> list[Mobius]:
        out = []
        for g in self.generators:
            out.append(g)
            out.append(g.inverse())
        return out


def markov_third_trace(x: complex, y: complex, root: str = "minus") -> complex:
    """Solve z^2 - xyz + x^2 + y^2 = 0 for the commutator-parabolic triple."""
    x, y = complex(x), complex(y)
    disc = cmath.sqrt(x * x * y * y - 4.0 * (x * x + y * y))
    if root not in ("plus", "minus"):
        raise ValueError(f"root must be 'plus' or 'minus', got {root!r}")
    sign = 1.0 if root == "plus" else -1.0
    return (x * y + sign * disc) / 2.0


def ptor_group(x: complex, y: complex, root: str = "minus") -> GroupSpec:
    """Punctured-torus group with tr X = x, tr Y = y and tr [X,Y] = -2.

    X = [[c1, s1], [s1, c1]] translates along a diameter of the unit disk;
    Y is the same form conjugated by a rotation, with the rotation angle
    solving tr XY = z.  For real traces with |w| <= 1 both matrices lie in
    SU(1,1) and the limit set is exactly the unit circle.
    """
    x, y = complex(x), complex(y)
    if x == 0 or y == 0:
        raise DegenerateTraces("zero generator trace")
    z = markov_third_trace(x, y, root)
    c1, c2 = x / 2.0, y / 2.0
    s1 = cmath.sqrt(c1 * c1 - 1.0)
    s2 = cmath.sqrt(c2 * c2 - 1.0)
    if abs(s1) < 1e-12 or abs(s2) < 1e-12:
        raise DegenerateTraces(f"generator trace {x if abs(s1) < 1e-12 else y} is +-2")
    w = (z / 2.0 - c1 * c2) / (s1 * s2)
    mu = w + cmath.sqrt(w * w - 1.0)
    if abs(mu) < 1e-12:
        raise DegenerateTraces("degenerate rotation parameter")
    # determinants are 1 by construction; skip the sign-canonical renormalize
    # so the stored lifts carry the traces themselves
    X = Mobius(c1, s1, s1, c1, normalize=False)
    Y = Mobius(c2, s2 * mu, s2 / mu, c2, normalize=False)
    spec = GroupSpec([X, Y], trace_triple=(x, y, z))
    tol = 1e-9
    fuchsian = (abs(x.imag) < tol and abs(y.imag) < tol and abs(z.imag) < tol
                and abs(w.imag) < tol and abs(abs(mu) - 1.0) < 1e-9)
    spec.kind = "fuchsian" if fuchsian else "quasifuchsian-candidate"
    # construction invariants
    xy_trace = X.a * Y.a + X.b * Y.c + X.c * Y.b + X.d * Y.d
    for got, want in ((X.trace, x), (Y.trace, y), (xy_trace, z)):
        if abs(got - want) > 1e-9:
            raise DegenerateTraces(f"trace drift {abs(got - want):.2e}")
    if abs(sl2_commutator_trace(X, Y) + 2.0) > 1e-9:
        raise DegenerateTraces("commutator trace moved off -2")
    return spec


def jorgensen(A: Mobius, B: Mobius, tol: float = 1e-9):
    """Inequality value |tr^2 A - 4| + |tr ABA^-1B^-1 - 2| and its verdict.

    Returns (value, violates): violates means value < 1, which rules out
    discreteness of <A, B>.  Raises Elementary when the pair shares a
    fixed point, where the inequality says nothing.
    """
    try:
        fa = fixed_points(A)
        fb = fixed_points(B)
    except Exception as exc:
        raise Elementary(f"fixed points undefined: {exc}") from exc
    for p in fa:
        for q in fb:
            if chordal(p, q) < 1e-6:
                raise Elementary("the pair shares a fixed point")
    value = abs(A.trace * A.trace - 4.0) + abs(sl2_commutator_trace(A, B) - 2.0)
    return value, value < 1.0 - tol


# ---------------------------------------------------------------------------
# Farey traces and the primitive-trace scan


def farey_trace(p: int, q: int, triple) -> complex:
    """Trace of the primitive class of slope p/q.

    Base cases: 0/1 -> x, 1/0 -> y, 1/1 -> z.  Interior slopes follow the
    Stern-Brocot descent with the vertex relation t(mediant) =
    t(left) t(right) - t(far).  Negative slopes use the reflection
    (x, y, z) -> (x, y, xy - z) of the 1/0 edge.
    """
    x, y, z = (complex(v) for v in triple)
    if q < 0:
        p, q = -p, -q
    if q == 0:
        if p not in (1, -1):
            raise NotReduced(f"{p}/0 is not a reduced slope")
        return y
    if math.gcd(abs(p), q) != 1:
        raise NotReduced(f"{p}/{q} is not in lowest terms")
    if p < 0:
        # mirror slope: Y -> Y^{-1} sends p/q to -p/q and z to xy - z
        return farey_trace(-p, q, (x, y, x * y - z))
    if (p, q) == (0, 1):
        return x
    # descend: edge (pl/ql, pr/qr) with mediant trace tm
    pl, ql, tl = 0, 1, x
    pr, qr, tr_ = 1, 0, y
    tm = z
    while True:
        pm, qm = pl + pr, ql + qr
        if (pm, qm) == (p, q):
            return tm
        # which side of the mediant is p/q on?
        if p * qm < pm * q:   # p/q < pm/qm: go left
            t_new = tl * tm - tr_
            pr, qr, tr_ = pm, qm, tm
            tm = t_new
        else:
            t_new = tm * tr_ - tl
            pl, ql, tl = pm, qm, tm
            tm = t_new


def farey_depth_count(depth: int) -> int:
    """Number of slopes checked by the scan at the given depth."""
    return 3 + 2 ** (depth + 1) - 2


def bq_classify(triple, depth: int = 8, tol: float = BQ_TOL):
    """Primitive-trace scan over the Stern-Brocot tree.

    Returns ("pass", None) when every checked trace stays outside the
    closed elliptic region (real in (-2,2) or modulus < 2); otherwise
    ("fail", (p, q)) with the witness slope.  Depth 0 checks exactly
    {0/1, 1/0, 1/1}.  A pass is evidence, not a discreteness proof.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    x, y, z = (complex(v) for v in triple)
    ok, p, q = _kernels.active.bq_scan(x, y, z, int(depth), float(tol))
    if ok:
        return ("pass", None)
    return ("fail", (int(p), int(q)))


# ---------------------------------------------------------------------------
# limit sets


@dataclass
class LimitSetSample:
    points: list            # complex values, INF allowed, canonically sorted
    eps: float
    depth: int
    complete: bool
    group: GroupSpec | None = None
    dropped: int = 0

    def __len__(self):
        return len(self.points)

    def finite_array(self) -> np.ndarray:
        return np.array([z for z in self.points if not is_inf(z)], dtype=complex)

    def header(self) -> str:
        traces = ""
        if self.group is not None and self.group.trace_triple:
            traces = " traces=" + ",".join(
                format_complex(t) for t in self.group.trace_triple)
        return (f"# eps={self.eps:.6g} depth={self.depth} "
                f"complete={self.complete}{traces}")

    def to_text(self) -> str:
        lines = [self.header()]
        for z in self.points:
            if is_inf(z):
                lines.append("inf")
            else:
                lines.append(f"{z.real:.17g} {z.imag:.17g}")
        return "\n".join(lines) + "\n"


def format_complex(z) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def parse_limit_set_text(text: str) -> LimitSetSample:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    eps, depth, complete = 0.0, 0, True
    start = 0
    if lines and lines[0].startswith("#"):
        head = lines[0]
        for tok in head[1:].split():
            if tok.startswith("eps="):
                eps = float(tok[4:])
            elif tok.startswith("depth="):
                depth = int(tok[6:])
            elif tok.startswith("complete="):
                complete = tok[9:] == "True"
        start = 1
    pts = []
    for ln in lines[start:]:
        if ln.strip() == "inf":
            pts.append(INF)
        else:
            re_s, im_s = ln.split()
            pts.append(complex(float(re_s), float(im_s)))
    return LimitSetSample(pts, eps, depth, complete)


def _sort_key(z):
    if is_inf(z):
        return (1, 0.0, 0.0)
    return (0, z.real, z.imag)


def _dedup_sorted(points, tol=1e-12):
    out = []
    for z in sorted(points, key=_sort_key):
        if out and chordal(out[-1], z) < tol:
            continue
        out.append(z)
    return out


def limit_set(group: GroupSpec, eps: float = LIMSET_EPS,
              max_depth: int = LIMSET_DEPTH,
              max_points: int = LIMSET_MAX_POINTS) -> LimitSetSample:
    """Depth-first limit-set sample; deterministic and canonically sorted."""
    if not group.generators:
        raise EmptyGroup("at least one generator required")
    if eps <= 0:
        raise ValueError("eps must be positive")
    letters = group.letters()
    n = len(letters)
    gen_mats = np.array([[g.a, g.b, g.c, g.d] for g in letters], dtype=complex)

    # anchors per letter: attracting fixed points of every letter allowed
    # to follow it; they spread across the subtree's limit arc and their
    # images bound its chordal diameter
    def attract(m: Mobius):
        return fixed_points(m)[0]

    anchors = []
    for k in range(n):
        anchors.append([attract(letters[k2]) for k2 in range(n) if k2 != (k ^ 1)])
    width = max(len(p) for p in anchors)
    arr = np.zeros((n, width), dtype=complex)
    for k, pts in enumerate(anchors):
        for j in range(width):
            z = pts[min(j, len(pts) - 1)]
            arr[k, j] = complex(1e300, 0) if is_inf(z) else complex(z)

    raw, complete = _kernels.active.limit_set_points(
        gen_mats, arr, float(eps), int(max_depth), int(max_points))
    pts = []
    for z in raw:
        if is_inf(z) or abs(z) > 1e12:
            pts.append(INF)
        else:
            pts.append(complex(z))
    return LimitSetSample(_dedup_sorted(pts), eps, max_depth, complete, group)


def circle_fit(points):
    """Least-squares circle through a finite point cloud.

    Returns (center, radius, max_residual); raises Degenerate for nearly
    collinear input.
    """
    zs = np.asarray([complex(z) for z in points if not is_inf(z)], dtype=complex)
    if len(zs) < 3:
        raise Degenerate("need at least 3 finite points")
    x, y = zs.real, zs.imag
    A = np.column_stack([2 * x, 2 * y, np.ones(len(zs))])
    b = x * x + y * y
    sol, res, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    if rank < 3 or sv[-1] < 1e-12 * sv[0]:
        raise Degenerate("points are collinear")
    cx, cy, c = sol
    r2 = c + cx * cx + cy * cy
    if r2 <= 0:
        raise Degenerate("degenerate circle fit")
    radius = math.sqrt(r2)
    center = complex(cx, cy)
    resid = float(np.max(np.abs(np.abs(zs - center) - radius)))
    return center, radius, resid


def hausdorff_distance(A, B, metric: str = "chordal") -> float:
    """Hausdorff distance between two finite samples.

    metric "chordal" embeds both samples on the unit sphere (so INF is an
    ordinary point); "planar" is the euclidean metric on finite points.
    """
    A = list(A)
    B = list(B)
    if not A or not B:
        raise EmptySet("both samples must be nonempty")
    if metric == "planar":
        pa = np.array([(complex(z).real, complex(z).imag) for z in A])
        pb = np.array([(complex(z).real, complex(z).imag) for z in B])
    elif metric == "chordal":
        pa = _sphere_embed(A)
        pb = _sphere_embed(B)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    from scipy.spatial import cKDTree

    ta, tb = cKDTree(pa), cKDTree(pb)
    d_ab = float(np.max(tb.query(pa, k=1)[0]))
    d_ba = float(np.max(ta.query(pb, k=1)[0]))
    return max(d_ab, d_ba)


def _sphere_embed(points) -> np.ndarray:
    out = np.empty((len(points), 3))
    for i, z in enumerate(points):
        if is_inf(z):
            out[i] = (0.0, 0.0, 1.0)
            continue
        z = complex(z)
        n = abs(z) ** 2
        out[i] = (2 * z.real / (1 + n), 2 * z.imag / (1 + n), (n - 1) / (1 + n))
    return out


# ---------------------------------------------------------------------------
# quotient torus


@dataclass
class QuotientTorusCoords:
    multiplier: complex
    lattice: tuple[complex, complex]      # (log k, 2 pi i)
    points: list                          # complex representatives
    fractions: list                       # (a, b) in [0,1)^2, lattice coords
    dropped: int = 0

    def __len__(self):
        return len(self.points)


def torus_reduce(u: complex, log_k: complex):
    """Reduce a log-coordinate modulo the lattice (log k, 2 pi i).

    Returns ((a, b), w): lattice fractions in [0, 1) and the reduced point.
    """
    two_pi = 2.0 * math.pi
    a = u.real / log_k.real
    b = (u.imag - a * log_k.imag) / two_pi
    a -= math.floor(a)
    b -= math.floor(b)
    w = a * log_k + complex(0.0, b * two_pi)
    return (a, b), w


def torus_distance(fr1, fr2) -> float:
    """Distance of two lattice-fraction pairs on the unit torus."""
    da = abs(fr1[0] - fr2[0])
    db = abs(fr1[1] - fr2[1])
    da = min(da, 1.0 - da)
    db = min(db, 1.0 - db)
    return math.hypot(da, db)


def quotient_torus_pullback(sample, eta: Mobius) -> QuotientTorusCoords:
    """Pull a point sample back to the quotient torus of a loxodromic map.

    Conjugates eta to w -> k w by moving (repelling, attracting) to
    (0, inf), takes logarithms and reduces modulo (log k, 2 pi i).
    Sample points at the fixed points are dropped and counted.
    """
    if classify(eta) != "loxodromic":
        raise NotLoxodromic(f"eta is {classify(eta)}")
    att, rep = fixed_points(eta)
    k = multiplier(eta)
    log_k = cmath.log(k)
    points = sample.points if isinstance(sample, LimitSetSample) else list(sample)

    def conj(z):
        # send rep -> 0, att -> inf
        if is_inf(z):
            if is_inf(att):
                return INF
            if is_inf(rep):
                return 0.0 + 0.0j
            return complex(1.0, 0.0)
        z = complex(z)
        if is_inf(att):
            return z - rep
        if is_inf(rep):
            den = z - att
            if den == 0:
                return INF
            return 1.0 / den
        den = z - att
        if den == 0:
            return INF
        return (z - rep) / den

    fracs, reps, dropped = [], [], 0
    for z in points:
        w = conj(z)
        if is_inf(w) or (isinstance(w, complex) and abs(w) == 0.0):
            dropped += 1
            continue
        u = cmath.log(w)
        (a, b), wred = torus_reduce(u, log_k)
        fracs.append((a, b))
        reps.append(wred)
    order = sorted(range(len(fracs)), key=lambda i: fracs[i])
    return QuotientTorusCoords(
        multiplier=k,
        lattice=(log_k, complex(0.0, 2.0 * math.pi)),
        points=[reps[i] for i in order],
        fractions=[fracs[i] for i in order],
        dropped=dropped,
    )


# ---------------------------------------------------------------------------
# convergence experiments


@dataclass
class ConvergenceStep:
    traces: tuple[complex, complex]
    status: str              # ok | scan-failed
    distance: float | None
    witness: tuple[int, int] | None = None
    n_points: int = 0


def converge_experiment(path, terminal, eps: float = LIMSET_EPS,
                        depth: int = LIMSET_DEPTH, scan_depth: int = 8,
                        root: str = "minus"):
    """Hausdorff distances from limit sets along a trace path to a terminal.

    Every parameter (and the terminal) must pass the primitive-trace scan
    at scan_depth; a failing step is flagged and skipped, a failing
    terminal refuses the experiment.
    """
    tx, ty = (complex(v) for v in terminal)
    tz = markov_third_trace(tx, ty, root)
    verdict, witness = bq_classify((tx, ty, tz), scan_depth)
    if verdict != "pass":
        raise DiscretenessUnknown(
            f"terminal fails the trace scan at slope {witness[0]}/{witness[1]}")
    target = limit_set(ptor_group(tx, ty, root), eps, depth)
    steps = []
    for (x, y) in path:
        x, y = complex(x), complex(y)
        z = markov_third_trace(x, y, root)
        verdict, witness = bq_classify((x, y, z), scan_depth)
        if verdict != "pass":
            steps.append(ConvergenceStep((x, y), "scan-failed", None, witness))
            continue
        sample = limit_set(ptor_group(x, y, root), eps, depth)
        d = hausdorff_distance(sample.points, target.points, metric="chordal")
        steps.append(ConvergenceStep((x, y), "ok", d, None, len(sample)))
    return steps
