"""Integral multicurves and the sharp/flat smoothing calculus.

A multicurve is a weighted set of pairwise disjoint, pairwise non-parallel
simple closed curve classes.  Weighted components are realized as parallel
push-offs of the closed geodesic at small equidistant offsets, so that a
pair of multicurves in minimal position gives a crossing diagram whose
crossing count is exactly the geometric intersection number.

Smoothing resolves every crossing of the diagram.  At a crossing the four
strand ends alternate around the point and there are exactly two ways to
reconnect them without a crossing: the first multicurve's strand turns
onto the other strand one way ("sharp") or the other ("flat"), uniformly
over all crossings, with the surface orientation deciding which is which.
Swapping the two turn directions swaps the operations globally; the
convention here is pinned by smooth(a1, b1, "sharp") being the class of
a1*b1, and is validated by the exchange and round-trip identities in the
test suite (sharp(lam, mu) = flat(mu, lam); both collapse to lam + mu
exactly when the intersection number vanishes; smoothing with mu twice,
once each way, returns lam when every mu component meets lam).

Resolved strands are reassembled into group words by composing, along the
traversal, the deck transformations of window wraps (the strand's own
class word) and of crossing jumps (the crossing's gluing element), then
cyclically reducing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateCrossing,
    NotDisjoint,
    NotSimple,
    SharedParallelComponent,
    SurfaceMismatch,
)
from .hyperbolic import (
    FuchsianModel,
    axis,
    geodesic_crossings,
    geodesic_tangent,
    standard_fuchsian,
    translation_length,
)
from .words import (
    CurveWord,
    Letter,
    SurfaceSpec,
    TrivialWord,
    _canonical_cached,
    _invert,
    _rotations,
    cyclic_reduce,
    dehn_reduce,
)

PUSH_EPS = 1e-3
STRAND_DEDUP_TOL = 1e-6


# ---------------------------------------------------------------------------
# the multicurve container


def _class_sort_key(word: CurveWord):
    return (len(word.letters), [(l[0], 0 if l[1] > 0 else 1) for l in word.letters])


@dataclass(frozen=True)
class Multicurve:
    """Weighted disjoint union of simple closed curve classes."""

    components: tuple[tuple[CurveWord, int], ...]
    surface: SurfaceSpec

    @classmethod
    def zero(cls, surface: SurfaceSpec) -> "Multicurve":
        return cls((), surface)

    @property
    def is_zero(self) -> bool:
        return not self.components

    def weights(self) -> dict[CurveWord, int]:
        return dict(self.components)

    def support(self) -> list[CurveWord]:
        return [w for w, _ in self.components]

    def scale(self, k: int) -> "Multicurve":
        if k < 1:
            raise ValueError("weights must stay positive")
        return Multicurve(tuple((w, k * m) for w, m in self.components), self.surface)

    def text_lines(self) -> list[str]:
        return [f"{m}*{w.text()}" for w, m in self.components]

    def __repr__(self):
        if self.is_zero:
            return "Multicurve(0)"
        return "Multicurve(" + " + ".join(self.text_lines()) + ")"


def class_is_primitive(word: CurveWord) -> bool:
    """No member of the canonical orbit is a proper string power."""
    from .words import _class_orbit

    for u in _class_orbit(word.canonical, word.surface.genus):
        n = len(u)
        for k in range(2, n + 1):
            if n % k:
                continue
            p = n // k
            if u == u[p:] + u[:p]:
                return False
    return True


def _class_intersection(c: CurveWord, d: CurveWord, model: FuchsianModel) -> int:
    if c.canonical == d.canonical:
        return 0
    return len(geodesic_crossings(c, d, model))


def _check_component(word: CurveWord, model: FuchsianModel):
    if not class_is_primitive(word):
        raise NotSimple(f"{word.text()!r} is a proper power, not a simple curve")
    self_crossings = len(geodesic_crossings(word, word, model))
    if self_crossings:
        raise NotSimple(
            f"{word.text()!r} has self-intersection number {self_crossings // 2}")


def multicurve_normalize(parts, surface: SurfaceSpec,
                         model: FuchsianModel | None = None) -> Multicurve:
    """Merge parallel components, drop trivial words, verify the invariants.

    parts: iterable of (weight, word) with word a CurveWord, a TrivialWord,
    a raw token string, or a letter sequence.
    """
    model = model or standard_fuchsian(surface.genus)
    merged: dict[tuple[Letter, ...], tuple[CurveWord, int]] = {}
    for weight, raw in parts:
        if weight < 1 or weight != int(weight):
            raise ValueError(f"weight {weight!r} must be a positive integer")
        if isinstance(raw, TrivialWord):
            continue
        if isinstance(raw, CurveWord):
            if raw.surface != surface:
                raise SurfaceMismatch("component on a different surface")
            word = raw.canonical_word()
        else:
            word = cyclic_reduce(raw, surface)
            if isinstance(word, TrivialWord):
                continue
        key = word.canonical
        if key in merged:
            prev, m = merged[key]
            merged[key] = (prev, m + int(weight))
        else:
            merged[key] = (word, int(weight))

    comps = sorted(merged.values(), key=lambda t: _class_sort_key(t[0]))
    for word, _ in comps:
        _check_component(word, model)
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            n = _class_intersection(comps[i][0], comps[j][0], model)
            if n:
                raise NotDisjoint(
                    f"components {comps[i][0].text()!r} and {comps[j][0].text()!r} "
                    f"intersect {n} times")
    return Multicurve(tuple(comps), surface)


def intersection_number(lam: Multicurve, mu: Multicurve,
                        model: FuchsianModel | None = None) -> int:
    """Weighted geometric intersection number of two multicurves."""
    if lam.surface != mu.surface:
        raise SurfaceMismatch("multicurves live on different surfaces")
    model = model or standard_fuchsian(lam.surface.genus)
    total = 0
    for c, k in lam.components:
        for d, m in mu.components:
            total += k * m * _class_intersection(c, d, model)
    return total


def multicurve_sum(lam: Multicurve, mu: Multicurve,
                   model: FuchsianModel | None = None) -> Multicurve:
    """Weight-wise sum; defined exactly when i(lam, mu) = 0."""
    if lam.surface != mu.surface:
        raise SurfaceMismatch("multicurves live on different surfaces")
    n = intersection_number(lam, mu, model)
    if n:
        raise NotDisjoint(f"i = {n} != 0, the sum is undefined")
    parts = [(m, w) for w, m in lam.components] + [(m, w) for w, m in mu.components]
    return multicurve_normalize(parts, lam.surface, model)


# ---------------------------------------------------------------------------
# crossing diagrams of realizations


@dataclass
class Strand:
    """One push-off copy of a support geodesic."""

    word: CurveWord
    side: str            # "lam" or "mu"
    copy: int
    offset: float        # signed distance from the axis, left of its direction
    length: float
    matrix: np.ndarray
    crossings: list = field(default_factory=list)  # (param, crossing index)


@dataclass
class DiagramCrossing:
    point: complex
    lam_strand: int
    mu_strand: int
    sign: int
    t: float             # parameter on the lam strand
    s: float             # parameter on the mu strand
    glue_word: tuple
    glue_mat: np.ndarray


@dataclass
class CrossingDiagram:
    surface: SurfaceSpec
    lam_strands: list[Strand]
    mu_strands: list[Strand]
    crossings: list[DiagramCrossing]

    def strand_arcs(self):
        """Cyclic crossing sequence along every strand."""
        out = {}
        for side, strands in (("lam", self.lam_strands), ("mu", self.mu_strands)):
            for i, st in enumerate(strands):
                out[(side, i)] = [ci for _, ci in st.crossings]
        return out


def _offsets(k: int, eps: float, shift: float = 0.0) -> list[float]:
    return [eps * (r - (k - 1) / 2.0) + shift for r in range(k)]


def realize_pair(lam: Multicurve, mu: Multicurve,
                 model: FuchsianModel | None = None,
                 push_eps: float = PUSH_EPS) -> CrossingDiagram:
    """Geodesic realization with parallel push-offs and all crossings.

    The crossing count equals i(lam, mu); shared parallel classes are
    realized at disjoint offsets and contribute no crossings.
    """
    if lam.surface != mu.surface:
        raise SurfaceMismatch("multicurves live on different surfaces")
    model = model or standard_fuchsian(lam.surface.genus)

    lam_w = lam.weights()
    mu_w = mu.weights()
    shared = {w.canonical for w in lam_w} & {w.canonical for w in mu_w}

    def make_strands(weights, side):
        strands = []
        for word, k in sorted(weights.items(), key=lambda t: _class_sort_key(t[0])):
            mat = model.word_matrix(word.letters)
            ell = translation_length(mat[0, 0] + mat[1, 1])
            if word.canonical in shared:
                # joint offsets keep shared classes disjoint: lam copies sit
                # below the axis, mu copies above
                shift = (-1 if side == "lam" else 1) * push_eps * (k + 1) / 2.0
            else:
                shift = 0.0
            for r, u in enumerate(_offsets(k, push_eps, shift)):
                strands.append(Strand(word, side, r, u, ell, mat))
        return strands

    lam_strands = make_strands(lam_w, "lam")
    mu_strands = make_strands(mu_w, "mu")

    crossings: list[DiagramCrossing] = []
    for li, ls in enumerate(lam_strands):
        for mi, ms in enumerate(mu_strands):
            if ls.word.canonical == ms.word.canonical:
                continue  # parallel strands never cross
            for rec in geodesic_crossings(ls.word, ms.word, model):
                phi = rec.angle
                sin_phi, cos_phi = math.sin(phi), math.cos(phi)
                u, v = ls.offset, ms.offset
                dt = (u * cos_phi - v) / sin_phi
                ds = (u - v * cos_phi) / sin_phi
                t_hat = (rec.t + dt) % ls.length
                s_hat = (rec.s + ds) % ms.length
                # first-order crossing point for rendering and dedup checks
                scale = rec.point.imag
                att_c, rep_c = axis(ls.matrix)
                e_c = geodesic_tangent(rep_c, att_c, rec.point)
                z = rec.point + scale * (dt * e_c + u * 1j * e_c)
                crossings.append(DiagramCrossing(
                    point=z, lam_strand=li, mu_strand=mi, sign=rec.sign,
                    t=t_hat, s=s_hat,
                    glue_word=rec.glue_word, glue_mat=rec.glue_mat))

    expected = intersection_number(lam, mu, model)
    if len(crossings) != expected:
        raise DegenerateCrossing(
            f"push-off realization produced {len(crossings)} crossings, "
            f"expected {expected}; reduce push_eps")

    for ci, c in enumerate(crossings):
        lam_strands[c.lam_strand].crossings.append((c.t, ci))
        mu_strands[c.mu_strand].crossings.append((c.s, ci))
    for st in lam_strands + mu_strands:
        st.crossings.sort()
        for a in range(len(st.crossings) - 1):
            if st.crossings[a + 1][0] - st.crossings[a][0] < STRAND_DEDUP_TOL:
                raise DegenerateCrossing(
                    "two crossings within tolerance along one strand")
        if len(st.crossings) >= 2:
            wrap = st.crossings[0][0] + st.length - st.crossings[-1][0]
            if wrap < STRAND_DEDUP_TOL:
                raise DegenerateCrossing(
                    "two crossings within tolerance across the window seam")

    return CrossingDiagram(lam.surface, lam_strands, mu_strands, crossings)


# ---------------------------------------------------------------------------
# smoothing


def _letters_inverse(letters):
    return tuple((i, -s) for i, s in reversed(letters))


def _resolve(diagram: CrossingDiagram, mode_sign: int, model: FuchsianModel):
    """Traverse the resolved curve system; return [(1, word_letters)].

    mode_sign +1: the lam strand turns counterclockwise at each crossing;
    -1: clockwise.  Each resolved component is discovered twice (once per
    direction); the reverse traversal is marked used on the spot.
    """
    strands = {("lam", i): s for i, s in enumerate(diagram.lam_strands)}
    strands.update({("mu", i): s for i, s in enumerate(diagram.mu_strands)})

    parts = []
    for key, st in strands.items():
        if not st.crossings:
            parts.append((1, st.word.letters))

    used = set()  # directed arcs (strand key, position index, direction)

    def arc_step(skey, pos, direction):
        """Consume the directed arc leaving crossing position pos; returns
        (next position, wrap deck letters or None)."""
        st = strands[skey]
        n = len(st.crossings)
        if direction > 0:
            arc = (skey, pos, 1)
            nxt = pos + 1
            wrap = nxt == n
            nxt %= n
        else:
            arc = (skey, (pos - 1) % n, -1)
            nxt = (pos - 1) % n
            wrap = pos == 0
        if arc in used:
            return None
        used.add(arc)
        deck = None
        if wrap:
            deck = st.word.letters if direction > 0 else _letters_inverse(st.word.letters)
        return arc, nxt, deck

    def crossing_exit(ci, arriving_side, facing):
        """Transition at crossing ci; returns (new side, new facing, glue letters)."""
        c = diagram.crossings[ci]
        new_facing = facing * c.sign * mode_sign
        if arriving_side == "lam":
            return "mu", new_facing, c.glue_word, False
        return "lam", new_facing, _letters_inverse(c.glue_word), True

    for start_key, st0 in strands.items():
        for start_pos in range(len(st0.crossings)):
            for start_dir in (1, -1):
                probe = (start_key, start_pos if start_dir > 0 else (start_pos - 1) % len(st0.crossings), start_dir)
                if probe in used:
                    continue
                letters: list[Letter] = []
                fwd_arcs = []
                skey, pos, facing = start_key, start_pos, start_dir
                guard = 0
                while True:
                    guard += 1
                    if guard > 100000:
                        raise RuntimeError("resolution traversal did not close")
                    step = arc_step(skey, pos, facing)
                    if step is None:
                        raise RuntimeError("directed arc reused during traversal")
                    arc, pos, deck = step
                    fwd_arcs.append(arc)
                    if deck:
                        letters.extend(deck)
                    ci = strands[skey].crossings[pos][1]
                    c = diagram.crossings[ci]
                    side = "lam" if skey[0] == "lam" else "mu"
                    new_side, facing, glue, inverse = crossing_exit(ci, side, facing)
                    letters.extend(glue)
                    skey = (new_side,
                            c.mu_strand if new_side == "mu" else c.lam_strand)
                    pos = _position_of(strands[skey], ci)
                    if skey == start_key and pos == start_pos and facing == start_dir:
                        break
                # mark the reverse traversal as used
                for (k2, p2, d2) in fwd_arcs:
                    used.add((k2, p2, -d2))
                parts.append((1, tuple(letters)))
    return parts


def _position_of(st: Strand, ci: int) -> int:
    for k, (_, c) in enumerate(st.crossings):
        if c == ci:
            return k
    raise RuntimeError("crossing not on strand")


# Calibration: with the stored crossing frame signs, mode sign -1 makes
# smooth(a1, b1, "sharp") the class of a1*b1, which pins the convention;
# +1/-1 swapped would swap sharp and flat globally.
_MODE_SIGNS = {"sharp": -1, "flat": 1, "#": -1, "b": 1}


def smooth(lam: Multicurve, mu: Multicurve, mode: str,
           model: FuchsianModel | None = None,
           push_eps: float = PUSH_EPS) -> Multicurve:
    """Resolve every crossing of a minimal-position realization.

    mode is "sharp" or "flat".  With i(lam, mu) = 0 this is lam + mu.
    """
    if mode not in _MODE_SIGNS:
        raise ValueError(f"mode must be 'sharp' or 'flat', got {mode!r}")
    if lam.surface != mu.surface:
        raise SurfaceMismatch("multicurves live on different surfaces")
    model = model or standard_fuchsian(lam.surface.genus)

    n = intersection_number(lam, mu, model)
    if n == 0:
        return multicurve_sum(lam, mu, model)

    shared = {w.canonical for w in lam.support()} & {w.canonical for w in mu.support()}
    if shared:
        raise SharedParallelComponent(
            "smoothing with a shared parallel component requires i = 0")

    diagram = realize_pair(lam, mu, model, push_eps)
    parts = _resolve(diagram, _MODE_SIGNS[mode], model)

    resolved = []
    for w, letters in parts:
        reduced = dehn_reduce(letters, lam.surface.genus)
        if not reduced:
            raise DegenerateCrossing("resolution produced a trivial strand")
        resolved.append((w, CurveWord(
            tuple(_canonical_cached(tuple(reduced), lam.surface.genus)),
            lam.surface)))
    return multicurve_normalize(resolved, lam.surface, model)


def graft_component_label(lam: Multicurve, mu: Multicurve, direction: str,
                          model: FuchsianModel | None = None) -> Multicurve:
    """Component label of the regrafted family: sharp for '+', flat for '-'."""
    if direction not in ("+", "-", "plus", "minus"):
        raise ValueError(f"direction must be '+' or '-', got {direction!r}")
    shared = {w.canonical for w in lam.support()} & {w.canonical for w in mu.support()}
    if shared:
        raise SharedParallelComponent(
            "the two multicurves share a parallel component")
    mode = "sharp" if direction in ("+", "plus") else "flat"
    return smooth(lam, mu, mode, model)
