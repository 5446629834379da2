"""Normalized Moebius transformations of the Riemann sphere.

Matrices are kept in SL(2,C): det = 1 within 1e-12.  M and -M act
identically; the canonical sign makes the first nonzero entry have
argument in (-pi/2, pi/2].  The point at infinity is the float INF.
"""

from __future__ import annotations

import cmath
import math

from .errors import IsIdentity

INF = float("inf")

DET_TOL = 1e-12
CLASSIFY_TOL = 1e-9


def is_inf(z) -> bool:
    if isinstance(z, complex):
        return math.isinf(z.real) or math.isinf(z.imag)
    return isinstance(z, float) and math.isinf(z)


class Mobius:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, normalize: bool = True):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        if normalize:
            det = a * d - b * c
            if det == 0:
                raise ValueError("singular matrix is not a Moebius map")
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
            # canonical sign: first nonzero entry has arg in (-pi/2, pi/2]
            for e in (a, b, c, d):
                if abs(e) > 1e-14:
                    ang = cmath.phase(e)
                    if ang <= -math.pi / 2 + 1e-15 or ang > math.pi / 2 + 1e-15:
                        a, b, c, d = -a, -b, -c, -d
                    break
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1, normalize=False)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def compose(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __mul__ = compose

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        return apply(self, z)

    def is_identity(self, tol: float = 1e-9) -> bool:
        return (
            abs(self.b) <= tol
            and abs(self.c) <= tol
            and abs(self.a - self.d) <= tol
            and abs(abs(self.a) - 1.0) <= tol
        )

    def __repr__(self):
        return f"Mobius({self.a:.6g}, {self.b:.6g}, {self.c:.6g}, {self.d:.6g})"


def compose(m: Mobius, n: Mobius) -> Mobius:
    return m.compose(n)


def inverse(m: Mobius) -> Mobius:
    return m.inverse()


def apply(m: Mobius, z):
    """Apply with the standard limits at infinity and at the pole."""
    if is_inf(z):
        if abs(m.c) == 0.0:
            return INF
        return m.a / m.c
    z = complex(z)
    den = m.c * z + m.d
    if abs(den) == 0.0:
        return INF
    return (m.a * z + m.b) / den


def classify(m: Mobius, tol: float = CLASSIFY_TOL) -> str:
    """'identity', 'parabolic', 'elliptic' or 'loxodromic' by squared trace."""
    if m.is_identity(tol):
        return "identity"
    t2 = m.trace * m.trace
    if abs(t2 - 4.0) <= tol:
        return "parabolic"
    if abs(t2.imag) <= tol and -tol < t2.real < 4.0 - tol:
        return "elliptic"
    return "loxodromic"


def fixed_points(m: Mobius, tol: float = CLASSIFY_TOL):
    """Fixed point(s) of m.  Loxodromic maps list the attracting one first.

    Returns a 1-tuple for parabolic maps and a 2-tuple otherwise.
    """
    if m.is_identity(tol):
        raise IsIdentity("every point is fixed")
    kind = classify(m, tol)
    if abs(m.c) <= 1e-300:
        # z -> (a/d) z + b/d fixes infinity
        if abs(m.a - m.d) <= tol:
            return (INF,)
        other = m.b / (m.d - m.a)
        if kind == "parabolic":
            return (INF,)
        att_is_inf = abs(m.a / m.d) > 1.0
        return (INF, other) if att_is_inf else (other, INF)
    disc = m.trace * m.trace - 4.0
    root = cmath.sqrt(disc)
    p1 = (m.a - m.d + root) / (2.0 * m.c)
    p2 = (m.a - m.d - root) / (2.0 * m.c)
    if kind == "parabolic":
        return ((p1 + p2) / 2.0,)
    if kind == "elliptic":
        return (p1, p2)
    # attracting fixed point has |m'(z)| < 1, m'(z) = 1/(cz+d)^2
    d1 = abs(m.c * p1 + m.d)
    if d1 > 1.0:
        return (p1, p2)
    return (p2, p1)


def sl2_commutator_trace(A: Mobius, B: Mobius) -> complex:
    """tr(ABA^-1B^-1) on raw SL(2) lifts.

    The commutator contains each generator an even number of times, so the
    value is independent of the +-M lift choices; composing through the
    sign-canonicalizing Mobius product would lose that.
    """
    import numpy as np

    ma = np.array([[A.a, A.b], [A.c, A.d]])
    mb = np.array([[B.a, B.b], [B.c, B.d]])
    mai = np.array([[A.d, -A.b], [-A.c, A.a]])
    mbi = np.array([[B.d, -B.b], [-B.c, B.a]])
    m = ma @ mb @ mai @ mbi
    return complex(m[0, 0] + m[1, 1])


def multiplier(m: Mobius) -> complex:
    """Multiplier k with |k| > 1 of a loxodromic map (derivative at the repelling point)."""
    att, rep = fixed_points(m)
    if is_inf(rep) or is_inf(att):
        k = m.a / m.d  # c = 0: the map is z -> (a/d) z + b/d
    else:
        k = 1.0 / (m.c * rep + m.d) ** 2
    if abs(k) < 1.0:
        k = 1.0 / k
    return k
