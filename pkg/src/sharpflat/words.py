"""Words in the genus-g surface group and their conjugacy canonical forms.

The surface group is the one-relator group

    < a1, b1, ..., ag, bg | [a1,b1][a2,b2]...[ag,bg] >

with relator length 4g.  Pieces of the relator (common subwords of two
distinct cyclic shifts of it or of its inverse) have length 1, so the
presentation is C'(1/6) small cancellation for every g >= 2 and the word
problem is solved by free-and-cyclic reduction plus replacing any subword
longer than half the relator with the inverse of its complement.

Conjugacy classes of cyclically reduced words are canonicalised by closing
a word under rotations, inversion and exactly-half relator swaps (the only
length-preserving relator moves), then taking the lexicographically least
member.  Any strictly shorter word discovered during closure restarts the
closure from that word.

Letters are pairs (generator index, sign); index 2k is a_{k+1}, index 2k+1
is b_{k+1}.  Text tokens are a1 b1 a2 ... with capitals for inverses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import GenusTooSmall, UnknownSymbol, WordTooLong

Letter = tuple[int, int]

DEFAULT_WORD_CAP = 64

_TOKEN_RE = re.compile(r"^([abAB])([0-9]+)$")


@dataclass(frozen=True)
class SurfaceSpec:
    """Closed oriented surface of genus >= 2 with its standard presentation."""

    genus: int

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 2:
            raise GenusTooSmall(f"genus must be an integer >= 2, got {self.genus!r}")

    @property
    def rank(self) -> int:
        return 2 * self.genus

    def relator(self) -> tuple[Letter, ...]:
        """[a1,b1]...[ag,bg] as a letter tuple of length 4g."""
        rel: list[Letter] = []
        for k in range(self.genus):
            a, b = 2 * k, 2 * k + 1
            rel += [(a, 1), (b, 1), (a, -1), (b, -1)]
        return tuple(rel)

    def letter_name(self, letter: Letter) -> str:
        idx, sign = letter
        base = "ab"[idx % 2] + str(idx // 2 + 1)
        return base.upper() if sign < 0 else base

    def parse_letter(self, token: str) -> Letter:
        m = _TOKEN_RE.match(token)
        if not m:
            raise UnknownSymbol(f"bad letter {token!r}")
        kind, num = m.group(1), int(m.group(2))
        if num < 1 or num > self.genus:
            raise UnknownSymbol(f"letter {token!r} outside genus-{self.genus} alphabet")
        idx = 2 * (num - 1) + (0 if kind in "aA" else 1)
        sign = -1 if kind.isupper() else 1
        return (idx, sign)


class TrivialWord:
    """Explicit marker for the trivial class (not an error)."""

    is_trivial = True

    def __repr__(self):
        return "TrivialWord()"

    def __eq__(self, other):
        return isinstance(other, TrivialWord)

    def __hash__(self):
        return hash("TrivialWord")


TRIVIAL = TrivialWord()


def _free_reduce(letters: Sequence[Letter]) -> list[Letter]:
    out: list[Letter] = []
    for lt in letters:
        if out and out[-1][0] == lt[0] and out[-1][1] == -lt[1]:
            out.pop()
        else:
            out.append(lt)
    return out


def _cyclic_free_reduce(letters: Sequence[Letter]) -> list[Letter]:
    w = _free_reduce(letters)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
        w = _free_reduce(w)
    return w


def _invert(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple((i, -s) for i, s in reversed(letters))


@lru_cache(maxsize=None)
def _relator_rotations(genus: int) -> tuple[tuple[Letter, ...], ...]:
    rel = SurfaceSpec(genus).relator()
    rots: list[tuple[Letter, ...]] = []
    for base in (rel, _invert(rel)):
        for r in range(len(base)):
            rots.append(base[r:] + base[:r])
    return tuple(rots)


def _find_relator_run(word: Sequence[Letter], genus: int, min_len: int):
    """Longest cyclic subword of `word` matching a prefix of a relator rotation.

    Returns (start, length, rotation) with length >= min_len, or None.
    Matches are capped at 4g-1 letters (the full relator is trivial).
    """
    n = len(word)
    if n == 0:
        return None
    four_g = 4 * genus
    doubled = list(word) + list(word)
    best = None
    for rot in _relator_rotations(genus):
        for start in range(n):
            length = 0
            limit = min(n, four_g - 1)
            while length < limit and doubled[start + length] == rot[length]:
                length += 1
            if length >= min_len and (best is None or length > best[1]):
                best = (start, length, rot)
    return best


def dehn_reduce(letters: Sequence[Letter], genus: int) -> list[Letter]:
    """Cyclically reduced form with no subword longer than half the relator."""
    w = _cyclic_free_reduce(letters)
    half = 2 * genus
    while True:
        if not w:
            return w
        hit = _find_relator_run(w, genus, half + 1)
        if hit is None:
            return w
        start, length, rot = hit
        # w contains rot[:length]; replace it by inverse(rot[length:]).
        replacement = _invert(rot[length:])
        n = len(w)
        doubled = list(w) + list(w)
        tail = doubled[start + length:start + n]
        w = _cyclic_free_reduce(list(replacement) + tail)


def _half_swaps(word: tuple[Letter, ...], genus: int) -> list[tuple[Letter, ...]]:
    """All words obtained by swapping an exactly-half relator subword."""
    n = len(word)
    half = 2 * genus
    if n < half:
        return []
    out = []
    doubled = list(word) + list(word)
    for rot in _relator_rotations(genus):
        prefix = rot[:half]
        for start in range(n):
            if tuple(doubled[start:start + half]) == prefix:
                repl = _invert(rot[half:])
                tail = doubled[start + half:start + n]
                out.append(tuple(list(repl) + tail))
    return out


def _rotations(word: tuple[Letter, ...]) -> list[tuple[Letter, ...]]:
    return [word[r:] + word[:r] for r in range(len(word))] or [word]


def _letter_key(lt: Letter) -> tuple[int, int]:
    return (lt[0], 0 if lt[1] > 0 else 1)


def _word_key(word: Sequence[Letter]):
    return [_letter_key(lt) for lt in word]


@lru_cache(maxsize=65536)
def _class_orbit(letters: tuple[Letter, ...], genus: int) -> frozenset:
    """Minimal-length unoriented conjugacy class members.

    Orbit closure under rotation, inversion and exactly-half relator swaps,
    restarted from scratch whenever a swap shortens the word.
    """
    w = tuple(dehn_reduce(letters, genus))
    if not w:
        return frozenset([w])
    while True:
        seen: set[tuple[Letter, ...]] = set()
        stack = [w]
        shorter = None
        while stack and shorter is None:
            u = stack.pop()
            variants = [r for v in (u, _invert(u)) for r in _rotations(v)]
            for v in variants:
                if v in seen:
                    continue
                seen.add(v)
                for s in _half_swaps(v, genus):
                    s2 = tuple(dehn_reduce(s, genus))
                    if len(s2) < len(w):
                        shorter = s2
                        break
                    if s2 not in seen:
                        stack.append(s2)
                if shorter is not None:
                    break
        if shorter is None:
            return frozenset(seen)
        w = shorter


@lru_cache(maxsize=65536)
def _canonical_cached(letters: tuple[Letter, ...], genus: int) -> tuple[Letter, ...]:
    """Least representative of the unoriented conjugacy class."""
    orbit = _class_orbit(letters, genus)
    return min(orbit, key=_word_key)


@dataclass(frozen=True)
class CurveWord:
    """A nontrivial cyclically reduced, Dehn-reduced word on a surface.

    `canonical` is the stored representative: the least word in the
    unoriented conjugacy class, so equality of CurveWords is equality of
    free homotopy classes of unoriented curves.
    """

    letters: tuple[Letter, ...]
    surface: SurfaceSpec
    cyclic: bool = True

    is_trivial = False

    def __post_init__(self):
        if not self.letters:
            raise ValueError("CurveWord cannot be empty; use TRIVIAL")

    @property
    def canonical(self) -> tuple[Letter, ...]:
        return _canonical_cached(self.letters, self.surface.genus)

    def canonical_word(self) -> "CurveWord":
        return CurveWord(self.canonical, self.surface, self.cyclic)

    def inverse(self) -> "CurveWord":
        return CurveWord(_invert(self.letters), self.surface, self.cyclic)

    def same_class(self, other: "CurveWord") -> bool:
        return self.surface == other.surface and self.canonical == other.canonical

    def tokens(self) -> list[str]:
        return [self.surface.letter_name(lt) for lt in self.letters]

    def text(self) -> str:
        return " ".join(self.surface.letter_name(lt) for lt in self.canonical)

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        return f"CurveWord({' '.join(self.tokens())})"


def parse_word(text: str | Iterable[str], surface: SurfaceSpec) -> list[Letter]:
    tokens = text.split() if isinstance(text, str) else list(text)
    return [surface.parse_letter(t) for t in tokens]


def cyclic_reduce(
    raw: str | Sequence[str] | Sequence[Letter],
    surface: SurfaceSpec,
    word_cap: int = DEFAULT_WORD_CAP,
) -> CurveWord | TrivialWord:
    """Dehn-reduced cyclically reduced representative of a raw word.

    The trivial class comes back as the TRIVIAL marker, never as an error.
    """
    if isinstance(raw, str):
        letters = parse_word(raw, surface)
    else:
        items = list(raw)
        if items and isinstance(items[0], str):
            letters = parse_word(items, surface)  # type: ignore[arg-type]
        else:
            letters = []
            for lt in items:
                idx, sign = lt
                if not (0 <= idx < surface.rank) or sign not in (1, -1):
                    raise UnknownSymbol(f"bad letter {lt!r}")
                letters.append((idx, sign))
    if len(letters) > word_cap:
        raise WordTooLong(f"{len(letters)} letters exceeds cap {word_cap}")
    reduced = dehn_reduce(letters, surface.genus)
    if not reduced:
        return TRIVIAL
    return CurveWord(tuple(_canonical_cached(tuple(reduced), surface.genus)), surface)


def concat_words(parts: Sequence[Sequence[Letter]]) -> list[Letter]:
    out: list[Letter] = []
    for p in parts:
        out.extend(p)
    return _free_reduce(out)
