"""Word enumeration and conjugacy classes for free and surface groups.

A word is a tuple of letters; letter l in [0, r) is the l-th generator,
letter l in [r, 2r) is the inverse of generator l - r.  This encoding makes
tuple comparison the prescribed lexicographic order (positive letters sort
before inverse letters).

Surface groups (genus g >= 2, standard relator of length 4g) are handled
with Dehn's algorithm: the presentation is C'(1/8), so freely reduced words
with no subword longer than half a cyclic rotation of the relator are
geodesic, and geodesic representatives of one element differ by swaps of
exact half-relator subwords.  Canonical forms take the lexicographic
minimum over that finite orbit, which makes deduplication exact word
combinatorics rather than floating-point matching.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LimitExceeded, NotLoxodromic
from .moebius import GroupDefinition, MoebiusMap, Multiplier, classify, multiplier

DEFAULT_WORD_CAP = 5_000_000


def inverse_letter(letter: int, r: int) -> int:
    return letter + r if letter < r else letter - r


def invert_word(word, r):
    return tuple(inverse_letter(l, r) for l in reversed(word))


def free_reduce(word, r):
    out = []
    for l in word:
        if out and out[-1] == inverse_letter(l, r):
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def cyclic_free_reduce(word, r):
    w = list(free_reduce(word, r))
    while len(w) >= 2 and w[0] == inverse_letter(w[-1], r):
        w = w[1:-1]
    return tuple(w)


def least_rotation(word):
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def is_power(word) -> bool:
    """True when word is a literal k-fold repetition, k >= 2."""
    n = len(word)
    for p in range(1, n // 2 + 1):
        if n % p == 0 and word == word[:p] * (n // p):
            return True
    return False


@dataclass(frozen=True)
class ConjugacyClass:
    canonical_word: tuple
    representative: MoebiusMap
    multiplier: Multiplier
    primitive: bool
    word_length: int


class GroupWords:
    """Word calculus bound to one group definition."""

    def __init__(self, G: GroupDefinition):
        self.G = G
        self.r = len(G.names)
        mats = list(G.maps)
        mats += [m.inverse() for m in G.maps]
        self._mats = mats
        if G.kind == "surface":
            self.relator = self._standard_relator()
            self.half = 2 * G.count
            self._rotations = self._relator_rotations()
            # forbidden[t] = set of length-t prefixes of rotations, t > half
            self._forbidden = {}
            for t in range(self.half + 1, len(self.relator) + 1):
                self._forbidden[t] = {rot[:t] for rot in self._rotations}
            # completion of a >half prefix: prefix -> replacement word
            self._complement = {}
            for rot in self._rotations:
                for t in range(self.half + 1, len(rot) + 1):
                    self._complement.setdefault(
                        rot[:t], invert_word(rot[t:], self.r))
            self._half_swap = {}
            for rot in self._rotations:
                self._half_swap.setdefault(
                    rot[:self.half], invert_word(rot[self.half:], self.r))
        else:
            self.relator = None

    # -- letters ------------------------------------------------------

    def letter_name(self, letter: int) -> str:
        if letter < self.r:
            return self.G.names[letter]
        return self.G.names[letter - self.r] + "'"

    def word_str(self, word) -> str:
        return " ".join(self.letter_name(l) for l in word) if word else "1"

    def matrix_of(self, word) -> MoebiusMap:
        out = MoebiusMap.identity()
        for l in word:
            out = out @ self._mats[l]
        return out

    # -- surface relator machinery ------------------------------------

    def _standard_relator(self):
        idx = {name: i for i, name in enumerate(self.G.names)}
        rel = []
        g = self.G.count
        for i in range(g):
            ai = idx[self.G.marking[2 * i]]
            bi = idx[self.G.marking[2 * i + 1]]
            rel += [ai, bi, ai + self.r, bi + self.r]
        return tuple(rel)

    def _relator_rotations(self):
        rots = set()
        for base in (self.relator, invert_word(self.relator, self.r)):
            n = len(base)
            for i in range(n):
                rots.add(base[i:] + base[:i])
        return sorted(rots)

    def _find_reduction(self, word):
        """(position, prefix) of a longest >half relator subword, or None."""
        n = len(word)
        for t in range(len(self.relator), self.half, -1):
            if t > n:
                continue
            forb = self._forbidden[t]
            for i in range(n - t + 1):
                if word[i:i + t] in forb:
                    return i, word[i:i + t]
        return None

    def dehn_reduce(self, word):
        """Shorten with Dehn's algorithm until no >half relator subword."""
        if self.G.kind != "surface":
            return free_reduce(word, self.r)
        w = free_reduce(word, self.r)
        while True:
            hit = self._find_reduction(w)
            if hit is None:
                return w
            i, prefix = hit
            w = free_reduce(
                w[:i] + self._complement[prefix] + w[i + len(prefix):], self.r)

    def is_dehn_reduced(self, word) -> bool:
        if word != free_reduce(word, self.r):
            return False
        if self.G.kind != "surface":
            return True
        return self._find_reduction(word) is None

    def _half_swaps(self, word):
        """All single half-relator swaps of a geodesic word."""
        h = self.half
        for i in range(len(word) - h + 1):
            seg = word[i:i + h]
            repl = self._half_swap.get(seg)
            if repl is not None:
                yield free_reduce(word[:i] + repl + word[i + h:], self.r)

    def element_canonical(self, word):
        """Lexicographically least geodesic word for the group element."""
        w = self.dehn_reduce(word)
        if self.G.kind != "surface":
            return w
        seen = {w}
        frontier = [w]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self._half_swaps(u):
                    if len(v) < len(u) or self._find_reduction(v) is not None:
                        # swap exposed a shorter form; restart from it
                        return self.element_canonical(v)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return min(seen)

    # -- cyclic (conjugacy) forms -------------------------------------

    def cyclic_dehn_reduce(self, word):
        w = cyclic_free_reduce(word, self.r)
        if self.G.kind != "surface":
            return w
        while True:
            w = cyclic_free_reduce(w, self.r)
            n = len(w)
            hit = None
            doubled = w + w
            for t in range(len(self.relator), self.half, -1):
                if t > n:
                    continue
                forb = self._forbidden[t]
                for i in range(n):
                    if doubled[i:i + t] in forb:
                        hit = (i, doubled[i:i + t])
                        break
                if hit:
                    break
            if hit is None:
                return w
            i, prefix = hit
            rotated = w[i:] + w[:i]
            w = self._complement[prefix] + rotated[len(prefix):]

    def _cyclic_half_swaps(self, word):
        h = self.half
        n = len(word)
        if n < h:
            return
        doubled = word + word
        for i in range(n):
            seg = doubled[i:i + h]
            repl = self._half_swap.get(seg)
            if repl is not None:
                rotated = word[i:] + word[:i]
                yield cyclic_free_reduce(repl + rotated[h:], self.r)

    def conjugacy_canonical(self, word):
        """Least cyclic word over rotations and cyclic half-relator swaps."""
        w = self.cyclic_dehn_reduce(word)
        if not w:
            return w
        if self.G.kind != "surface":
            return least_rotation(w)
        seen = set()
        frontier = [least_rotation(w)]
        seen.update(frontier)
        while frontier:
            nxt = []
            for u in frontier:
                for v in self._cyclic_half_swaps(u):
                    if len(v) < len(u):
                        return self.conjugacy_canonical(v)
                    v = self.cyclic_dehn_reduce(v)
                    if len(v) < len(u):
                        return self.conjugacy_canonical(v)
                    v = least_rotation(v)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return min(seen)

    # -- enumeration --------------------------------------------------

    def enumerate_words(self, max_len: int, cap: int = DEFAULT_WORD_CAP):
        """Yield each group element's canonical word, lengths 1..max_len.

        Free type: every freely reduced word once.  Surface type: every
        geodesic normal form (Dehn-reduced, least in its half-swap orbit)
        once per group element.
        """
        if max_len < 1:
            return
        surface = self.G.kind == "surface"
        count = 0
        alphabet = range(2 * self.r)
        stack = [()]
        while stack:
            w = stack.pop()
            for l in alphabet:
                if w and w[-1] == inverse_letter(l, self.r):
                    continue
                nw = w + (l,)
                if surface and not self._suffix_ok(nw):
                    continue
                if not surface or self._is_element_canonical(nw):
                    count += 1
                    if count > cap:
                        raise LimitExceeded(
                            f"word cap {cap} hit at length {len(nw)}")
                    yield nw
                if len(nw) < max_len:
                    stack.append(nw)

    def _suffix_ok(self, word) -> bool:
        """No forbidden (>half relator) subword ending at the last letter."""
        n = len(word)
        for t in range(self.half + 1, len(self.relator) + 1):
            if t <= n and word[n - t:] in self._forbidden[t]:
                return False
        return True

    def _is_element_canonical(self, word) -> bool:
        # word is Dehn-reduced by construction; canonical iff lex-least in
        # its half-swap orbit.  A swap yielding a shorter word means the
        # word was not geodesic after all; such words are skipped too.
        seen = {word}
        frontier = [word]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self._half_swaps(u):
                    if (len(v) < len(word) or v < word
                            or self._find_reduction(v) is not None):
                        return False
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return True

    def conjugacy_classes(self, max_len: int, cap: int = DEFAULT_WORD_CAP):
        """All conjugacy classes with canonical representative length <= max_len.

        gamma and gamma^-1 give distinct classes unless their canonical
        cyclic words coincide.  The identity class is omitted.
        """
        canon = set()
        for w in self.enumerate_words(max_len, cap=cap):
            cw = self.conjugacy_canonical(w)
            if cw and len(cw) <= max_len:
                canon.add(cw)
        out = []
        for cw in sorted(canon, key=lambda w: (len(w), w)):
            rep = self.matrix_of(cw)
            if classify(rep) != "loxodromic":
                raise NotLoxodromic(
                    f"element {self.word_str(cw)!r} is {classify(rep)}; "
                    "group is not totally loxodromic")
            out.append(ConjugacyClass(
                canonical_word=cw,
                representative=rep,
                multiplier=multiplier(rep),
                primitive=not is_power(cw),
                word_length=len(cw),
            ))
        return out
