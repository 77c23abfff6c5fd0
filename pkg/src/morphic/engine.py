"""Fixpoints of morphisms: mortality, limits and lazy prefix generation."""

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import AlphabetMismatch, FiniteLimit, IterationCap, NoLimit
from .words import (
    Coding,
    Morphism,
    Symbol,
    Word,
    apply_morphism,
    as_coding,
)

MAX_APPLICATIONS = 10_000
MAX_LETTERS = 1 << 24
_CYCLE_MEMORY = 1 << 12


def mortal_letters(h: Morphism) -> frozenset:
    if not h.is_endomorphism:
        raise AlphabetMismatch("mortality is defined for endomorphisms only")
    mortal = set()
    for _ in range(len(h.source) + 1):
        grown = {a for a in h.source if a not in mortal and all(x in mortal for x in h.rules[a])}
        if not grown:
            break
        mortal |= grown
    return frozenset(mortal)


def is_prolongable(h: Morphism, a: Symbol) -> bool:
    image = h[a]
    return len(image) >= 2 and image[0] == a


@dataclass(frozen=True)
class Infinite:
    """Certificate of an infinite limit: ``h(seed) = seed + growth``.

    Every further iterate starts with ``seed``; ``growth`` contains an
    immortal letter, so the nested prefixes grow without bound.
    """

    seed: Word
    growth: Word
    steps: int


@dataclass(frozen=True)
class Finite:
    word: Word


@dataclass(frozen=True)
class Diverges:
    reason: str


LimitStatus = Union[Infinite, Finite, Diverges]


def _common_prefix_length(u: Word, v: Word) -> int:
    n = min(len(u), len(v))
    i = 0
    while i < n and u[i] == v[i]:
        i += 1
    return i


def limit_status(h: Morphism, start, max_applications=MAX_APPLICATIONS,
                 max_letters=MAX_LETTERS) -> LimitStatus:
    """Decide how ``h^n(start)`` behaves letterwise.

    At every step the common prefix ``P`` of two successive iterates is
    tested: if ``h(P) = P z`` with an immortal letter in ``z`` then all later
    iterates extend the nested chain ``h^k(P)`` and the limit is infinite.
    A repeated iterate means either a finite limit (period 1) or an
    oscillation.
    """
    if isinstance(start, str):
        start = (start,)
    start = tuple(start)
    if not start:
        raise ValueError("start word must be non-empty")
    mortal = mortal_letters(h)
    if all(h.rules.values()):
        # non-erasing: the first letter evolves by x -> h(x)[0] alone
        orbit = [start[0]]
        while True:
            nxt_first = h.rules[orbit[-1]][0]
            if nxt_first in orbit:
                cycle = len(orbit) - orbit.index(nxt_first)
                break
            orbit.append(nxt_first)
        if cycle > 1:
            return Diverges(f"first letter cycles with period {cycle}")
    cur = start
    seen = {cur: 0}
    for step in range(max_applications):
        nxt = apply_morphism(h, cur)
        if nxt == cur:
            return Finite(cur)
        k = _common_prefix_length(cur, nxt)
        if k:
            seed = nxt[:k]
            image = apply_morphism(h, seed)
            if image[:k] == seed:
                growth = image[k:]
                if any(x not in mortal for x in growth):
                    return Infinite(seed, growth, step)
        if len(nxt) > max_letters:
            return Diverges(f"no stable prefix after {step + 1} applications "
                            f"({len(nxt)} letters)")
        if nxt in seen:
            return Diverges(f"iterates cycle with period {step + 1 - seen[nxt]}")
        if len(nxt) <= _CYCLE_MEMORY:
            seen[nxt] = step + 1
        cur = nxt
    return Diverges(f"no stable prefix within {max_applications} applications")


class PrefixStream:
    """Lazy letters of ``c(h^ω(start))``.

    Letters are produced from the certificate ``h(P) = P z``: the limit is
    ``X = P z h(X[|P|]) h(X[|P|+1]) ...`` so the uncoded buffer is extended
    by reading itself.  Already produced letters never change.  The stream is
    meant for one consumer; reading the cached part concurrently is safe.
    """

    def __init__(self, system: "MorphicSystem", max_letters=MAX_LETTERS):
        self.system = system
        self.max_letters = max_letters
        status = limit_status(system.h, (system.start,))
        self._finite: Optional[Word] = None
        if isinstance(status, Infinite):
            self._buf = list(status.seed + status.growth)
            self._read = len(status.seed)
        elif isinstance(status, Finite):
            self._finite = status.word
            self._buf = list(status.word)
            self._read = len(self._buf)
        else:
            raise NoLimit(status.reason)
        self._coded = []

    @property
    def is_finite(self) -> bool:
        return self._finite is not None

    def _grow_raw(self, n: int):
        rules = self.system.h.rules
        buf = self._buf
        while len(buf) < n:
            if self._finite is not None:
                return
            if self._read >= len(buf):
                raise IterationCap("stream exhausted its own buffer")
            if len(buf) > self.max_letters:
                raise IterationCap(f"more than {self.max_letters} letters generated")
            buf.extend(rules[buf[self._read]])
            self._read += 1

    def raw_prefix(self, n: int) -> Word:
        self._grow_raw(n)
        return tuple(self._buf[:n])

    def prefix(self, n: int) -> Word:
        """First ``n`` coded letters (fewer only when the limit is finite)."""
        if len(self._coded) < n:
            self._grow_raw(n)
            code = self.system.c.rules
            for x in self._buf[len(self._coded):n]:
                self._coded.append(code[x][0])
        return tuple(self._coded[:n])

    def __getitem__(self, i: int) -> Symbol:
        p = self.prefix(i + 1)
        if len(p) <= i:
            raise IndexError(i)
        return p[i]

    def __iter__(self) -> Iterator[Symbol]:
        i = 0
        while True:
            p = self.prefix(i + 1)
            if len(p) <= i:
                return
            yield p[i]
            i += 1


@dataclass(frozen=True)
class MorphicSystem:
    """``c(h^ω(start))`` for an endomorphism ``h`` and coding ``c``."""

    h: Morphism
    c: Coding
    start: Symbol

    def __post_init__(self):
        if not self.h.is_endomorphism:
            raise AlphabetMismatch("the generating morphism must be an endomorphism")
        c = as_coding(self.c)
        if c.source != self.h.source:
            raise AlphabetMismatch("the coding must be defined on the morphism's alphabet")
        if self.start not in self.h.source:
            raise AlphabetMismatch(f"start letter {self.start!r} not in the alphabet")
        object.__setattr__(self, "c", c)

    @classmethod
    def pure(cls, h: Morphism, start: Symbol) -> "MorphicSystem":
        return cls(h, Coding.identity(h.source), start)

    @property
    def alphabet(self):
        return self.h.source

    def stream(self, **kw) -> PrefixStream:
        return PrefixStream(self, **kw)

    def prefix(self, n: int) -> Word:
        return fixpoint_prefix(self, n)


def fixpoint_prefix(system: MorphicSystem, n: int, max_letters=MAX_LETTERS) -> Word:
    if n < 0:
        raise ValueError("length must be non-negative")
    stream = PrefixStream(system, max_letters=max_letters)
    out = stream.prefix(n)
    if len(out) < n:
        raise FiniteLimit(apply_morphism(system.c, stream._finite))
    return out


def fixpoint_letters(h: Morphism, a: Symbol) -> frozenset:
    """Letters occurring in the infinite limit of ``h^n(a)``."""
    status = limit_status(h, (a,))
    if isinstance(status, Finite):
        raise FiniteLimit(status.word)
    if isinstance(status, Diverges):
        raise NoLimit(status.reason)
    found = set(status.seed)
    frontier = set(status.growth)
    seen = set()
    while frontier:
        b = frontier.pop()
        if b in seen:
            continue
        seen.add(b)
        frontier.update(h.rules[b])
    return frozenset(found | seen)


def naive_iterate(h: Morphism, start: Word, n: int, max_applications=64) -> Word:
    """Apply ``h`` repeatedly until the first ``n`` letters repeat; test helper."""
    cur = tuple(start)
    for _ in range(max_applications):
        nxt = apply_morphism(h, cur)
        if len(cur) >= n and nxt[:n] == cur[:n]:
            return cur[:n]
        cur = nxt
    raise IterationCap("naive iteration did not stabilize")
