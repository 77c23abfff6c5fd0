"""Alphabets, finite words, morphisms and codings.

Symbols are plain strings and words are tuples of symbols, so every value
here is immutable and hashable.  Alphabets are sorted tuples; iterating one
always gives the same order, which keeps generated systems reproducible.
"""

from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Tuple

from .errors import AlphabetMismatch, UnknownSymbol

Symbol = str
Word = Tuple[str, ...]
Alphabet = Tuple[str, ...]

EMPTY: Word = ()


def alphabet(symbols: Iterable[Symbol]) -> Alphabet:
    """Sorted, duplicate-free alphabet.  Raises ValueError when empty."""
    out = tuple(sorted(set(symbols)))
    if not out:
        raise ValueError("an alphabet must contain at least one symbol")
    for s in out:
        if not isinstance(s, str) or not s or any(c.isspace() for c in s):
            raise ValueError(f"invalid symbol name {s!r}")
    return out


def letters(text: str) -> Word:
    """Split a string of one-character symbols into a word: ``letters("aba")``."""
    return tuple(text)


def render(w: Iterable[Symbol], sep: str = "") -> str:
    return sep.join(w)


def occurrences(a: Symbol, w: Word) -> int:
    return sum(1 for x in w if x == a)


def erase(gamma, w: Word) -> Word:
    gamma = frozenset(gamma)
    return tuple(x for x in w if x not in gamma)


@dataclass(frozen=True)
class Uniformity:
    non_erasing: bool
    uniform_k: Optional[int]
    is_coding: bool


@dataclass(frozen=True, eq=False)
class Morphism:
    """A total map from ``source`` symbols to words over ``target``."""

    source: Alphabet
    target: Alphabet
    rules: Mapping[Symbol, Word] = field(repr=False)

    def __post_init__(self):
        src = alphabet(self.source)
        tgt = alphabet(self.target)
        rules = {a: tuple(w) for a, w in self.rules.items()}
        missing = [a for a in src if a not in rules]
        extra = [a for a in rules if a not in src]
        if missing or extra:
            raise AlphabetMismatch(
                f"rules must cover exactly the source alphabet "
                f"(missing {missing}, unexpected {extra})"
            )
        tset = set(tgt)
        for a, w in rules.items():
            for x in w:
                if x not in tset:
                    raise UnknownSymbol(x, f"image of {a!r}")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        object.__setattr__(self, "rules", MappingProxyType({a: rules[a] for a in src}))

    @classmethod
    def from_strings(cls, rules: Mapping[str, str], source=None, target=None):
        """Build from one-character symbols, e.g. ``{"a": "ab", "b": "a"}``."""
        table = {a: letters(w) for a, w in rules.items()}
        if source is None:
            source = table.keys()
        if target is None:
            target = set(source) | {x for w in table.values() for x in w}
        return cls(tuple(source), tuple(target), table)

    @classmethod
    def identity(cls, symbols):
        symbols = alphabet(symbols)
        return cls(symbols, symbols, {a: (a,) for a in symbols})

    def __call__(self, w: Iterable[Symbol]) -> Word:
        return apply_morphism(self, w)

    def __getitem__(self, a: Symbol) -> Word:
        try:
            return self.rules[a]
        except KeyError:
            raise UnknownSymbol(a, "morphism source") from None

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and dict(self.rules) == dict(other.rules)
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(self.rules.items())))

    def __repr__(self):
        body = ", ".join(f"{a}->{' '.join(w) or 'ε'}" for a, w in self.rules.items())
        return f"{type(self).__name__}({body})"

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def restrict(self, symbols) -> "Morphism":
        """Restriction to a sub-alphabet closed under the rules."""
        keep = alphabet(symbols)
        return Morphism(keep, keep, {a: self.rules[a] for a in keep})


class Coding(Morphism):
    """A 1-uniform morphism."""

    def __post_init__(self):
        super().__post_init__()
        bad = [a for a, w in self.rules.items() if len(w) != 1]
        if bad:
            raise ValueError(f"coding images must have length 1 (offending: {bad})")

    @classmethod
    def from_mapping(cls, table: Mapping[Symbol, Symbol], target=None):
        if target is None:
            target = set(table.values())
        return cls(tuple(table), tuple(target), {a: (b,) for a, b in table.items()})

    @classmethod
    def identity(cls, symbols):
        symbols = alphabet(symbols)
        return cls(symbols, symbols, {a: (a,) for a in symbols})

    def letter(self, a: Symbol) -> Symbol:
        return self[a][0]

    @property
    def is_identity(self) -> bool:
        return all(w == (a,) for a, w in self.rules.items())


def as_coding(h: Morphism) -> Coding:
    if isinstance(h, Coding):
        return h
    return Coding(h.source, h.target, h.rules)


def apply_morphism(h: Morphism, w: Iterable[Symbol]) -> Word:
    rules = h.rules
    out = []
    for x in w:
        try:
            out.extend(rules[x])
        except KeyError:
            raise UnknownSymbol(x, "morphism source") from None
    return tuple(out)


def compose_morphisms(h2: Morphism, h1: Morphism) -> Morphism:
    """The morphism ``a -> h2(h1(a))``; a coding when both inputs are codings."""
    if h1.target != h2.source:
        if not set(h1.target) <= set(h2.source):
            raise AlphabetMismatch(
                f"cannot compose: {h1.target} is not contained in {h2.source}"
            )
    rules = {a: apply_morphism(h2, h1.rules[a]) for a in h1.source}
    cls = Coding if isinstance(h1, Coding) and isinstance(h2, Coding) else Morphism
    return cls(h1.source, h2.target, rules)


def morphism_power(h: Morphism, r: int) -> Morphism:
    if r < 0:
        raise ValueError("power must be non-negative")
    if not h.is_endomorphism:
        raise AlphabetMismatch("only endomorphisms can be iterated")
    out = Morphism.identity(h.source)
    for _ in range(r):
        out = compose_morphisms(h, out)
    return out


def classify_uniformity(h: Morphism) -> Uniformity:
    lengths = {len(w) for w in h.rules.values()}
    k = next(iter(lengths)) if len(lengths) == 1 else None
    return Uniformity(non_erasing=0 not in lengths, uniform_k=k, is_coding=k == 1)


def letter_counts(w: Word) -> Counter:
    return Counter(w)


def successors(h: Morphism, a: Symbol) -> frozenset:
    return frozenset(h.rules[a])
