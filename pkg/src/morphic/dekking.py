"""Morphic systems for erasures and morphic images of fixpoints.

Erasing a set of letters ``gamma`` from ``g^ω(a)`` is again morphic: after
replacing ``g`` by a power ``g^r`` that *respects* ``gamma`` every image
``g^r(b)`` splits into blocks, each holding exactly one surviving letter,
and the blocks become the letters of a new system.  Non-erasing images
``h(g^ω(a))`` are handled by marking the first letter of every ``h(b)``.
"""

import enum
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from .engine import Diverges, Finite, MorphicSystem, limit_status
from .errors import (
    AllErased,
    ErasingImage,
    FiniteErasure,
    NoLimit,
    RespectCapExceeded,
    UndefinedBlocks,
)
from .words import (
    Coding,
    Morphism,
    Symbol,
    Word,
    alphabet,
    apply_morphism,
    compose_morphisms,
    erase,
    morphism_power,
)

RESPECT_CAP = 4096


class LetterClass(enum.Enum):
    DEAD = "dead"
    NEAR_DEAD = "near dead"
    RESILIENT = "resilient"
    RESURRECTING = "resurrecting"
    UNCLASSIFIED = "unclassified"


def _successor_sets(h: Morphism) -> Dict[Symbol, FrozenSet[Symbol]]:
    return {a: frozenset(h.rules[a]) for a in h.source}


def _power_successors(succ, r):
    """Letter-set successor map of the ``r``-th power, without building words."""
    out = {a: frozenset([a]) for a in succ}
    for _ in range(r):
        out = {a: frozenset().union(*(succ[b] for b in s)) if s else frozenset()
               for a, s in out.items()}
    return out


def _orbit(succ, a) -> Tuple[List[FrozenSet], List[FrozenSet]]:
    seq = [frozenset([a])]
    index = {seq[0]: 0}
    while True:
        cur = seq[-1]
        nxt = frozenset().union(*(succ[b] for b in cur)) if cur else frozenset()
        if nxt in index:
            k = index[nxt]
            return seq[:k], seq[k:]
        index[nxt] = len(seq)
        seq.append(nxt)


def letter_set_orbit(f: Morphism, a: Symbol):
    """``(transient, cycle)`` of the sets ``S_n`` of letters of ``f^n(a)``."""
    return _orbit(_successor_sets(f), a)


def _classify(succ, gamma) -> Dict[Symbol, LetterClass]:
    gamma = frozenset(gamma)
    orbits = {a: _orbit(succ, a) for a in succ}

    def sets(a):
        transient, cycle = orbits[a]
        return transient + cycle

    dead = {a for a in succ if all(s <= gamma for s in sets(a))}
    out = {}
    for a in sorted(succ):
        seq = sets(a)
        later = seq[1:] if len(seq) > 1 else []
        # the orbit is eventually periodic, so n > 0 ranges over seq[1:] and
        # the cycle (which always contains some S_n with n > 0)
        tail = later + orbits[a][1]
        if a in dead:
            out[a] = LetterClass.DEAD
        elif a not in gamma and all(s <= dead for s in tail):
            out[a] = LetterClass.NEAR_DEAD
        elif all(not s <= gamma for s in seq):
            out[a] = LetterClass.RESILIENT
        elif a in gamma and all(not s <= gamma for s in tail):
            out[a] = LetterClass.RESURRECTING
        else:
            out[a] = LetterClass.UNCLASSIFIED
    return out


def classify_letters(f: Morphism, gamma) -> Dict[Symbol, LetterClass]:
    return _classify(_successor_sets(f), gamma)


def minimal_respecting_power(g: Morphism, gamma, cap: int = RESPECT_CAP) -> int:
    succ = _successor_sets(g)
    power = {a: frozenset([a]) for a in succ}
    for r in range(1, cap + 1):
        power = {a: frozenset().union(*(succ[b] for b in s)) if s else frozenset()
                 for a, s in power.items()}
        classes = _classify(power, gamma)
        if LetterClass.UNCLASSIFIED not in classes.values():
            return r
    raise RespectCapExceeded(f"no power up to {cap} respects {sorted(gamma)}")


def block_decomposition(w: Word, gamma, dead) -> List[Word]:
    """Contents of the blocks of ``w``, as tuples of letters."""
    gamma = frozenset(gamma)
    w = erase(dead, w)
    if not w:
        return []
    anchors = [i for i, x in enumerate(w) if x not in gamma]
    if not anchors:
        raise UndefinedBlocks(f"{' '.join(w)} consists of erased letters only")
    cuts = [0] + anchors[1:] + [len(w)]
    return [w[cuts[i]:cuts[i + 1]] for i in range(len(cuts) - 1)]


def block_name(content: Word, sep: str = "") -> str:
    return "[" + sep.join(content) + "]"


def _separator(symbols) -> str:
    return "" if all(len(s) == 1 for s in symbols) else "."


def blocks(w: Word, gamma, dead) -> Word:
    """``B(w)`` as a word of rendered block letters such as ``[aba]``."""
    w = tuple(w)
    sep = _separator(w)
    return tuple(block_name(c, sep) for c in block_decomposition(w, gamma, dead))


@dataclass(frozen=True)
class ErasureSystem:
    xi: Morphism
    rho: Coding
    start: Symbol
    r: int
    dead: FrozenSet[Symbol]
    gamma: FrozenSet[Symbol]
    contents: Mapping[Symbol, Word] = field(repr=False)

    @property
    def delta(self):
        return self.xi.source

    def system(self) -> MorphicSystem:
        return MorphicSystem(self.xi, self.rho, self.start)

    def unblock(self, w) -> Word:
        return unblock(w, self.contents)

    def pruned(self) -> "ErasureSystem":
        """Restriction to the block letters reachable from the start letter."""
        keep = _reachable(self.xi, self.start)
        return ErasureSystem(
            self.xi.restrict(keep),
            Coding(alphabet(keep), self.rho.target, {b: self.rho.rules[b] for b in keep}),
            self.start, self.r, self.dead, self.gamma,
            {b: self.contents[b] for b in keep},
        )


def _reachable(h: Morphism, start: Symbol) -> FrozenSet[Symbol]:
    seen = {start}
    todo = [start]
    while todo:
        for x in h.rules[todo.pop()]:
            if x not in seen:
                seen.add(x)
                todo.append(x)
    return frozenset(seen)


def unblock(w, contents: Mapping[Symbol, Word]) -> Word:
    out = []
    for b in w:
        out.extend(contents[b])
    return tuple(out)


def erasure_system(g: Morphism, gamma, a: Symbol, cap: int = RESPECT_CAP,
                   prune: bool = False) -> ErasureSystem:
    gamma = frozenset(gamma)
    status = limit_status(g, (a,))
    if isinstance(status, Diverges):
        raise NoLimit(status.reason)
    if isinstance(status, Finite):
        raise FiniteErasure(erase(gamma, status.word))
    r = minimal_respecting_power(g, gamma, cap)
    gr = morphism_power(g, r)
    classes = classify_letters(gr, gamma)
    dead = frozenset(b for b, cls in classes.items() if cls is LetterClass.DEAD)
    sep = _separator(g.source)

    image_blocks = {b: block_decomposition(gr.rules[b], gamma, dead) for b in g.source}
    contents: Dict[Symbol, Word] = {block_name((b,), sep): (b,) for b in g.source}
    for parts in image_blocks.values():
        for c in parts:
            contents.setdefault(block_name(c, sep), c)
    if len(set(contents.values())) != len(contents):
        raise ValueError("block names collide; rename the source symbols")

    rules = {}
    for name, content in contents.items():
        img = []
        for b in content:
            img.extend(block_name(c, sep) for c in image_blocks[b])
        rules[name] = tuple(img)
    delta = alphabet(contents)
    xi = Morphism(delta, delta, rules)

    def anchor(content):
        kept = [x for x in content if x not in gamma]
        return kept[0] if kept else content[0]

    rho = Coding(delta, g.source, {n: (anchor(c),) for n, c in contents.items()})
    start = block_name((a,), sep)
    out = ErasureSystem(xi, rho, start, r, dead, gamma, contents)

    status = limit_status(xi, (start,))
    if isinstance(status, Finite):
        raise FiniteErasure(apply_morphism(rho, status.word))
    if isinstance(status, Diverges):
        raise NoLimit(status.reason)
    return out.pruned() if prune else out


@dataclass(frozen=True)
class ImageSystem:
    xi: Morphism
    rho: Coding
    start: Symbol

    @property
    def delta(self):
        return self.xi.source

    def system(self) -> MorphicSystem:
        return MorphicSystem(self.xi, self.rho, self.start)


def marked(b: Symbol) -> str:
    return f"[{b}]"


def image_word(h: Morphism, w: Word) -> Word:
    """``I(w) = [b1] tail(h(b1)) [b2] tail(h(b2)) ...``"""
    out = []
    for b in w:
        out.append(marked(b))
        out.extend(h.rules[b][1:])
    return tuple(out)


def image_system(g: Morphism, h: Morphism, a: Symbol, fill: Optional[Mapping] = None) -> ImageSystem:
    """System whose coded fixpoint is ``h(g^ω(a))`` for non-erasing ``h``.

    ``fill`` supplies a first letter for symbols that ``h`` erases but that
    never occur in the fixpoint; their value is never observed.
    """
    fill = dict(fill or {})
    erased = [b for b in h.source if not h.rules[b] and b not in fill]
    if erased:
        raise ErasingImage(f"image morphism erases {erased}")
    status = limit_status(g, (a,))
    if isinstance(status, Diverges):
        raise NoLimit(status.reason)
    if isinstance(status, Finite):
        raise NoLimit("the generating fixpoint is finite")
    brackets = {marked(b) for b in g.source}
    clash = brackets & set(h.target)
    if clash:
        raise ValueError(f"marked letters {sorted(clash)} collide with target symbols")
    delta = alphabet(brackets | set(h.target))
    rules: Dict[Symbol, Word] = {x: () for x in h.target}
    rho: Dict[Symbol, Tuple[Symbol]] = {x: (x,) for x in h.target}
    for b in g.source:
        rules[marked(b)] = image_word(h, g.rules[b])
        head = h.rules[b][0] if h.rules[b] else fill[b]
        rho[marked(b)] = (head,)
    return ImageSystem(Morphism(delta, delta, rules), Coding(delta, h.target, rho), marked(a))


def split_erasing(h: Morphism):
    gamma = frozenset(b for b in h.source if not h.rules[b])
    if gamma == frozenset(h.source):
        raise AllErased("the morphism erases every letter")
    keep = [b for b in h.source if b not in gamma]
    return gamma, Morphism(keep, h.target, {b: h.rules[b] for b in keep})


@dataclass(frozen=True)
class FiniteWord:
    word: Word


def morphic_image_pipeline(system: MorphicSystem, h: Morphism,
                           a_start: Optional[Symbol] = None,
                           cap: int = RESPECT_CAP) -> Union[MorphicSystem, FiniteWord]:
    """A morphic system for ``h(c(g^ω(a)))``, or the finite word it equals."""
    a = system.start if a_start is None else a_start
    hc = compose_morphisms(h, system.c)
    try:
        gamma, _ = split_erasing(hc)
    except AllErased:
        return FiniteWord(())
    if not gamma:
        return image_system(system.h, hc, a).system()
    try:
        er = erasure_system(system.h, gamma, a, cap=cap).pruned()
    except FiniteErasure as exc:
        return FiniteWord(apply_morphism(hc, exc.word))
    k = compose_morphisms(hc, er.rho)
    # block letters [b] with b erased only occur as the (non-recurring) start
    fill = {x: hc.target[0] for x in k.source if not k.rules[x]}
    img = image_system(er.xi, k, er.start, fill=fill)
    return img.system()
