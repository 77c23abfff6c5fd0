"""Annotating a morphism with transducer state information.

For a transducer ``M`` and a morphism ``h`` on its input alphabet, each
letter of ``h^ω(x1)`` is tagged with the value ``Θ`` of the prefix before
it, where ``Θ(w) = (τ_w, τ_{h(w)}, ..., τ_{h^{n+p-1}(w)})`` and ``τ_w`` is
the state map of reading ``w``.  Only finitely many ``Θ`` values exist, and
the tagged morphism ``hbar`` generates the state-annotated input, from which
``M``'s output is a morphic image.

State maps are tuples of state indices: ``f[i]`` is the index of the state
reached from state ``i``.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .dekking import FiniteWord, morphic_image_pipeline
from .engine import Diverges, Finite, MorphicSystem, limit_status
from .errors import AlphabetMismatch, IterationCap, NoLimit
from .transducer import Transducer, compose, from_morphism
from .words import Coding, Morphism, Symbol, Word, alphabet, compose_morphisms

StateMap = Tuple[int, ...]
ThetaValue = Tuple[StateMap, ...]

# the reachable annotated alphabet can be exponential in n + p
MAX_ANNOTATED = 100_000


def then(f: StateMap, g: StateMap) -> StateMap:
    """``g ∘ f``: apply ``f`` first."""
    return tuple(g[i] for i in f)


def identity_map(size: int) -> StateMap:
    return tuple(range(size))


def tau(M: Transducer, w) -> StateMap:
    index = {q: i for i, q in enumerate(M.states)}
    out = []
    for q in M.states:
        for a in w:
            q = M.step(q, a)[0]
        out.append(index[q])
    return tuple(out)


def _letter_maps(M: Transducer) -> Dict[Symbol, StateMap]:
    return {a: tau(M, (a,)) for a in M.input}


def _along(maps: Mapping[Symbol, StateMap], w, size: int) -> StateMap:
    f = identity_map(size)
    for a in w:
        f = then(f, maps[a])
    return f


def orbit_period(M: Transducer, h: Morphism) -> Tuple[int, int]:
    """Preperiod and period of ``T_i = (τ_{h^i(a)})_a`` (first detected cycle)."""
    return _orbit(M, h)[:2]


def _orbit(M: Transducer, h: Morphism):
    if not h.is_endomorphism or set(h.source) != set(M.input):
        raise AlphabetMismatch("the morphism must act on the transducer's input alphabet")
    size = len(M.states)
    letters = h.source
    current = _letter_maps(M)
    seen = {}
    orbit: List[Dict[Symbol, StateMap]] = []
    while True:
        key = tuple(current[a] for a in letters)
        if key in seen:
            n = seen[key]
            return n, len(orbit) - n, orbit
        seen[key] = len(orbit)
        orbit.append(current)
        current = {a: _along(current, h.rules[a], size) for a in letters}


@dataclass(frozen=True)
class ThetaContext:
    """Shared data for ``Θ`` values of one ``(M, h)`` pair."""

    M: Transducer
    h: Morphism
    n: int
    p: int
    orbit: Tuple[Mapping[Symbol, StateMap], ...] = field(repr=False)

    @classmethod
    def build(cls, M: Transducer, h: Morphism) -> "ThetaContext":
        n, p, orbit = _orbit(M, h)
        return cls(M, h, n, p, tuple(orbit))

    @property
    def length(self) -> int:
        return self.n + self.p

    @property
    def size(self) -> int:
        return len(self.M.states)

    def empty(self) -> ThetaValue:
        return (identity_map(self.size),) * self.length

    def of_letter(self, a: Symbol) -> ThetaValue:
        return tuple(self.orbit[i][a] for i in range(self.length))


def theta(ctx: ThetaContext, w) -> ThetaValue:
    """``Θ(w)``, composing the per-letter entries of the ``τ`` orbit."""
    return tuple(_along(ctx.orbit[i], w, ctx.size) for i in range(ctx.length))


def theta_concat(x: ThetaValue, y: ThetaValue) -> ThetaValue:
    """``Θ(wu)`` from ``Θ(w)`` and ``Θ(u)``."""
    return tuple(then(f, g) for f, g in zip(x, y))


def theta_step(x: ThetaValue, n: int) -> ThetaValue:
    """``Θ(h(w))`` from ``Θ(w)``: shift left, re-using entry ``n`` at the end."""
    return x[1:] + (x[n],)


def annotated_name(base: Symbol, index: int) -> str:
    return f"({base}|{index})"


def base_of(name: str) -> Symbol:
    return name[1:name.rindex("|")]


def drop_annotations(w) -> Word:
    return tuple(base_of(x) for x in w)


@dataclass(frozen=True)
class Annotation:
    """The reachable part of the annotated morphism, with its ``Θ`` legend."""

    ctx: ThetaContext
    hbar: Morphism
    start: Symbol
    letters: Mapping[Symbol, Tuple[Symbol, int]] = field(repr=False)
    thetas: Tuple[ThetaValue, ...] = field(repr=False)

    def legend(self) -> List[str]:
        names = self.ctx.M.states
        lines = [f"Θ entries are (τ_w, τ_h(w), ..., τ_h^{self.ctx.length - 1}(w)); "
                 f"n = {self.ctx.n}, p = {self.ctx.p}"]
        for i, value in enumerate(self.thetas):
            parts = ["[" + " ".join(names[j] for j in f) + "]" for f in value]
            lines.append(f"{i} = (" + ", ".join(parts) + ")")
        return lines


def annotate_morphism(M: Transducer, h: Morphism, x1: Symbol,
                      ctx: Optional[ThetaContext] = None,
                      max_letters: int = MAX_ANNOTATED) -> Annotation:
    status = limit_status(h, (x1,))
    if isinstance(status, Diverges):
        raise NoLimit(status.reason)
    if isinstance(status, Finite):
        raise NoLimit("the fixpoint is finite")
    ctx = ctx or ThetaContext.build(M, h)
    seeds = {a: ctx.of_letter(a) for a in h.source}
    index: Dict[ThetaValue, int] = {}
    thetas: List[ThetaValue] = []

    def name(base, value):
        if value not in index:
            index[value] = len(thetas)
            thetas.append(value)
        return annotated_name(base, index[value])

    start = name(x1, ctx.empty())
    letters = {start: (x1, 0)}
    rules: Dict[Symbol, Word] = {}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        sigma, i = letters[current]
        value = theta_step(thetas[i], ctx.n)
        image = []
        for s in h.rules[sigma]:
            nm = name(s, value)
            if nm not in letters:
                if len(letters) >= max_letters:
                    raise IterationCap(f"more than {max_letters} annotated letters")
                letters[nm] = (s, index[value])
                queue.append(nm)
            image.append(nm)
            value = theta_concat(value, seeds[s])
        rules[current] = tuple(image)
    delta = alphabet(letters)
    hbar = Morphism(delta, delta, rules)
    return Annotation(ctx, hbar, start, dict(letters), tuple(thetas))


def pair_name(sigma: Symbol, state: str) -> str:
    return f"<{sigma}|{state}>"


def state_coding(ann: Annotation) -> Coding:
    """``(σ, Θ(w)) -> (σ, τ_w(q0))`` onto pair letters ``<σ|q>``."""
    M = ann.ctx.M
    q0 = M.states.index(M.start)
    table = {}
    for nm, (sigma, i) in ann.letters.items():
        table[nm] = (pair_name(sigma, M.states[ann.thetas[i][0][q0]]),)
    target = [pair_name(a, q) for a in M.input for q in M.states]
    return Coding(ann.hbar.source, target, table)


def output_morphism(M: Transducer) -> Morphism:
    src = [pair_name(a, q) for a in M.input for q in M.states]
    rules = {pair_name(a, q): M.lam[q, a] for a in M.input for q in M.states}
    return Morphism(src, M.output, rules)


@dataclass(frozen=True)
class TransductSystem:
    annotation: Annotation
    state_coding: Coding
    out_morphism: Morphism
    flat: MorphicSystem
    machine: Transducer

    @property
    def hbar(self) -> Morphism:
        return self.annotation.hbar

    @property
    def start(self) -> Symbol:
        return self.annotation.start


def transduct_system(M: Transducer, system: MorphicSystem,
                     max_letters: int = MAX_ANNOTATED) -> Union[TransductSystem, FiniteWord]:
    """Morphic system generating ``M(c(h^ω(x1)))``, or the finite output."""
    machine = M
    if not system.c.is_identity:
        machine = compose(M, from_morphism(system.c))
    elif set(system.h.source) != set(M.input):
        raise AlphabetMismatch("system alphabet differs from the transducer input")
    ann = annotate_morphism(machine, system.h, system.start, max_letters=max_letters)
    coding = state_coding(ann)
    lam = output_morphism(machine)
    combined = compose_morphisms(lam, coding)
    flat = morphic_image_pipeline(MorphicSystem.pure(ann.hbar, ann.start), combined)
    if isinstance(flat, FiniteWord):
        return flat
    return TransductSystem(ann, coding, lam, flat, machine)
