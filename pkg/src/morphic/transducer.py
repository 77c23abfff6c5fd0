"""Deterministic sequential transducers (Mealy machines with word outputs)."""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Tuple

from .errors import AlphabetMismatch, InsufficientOutput, UnknownSymbol
from .words import Alphabet, Morphism, Symbol, Word, alphabet

SILENT_INPUT_CAP = 10_000


class RunResult(NamedTuple):
    output: Word
    end_state: str


@dataclass(frozen=True, eq=False)
class Transducer:
    input: Alphabet
    output: Alphabet
    states: Tuple[str, ...]
    start: str
    delta: Mapping[Tuple[str, Symbol], str] = field(repr=False)
    lam: Mapping[Tuple[str, Symbol], Word] = field(repr=False)

    def __post_init__(self):
        inp = alphabet(self.input)
        out = alphabet(self.output)
        states = tuple(dict.fromkeys(self.states))
        if not states:
            raise ValueError("a transducer needs at least one state")
        if self.start not in states:
            raise ValueError(f"start state {self.start!r} is not a state")
        delta = dict(self.delta)
        lam = {k: tuple(v) for k, v in self.lam.items()}
        missing = [(q, a) for q in states for a in inp if (q, a) not in delta or (q, a) not in lam]
        if missing:
            listing = ", ".join(f"({q}, {a})" for q, a in missing)
            raise ValueError(f"transition table is not total; missing {listing}")
        sset, oset = set(states), set(out)
        for key, q in delta.items():
            if q not in sset:
                raise ValueError(f"transition {key} leads to unknown state {q!r}")
        for key, w in lam.items():
            for x in w:
                if x not in oset:
                    raise UnknownSymbol(x, f"output of {key}")
        order = [(q, a) for q in states for a in inp]
        object.__setattr__(self, "input", inp)
        object.__setattr__(self, "output", out)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "delta", MappingProxyType({k: delta[k] for k in order}))
        object.__setattr__(self, "lam", MappingProxyType({k: lam[k] for k in order}))

    def __eq__(self, other):
        if not isinstance(other, Transducer):
            return NotImplemented
        return (self.input, self.output, self.states, self.start) == (
            other.input, other.output, other.states, other.start
        ) and dict(self.delta) == dict(other.delta) and dict(self.lam) == dict(other.lam)

    def __hash__(self):
        return hash((self.input, self.states, self.start, tuple(self.delta.items())))

    def step(self, q: str, a: Symbol):
        try:
            return self.delta[q, a], self.lam[q, a]
        except KeyError:
            raise UnknownSymbol(a, "transducer input") from None

    def __call__(self, w: Iterable[Symbol]) -> Word:
        return run(self, self.start, w).output


def run(M: Transducer, q: str, w: Iterable[Symbol]) -> RunResult:
    out = []
    for a in w:
        q, piece = M.step(q, a)
        out.extend(piece)
    return RunResult(tuple(out), q)


def transduce_prefix(M: Transducer, stream: Iterable[Symbol], n: int,
                     cap: int = SILENT_INPUT_CAP) -> Word:
    """First ``n`` output letters of ``M`` on a (possibly infinite) input stream."""
    out = []
    q = M.start
    consumed = silent = 0
    for a in stream:
        if len(out) >= n:
            break
        q, piece = M.step(q, a)
        consumed += 1
        if piece:
            out.extend(piece)
            silent = 0
        else:
            silent += 1
            if silent >= cap:
                raise InsufficientOutput(consumed, len(out))
    if len(out) < n:
        raise InsufficientOutput(consumed, len(out))
    return tuple(out[:n])


def state_pair(qa: str, qb: str) -> str:
    return f"({qa}|{qb})"


def compose(B: Transducer, A: Transducer) -> Transducer:
    """Run ``A`` first, then feed its output to ``B``."""
    if not set(A.output) <= set(B.input):
        raise AlphabetMismatch(
            f"output alphabet {A.output} of the inner transducer is not "
            f"contained in the input alphabet {B.input} of the outer one"
        )
    names = {(qa, qb): state_pair(qa, qb) for qa in A.states for qb in B.states}
    delta, lam = {}, {}
    for (qa, qb), name in names.items():
        for a in A.input:
            qa2, mid = A.step(qa, a)
            res = run(B, qb, mid)
            delta[name, a] = names[qa2, res.end_state]
            lam[name, a] = res.output
    return Transducer(A.input, B.output, tuple(names.values()),
                      names[A.start, B.start], delta, lam)


def from_morphism(h: Morphism, state: str = "q0") -> Transducer:
    return Transducer(
        h.source, h.target, (state,), state,
        {(state, a): state for a in h.source},
        {(state, a): h.rules[a] for a in h.source},
    )


def identity_transducer(symbols) -> Transducer:
    return from_morphism(Morphism.identity(symbols))


def is_non_erasing(M: Transducer) -> bool:
    return all(M.lam.values())


def doubling_transducer(symbols, states=("s", "t")) -> Transducer:
    """Doubles the letters read in the first state, copies the others."""
    s, t = states
    symbols = alphabet(symbols)
    delta, lam = {}, {}
    for a in symbols:
        delta[s, a], lam[s, a] = t, (a, a)
        delta[t, a], lam[t, a] = s, (a,)
    return Transducer(symbols, symbols, (s, t), s, delta, lam)
