"""Evaluation of declared systems and pipelines, and emission of constructed systems."""

from itertools import islice
from typing import Iterator, List, Optional, Union

from .annotate import Annotation, TransductSystem, transduct_system
from .dekking import (
    ErasureSystem,
    FiniteWord,
    ImageSystem,
    erasure_system,
    image_system,
    morphic_image_pipeline,
)
from .engine import MorphicSystem
from .errors import FiniteErasure, ResolutionError
from .specfile import MorphismDecl, SpecFile, SystemDecl, TransducerDecl, emit_spec
from .transducer import Transducer, run
from .words import Coding, Morphism, Word

Constructed = Union[MorphicSystem, FiniteWord]


def construct(spec: SpecFile, name: str) -> Constructed:
    """Morphic system for a declared system or ``mode = construct`` pipeline."""
    if name in spec.systems:
        return spec.system(name)
    decl = spec.pipeline(name)
    source = construct(spec, decl.source)
    if isinstance(source, FiniteWord):
        return FiniteWord(_apply_finite(spec, decl, source.word))
    if decl.operation == "erase":
        gamma = frozenset(decl.argument)
        if source.c.is_identity:
            try:
                return erasure_system(source.h, gamma, source.start).system()
            except FiniteErasure as exc:
                return FiniteWord(exc.word)
        target = source.c.target
        keep = Morphism(target, target, {x: () if x in gamma else (x,) for x in target})
        return morphic_image_pipeline(source, keep)
    if decl.operation == "image":
        h = spec.morphism(decl.argument[0])
        if source.c.is_identity and all(h.rules.values()):
            return image_system(source.h, h, source.start).system()
        return morphic_image_pipeline(source, h)
    M = spec.transducer(decl.argument[0])
    result = transduct_system(M, source)
    return result if isinstance(result, FiniteWord) else result.flat


def _apply_finite(spec, decl, word: Word) -> Word:
    if decl.operation == "erase":
        gamma = set(decl.argument)
        return tuple(x for x in word if x not in gamma)
    if decl.operation == "image":
        return spec.morphism(decl.argument[0])(word)
    return spec.transducer(decl.argument[0])(word)


def direct_stream(spec: SpecFile, name: str) -> Iterator[str]:
    """Letters of a system or pipeline computed without any construction."""
    if name in spec.systems:
        yield from spec.system(name).stream()
        return
    decl = spec.pipeline(name)
    if decl.mode == "construct":
        result = construct(spec, name)
        if isinstance(result, FiniteWord):
            yield from result.word
        else:
            yield from result.stream()
        return
    source = direct_stream(spec, decl.source)
    if decl.operation == "erase":
        gamma = set(decl.argument)
        yield from (x for x in source if x not in gamma)
    elif decl.operation == "image":
        h = spec.morphism(decl.argument[0])
        for x in source:
            yield from h.rules[x]
    else:
        M = spec.transducer(decl.argument[0])
        q = M.start
        for x in source:
            q, out = M.step(q, x)
            yield from out


def prefix(spec: SpecFile, name: str, n: int) -> Word:
    """Up to ``n`` letters; shorter only when the sequence is finite."""
    return tuple(islice(direct_stream(spec, name), n))


class _Builder:
    def __init__(self, base: str):
        self.base = base
        self.spec = SpecFile()

    def alphabet(self, symbols, suffix: str) -> str:
        symbols = tuple(symbols)
        for name, alph in self.spec.alphabets.items():
            if alph == symbols:
                return name
        name = f"{self.base}_{suffix}"
        self.spec.alphabets[name] = symbols
        return name

    def morphism(self, h: Morphism, suffix: str, src: str, tgt: str, comments=()) -> str:
        name = f"{self.base}_{suffix}"
        s = self.alphabet(h.source, src)
        t = self.alphabet(h.target, tgt)
        table = self.spec.codings if isinstance(h, Coding) else self.spec.morphisms
        table[name] = MorphismDecl(s, t, h)
        if comments:
            self.spec.comments[name] = list(comments)
        return name

    def system(self, system: MorphicSystem, prefix: str = "") -> str:
        h = self.morphism(system.h, prefix + "xi" if prefix else "h", "alphabet", "alphabet")
        coding = None
        if not system.c.is_identity:
            coding = self.morphism(system.c, prefix + "rho" if prefix else "c", "alphabet", "output")
        name = self.base + (f"_{prefix.rstrip('_')}" if prefix else "")
        self.spec.systems[name] = SystemDecl(h, coding, system.start)
        return name


def system_spec(obj, name: str) -> SpecFile:
    """SpecFile holding a constructed object under names derived from ``name``."""
    b = _Builder(name)
    if isinstance(obj, MorphicSystem):
        b.system(obj)
    elif isinstance(obj, ErasureSystem):
        b.spec.comments[f"{name}_xi"] = [
            f"erasure of {{{' '.join(sorted(obj.gamma))}}}; respecting power r = {obj.r}; "
            f"dead letters {{{' '.join(sorted(obj.dead))}}}",
        ]
        xi = b.morphism(obj.xi, "xi", "blocks", "blocks", b.spec.comments[f"{name}_xi"])
        rho = b.morphism(obj.rho, "rho", "blocks", "letters")
        b.spec.systems[name] = SystemDecl(xi, rho, obj.start)
    elif isinstance(obj, ImageSystem):
        xi = b.morphism(obj.xi, "xi", "marked", "marked")
        rho = b.morphism(obj.rho, "rho", "marked", "letters")
        b.spec.systems[name] = SystemDecl(xi, rho, obj.start)
    elif isinstance(obj, Annotation):
        hbar = b.morphism(obj.hbar, "hbar", "annotated", "annotated", obj.legend())
        b.spec.systems[f"{name}_annotated"] = SystemDecl(hbar, None, obj.start)
    elif isinstance(obj, TransductSystem):
        hbar = b.morphism(obj.hbar, "hbar", "annotated", "annotated", obj.annotation.legend())
        coding = b.morphism(obj.state_coding, "state", "annotated", "pairs")
        b.morphism(obj.out_morphism, "lambda", "pairs", "output")
        b.spec.systems[f"{name}_annotated"] = SystemDecl(hbar, coding, obj.start)
        b.system(obj.flat, prefix="flat_")
    elif isinstance(obj, Transducer):
        i = b.alphabet(obj.input, "input")
        o = b.alphabet(obj.output, "output")
        b.spec.transducers[name] = TransducerDecl(i, o, obj)
    elif isinstance(obj, FiniteWord):
        b.spec.comments[name] = ["finite: " + (" ".join(obj.word) or "ε")]
    else:
        raise TypeError(f"cannot emit {type(obj).__name__}")
    return b.spec


def emit_system(obj, name: str = "S") -> str:
    spec = system_spec(obj, name)
    text = emit_spec(spec)
    if isinstance(obj, FiniteWord):
        text = "# " + spec.comments[name][0] + "\n"
    return text
