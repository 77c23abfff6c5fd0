"""Plain-text declarations of alphabets, morphisms, transducers and systems.

Grammar (whitespace-insensitive, ``#`` starts a comment)::

    alphabet NAME = sym sym ... ;
    morphism NAME : ALPH -> ALPH { sym -> sym sym ... ; sym -> ; ... }
    coding NAME : ALPH -> ALPH { sym -> sym ; ... }
    transducer NAME { input = ALPH ; output = ALPH ; states = q q ... ;
                      start = q ; q sym -> q / sym sym ... ; ... }
    system NAME { morphism = M ; coding = C ; start = sym }
    pipeline NAME { source = S ; erase = sym ... ; mode = construct }

A pipeline applies one operation to a system: ``erase = syms``,
``image = MORPHISM`` or ``transduce = TRANSDUCER``.  ``mode = construct``
builds a morphic system for the result; ``mode = direct`` computes it by
brute force from the source prefix.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .engine import MorphicSystem
from .errors import ResolutionError, SpecError
from .transducer import Transducer
from .words import Alphabet, Coding, Morphism, alphabet

_TOKEN = re.compile(r"->|[;{}=:/]|(?:(?!->)[^\s;{}=:/#])+")
PUNCT = {"->", ";", "{", "}", "=", ":", "/"}
OPERATIONS = ("erase", "image", "transduce")
MODES = ("construct", "direct")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(line, pos)
            if not m:
                raise SpecError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            out.append(Token(m.group(), lineno, pos + 1))
            pos = m.end()
    return out


@dataclass(frozen=True)
class MorphismDecl:
    source: str
    target: str
    morphism: Morphism


@dataclass(frozen=True)
class TransducerDecl:
    input: str
    output: str
    transducer: Transducer


@dataclass(frozen=True)
class SystemDecl:
    morphism: str
    coding: Optional[str]
    start: str


@dataclass(frozen=True)
class PipelineDecl:
    source: str
    operation: str
    argument: Tuple[str, ...]
    mode: str = "construct"


@dataclass
class SpecFile:
    alphabets: Dict[str, Alphabet] = field(default_factory=dict)
    morphisms: Dict[str, MorphismDecl] = field(default_factory=dict)
    codings: Dict[str, MorphismDecl] = field(default_factory=dict)
    transducers: Dict[str, TransducerDecl] = field(default_factory=dict)
    systems: Dict[str, SystemDecl] = field(default_factory=dict)
    pipelines: Dict[str, PipelineDecl] = field(default_factory=dict)
    comments: Dict[str, List[str]] = field(default_factory=dict, compare=False)

    def __eq__(self, other):
        if not isinstance(other, SpecFile):
            return NotImplemented
        keys = ("alphabets", "morphisms", "codings", "transducers", "systems", "pipelines")
        return all(getattr(self, k) == getattr(other, k) for k in keys)

    def _lookup(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise ResolutionError(f"no {kind[:-1]} named {name!r}")
        return table[name]

    def morphism(self, name: str) -> Morphism:
        if name in self.codings:
            return self.codings[name].morphism
        return self._lookup("morphisms", name).morphism

    def coding(self, name: str) -> Coding:
        return self._lookup("codings", name).morphism

    def transducer(self, name: str) -> Transducer:
        return self._lookup("transducers", name).transducer

    def system(self, name: str) -> MorphicSystem:
        decl = self._lookup("systems", name)
        h = self.morphism(decl.morphism)
        c = self.coding(decl.coding) if decl.coding else Coding.identity(h.source)
        return MorphicSystem(h, c, decl.start)

    def pipeline(self, name: str) -> PipelineDecl:
        return self._lookup("pipelines", name)

    def names(self):
        for kind in ("alphabets", "morphisms", "codings", "transducers", "systems", "pipelines"):
            yield from getattr(self, kind)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.spec = SpecFile()

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def fail(self, message, *expected):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", 1, 0)
            raise SpecError(message + " at end of input", last.line,
                            last.column + len(last.text), expected)
        raise SpecError(f"{message}, found {tok.text!r}", tok.line, tok.column, expected)

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            self.fail("syntax error", repr(text))
        self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.pos += 1
            return True
        return False

    def name(self, what="name") -> Token:
        tok = self.peek()
        if tok is None or tok.text in PUNCT:
            self.fail("syntax error", what)
        self.pos += 1
        return tok

    def names_until(self, *stops: str) -> List[str]:
        out = []
        while self.peek() is not None and self.peek().text not in stops:
            tok = self.peek()
            if tok.text in PUNCT:
                self.fail("syntax error", "symbol", *(repr(s) for s in stops))
            out.append(tok.text)
            self.pos += 1
        return out

    def end_item(self):
        """``;`` closes an item; it may be left out before ``}``."""
        if not self.accept(";") and (self.peek() is None or self.peek().text != "}"):
            self.fail("syntax error", "';'", "'}'")

    def declare(self, kind: str, tok: Token, value):
        table = getattr(self.spec, kind)
        if tok.text in table:
            raise SpecError(f"duplicate {kind[:-1]} {tok.text!r}", tok.line, tok.column)
        table[tok.text] = value

    def alphabet_ref(self) -> Tuple[str, Alphabet]:
        tok = self.name("alphabet name")
        if tok.text not in self.spec.alphabets:
            raise ResolutionError(f"no alphabet named {tok.text!r}", tok.line, tok.column)
        return tok.text, self.spec.alphabets[tok.text]

    def parse(self) -> SpecFile:
        handlers = {
            "alphabet": self.parse_alphabet,
            "morphism": self.parse_morphism,
            "coding": self.parse_coding,
            "transducer": self.parse_transducer,
            "system": self.parse_system,
            "pipeline": self.parse_pipeline,
        }
        while self.peek() is not None:
            tok = self.peek()
            if tok.text not in handlers:
                self.fail("expected a declaration", *handlers)
            self.pos += 1
            handlers[tok.text]()
        self.resolve()
        return self.spec

    def parse_alphabet(self):
        name = self.name()
        self.expect("=")
        start = self.peek()
        syms = self.names_until(";")
        self.expect(";")
        try:
            value = alphabet(syms)
        except ValueError as exc:
            raise SpecError(str(exc), start.line if start else None,
                            start.column if start else None) from None
        self.declare("alphabets", name, value)

    def _rules(self):
        self.expect("{")
        rules = {}
        while not self.accept("}"):
            lhs = self.name("symbol")
            self.expect("->")
            rhs = self.names_until(";", "}")
            self.end_item()
            if lhs.text in rules:
                raise SpecError(f"duplicate rule for {lhs.text!r}", lhs.line, lhs.column)
            rules[lhs.text] = tuple(rhs)
        return rules

    def _morphism_like(self, kind, cls):
        name = self.name()
        self.expect(":")
        src_name, src = self.alphabet_ref()
        self.expect("->")
        tgt_name, tgt = self.alphabet_ref()
        head = self.peek()
        rules = self._rules()
        try:
            value = cls(src, tgt, rules)
        except (ValueError, KeyError) as exc:
            raise SpecError(f"in {kind} {name.text!r}: {exc}", head.line, head.column) from None
        self.declare(kind + "s", name, MorphismDecl(src_name, tgt_name, value))

    def parse_morphism(self):
        self._morphism_like("morphism", Morphism)

    def parse_coding(self):
        self._morphism_like("coding", Coding)

    def parse_transducer(self):
        name = self.name()
        head = self.expect("{")
        fields = {}
        delta, lam = {}, {}
        while not self.accept("}"):
            tok = self.name("field or transition")
            if self.accept("="):
                if tok.text in ("input", "output"):
                    fields[tok.text] = self.alphabet_ref()
                elif tok.text == "states":
                    fields["states"] = self.names_until(";", "}")
                elif tok.text == "start":
                    fields["start"] = self.name("state").text
                else:
                    raise SpecError(f"unknown transducer field {tok.text!r}", tok.line,
                                    tok.column, ("input", "output", "states", "start"))
                self.end_item()
                continue
            sym = self.name("input symbol").text
            self.expect("->")
            target = self.name("state").text
            self.expect("/")
            out = self.names_until(";", "}")
            self.end_item()
            delta[tok.text, sym] = target
            lam[tok.text, sym] = tuple(out)
        missing = [f for f in ("input", "output", "states", "start") if f not in fields]
        if missing:
            raise SpecError(f"transducer {name.text!r} lacks {', '.join(missing)}",
                            head.line, head.column)
        try:
            value = Transducer(fields["input"][1], fields["output"][1], tuple(fields["states"]),
                               fields["start"], delta, lam)
        except (ValueError, KeyError) as exc:
            raise SpecError(f"in transducer {name.text!r}: {exc}", head.line, head.column) from None
        self.declare("transducers", name,
                     TransducerDecl(fields["input"][0], fields["output"][0], value))

    def _fields(self, allowed):
        head = self.expect("{")
        fields = {}
        while not self.accept("}"):
            key = self.name("field")
            if key.text not in allowed:
                raise SpecError(f"unknown field {key.text!r}", key.line, key.column, allowed)
            self.expect("=")
            values = self.names_until(";", "}")
            self.end_item()
            if key.text in fields:
                raise SpecError(f"duplicate field {key.text!r}", key.line, key.column)
            fields[key.text] = (key, values)
        return head, fields

    def parse_system(self):
        name = self.name()
        head, fields = self._fields(("morphism", "coding", "start"))
        for f in ("morphism", "start"):
            if f not in fields or len(fields[f][1]) != 1:
                raise SpecError(f"system {name.text!r} needs exactly one {f}", head.line, head.column)
        coding = fields.get("coding")
        decl = SystemDecl(fields["morphism"][1][0], coding[1][0] if coding else None,
                          fields["start"][1][0])
        self.declare("systems", name, decl)

    def parse_pipeline(self):
        name = self.name()
        head, fields = self._fields(("source", "mode") + OPERATIONS)
        ops = [op for op in OPERATIONS if op in fields]
        if "source" not in fields or len(ops) != 1:
            raise SpecError(f"pipeline {name.text!r} needs a source and exactly one of "
                            f"{', '.join(OPERATIONS)}", head.line, head.column)
        mode = fields.get("mode", (None, ["construct"]))[1]
        if len(mode) != 1 or mode[0] not in MODES:
            raise SpecError(f"pipeline mode must be one of {', '.join(MODES)}",
                            head.line, head.column)
        decl = PipelineDecl(fields["source"][1][0], ops[0], tuple(fields[ops[0]][1]), mode[0])
        self.declare("pipelines", name, decl)

    def resolve(self):
        spec = self.spec
        for name, decl in spec.systems.items():
            try:
                spec.system(name)
            except ResolutionError as exc:
                raise ResolutionError(f"in system {name!r}: {exc}") from None
            except ValueError as exc:
                raise SpecError(f"in system {name!r}: {exc}") from None
        for name, decl in spec.pipelines.items():
            if decl.source not in spec.systems and decl.source not in spec.pipelines:
                raise ResolutionError(f"in pipeline {name!r}: no system named {decl.source!r}")
            if decl.operation == "image":
                spec.morphism(decl.argument[0])
            elif decl.operation == "transduce":
                spec.transducer(decl.argument[0])


def parse_spec(text: str) -> SpecFile:
    return _Parser(text).parse()


def _wrap(items, indent="  ", width=78):
    line = indent
    lines = []
    for item in items:
        if len(line) + len(item) + 1 > width and line.strip():
            lines.append(line.rstrip())
            line = indent
        line += item + " "
    if line.strip():
        lines.append(line.rstrip())
    return lines


def emit_spec(spec: SpecFile) -> str:
    out: List[str] = []

    def comments(name):
        for c in spec.comments.get(name, ()):
            out.append(f"# {c}")

    for name, alph in spec.alphabets.items():
        comments(name)
        out.append(f"alphabet {name} = {' '.join(alph)} ;")
    for kind, table in (("morphism", spec.morphisms), ("coding", spec.codings)):
        for name, decl in table.items():
            comments(name)
            out.append(f"{kind} {name} : {decl.source} -> {decl.target} {{")
            for a, w in decl.morphism.rules.items():
                rhs = (" " + " ".join(w)) if w else ""
                out.append(f"  {a} ->{rhs} ;")
            out.append("}")
    for name, decl in spec.transducers.items():
        M = decl.transducer
        comments(name)
        out.append(f"transducer {name} {{")
        out.append(f"  input = {decl.input} ;")
        out.append(f"  output = {decl.output} ;")
        out.append(f"  states = {' '.join(M.states)} ;")
        out.append(f"  start = {M.start} ;")
        for (q, a), q2 in M.delta.items():
            w = M.lam[q, a]
            rhs = (" " + " ".join(w)) if w else ""
            out.append(f"  {q} {a} -> {q2} /{rhs} ;")
        out.append("}")
    for name, decl in spec.systems.items():
        comments(name)
        coding = f" coding = {decl.coding} ;" if decl.coding else ""
        out.append(f"system {name} {{ morphism = {decl.morphism} ;{coding} start = {decl.start} }}")
    for name, decl in spec.pipelines.items():
        comments(name)
        out.append(f"pipeline {name} {{ source = {decl.source} ; "
                   f"{decl.operation} = {' '.join(decl.argument)} ; mode = {decl.mode} }}")
    return "\n".join(out) + "\n"
