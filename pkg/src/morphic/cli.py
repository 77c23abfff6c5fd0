"""Command-line surface.

Exit codes: 0 success, 1 verification mismatch or negative verdict,
2 usage or input error.
"""

import argparse
import sys
from itertools import islice
from pathlib import Path
from typing import List, Optional

import sympy

from .annotate import annotate_morphism, transduct_system
from .dekking import FiniteWord, RESPECT_CAP, erasure_system, image_system, morphic_image_pipeline
from .engine import MorphicSystem
from .errors import FiniteErasure, MorphicError, SpecError
from .periodicity import Found, detect_eventual_period
from .pipelines import construct, direct_stream, emit_system
from .specfile import parse_spec
from .spectral import (
    DEFAULT_TOL,
    Dependent,
    char_poly,
    dominant_eigenvalue,
    incidence_matrix,
    is_perron_number,
    multiplicative_independence,
    substitutivity_report,
)
from .transducer import compose
from .words import Morphism

PER_LINE = 64
OBSTRUCTION_VERDICT = "no common non-erasing transducts except eventually periodic (verdict at bounds)"


class UsageError(Exception):
    pass


def _load(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text)


def _write_symbols(symbols, out) -> int:
    count = 0
    it = iter(symbols)
    while True:
        chunk = list(islice(it, PER_LINE))
        if not chunk:
            return count
        out.write(" ".join(chunk) + "\n")
        count += len(chunk)


def _as_system(spec, name, transducer=None):
    result = construct(spec, name)
    if transducer is not None and not isinstance(result, FiniteWord):
        t = transduct_system(spec.transducer(transducer), result)
        result = t if isinstance(t, FiniteWord) else t.flat
    return result


def _number(text: str) -> float:
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"phi": sympy.GoldenRatio})
        value = float(sympy.N(expr, 30))
    except (sympy.SympifyError, TypeError, ValueError):
        raise UsageError(f"not a number: {text!r}") from None
    return value


def cmd_generate(args, out):
    spec = _load(args.spec)
    _write_symbols(islice(direct_stream(spec, args.system), args.length), out)
    return 0


def cmd_construct(args, out):
    spec = _load(args.spec)
    name = args.name or f"{args.system}_{args.kind}"
    if args.kind == "erase":
        source = construct(spec, args.system)
        gamma = frozenset(args.gamma)
        if isinstance(source, FiniteWord):
            obj = FiniteWord(tuple(x for x in source.word if x not in gamma))
        elif source.c.is_identity:
            try:
                obj = erasure_system(source.h, gamma, source.start, cap=args.cap, prune=args.prune)
            except FiniteErasure as exc:
                obj = FiniteWord(exc.word)
        else:
            target = source.c.target
            keep = Morphism(target, target, {x: () if x in gamma else (x,) for x in target})
            obj = morphic_image_pipeline(source, keep)
    elif args.kind == "image":
        source = construct(spec, args.system)
        h = spec.morphism(args.morphism)
        if isinstance(source, FiniteWord):
            obj = FiniteWord(h(source.word))
        elif source.c.is_identity and all(h.rules.values()):
            obj = image_system(source.h, h, source.start)
        else:
            obj = morphic_image_pipeline(source, h)
    else:
        system = construct(spec, args.system)
        if isinstance(system, FiniteWord):
            raise UsageError("the source sequence is finite")
        M = spec.transducer(args.transducer)
        if args.kind == "annotate":
            if not system.c.is_identity:
                raise UsageError("annotate needs a system without a coding")
            obj = annotate_morphism(M, system.h, system.start)
        else:
            obj = transduct_system(M, system)
    out.write(emit_system(obj, name))
    return 0


def cmd_compose(args, out):
    spec = _load(args.spec)
    machine = compose(spec.transducer(args.outer), spec.transducer(args.inner))
    out.write(emit_system(machine, args.name or f"{args.outer}_{args.inner}"))
    return 0


def _morphism_of(spec, args) -> Morphism:
    if args.morphism:
        return spec.morphism(args.morphism)
    if args.system:
        system = construct(spec, args.system)
        if isinstance(system, FiniteWord):
            raise UsageError("the sequence is finite; it has no generating morphism")
        return system.h
    raise UsageError("give --morphism or --system")


def cmd_spectrum(args, out):
    spec = _load(args.spec)
    M = incidence_matrix(_morphism_of(spec, args))
    out.write(f"char poly: {char_poly(M)}\n")
    out.write(f"dominant eigenvalue: {dominant_eigenvalue(M, args.tol):.12g} (tol {args.tol:g})\n")
    return 0


def cmd_substitutive(args, out):
    spec = _load(args.spec)
    system = construct(spec, args.system)
    if isinstance(system, FiniteWord):
        raise UsageError("the sequence is finite")
    report = substitutivity_report(system, args.tol)
    out.write(f"alpha: {report.alpha:.12g} (tol {args.tol:g})\n")
    out.write(f"letters used: {' '.join(sorted(report.restricted_alphabet))}\n")
    out.write(f"full-alphabet eigenvalue: {report.full_alphabet_alpha:.12g}\n")
    out.write(f"every letter occurs: {'yes' if report.condition_ii_ok else 'no'}\n")
    return 0 if report.condition_ii_ok else 1


def cmd_independence(args, out):
    alpha, beta = _number(args.alpha), _number(args.beta)
    verdict = multiplicative_independence(alpha, beta, args.max_exp, args.tol)
    if isinstance(verdict, Dependent):
        out.write(f"dependent: {args.alpha}^{verdict.k} = {args.beta}^{verdict.l}\n")
        return 1
    out.write(f"independent up to exponent {verdict.max_exp}\n")
    return 0


def cmd_period(args, out):
    spec = _load(args.spec)
    prefix = tuple(islice(direct_stream(spec, args.system), args.length))
    verdict = detect_eventual_period(prefix, args.max_preperiod, args.max_period)
    if isinstance(verdict, Found):
        out.write(f"eventually periodic: preperiod {verdict.preperiod}, period {verdict.period} "
                  f"(checked {verdict.length} letters)\n")
        return 0
    out.write(f"no period found with preperiod <= {verdict.max_preperiod} and period <= "
              f"{verdict.max_period} (checked {verdict.length} letters)\n")
    return 1


def cmd_obstruction(args, out):
    spec = _load(args.spec)
    alphas = []
    for label, name in (("left", args.left), ("right", args.right)):
        system = _as_system(spec, name, args.transducer)
        if isinstance(system, FiniteWord):
            raise UsageError(f"{label} sequence is finite")
        report = substitutivity_report(system, args.tol)
        perron = is_perron_number(report.alpha, incidence_matrix(
            system.h.restrict(report.restricted_alphabet)))
        out.write(f"{label} {name}: alpha = {report.alpha:.12g} (tol {args.tol:g}); "
                  f"Perron number: {'yes' if perron else 'not verified'}\n")
        alphas.append(report.alpha)
    verdict = multiplicative_independence(alphas[0], alphas[1], args.max_exp, 1e-7)
    if isinstance(verdict, Dependent):
        out.write(f"dependent: alpha_left^{verdict.k} = alpha_right^{verdict.l}\n")
        out.write("verdict: no obstruction\n")
        return 1
    out.write(f"independent up to exponent {verdict.max_exp}\n")
    out.write(f"verdict: {OBSTRUCTION_VERDICT}\n")
    return 0


def cmd_compare(args, out):
    spec = _load(args.spec)
    left = direct_stream(spec, args.left)
    right = direct_stream(spec, args.right)
    end = "<end>"
    for i in range(args.length):
        x, y = next(left, end), next(right, end)
        if x == end and y == end:
            out.write(f"equal through {i} (both sequences end)\n")
            return 0
        if x != y:
            out.write(f"mismatch at {i}: {x} vs {y}\n")
            return 1
    out.write(f"equal through {args.length}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="morphic", description="Morphic sequences, their erasures, "
                                "images and transducts.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_spec(sp):
        sp.add_argument("--spec", required=True, help="declaration file")
        return sp

    g = with_spec(sub.add_parser("generate", help="print a prefix"))
    g.add_argument("--system", required=True)
    g.add_argument("--length", type=int, required=True)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("construct", help="build and print a morphic system")
    csub = c.add_subparsers(dest="kind", required=True)
    for kind in ("erase", "image", "annotate", "transduct"):
        sp = with_spec(csub.add_parser(kind))
        sp.add_argument("--system", required=True)
        sp.add_argument("--name")
        if kind == "erase":
            sp.add_argument("--gamma", nargs="+", required=True, help="symbols to erase")
            sp.add_argument("--prune", action="store_true", help="drop unreachable blocks")
            sp.add_argument("--cap", type=int, default=RESPECT_CAP,
                            help="largest power tried when respecting the erased set")
        elif kind == "image":
            sp.add_argument("--morphism", required=True)
        else:
            sp.add_argument("--transducer", required=True)
        sp.set_defaults(func=cmd_construct)

    m = with_spec(sub.add_parser("compose", help="compose two transducers"))
    m.add_argument("--outer", required=True)
    m.add_argument("--inner", required=True, help="runs first")
    m.add_argument("--name")
    m.set_defaults(func=cmd_compose)

    a = sub.add_parser("analyze", help="spectral and periodicity analysis")
    asub = a.add_subparsers(dest="what", required=True)
    sp = with_spec(asub.add_parser("spectrum"))
    sp.add_argument("--morphism")
    sp.add_argument("--system")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.set_defaults(func=cmd_spectrum)

    sp = with_spec(asub.add_parser("substitutive"))
    sp.add_argument("--system", required=True)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.set_defaults(func=cmd_substitutive)

    sp = asub.add_parser("independence")
    sp.add_argument("--alpha", required=True, help="number, 'phi' or an expression like (1+sqrt(5))/2")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--max-exp", type=int, default=64)
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.set_defaults(func=cmd_independence)

    sp = with_spec(asub.add_parser("period"))
    sp.add_argument("--system", required=True)
    sp.add_argument("--length", type=int, default=4096)
    sp.add_argument("--max-preperiod", type=int, default=64)
    sp.add_argument("--max-period", type=int, default=512)
    sp.set_defaults(func=cmd_period)

    sp = with_spec(asub.add_parser("obstruction"))
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--transducer", help="apply this transducer to both sides first")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--max-exp", type=int, default=64)
    sp.set_defaults(func=cmd_obstruction)

    cmp_ = with_spec(sub.add_parser("compare", help="compare two prefixes"))
    cmp_.add_argument("--left", required=True)
    cmp_.add_argument("--right", required=True)
    cmp_.add_argument("--length", type=int, required=True)
    cmp_.set_defaults(func=cmd_compare)
    return p


def run_command(argv: List[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args, out)
    except SpecError as exc:
        err.write(f"error: {exc}\n")
    except (UsageError, MorphicError, ValueError, KeyError) as exc:
        err.write(f"error: {exc}\n")
    return 2


def main(argv: Optional[List[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
