"""Shared fixtures, hypothesis strategies and brute-force oracles for the tests."""

from itertools import product

from hypothesis import strategies as st

from morphic import Morphism, Transducer
from morphic.engine import Infinite, limit_status
from morphic.words import Coding

SYMBOLS = "abcde"

FIB = Morphism.from_strings({"a": "ab", "b": "a"})
THUE_MORSE = Morphism.from_strings({"0": "01", "1": "10"})
TRIB = Morphism.from_strings({"a": "ab", "b": "ac", "c": "a"})


def word(text):
    return tuple(text)


# --- oracles: deliberately naive, sharing no code with the package ----------

def iterate_literal(rules, start, n):
    """First ``n`` letters of the limit, by iterating the rule table on raw
    strings until the first ``n`` letters agree twice in a row."""
    cur = start
    for _ in range(5000):
        nxt = "".join(rules[x] for x in cur)
        if len(cur) >= n and nxt[:n] == cur[:n]:
            return cur[:n]
        cur = nxt
    raise AssertionError("oracle iteration did not settle")


def run_transducer_literal(delta, lam, start, w):
    q, out = start, []
    for a in w:
        out.extend(lam[q, a])
        q = delta[q, a]
    return tuple(out)


def all_words(symbols, max_len):
    for n in range(max_len + 1):
        yield from product(symbols, repeat=n)


# --- strategies ----------------------------------------------------------------

@st.composite
def alphabets(draw, min_size=1, max_size=4):
    k = draw(st.integers(min_size, max_size))
    return tuple(SYMBOLS[:k])


@st.composite
def morphisms(draw, min_size=1, max_size=4, min_len=0, max_len=3, source=None):
    sigma = source or draw(alphabets(min_size, max_size))
    rules = {a: tuple(draw(st.lists(st.sampled_from(sigma), min_size=min_len, max_size=max_len)))
             for a in sigma}
    return Morphism(sigma, sigma, rules)


@st.composite
def prolongable_morphisms(draw, min_size=1, max_size=4, erasing=True):
    """Endomorphisms prolongable on ``a`` whose fixpoint from ``a`` is infinite."""
    sigma = draw(alphabets(min_size, max_size))
    lo = 0 if erasing else 1
    rules = {}
    for x in sigma:
        rules[x] = tuple(draw(st.lists(st.sampled_from(sigma), min_size=lo, max_size=3)))
    tail = draw(st.lists(st.sampled_from(sigma), min_size=1, max_size=3))
    rules["a"] = ("a",) + tuple(tail)
    h = Morphism(sigma, sigma, rules)
    st_ = limit_status(h, "a")
    if not isinstance(st_, Infinite):
        # force growth: make the tail contain a itself
        rules["a"] = ("a", "a") + tuple(tail)
        h = Morphism(sigma, sigma, rules)
    return h


@st.composite
def codings(draw, source, target=("x", "y", "z")):
    table = {a: (draw(st.sampled_from(target)),) for a in source}
    return Coding(source, target, table)


@st.composite
def transducers(draw, input_alphabet=None, output_alphabet=("0", "1"), max_states=3,
                non_erasing=False, max_out=2):
    sigma = input_alphabet or draw(alphabets(1, 3))
    k = draw(st.integers(1, max_states))
    states = tuple(f"q{i}" for i in range(k))
    lo = 1 if non_erasing else 0
    delta, lam = {}, {}
    for q in states:
        for a in sigma:
            delta[q, a] = draw(st.sampled_from(states))
            lam[q, a] = tuple(draw(st.lists(st.sampled_from(output_alphabet),
                                            min_size=lo, max_size=max_out)))
    return Transducer(sigma, output_alphabet, states, states[0], delta, lam)


def prolongable_prefix_literal(rules, start, n, keep=lambda s: s, cap=400_000, rounds=5000):
    """``keep`` applied to the fixpoint of a morphism prolongable on ``start``,
    cut to ``n`` letters.  Iterates are nested prefixes, so truncating each
    one to ``cap`` letters still yields prefixes of the fixpoint.  Returns
    fewer letters when the kept sequence stops growing."""
    cur = start
    best, still = keep(cur), 0
    for _ in range(rounds):
        cur = "".join(rules[x] for x in cur)[:cap]
        kept = keep(cur)
        if len(kept) >= n:
            return kept[:n]
        still = still + 1 if len(kept) == len(best) else 0
        best = kept
        if still > 12:
            break
    return best
