"""Incidence matrices, characteristic polynomials and Perron roots."""

import math
from dataclasses import dataclass
from typing import FrozenSet, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from .annotate import base_of
from .engine import MorphicSystem, fixpoint_letters
from .errors import ConvergenceFailure, DomainError, ShapeMismatch
from .words import Alphabet, Morphism, Symbol

DEFAULT_TOL = 1e-9
INTERNAL_TOL = 1e-12
MAX_SQUARINGS = 64


@dataclass(frozen=True)
class IncidenceMatrix:
    """Entry ``(i, j)`` counts occurrences of letter ``i`` in ``h(j)``."""

    index: Alphabet
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.index)
        if len(self.entries) != k or any(len(row) != k for row in self.entries):
            raise ShapeMismatch("incidence matrix must be square and match its index")

    @property
    def size(self) -> int:
        return len(self.index)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float).reshape(self.size, self.size)

    def __getitem__(self, key):
        i, j = key
        return self.entries[self.index.index(i)][self.index.index(j)]

    def column_sums(self):
        return [sum(row[j] for row in self.entries) for j in range(self.size)]

    def __matmul__(self, other: "IncidenceMatrix") -> "IncidenceMatrix":
        if self.index != other.index:
            raise ShapeMismatch("index mismatch")
        k = self.size
        cols = list(zip(*other.entries))
        return IncidenceMatrix(self.index, tuple(
            tuple(sum(a * b for a, b in zip(self.entries[i], cols[j])) for j in range(k))
            for i in range(k)
        ))


def incidence_matrix(h: Morphism) -> IncidenceMatrix:
    index = h.source
    pos = {a: i for i, a in enumerate(index)}
    rows = [[0] * len(index) for _ in index]
    for j, a in enumerate(index):
        for x in h.rules[a]:
            rows[pos[x]][j] += 1
    return IncidenceMatrix(index, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class CharPoly:
    """Monic integer polynomial, coefficients from the leading term down."""

    coefficients: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coefficients:
            acc = acc * x + c
        return acc

    def times_power_of_x(self, k: int) -> "CharPoly":
        return CharPoly(self.coefficients + (0,) * k)

    def __str__(self):
        terms = []
        d = self.degree
        for i, c in enumerate(self.coefficients):
            e = d - i
            if c == 0:
                continue
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if e == 1 else f"x^{e}")
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def char_poly(M: IncidenceMatrix) -> CharPoly:
    """``det(xI - M)`` by the Faddeev–LeVerrier recurrence in exact integers."""
    n = M.size
    A = [list(r) for r in M.entries]
    coeffs = [1]
    # N_k = A N_{k-1} + c_{k-1} I with N_0 = 0; c_k = -tr(A N_k) / k
    N = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[-1]
        N = [[sum(A[i][t] * N[t][j] for t in range(n)) + (c_prev if i == j else 0)
              for j in range(n)] for i in range(n)]
        trace = sum(sum(A[i][t] * N[t][i] for t in range(n)) for i in range(n))
        if trace % k:
            raise ArithmeticError("non-integral Faddeev–LeVerrier step")
        coeffs.append(-trace // k)
    return CharPoly(tuple(coeffs))


def _as_array(M) -> np.ndarray:
    if isinstance(M, IncidenceMatrix):
        return M.array()
    return np.asarray(M, dtype=float)


def _perron(M, tol: float, want_vector: bool = False):
    """Perron root and a non-negative Perron vector of ``M``.

    Squares ``B = M + I`` with normalization; ``B`` has a unique eigenvalue of
    maximal modulus even when ``M`` is periodic.  The growth rate is read off
    as ``sum(B A) / sum(A)`` for the normalized power ``A``.  The estimate can
    be exact long before ``A`` has converged (equal column sums), so a caller
    that needs the vector also waits for ``A @ 1`` to settle.
    """
    A0 = _as_array(M)
    k = A0.shape[0]
    if A0.shape != (k, k):
        raise ShapeMismatch("matrix must be square")
    if (A0 < 0).any():
        raise ValueError("matrix must be non-negative")
    if k == 0:
        return 0.0, np.zeros(0)
    B = A0 + np.eye(k)
    A = B / B.sum()
    prev = (B @ A).sum()
    prev_v = A.sum(axis=1)
    calm = 0
    for _ in range(MAX_SQUARINGS):
        A = A @ A
        A /= A.sum()
        est = (B @ A).sum()
        v = A.sum(axis=1)
        settled = abs(est - prev) < tol / 10
        if want_vector:
            settled = settled and np.abs(v - prev_v).sum() < tol / 10
        # two quiet steps in a row: a single equal pair can be a coincidence
        calm = calm + 1 if settled else 0
        if calm == 2:
            return float(est) - 1.0, v / v.sum()
        prev, prev_v = est, v
    raise ConvergenceFailure(f"no convergence after {MAX_SQUARINGS} squarings")


def dominant_eigenvalue(M, tol: float = DEFAULT_TOL) -> float:
    rho, _ = _perron(M, min(tol, INTERNAL_TOL))
    return max(rho, 0.0)


def perron_vector(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    return _perron(M, min(tol, INTERNAL_TOL), want_vector=True)[1]


def char_poly_residual(M: IncidenceMatrix, x: float) -> float:
    """``|char_poly(M)(x)|`` relative to the coefficient scale."""
    p = char_poly(M)
    scale = sum(abs(c) * max(1.0, abs(x)) ** (p.degree - i)
                for i, c in enumerate(p.coefficients))
    return abs(float(p(x))) / scale


@dataclass(frozen=True)
class SubstitutivityReport:
    alpha: float
    tol: float
    condition_ii_ok: bool
    restricted_alphabet: FrozenSet[Symbol]
    full_alphabet_alpha: float

    @property
    def padded(self) -> bool:
        return abs(self.alpha - self.full_alphabet_alpha) > self.tol


def substitutivity_report(system: MorphicSystem, tol: float = DEFAULT_TOL) -> SubstitutivityReport:
    used = fixpoint_letters(system.h, system.start)
    alpha = dominant_eigenvalue(incidence_matrix(system.h.restrict(used)), tol)
    full = dominant_eigenvalue(incidence_matrix(system.h), tol)
    return SubstitutivityReport(alpha, tol, used == frozenset(system.h.source),
                                frozenset(used), full)


@dataclass(frozen=True)
class Dependent:
    k: int
    l: int


@dataclass(frozen=True)
class IndependentUpTo:
    max_exp: int


def multiplicative_independence(alpha: float, beta: float, max_exp: int = 64,
                                tol: float = 1e-7) -> Union[Dependent, IndependentUpTo]:
    """Bounded search for ``alpha^k = beta^l``; a verdict, not a proof."""
    if alpha <= 1 or beta <= 1:
        raise DomainError("both values must exceed 1")
    la, lb = math.log(alpha), math.log(beta)
    for k in range(1, max_exp + 1):
        for l in range(1, max_exp + 1):
            if abs(k * la - l * lb) < tol:
                return Dependent(k, l)
    return IndependentUpTo(max_exp)


def verify_zero_column_extension(M: IncidenceMatrix, N: IncidenceMatrix,
                                 embedding: Optional[Mapping[Symbol, Symbol]] = None) -> bool:
    """Check that ``N`` extends ``M`` by zero columns and that
    ``char(N) = x^(dim N - dim M) char(M)``."""
    if embedding is None:
        embedding = {a: a for a in M.index}
    images = [embedding[a] for a in M.index]
    if len(set(images)) != len(images) or not set(images) <= set(N.index):
        raise ShapeMismatch("embedding must map the index of M injectively into N")
    if N.size < M.size:
        raise ShapeMismatch("N must be at least as large as M")
    for a in M.index:
        for b in M.index:
            if N[embedding[a], embedding[b]] != M[a, b]:
                return False
    new = set(N.index) - set(images)
    for j in new:
        if any(N[i, j] for i in N.index):
            return False
    return char_poly(N) == char_poly(M).times_power_of_x(N.size - M.size)


def verify_annotation_rowsum(h: Morphism, hbar: Morphism) -> bool:
    """``|h(b)|_{b'} = Σ_{a'} |hbar((b, a))|_{(b', a')}`` for every letter."""
    for letter, image in hbar.rules.items():
        base = base_of(letter)
        if base not in h.source:
            return False
        counts = {}
        for x in image:
            bx = base_of(x)
            counts[bx] = counts.get(bx, 0) + 1
        expected = {}
        for x in h.rules[base]:
            expected[x] = expected.get(x, 0) + 1
        if counts != expected:
            return False
    return True


@dataclass(frozen=True)
class LiftProjectResult:
    rho_h: float
    rho_hbar: float
    residual: float
    ok: bool

    def __bool__(self):
        return self.ok


def eigen_lift_project_check(h: Morphism, hbar: Morphism, tol: float = 1e-7) -> LiftProjectResult:
    """Compare Perron roots of ``h`` and ``hbar`` and project the Perron
    vector of ``hbar`` onto ``h``'s alphabet.

    ``h`` is restricted to the base letters that occur in ``hbar``; that set
    is closed under ``h`` and equals ``h``'s alphabet whenever every letter
    occurs in the fixpoint.
    """
    bases = sorted({base_of(x) for x in hbar.source})
    hr = h.restrict(bases)
    M = incidence_matrix(hr)
    N = incidence_matrix(hbar)
    rho_h = dominant_eigenvalue(M)
    rho_bar, v = _perron(N, INTERNAL_TOL, want_vector=True)
    pos = {b: i for i, b in enumerate(M.index)}
    w = np.zeros(M.size)
    for x, value in zip(N.index, v):
        w[pos[base_of(x)]] += value
    Mw = M.array() @ w
    residual = float(np.linalg.norm(Mw - rho_bar * w) / np.linalg.norm(w))
    ok = abs(rho_h - rho_bar) < tol and residual < tol
    return LiftProjectResult(rho_h, rho_bar, residual, ok)


def is_perron_number(alpha: float, M: IncidenceMatrix, tol: float = 1e-6) -> bool:
    """Whether ``alpha > 1`` is a root of ``char(M)`` whose conjugates (the
    other roots of its irreducible factor) are all smaller in modulus."""
    if alpha <= 1:
        return False
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(char_poly(M).coefficients), x)
    for factor, _ in poly.factor_list()[1]:
        roots = np.roots([float(c) for c in factor.all_coeffs()])
        if any(abs(r - alpha) < tol for r in roots):
            others = [r for r in roots if abs(r - alpha) >= tol]
            return all(abs(r) < alpha - tol for r in others)
    return False
