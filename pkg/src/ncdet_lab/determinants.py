"""Determinant and permanent variants over arbitrary (noncommutative) rings.

Conventions, for an n x n grid G over a ring:

  cdet(G)  = sum over permutations s of sgn(s) G(1,s(1)) G(2,s(2)) ... G(n,s(n))
  cperm(G) = the same sum without signs
  mdet(G)  = sum of sgn(s) times the canonical cycle product of s
             (cycles start at their minimum, ordered by decreasing leader)
  mperm(G) = the cycle-ordered sum without signs
  sdet(G)  = (1/n!) sum over pairs (s, t) of sgn(s) sgn(t)
             G(t(1),s(1)) ... G(t(n),s(n))

Row-ordered and cycle-ordered variants agree with the classical determinant
and permanent when the entries commute; sdet needs n! invertible, so it
rejects rings whose characteristic divides n!.

Evaluation dispatches to int64 kernels (see ncdet_lab.kernels) for grids over
matrix rings with prime-field or bounded-integer entries; everything else
runs on a generic ring-level enumeration with zero pruning.  Enumeration is
guarded by a factorial budget (default 8; 6 for sdet; NCDET_BUDGET overrides
both defaults).
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .algebra import FpElement, MatrixRing, PrimeField, RationalField, SquareMatrix
from .errors import BudgetExceededError, CharacteristicError, NcdetInputError
from .ncpoly import NCPolynomial, VarGrid
from .perm import (
    Perm,
    all_perms,
    moore_canonical,
    moore_monomial,
    moore_sign,
    moore_word_pairs,
    row_col_monomial,
    row_monomial,
    sign,
)

DEFAULT_FACTORIAL_BUDGET = 8
DEFAULT_SDET_FACTORIAL_BUDGET = 6
BUDGET_ENV_VAR = "NCDET_BUDGET"

INT64_SAFE_BOUND = 1 << 62
MAX_KERNEL_MODULUS = 1 << 21


def factorial_budget(kind: str = "general") -> int:
    env = os.environ.get(BUDGET_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise NcdetInputError(f"bad {BUDGET_ENV_VAR} value: {env!r}") from exc
    return DEFAULT_SDET_FACTORIAL_BUDGET if kind == "sdet" else DEFAULT_FACTORIAL_BUDGET


def _check_budget(n: int, budget, kind: str) -> None:
    limit = factorial_budget(kind) if budget is None else budget
    if n > limit:
        raise BudgetExceededError(
            f"grid size {n} exceeds factorial budget {limit} for {kind} evaluation"
        )


@dataclass(frozen=True)
class RingGrid:
    """Square array of ring values, 1-indexed via entry(i, j)."""

    ring: object
    entries: tuple

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise NcdetInputError("grid must be a nonempty square")

    @classmethod
    def from_rows(cls, ring, rows) -> "RingGrid":
        return cls(ring, tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int):
        return self.entries[i - 1][j - 1]


@lru_cache(maxsize=32)
def moore_terms(n: int):
    """(sign, canonical cycle word pairs) for every permutation of {1..n}."""
    return tuple((moore_sign(p), moore_word_pairs(p)) for p in all_perms(n))


# ---------------------------------------------------------------------------
# generic ring-level enumeration


def _sum_over_bijections(grid: RingGrid, row_order, signed: bool, allowed_first=None):
    """Sum of +-G(row_order[0], c_0) ... G(row_order[n-1], c_{n-1}) over all
    column bijections, sign = parity of the column sequence; zero entries and
    zero partial products are pruned."""
    entries = grid.entries
    ring = grid.ring
    n = grid.n
    rows = [r - 1 for r in row_order]
    first = range(n) if allowed_first is None else allowed_first
    acc = None

    def rec(k: int, used: int, parity: int, partial):
        nonlocal acc
        row = entries[rows[k]]
        for c in first if k == 0 else range(n):
            bit = 1 << c
            if used & bit:
                continue
            value = row[c]
            if not value:
                continue
            nxt = value if partial is None else partial * value
            if partial is not None and not nxt:
                continue
            par = parity ^ ((used >> (c + 1)).bit_count() & 1)
            if k == n - 1:
                term = -nxt if signed and par else nxt
                acc = term if acc is None else acc + term
            else:
                rec(k + 1, used | bit, par, nxt)

    rec(0, 0, 0, None)
    return ring.zero() if acc is None else acc


def _sum_over_words(grid: RingGrid, terms, signed: bool):
    """Sum of sign * G(i1,j1) ... G(ik,jk) over (sign, pairs) terms."""
    entries = grid.entries
    ring = grid.ring
    acc = None
    for sgn, pairs in terms:
        partial = None
        for i, j in pairs:
            value = entries[i - 1][j - 1]
            if not value:
                partial = None
                break
            partial = value if partial is None else partial * value
            if not partial:
                partial = None
                break
        if partial is None:
            continue
        term = -partial if signed and sgn < 0 else partial
        acc = term if acc is None else acc + term
    return ring.zero() if acc is None else acc


def _bijection_task(payload):
    grid, row_order, signed, cols = payload
    return _sum_over_bijections(grid, row_order, signed, allowed_first=cols)


def _word_task(payload):
    grid, terms, signed = payload
    return _sum_over_words(grid, terms, signed)


def _sdet_task(payload):
    grid, taus, signed = payload
    acc = None
    for tau in taus:
        val = _sum_over_bijections(grid, tau, True)
        if sign(Perm(tau)) < 0:
            val = -val
        acc = val if acc is None else acc + val
    return grid.ring.zero() if acc is None else acc


def _chunks(seq, parts: int):
    seq = list(seq)
    parts = max(1, min(parts, len(seq)))
    step = (len(seq) + parts - 1) // parts
    return [seq[i : i + step] for i in range(0, len(seq), step)]


def _parallel_sum(ring, task, payloads, workers: int):
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(task, payloads))
    acc = None
    for value in results:
        acc = value if acc is None else acc + value
    return ring.zero() if acc is None else acc


def _cayley_generic(grid: RingGrid, signed: bool, workers: int = 1):
    n = grid.n
    if workers > 1 and n > 1:
        order = tuple(range(1, n + 1))
        payloads = [(grid, order, signed, cols) for cols in _chunks(range(n), workers)]
        return _parallel_sum(grid.ring, _bijection_task, payloads, workers)
    return _sum_over_bijections(grid, range(1, n + 1), signed)


def _moore_generic(grid: RingGrid, signed: bool, workers: int = 1):
    terms = moore_terms(grid.n)
    if workers > 1 and len(terms) > 1:
        payloads = [(grid, chunk, signed) for chunk in _chunks(terms, workers)]
        return _parallel_sum(grid.ring, _word_task, payloads, workers)
    return _sum_over_words(grid, terms, signed)


def _sdet_generic(grid: RingGrid, workers: int = 1):
    n = grid.n
    taus = [p.images for p in all_perms(n)]
    if workers > 1 and len(taus) > 1:
        payloads = [(grid, chunk, True) for chunk in _chunks(taus, workers)]
        total = _parallel_sum(grid.ring, _sdet_task, payloads, workers)
    else:
        total = _sdet_task((grid, taus, True))
    return grid.ring.div_by_int(total, math.factorial(n))


# ---------------------------------------------------------------------------
# int64 kernel dispatch


def _int_grid_data(grid: RingGrid, sum_count: int):
    """(entries int64[n,n,S,S], mod) when the grid qualifies for the int64
    kernels, else None.  sum_count bounds how many products are summed."""
    ring = grid.ring
    if not isinstance(ring, MatrixRing):
        return None
    n = grid.n
    size = ring.dim
    inner = ring.inner
    if isinstance(inner, PrimeField):
        if inner.p >= MAX_KERNEL_MODULUS or size >= MAX_KERNEL_MODULUS:
            return None
        arr = np.zeros((n, n, size, size), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                block = grid.entries[i][j]
                for u in range(size):
                    for v in range(size):
                        arr[i, j, u, v] = block.rows[u][v].residue
        return arr, inner.p
    if isinstance(inner, RationalField):
        biggest = 0
        for i in range(n):
            for j in range(n):
                for row in grid.entries[i][j].rows:
                    for value in row:
                        if value.denominator != 1:
                            return None
                        biggest = max(biggest, abs(value.numerator))
        bound = sum_count * size ** (n - 1) * max(biggest, 1) ** n
        if bound >= INT64_SAFE_BOUND:
            return None
        arr = np.zeros((n, n, size, size), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                block = grid.entries[i][j]
                for u in range(size):
                    for v in range(size):
                        arr[i, j, u, v] = block.rows[u][v].numerator
        return arr, 0
    return None


def _matrix_from_int_array(ring: MatrixRing, arr) -> SquareMatrix:
    inner = ring.inner
    if isinstance(inner, PrimeField):
        return SquareMatrix(
            tuple(tuple(FpElement(int(v), inner.p) for v in row) for row in arr)
        )
    return SquareMatrix(tuple(tuple(Fraction(int(v)) for v in row) for row in arr))


@lru_cache(maxsize=32)
def _moore_term_arrays(n: int):
    terms = moore_terms(n)
    words = np.array(
        [[(i - 1, j - 1) for i, j in pairs] for _, pairs in terms], dtype=np.int64
    )
    signs = np.array([sgn for sgn, _ in terms], dtype=np.int64)
    return words, signs


def _kernel_cayley(grid: RingGrid, signed: bool):
    data = _int_grid_data(grid, math.factorial(grid.n))
    if data is None:
        return None
    arr, mod = data
    result = kernels.perm_enum_sum(arr, np.arange(grid.n, dtype=np.int64), mod, signed)
    return _matrix_from_int_array(grid.ring, result)


def _kernel_moore(grid: RingGrid, signed: bool):
    data = _int_grid_data(grid, math.factorial(grid.n))
    if data is None:
        return None
    arr, mod = data
    words, signs = _moore_term_arrays(grid.n)
    coeffs = signs if signed else np.ones_like(signs)
    result = kernels.word_products_sum(arr, words, coeffs, mod)
    return _matrix_from_int_array(grid.ring, result)


def _kernel_sdet(grid: RingGrid):
    n = grid.n
    data = _int_grid_data(grid, math.factorial(n) ** 2)
    if data is None:
        return None
    arr, mod = data
    size = grid.ring.dim
    total = np.zeros((size, size), dtype=np.int64)
    for p in all_perms(n):
        rows = np.array([r - 1 for r in p.images], dtype=np.int64)
        part = kernels.perm_enum_sum(arr, rows, mod, True)
        if sign(p) < 0:
            total -= part
        else:
            total += part
        if mod:
            total %= mod
    fact = math.factorial(n)
    inner = grid.ring.inner
    if mod:
        inv = pow(fact % mod, mod - 2, mod)
        total = (total * inv) % mod
        return _matrix_from_int_array(grid.ring, total)
    return SquareMatrix(
        tuple(tuple(Fraction(int(v), fact) for v in row) for row in total)
    )


# ---------------------------------------------------------------------------
# public evaluators


def cdet(grid: RingGrid, budget=None, workers: int = 1):
    """Row-ordered signed sum over permutations of the grid."""
    _check_budget(grid.n, budget, "general")
    fast = _kernel_cayley(grid, signed=True)
    return fast if fast is not None else _cayley_generic(grid, True, workers)


def cperm(grid: RingGrid, budget=None, workers: int = 1):
    """Row-ordered unsigned sum over permutations of the grid."""
    _check_budget(grid.n, budget, "general")
    fast = _kernel_cayley(grid, signed=False)
    return fast if fast is not None else _cayley_generic(grid, False, workers)


def mdet(grid: RingGrid, budget=None, workers: int = 1):
    """Canonical-cycle-ordered signed sum over permutations."""
    _check_budget(grid.n, budget, "general")
    fast = _kernel_moore(grid, signed=True)
    return fast if fast is not None else _moore_generic(grid, True, workers)


def mperm(grid: RingGrid, budget=None, workers: int = 1):
    """Canonical-cycle-ordered unsigned sum over permutations."""
    _check_budget(grid.n, budget, "general")
    fast = _kernel_moore(grid, signed=False)
    return fast if fast is not None else _moore_generic(grid, False, workers)


def sdet(grid: RingGrid, budget=None, workers: int = 1):
    """Fully symmetrized determinant: averages all row orders; needs n!
    invertible in the ring."""
    n = grid.n
    _check_budget(n, budget, "sdet")
    q = grid.ring.characteristic()
    if q and q <= n:
        raise CharacteristicError(f"characteristic {q} divides {n}!")
    fast = _kernel_sdet(grid)
    return fast if fast is not None else _sdet_generic(grid, workers)


VARIANTS = {
    "cayley": cdet,
    "cperm": cperm,
    "moore": mdet,
    "mperm": mperm,
    "sym": sdet,
}


# ---------------------------------------------------------------------------
# defining expansions (polynomials over Q)


def _poly_grid(n: int, letter: str = "x") -> VarGrid:
    return VarGrid(n, n, letter)


def cdet_poly(n: int, letter: str = "x") -> NCPolynomial:
    grid = _poly_grid(n, letter)
    ring = RationalField()
    return NCPolynomial(
        ring, {row_monomial(p, grid): Fraction(sign(p)) for p in all_perms(n)}
    )


def cperm_poly(n: int, letter: str = "x") -> NCPolynomial:
    grid = _poly_grid(n, letter)
    ring = RationalField()
    return NCPolynomial(ring, {row_monomial(p, grid): Fraction(1) for p in all_perms(n)})


def mdet_poly(n: int, letter: str = "x") -> NCPolynomial:
    grid = _poly_grid(n, letter)
    ring = RationalField()
    return NCPolynomial(
        ring, {moore_monomial(p, grid): Fraction(moore_sign(p)) for p in all_perms(n)}
    )


def mperm_poly(n: int, letter: str = "x") -> NCPolynomial:
    grid = _poly_grid(n, letter)
    ring = RationalField()
    return NCPolynomial(ring, {moore_monomial(p, grid): Fraction(1) for p in all_perms(n)})


def sdet_poly(n: int, letter: str = "x") -> NCPolynomial:
    grid = _poly_grid(n, letter)
    ring = RationalField()
    fact = math.factorial(n)
    terms: dict = {}
    for sigma in all_perms(n):
        s_sigma = sign(sigma)
        for tau in all_perms(n):
            word = row_col_monomial(tau, sigma, grid)
            terms[word] = Fraction(s_sigma * sign(tau), fact)
    return NCPolynomial(ring, terms)


def sdet_word_coeff(word, grid: VarGrid) -> Fraction:
    """Coefficient of a word in the symmetrized determinant of grid size n.

    The word x_{t(1),s(1)} ... x_{t(n),s(n)} determines (s, t) uniquely, so
    the coefficient is sgn(s) sgn(t)/n! when rows and columns are both
    bijections and 0 otherwise.
    """
    n = grid.rows
    if len(word) != n:
        return Fraction(0)
    pairs = [grid.pair(idx) for idx in word]
    rows = [i for i, _ in pairs]
    cols = [j for _, j in pairs]
    if sorted(rows) != list(range(1, n + 1)) or sorted(cols) != list(range(1, n + 1)):
        return Fraction(0)
    return Fraction(sign(Perm(rows)) * sign(Perm(cols)), math.factorial(n))


def poly_variant(variant: str, n: int, letter: str = "x") -> NCPolynomial:
    builders = {
        "cayley": cdet_poly,
        "cperm": cperm_poly,
        "moore": mdet_poly,
        "mperm": mperm_poly,
        "sym": sdet_poly,
    }
    if variant not in builders:
        raise NcdetInputError(f"unknown variant: {variant!r}")
    return builders[variant](n, letter)


# ---------------------------------------------------------------------------
# commutative oracles (minor expansion, independent of the enumeration above)


def _minor(rows, drop_col: int):
    return [row[:drop_col] + row[drop_col + 1 :] for row in rows[1:]]


def commutative_det(rows):
    """Laplace expansion along the first row; entries must commute."""
    rows = [list(r) for r in rows]
    if len(rows) == 1:
        return rows[0][0]
    acc = None
    for j, value in enumerate(rows[0]):
        term = value * commutative_det(_minor(rows, j))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def commutative_perm(rows):
    """Permanent by expansion along the first row; entries must commute."""
    rows = [list(r) for r in rows]
    if len(rows) == 1:
        return rows[0][0]
    acc = None
    for j, value in enumerate(rows[0]):
        term = value * commutative_perm(_minor(rows, j))
        acc = term if acc is None else acc + term
    return acc


# ---------------------------------------------------------------------------
# directed Hamiltonian cycles


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise NcdetInputError("digraph needs at least one vertex")
        for arc in self.arcs:
            i, j = arc
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise NcdetInputError(f"arc out of range: {arc}")

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "Digraph":
        return cls(n, frozenset((int(i), int(j)) for i, j in arcs))

    def has_arc(self, i: int, j: int) -> bool:
        return (i, j) in self.arcs


def hc_poly(n: int, letter: str = "x") -> NCPolynomial:
    """Sum of the canonical cycle words of all n-cycles (Hamiltonian cycle
    polynomial); evaluating at a 0/1 adjacency grid counts directed
    Hamiltonian cycles."""
    grid = _poly_grid(n, letter)
    ring = RationalField()
    terms = {}
    for p in all_perms(n):
        if len(moore_canonical(p)) == 1:
            terms[moore_monomial(p, grid)] = Fraction(1)
    return NCPolynomial(ring, terms)


def ham_count(g: Digraph) -> int:
    """Directed Hamiltonian cycle count by DFS from vertex 1."""
    n = g.n
    if n == 1:
        return 1 if g.has_arc(1, 1) else 0
    count = 0
    visited = [False] * (n + 1)
    visited[1] = True

    def walk(vertex: int, depth: int):
        nonlocal count
        if depth == n:
            if g.has_arc(vertex, 1):
                count += 1
            return
        for nxt in range(2, n + 1):
            if not visited[nxt] and g.has_arc(vertex, nxt):
                visited[nxt] = True
                walk(nxt, depth + 1)
                visited[nxt] = False

    walk(1, 1)
    return count


def all_digraphs(n: int):
    """Every simple digraph on n labeled vertices (no self-loops)."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    for bits in range(1 << len(pairs)):
        arcs = [pairs[k] for k in range(len(pairs)) if bits >> k & 1]
        yield Digraph.from_arcs(n, arcs)
