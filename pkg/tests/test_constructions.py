"""Tests for the filter programs and the Clifford factor system.

Oracles here are direct combinatorial recomputations: checker words are
enumerated from their defining pattern, sign filter values recomputed by
counting left-to-right minima on the raw row sequence, and Clifford products
checked against the multiplication contract.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest

from ncdet_lab.algebra import CliffordElement, CliffordRing
from ncdet_lab.constructions import (
    CliffordSystem,
    build_clifford_grid,
    checker_abp,
    clifford_system,
    cycle_abp_moore,
    sign_abp_moore,
)
from ncdet_lab.determinants import cdet, commutative_perm
from ncdet_lab.errors import NcdetInputError
from ncdet_lab.ncpoly import VarGrid
from ncdet_lab.perm import (
    all_perms,
    interleave,
    moore_canonical,
    moore_monomial,
    row_monomial,
    sgn_rho0,
    sign,
)


def checker_words_oracle(n: int):
    """Words x_{1,j1} x_{2,n+j1} ... x_{2n-1,jn} x_{2n,n+jn} for j in [n]^n."""
    grid = VarGrid(2 * n, 2 * n)
    for js in itertools.product(range(1, n + 1), repeat=n):
        word = []
        for k, j in enumerate(js, start=1):
            word.append(grid.index(2 * k - 1, j))
            word.append(grid.index(2 * k, n + j))
        yield tuple(word)


def minima_count(rows) -> int:
    count = 0
    current = None
    for r in rows:
        if current is None or r < current:
            count += 1
            current = r
    return count


# -- checker program ----------------------------------------------------------


def test_checker_shape():
    for n in (1, 2, 3):
        abp = checker_abp(n)
        assert abp.size == n * n + n + 1
        assert abp.width == n
        assert abp.depth == 2 * n
        assert abp.grid.rows == 2 * n and abp.grid.cols == 2 * n
    with pytest.raises(NcdetInputError):
        checker_abp(0)


def test_checker_expansion_is_exactly_the_pattern():
    for n in (1, 2, 3):
        poly = checker_abp(n).expand()
        want = set(checker_words_oracle(n))
        assert set(poly.terms) == want
        assert all(c == 1 for c in poly.terms.values())
        assert poly.num_terms() == n**n


def test_checker_selects_interleaved_permutation_words():
    for n in (1, 2, 3):
        poly = checker_abp(n).expand()
        grid = VarGrid(2 * n, 2 * n)
        hits = 0
        for p in all_perms(2 * n):
            word = row_monomial(p, grid)
            expected = 1 if any(p == interleave(q) for q in all_perms(n)) else 0
            assert poly.coeff(word) == expected
            hits += expected
        assert hits == math.factorial(n)


# -- sign filter --------------------------------------------------------------


def test_sign_filter_shape():
    for n in (1, 2, 3, 4):
        abp = sign_abp_moore(n)
        assert abp.depth == n
        assert abp.width <= 2 * n
        assert abp.grid.rows == n
    with pytest.raises(NcdetInputError):
        sign_abp_moore(0)


def test_sign_filter_value_on_every_word():
    for n in (1, 2, 3):
        grid = VarGrid(n, n)
        poly = sign_abp_moore(n).expand()
        for word in itertools.product(range(grid.nvars), repeat=n):
            rows = [grid.pair(idx)[0] for idx in word]
            want = Fraction((-1) ** (n + minima_count(rows)))
            assert poly.coeff(word) == want


def test_sign_filter_gives_permutation_sign_on_canonical_words():
    for n in (1, 2, 3, 4):
        grid = VarGrid(n, n)
        poly = sign_abp_moore(n).expand()
        for p in all_perms(n):
            assert poly.coeff(moore_monomial(p, grid)) == sign(p)


def test_sign_filter_fixed_small_cases():
    # n = 1: single word x_{1,1}, one minimum, (-1)^(1+1) = +1
    poly1 = sign_abp_moore(1).expand()
    assert poly1.terms == {(0,): Fraction(1)}
    # n = 2: row sequence (1,1) -> +1? minima=1, (-1)^3 = -1;
    # (1,2) minima=1 -> -1; (2,1) minima=2 -> +1; (2,2) minima=1 -> -1
    grid = VarGrid(2, 2)
    poly2 = sign_abp_moore(2).expand()
    assert poly2.coeff((grid.index(2, 2), grid.index(1, 1))) == 1
    assert poly2.coeff((grid.index(1, 2), grid.index(2, 1))) == -1
    assert poly2.coeff((grid.index(1, 1), grid.index(1, 2))) == -1


# -- cycle filter -------------------------------------------------------------


def test_cycle_filter_shape_and_values():
    for n in (1, 2, 3):
        abp = cycle_abp_moore(n)
        assert abp.width == 1
        assert abp.depth == n
        grid = VarGrid(n, n)
        poly = abp.expand()
        sign_last = Fraction((-1) ** (n + 1))
        for word in itertools.product(range(grid.nvars), repeat=n):
            first_row = grid.pair(word[0])[0]
            want = sign_last if first_row == 1 else Fraction(0)
            assert poly.coeff(word) == want
    with pytest.raises(NcdetInputError):
        cycle_abp_moore(0)


def test_cycle_filter_picks_full_cycles():
    for n in (1, 2, 3, 4):
        grid = VarGrid(n, n)
        poly = cycle_abp_moore(n).expand()
        sign_last = Fraction((-1) ** (n + 1))
        for p in all_perms(n):
            is_cycle = len(moore_canonical(p)) == 1
            want = sign_last if is_cycle else Fraction(0)
            assert poly.coeff(moore_monomial(p, grid)) == want


# -- Clifford factor system ---------------------------------------------------


def check_system_invariants(system: CliffordSystem):
    n, ell = system.n, system.ell
    assert n == 1 << ell and system.m == 5 * ell
    assert len(system.left_factors) == n and len(system.right_factors) == n
    idem = system.idempotent
    zero = CliffordElement.zero(system.m)
    for j in range(n):
        for k in range(n):
            prod = system.left_factors[j] * system.right_factors[k]
            assert prod == (idem if j == k else zero)
    assert idem * idem == idem
    assert idem.norm_sq() == Fraction(1, 1 << ell)
    for value in (*system.left_factors, *system.right_factors, idem):
        assert value.is_even()


def test_clifford_system_small():
    check_system_invariants(clifford_system(1))
    check_system_invariants(clifford_system(2))
    with pytest.raises(NcdetInputError):
        clifford_system(0)


def test_clifford_system_ring():
    system = clifford_system(1)
    assert system.ring == CliffordRing(5)
    # factors of one system sit in the ring of that system
    assert all(v.m == system.m for v in system.left_factors)


def test_clifford_factors_distinct():
    system = clifford_system(2)
    assert len(set(system.left_factors)) == system.n
    assert len(set(system.right_factors)) == system.n


# -- Clifford grid ------------------------------------------------------------


def test_build_clifford_grid_layout():
    system = clifford_system(1)
    n = system.n
    rows = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(3)]]
    grid = build_clifford_grid(rows, system)
    assert grid.n == 2 * n
    ring = system.ring
    for i in range(1, 2 * n + 1):
        for j in range(1, 2 * n + 1):
            value = grid.entry(i, j)
            if i % 2 == 1 and j <= n:
                a = rows[(i - 1) // 2][j - 1]
                assert value == system.left_factors[j - 1] * a
            elif i % 2 == 0 and j > n:
                assert value == system.right_factors[j - n - 1]
            else:
                assert ring.is_zero(value)
    with pytest.raises(NcdetInputError):
        build_clifford_grid([[1]], system)


def test_clifford_grid_determinant_recovers_permanent():
    system = clifford_system(1)
    for rows in (
        [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]],
        [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]],
        [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]],
    ):
        grid = build_clifford_grid(rows, system)
        det = cdet(grid, budget=2 * system.n)
        perm = commutative_perm(rows)
        assert det == system.idempotent * (sgn_rho0(system.n) * perm)
        assert det.norm_sq() * (1 << system.ell) == perm * perm
