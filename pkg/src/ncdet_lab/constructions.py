"""Gadgets that drive the reductions: filter programs and the Clifford system.

checker_abp(n)     width-n program over a 2n x 2n grid whose expansion has
                   coefficient 1 exactly on the words that read row k at step
                   k, alternating a column from 1..n with a column from
                   n+1..2n; on row-ordered permutation words it selects the
                   interleaved permutations.
sign_abp_moore(n)  width-2n program over an n x n grid computing, on a word
                   with row sequence i_1..i_n, the sign (-1)^(n + c) where c
                   counts left-to-right minima of the row sequence; on
                   canonical cycle words this is the permutation sign.
cycle_abp_moore(n) width-1 program valued (-1)^(n+1) on degree-n words whose
                   first letter reads row 1, else 0; canonical cycle words
                   start with row 1 exactly for full cycles.
clifford_system(l) elements of the rational Clifford algebra on 5l
                   generators: left/right factor families whose matched
                   products give a common idempotent and whose mismatched
                   products vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import CliffordElement, CliffordRing
from .abp import Abp, LinearForm
from .determinants import RingGrid
from .errors import NcdetInputError
from .ncpoly import VarGrid


def checker_abp(n: int) -> Abp:
    """Levels 0..2n: singleton nodes q_i at even levels i, nodes p_{i,1..n}
    at odd levels i.  Edges q_i -> p_{i+1,j} read x_{i+1,j}; edges
    p_{i,j} -> q_{i+1} read x_{i+1,n+j}.  Size n^2 + n + 1, width n."""
    if n < 1:
        raise NcdetInputError("n must be positive")
    grid = VarGrid(2 * n, 2 * n)
    levels = []
    for level in range(2 * n + 1):
        if level % 2 == 0:
            levels.append([f"q{level}"])
        else:
            levels.append([f"p{level}_{j}" for j in range(1, n + 1)])
    edges = []
    for level in range(2 * n):
        if level % 2 == 0:
            for j in range(1, n + 1):
                form = LinearForm.make({grid.index(level + 1, j): 1})
                edges.append((f"q{level}", f"p{level + 1}_{j}", form))
        else:
            for j in range(1, n + 1):
                form = LinearForm.make({grid.index(level + 1, n + j): 1})
                edges.append((f"p{level}_{j}", f"q{level + 1}", form))
    return Abp(grid, levels, edges)


def sign_abp_moore(n: int) -> Abp:
    """States track (running minimum of row indices, parity of the count of
    left-to-right minima); the final transition folds in (-1)^(n + count)."""
    if n < 1:
        raise NcdetInputError("n must be positive")
    grid = VarGrid(n, n)
    sign_n = 1 if n % 2 == 0 else -1  # (-1)^n

    def step(minimum: int, parity: int, row: int) -> tuple[int, int]:
        if row < minimum:
            return row, parity ^ 1
        return minimum, parity

    levels: list[list[str]] = [["s"]]
    # reachable (minimum, parity) states per interior level
    states = {(n + 1, 0)}
    transitions: list[dict] = []
    for t in range(1, n + 1):
        forms: dict[tuple, dict] = {}
        nxt = set()
        for minimum, parity in states:
            src = "s" if t == 1 else f"t{t - 1}_m{minimum}p{parity}"
            for i in range(1, n + 1):
                new_min, new_parity = step(minimum, parity, i)
                if t == n:
                    # (-1)^(n + count) folded into the last edge
                    coeff = sign_n if new_parity == 0 else -sign_n
                    dst = "t"
                else:
                    nxt.add((new_min, new_parity))
                    coeff = 1
                    dst = f"t{t}_m{new_min}p{new_parity}"
                bucket = forms.setdefault((src, dst), {})
                for j in range(1, n + 1):
                    bucket[grid.index(i, j)] = coeff
        transitions.append(forms)
        if t == n:
            levels.append(["t"])
        else:
            states = nxt
            levels.append(sorted(f"t{t}_m{m}p{p}" for m, p in states))
    edges = [
        (src, dst, LinearForm.make(bucket))
        for forms in transitions
        for (src, dst), bucket in sorted(forms.items())
    ]
    return Abp(grid, levels, edges)


def cycle_abp_moore(n: int) -> Abp:
    """Single node per level; first edge reads only row-1 variables, the last
    edge carries (-1)^(n+1) on every variable (both when n = 1)."""
    if n < 1:
        raise NcdetInputError("n must be positive")
    grid = VarGrid(n, n)
    levels = [[f"u{t}"] for t in range(n + 1)]
    edges = []
    last = Fraction(1 if n % 2 == 1 else -1)  # (-1)^(n+1)
    for t in range(1, n + 1):
        bucket = {}
        rows = (1,) if t == 1 else tuple(range(1, n + 1))
        coeff = last if t == n else Fraction(1)
        for i in rows:
            for j in range(1, n + 1):
                bucket[grid.index(i, j)] = coeff
        edges.append((f"u{t - 1}", f"u{t}", LinearForm.make(bucket)))
    return Abp(grid, levels, edges)


@dataclass(frozen=True)
class CliffordSystem:
    """Families in the rational Clifford algebra on m = 5l generators with
    left_factors[j] * right_factors[j] = idempotent for every j and
    left_factors[j] * right_factors[k] = 0 for j != k; all elements are even,
    and norm_sq(idempotent) = 1 / 2^l."""

    n: int
    ell: int
    m: int
    left_factors: tuple
    right_factors: tuple
    idempotent: CliffordElement

    @property
    def ring(self) -> CliffordRing:
        return CliffordRing(self.m)


def clifford_system(ell: int) -> CliffordSystem:
    if ell < 1:
        raise NcdetInputError("ell must be positive")
    m = 5 * ell
    n = 1 << ell
    half = Fraction(1, 2)
    # per position: two generator pentad blades sharing three indices
    left_pair = []
    right_pair = []
    for i in range(ell):
        base = 5 * i
        first = CliffordElement.blade(m, (base + 1, base + 2, base + 3, base + 5))
        second = CliffordElement.blade(m, (base + 2, base + 3, base + 4, base + 5))
        one = CliffordElement.scalar(m, 1)
        bit0 = (one + second) * half
        bit1 = first * ((one - second) * half)
        bit1_dual = first * ((one + second) * half)
        left_pair.append((bit0, bit1))
        right_pair.append((bit0, bit1_dual))
    left = []
    right = []
    for j in range(n):
        bits = [(j >> (ell - 1 - i)) & 1 for i in range(ell)]
        acc_l = left_pair[0][bits[0]]
        acc_r = right_pair[0][bits[0]]
        for i in range(1, ell):
            acc_l = acc_l * left_pair[i][bits[i]]
            acc_r = acc_r * right_pair[i][bits[i]]
        left.append(acc_l)
        right.append(acc_r)
    return CliffordSystem(
        n=n,
        ell=ell,
        m=m,
        left_factors=tuple(left),
        right_factors=tuple(right),
        idempotent=left[0],
    )


def build_clifford_grid(rows, system: CliffordSystem) -> RingGrid:
    """2n x 2n grid over the system's Clifford ring: odd row 2k-1 carries
    A(k, j) * left_factors[j] in columns j <= n, even rows carry
    right_factors[j-n] in columns j > n; all other entries are 0."""
    n = system.n
    if len(rows) != n or any(len(r) != n for r in rows):
        raise NcdetInputError(f"matrix must be {n}x{n} to match the system")
    ring = system.ring
    zero = ring.zero()
    grid_rows = []
    for i in range(1, 2 * n + 1):
        row = []
        for j in range(1, 2 * n + 1):
            if i % 2 == 1 and j <= n:
                a = Fraction(rows[(i - 1) // 2][j - 1])
                row.append(system.left_factors[j - 1] * a if a else zero)
            elif i % 2 == 0 and j > n:
                row.append(system.right_factors[j - n - 1])
            else:
                row.append(zero)
        grid_rows.append(tuple(row))
    return RingGrid(ring, tuple(grid_rows))
