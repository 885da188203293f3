"""Permutations, signs, canonical cycle forms, and monomial builders.

Permutations act on {1..n} and are stored as image tuples.  The canonical
cycle form starts every cycle at its minimum element and orders cycles by
strictly decreasing leading element, so the concatenated word determines the
permutation uniquely.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import NcdetInputError


class Perm:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(v) for v in images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise NcdetInputError(f"not a permutation of 1..{n}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: "Perm") -> "Perm":
        """Left-to-right composition: (self.then(other))(i) = other(self(i))."""
        if other.n != self.n:
            raise NcdetInputError("cannot compose permutations of different sizes")
        return Perm(other.images[v - 1] for v in self.images)

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Perm(inv)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, start=1))

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Perm({list(self.images)!r})"


def all_perms(n: int):
    """All permutations of {1..n} in lexicographic image order."""
    for images in itertools.permutations(range(1, n + 1)):
        yield Perm(images)


def sign(p: Perm) -> int:
    """Parity of the inversion count of the image sequence."""
    images = p.images
    inv = 0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if images[i] > images[j]:
                inv += 1
    return -1 if inv & 1 else 1


def moore_canonical(p: Perm) -> tuple[tuple[int, ...], ...]:
    """Cycles each starting at their minimum, ordered by decreasing leader."""
    seen = set()
    cycles = []
    for start in range(1, p.n + 1):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = p(start)
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = p(nxt)
        cycles.append(tuple(cycle))
    cycles.sort(key=lambda c: -c[0])
    return tuple(cycles)


def moore_word_pairs(p: Perm) -> tuple[tuple[int, int], ...]:
    """Index pairs (i, p(i)) of the canonical cycle word, in word order."""
    pairs = []
    for cycle in moore_canonical(p):
        for idx, v in enumerate(cycle):
            pairs.append((v, cycle[(idx + 1) % len(cycle)]))
    return tuple(pairs)


def moore_sign(p: Perm) -> int:
    """(-1)^(n + c) where c counts left-to-right minima of the canonical word."""
    word = [v for cycle in moore_canonical(p) for v in cycle]
    minima = 0
    current = None
    for v in word:
        if current is None or v < current:
            minima += 1
            current = v
    return -1 if (p.n + minima) & 1 else 1


def interleave(p: Perm) -> Perm:
    """The permutation of {1..2n} sending 2k-1 -> p(k) and 2k -> n + p(k)."""
    n = p.n
    images = [0] * (2 * n)
    for k in range(1, n + 1):
        images[2 * k - 2] = p(k)
        images[2 * k - 1] = n + p(k)
    return Perm(images)


def sgn_rho0(n: int) -> int:
    """Common sign of all interleaved permutations of {1..2n}."""
    return sign(interleave(Perm.identity(n)))


def _check_square(p: Perm, grid) -> None:
    if grid.rows != grid.cols or grid.rows != p.n:
        raise NcdetInputError(
            f"permutation size {p.n} does not match {grid.rows}x{grid.cols} grid"
        )


def row_monomial(p: Perm, grid) -> tuple[int, ...]:
    """Word of the row-ordered permutation monomial x_{1,p(1)} ... x_{n,p(n)}."""
    _check_square(p, grid)
    return tuple(grid.index(k, p(k)) for k in range(1, p.n + 1))


def row_col_monomial(sigma: Perm, tau: Perm, grid) -> tuple[int, ...]:
    """Word of x_{sigma(1),tau(1)} ... x_{sigma(n),tau(n)}."""
    if sigma.n != tau.n:
        raise NcdetInputError("permutation sizes differ")
    _check_square(sigma, grid)
    return tuple(grid.index(sigma(k), tau(k)) for k in range(1, sigma.n + 1))


def moore_monomial(p: Perm, grid) -> tuple[int, ...]:
    """Word of the canonical cycle monomial of p."""
    _check_square(p, grid)
    return tuple(grid.index(i, j) for i, j in moore_word_pairs(p))


def sign_fraction(p: Perm) -> Fraction:
    return Fraction(sign(p))
