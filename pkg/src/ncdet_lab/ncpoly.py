"""Noncommutative polynomials with exact coefficients.

A polynomial is a dict mapping words (tuples of variable indices, 0-based)
to nonzero coefficients in some ring; the empty word is the unit monomial.
Variables usually come from a VarGrid, which lays out an r x c grid of
variables letter_{i,j} with index(i, j) = (i-1)*c + (j-1).

    >>> g = VarGrid(2, 2)
    >>> f = NCPolynomial.monomial(RationalField(), (g.index(1, 1), g.index(2, 2)))
    >>> f.render(g)
    'x_{1,1} x_{2,2}'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import RationalField, rational_to_str
from .errors import NcdetInputError, RingMismatchError

Monomial = tuple

UNIT: Monomial = ()


@dataclass(frozen=True)
class VarGrid:
    rows: int
    cols: int
    letter: str = "x"

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise NcdetInputError("grid dimensions must be positive")

    @property
    def nvars(self) -> int:
        return self.rows * self.cols

    def index(self, i: int, j: int) -> int:
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise NcdetInputError(f"variable ({i},{j}) outside {self.rows}x{self.cols} grid")
        return (i - 1) * self.cols + (j - 1)

    def pair(self, idx: int) -> tuple[int, int]:
        if not 0 <= idx < self.nvars:
            raise NcdetInputError(f"variable index out of range: {idx}")
        return idx // self.cols + 1, idx % self.cols + 1

    def name(self, idx: int) -> str:
        i, j = self.pair(idx)
        return f"{self.letter}_{{{i},{j}}}"

    def parse_name(self, text: str) -> int:
        """Inverse of name(): 'x_{2,3}' -> index."""
        text = text.strip()
        prefix = f"{self.letter}_{{"
        if not (text.startswith(prefix) and text.endswith("}")):
            raise NcdetInputError(f"not a variable of this grid: {text!r}")
        try:
            i, j = (int(part) for part in text[len(prefix):-1].split(","))
        except ValueError as exc:
            raise NcdetInputError(f"not a variable of this grid: {text!r}") from exc
        return self.index(i, j)


class NCPolynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms: dict):
        self.ring = ring
        self.terms = {w: c for w, c in terms.items() if not ring.is_zero(c)}

    @classmethod
    def zero(cls, ring) -> "NCPolynomial":
        return cls(ring, {})

    @classmethod
    def one(cls, ring) -> "NCPolynomial":
        return cls(ring, {UNIT: ring.one()})

    @classmethod
    def monomial(cls, ring, word, coeff=None) -> "NCPolynomial":
        return cls(ring, {tuple(word): ring.one() if coeff is None else coeff})

    def coeff(self, word):
        return self.terms.get(tuple(word), self.ring.zero())

    def _check(self, other) -> "NCPolynomial":
        if not isinstance(other, NCPolynomial):
            raise RingMismatchError(f"cannot combine polynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError("polynomials over different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            acc = terms.get(w)
            acc = c if acc is None else acc + c
            if self.ring.is_zero(acc):
                terms.pop(w, None)
            else:
                terms[w] = acc
        return NCPolynomial(self.ring, terms)

    def __neg__(self):
        return NCPolynomial(self.ring, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        out: dict = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                c = ca * cb
                acc = out.get(w)
                acc = c if acc is None else acc + c
                if self.ring.is_zero(acc):
                    out.pop(w, None)
                else:
                    out[w] = acc
        return NCPolynomial(self.ring, out)

    def scale(self, coeff) -> "NCPolynomial":
        return NCPolynomial(self.ring, {w: coeff * c for w, c in self.terms.items()})

    def hadamard(self, other) -> "NCPolynomial":
        """Coefficient-wise product: same-word coefficients multiplied."""
        other = self._check(other)
        small, big = (self.terms, other.terms)
        if len(big) < len(small):
            small, big = big, small
        out = {}
        for w, c in small.items():
            d = big.get(w)
            if d is not None:
                prod = c * d if small is self.terms else big[w] * c
                if not self.ring.is_zero(prod):
                    out[w] = prod
        return NCPolynomial(self.ring, out)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degrees = {len(w) for w in self.terms}
        return len(degrees) <= 1

    def num_terms(self) -> int:
        return len(self.terms)

    def substitute_scalars(self, assignment, ring):
        """Evaluate at assignment (var index -> ring value), left-to-right.

        Coefficients are carried across via ring.from_rational when this
        polynomial lives over the rationals; otherwise rings must match.
        """
        if isinstance(self.ring, RationalField):
            def convert(c):
                return ring.from_rational(c)
        elif self.ring == ring:
            def convert(c):
                return c
        else:
            raise RingMismatchError("cannot evaluate coefficients in target ring")
        total = None
        for w, c in sorted(self.terms.items(), key=lambda item: (len(item[0]), item[0])):
            term = convert(c)
            for idx in w:
                if idx not in assignment:
                    raise NcdetInputError(f"no value assigned to variable {idx}")
                term = term * assignment[idx]
            total = term if total is None else total + term
        return ring.zero() if total is None else total

    def substitute_interleaved(self, grid: VarGrid, target: VarGrid) -> "NCPolynomial":
        """Map x_{i,j} -> y_{(i+1)/2, j} for odd i with j <= n; to 1 otherwise.

        grid must be 2n x 2n and target n x n; words collapse in place, so
        distinct input words may merge.
        """
        n = target.rows
        if target.cols != n or grid.rows != 2 * n or grid.cols != 2 * n:
            raise NcdetInputError("grids must be 2n x 2n and n x n")
        out: dict = {}
        for w, c in self.terms.items():
            mapped = []
            for idx in w:
                i, j = grid.pair(idx)
                if i % 2 == 1 and j <= n:
                    mapped.append(target.index((i + 1) // 2, j))
            word = tuple(mapped)
            acc = out.get(word)
            acc = c if acc is None else acc + c
            if self.ring.is_zero(acc):
                out.pop(word, None)
            else:
                out[word] = acc
        return NCPolynomial(self.ring, out)

    def render(self, grid: VarGrid) -> str:
        """Canonical text: terms sorted by (length, word), rational signs folded."""
        if not self.terms:
            return "0"
        pieces = []
        rational = isinstance(self.ring, RationalField)
        for w in sorted(self.terms, key=lambda word: (len(word), word)):
            c = self.terms[w]
            vars_part = " ".join(grid.name(idx) for idx in w)
            if rational:
                negative = c < 0
                mag = -c if negative else c
                if w and mag == 1:
                    body = vars_part
                else:
                    mag_str = rational_to_str(Fraction(mag))
                    body = f"{mag_str} {vars_part}" if w else mag_str
                pieces.append(("-" if negative else "+", body))
            else:
                coeff_str = self.ring.render(c)
                if w and c == self.ring.one():
                    body = vars_part
                else:
                    body = f"{coeff_str} {vars_part}" if w else coeff_str
                pieces.append(("+", body))
        sign0, body0 = pieces[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sgn, body in pieces[1:]:
            text += f" {sgn} {body}"
        return text

    def __eq__(self, other):
        return (
            isinstance(other, NCPolynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"NCPolynomial({self.ring!r}, {self.terms!r})"


@dataclass(frozen=True)
class NCPolyRing:
    """Ring descriptor for polynomials, usable as a matrix entry ring."""

    base: object

    def zero(self):
        return NCPolynomial.zero(self.base)

    def one(self):
        return NCPolynomial.one(self.base)

    def from_int(self, k: int):
        return NCPolynomial(self.base, {UNIT: self.base.from_int(k)})

    def from_rational(self, q: Fraction):
        return NCPolynomial(self.base, {UNIT: self.base.from_rational(q)})

    def characteristic(self) -> int:
        return self.base.characteristic()

    def is_zero(self, v) -> bool:
        return not v

    def div_by_int(self, v, k: int):
        return NCPolynomial(
            self.base, {w: self.base.div_by_int(c, k) for w, c in v.terms.items()}
        )

    def render(self, v) -> str:
        return repr(v)

    def parse(self, text: str):
        raise NcdetInputError("parsing polynomials is not supported")

    def name(self) -> str:
        return f"{self.base.name()}<X>"
