"""Exact coefficient rings: rationals, prime fields, square matrices, Clifford.

Values are small immutable-ish objects with overloaded operators; each ring
also has a descriptor object (RationalField, PrimeField, MatrixRing,
CliffordRing) providing zero/one, int and rational embeddings, canonical
string rendering and parsing.  Descriptors are frozen dataclasses, so they
compare by value and can cross process boundaries for worker pools.

All value types support truthiness (`bool(v)` is False exactly for zero),
which the enumeration code uses for pruning.

The Clifford algebra here is generated by e_1..e_m with e_i^2 = +1 and
e_i e_j = -e_j e_i for i != j, over the rationals.  Basis blades are encoded
as bitmasks (bit i-1 set means e_i is present); m <= 64.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CharacteristicError, NcdetInputError, RingMismatchError

Rational = Fraction

MAX_CLIFFORD_GENERATORS = 64


def rational_to_str(value: Fraction) -> str:
    """Canonical form: "7", "-3/5"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_from_str(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise NcdetInputError(f"not a rational: {text!r}") from exc


class FpElement:
    """An element of the field with p elements, p prime."""

    __slots__ = ("residue", "modulus")

    def __init__(self, residue: int, modulus: int):
        self.residue = residue % modulus
        self.modulus = modulus

    def _check(self, other) -> "FpElement":
        if not isinstance(other, FpElement):
            raise RingMismatchError(f"cannot combine F_{self.modulus} with {type(other).__name__}")
        if other.modulus != self.modulus:
            raise RingMismatchError(f"moduli differ: {self.modulus} vs {other.modulus}")
        return other

    def __add__(self, other):
        if isinstance(other, int):
            other = FpElement(other, self.modulus)
        other = self._check(other)
        return FpElement(self.residue + other.residue, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return FpElement(-self.residue, self.modulus)

    def __sub__(self, other):
        return self + (-other if isinstance(other, FpElement) else FpElement(-other, self.modulus))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FpElement(self.residue * other, self.modulus)
        other = self._check(other)
        return FpElement(self.residue * other.residue, self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "FpElement":
        if self.residue == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.modulus}")
        return FpElement(pow(self.residue, self.modulus - 2, self.modulus), self.modulus)

    def __eq__(self, other):
        return (
            isinstance(other, FpElement)
            and self.modulus == other.modulus
            and self.residue == other.residue
        )

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __repr__(self):
        return f"FpElement({self.residue}, {self.modulus})"


class SquareMatrix:
    """Square matrix over an arbitrary ring; rows stored as tuples of values.

    Arithmetic uses the entries' own operators, so entries may themselves be
    matrices, Clifford elements or polynomials.  Indexing is 1-based via
    entry(i, j) to match the written conventions elsewhere in the package.
    """

    __slots__ = ("dim", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        dim = len(rows)
        if dim == 0 or any(len(r) != dim for r in rows):
            raise NcdetInputError("matrix rows must form a nonempty square")
        self.dim = dim
        self.rows = rows

    def entry(self, i: int, j: int):
        return self.rows[i - 1][j - 1]

    def _check(self, other) -> "SquareMatrix":
        if not isinstance(other, SquareMatrix):
            raise RingMismatchError(f"cannot combine matrix with {type(other).__name__}")
        if other.dim != self.dim:
            raise RingMismatchError(f"matrix dimensions differ: {self.dim} vs {other.dim}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return SquareMatrix(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def __neg__(self):
        return SquareMatrix(tuple(-a for a in r) for r in self.rows)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        if not isinstance(other, SquareMatrix):
            return self.scale(other)
        other = self._check(other)
        n = self.dim
        out = []
        for i in range(n):
            row_i = self.rows[i]
            out_row = []
            for j in range(n):
                acc = row_i[0] * other.rows[0][j]
                for k in range(1, n):
                    a = row_i[k]
                    if a:
                        acc = acc + a * other.rows[k][j]
                out_row.append(acc)
            out.append(tuple(out_row))
        return SquareMatrix(out)

    def __rmul__(self, other):
        # scalar * matrix; scalars are assumed to act the same on both sides
        return self.scale(other)

    def scale(self, scalar) -> "SquareMatrix":
        return SquareMatrix(tuple(scalar * a for a in r) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, SquareMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __bool__(self):
        return any(any(r) for r in self.rows)

    def __repr__(self):
        return f"SquareMatrix({list(list(r) for r in self.rows)!r})"


def blade_mul_sign(mask_s: int, mask_t: int) -> int:
    """Sign from moving each generator of t left past the generators of s
    that exceed it, with e_i^2 = +1: (-1)^#{(i,j) in s x t : i > j}."""
    sign = 1
    rest = mask_s
    while rest:
        low = rest & -rest
        # generators of t strictly below this generator of s
        if (mask_t & (low - 1)).bit_count() & 1:
            sign = -sign
        rest ^= low
    return sign


def clifford_basis_mul(mask_s: int, mask_t: int) -> tuple[int, int]:
    """Product of basis blades: e_S * e_T = sign * e_{S xor T}."""
    return blade_mul_sign(mask_s, mask_t), mask_s ^ mask_t


def indices_to_mask(indices) -> int:
    mask = 0
    for i in indices:
        if not 1 <= i <= MAX_CLIFFORD_GENERATORS:
            raise NcdetInputError(f"generator index out of range: {i}")
        bit = 1 << (i - 1)
        if mask & bit:
            raise NcdetInputError(f"repeated generator index: {i}")
        mask |= bit
    return mask


def mask_to_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class CliffordElement:
    """Element of the rational Clifford algebra on m generators.

    terms maps blade bitmask -> nonzero Fraction; the empty dict is zero.
    """

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: dict[int, Fraction]):
        if not 0 <= m <= MAX_CLIFFORD_GENERATORS:
            raise NcdetInputError(f"generator count out of range: {m}")
        self.m = m
        self.terms = {mask: c for mask, c in terms.items() if c}

    @classmethod
    def zero(cls, m: int) -> "CliffordElement":
        return cls(m, {})

    @classmethod
    def scalar(cls, m: int, value) -> "CliffordElement":
        return cls(m, {0: Fraction(value)})

    @classmethod
    def blade(cls, m: int, indices, coeff=1) -> "CliffordElement":
        mask = indices_to_mask(indices)
        if mask.bit_length() > m:
            raise NcdetInputError("blade uses a generator beyond m")
        return cls(m, {mask: Fraction(coeff)})

    def _check(self, other) -> "CliffordElement":
        if not isinstance(other, CliffordElement):
            raise RingMismatchError(f"cannot combine Clifford element with {type(other).__name__}")
        if other.m != self.m:
            raise RingMismatchError(f"generator counts differ: {self.m} vs {other.m}")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for mask, c in other.terms.items():
            acc = terms.get(mask, 0) + c
            if acc:
                terms[mask] = acc
            else:
                terms.pop(mask, None)
        return CliffordElement(self.m, terms)

    def __neg__(self):
        return CliffordElement(self.m, {mask: -c for mask, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CliffordElement(self.m, {mask: c * other for mask, c in self.terms.items()})
        other = self._check(other)
        out: dict[int, Fraction] = {}
        for ms, cs in self.terms.items():
            for mt, ct in other.terms.items():
                sign, mask = clifford_basis_mul(ms, mt)
                acc = out.get(mask, 0) + sign * cs * ct
                if acc:
                    out[mask] = acc
                else:
                    out.pop(mask, None)
        return CliffordElement(self.m, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def norm_sq(self) -> Fraction:
        """Sum of squared blade coefficients."""
        return sum((c * c for c in self.terms.values()), Fraction(0))

    def is_even(self) -> bool:
        return all(mask.bit_count() % 2 == 0 for mask in self.terms)

    def scalar_part(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, CliffordElement)
            and self.m == other.m
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.m, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"CliffordElement({self.m}, {self.terms!r})"


def clifford_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return a * b


def clifford_norm_sq(a: CliffordElement) -> Fraction:
    return a.norm_sq()


def render_clifford(value: CliffordElement) -> str:
    if not value.terms:
        return "0"
    parts = []
    for mask in sorted(value.terms, key=lambda msk: (msk.bit_count(), mask_to_indices(msk))):
        coeff = rational_to_str(value.terms[mask])
        if mask == 0:
            parts.append(coeff)
        else:
            blade = "e_{" + ",".join(str(i) for i in mask_to_indices(mask)) + "}"
            parts.append(blade if coeff == "1" else f"{coeff} {blade}")
    return " + ".join(parts)


@dataclass(frozen=True)
class RationalField:
    """Descriptor for exact rational arithmetic (values are Fraction)."""

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, k: int):
        return Fraction(k)

    def from_rational(self, q: Fraction):
        return Fraction(q)

    def characteristic(self) -> int:
        return 0

    def is_zero(self, v) -> bool:
        return not v

    def div_by_int(self, v, k: int):
        return v / k

    def render(self, v) -> str:
        return rational_to_str(v)

    def parse(self, text: str):
        return rational_from_str(text)

    def name(self) -> str:
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p**0.5) + 1)):
            raise NcdetInputError(f"modulus must be prime: {self.p}")

    def zero(self):
        return FpElement(0, self.p)

    def one(self):
        return FpElement(1, self.p)

    def from_int(self, k: int):
        return FpElement(k, self.p)

    def from_rational(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise CharacteristicError(f"characteristic {self.p} divides {q.denominator}")
        return FpElement(q.numerator * pow(q.denominator, self.p - 2, self.p), self.p)

    def characteristic(self) -> int:
        return self.p

    def is_zero(self, v) -> bool:
        return not v

    def div_by_int(self, v, k: int):
        if k % self.p == 0:
            raise CharacteristicError(f"characteristic {self.p} divides {k}")
        return v * FpElement(pow(k, self.p - 2, self.p), self.p)

    def render(self, v) -> str:
        return str(v.residue)

    def parse(self, text: str):
        try:
            return FpElement(int(text.strip()), self.p)
        except ValueError as exc:
            raise NcdetInputError(f"not an integer residue: {text!r}") from exc

    def name(self) -> str:
        return f"F_{self.p}"


@dataclass(frozen=True)
class MatrixRing:
    """S x S matrices over an inner ring."""

    dim: int
    inner: object

    def zero(self):
        z = self.inner.zero()
        return SquareMatrix(tuple(tuple(z for _ in range(self.dim)) for _ in range(self.dim)))

    def one(self):
        z, o = self.inner.zero(), self.inner.one()
        return SquareMatrix(
            tuple(tuple(o if i == j else z for j in range(self.dim)) for i in range(self.dim))
        )

    def from_int(self, k: int):
        return self.one().scale(self.inner.from_int(k)) if k != 1 else self.one()

    def from_rational(self, q: Fraction):
        return self.one().scale(self.inner.from_rational(q))

    def characteristic(self) -> int:
        return self.inner.characteristic()

    def is_zero(self, v) -> bool:
        return not v

    def div_by_int(self, v, k: int):
        return SquareMatrix(
            tuple(tuple(self.inner.div_by_int(a, k) for a in row) for row in v.rows)
        )

    def render(self, v) -> str:
        import json

        return json.dumps(
            [[self.inner.render(a) for a in row] for row in v.rows], separators=(",", ":")
        )

    def parse(self, text: str):
        import json

        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NcdetInputError(f"not a matrix literal: {text!r}") from exc
        if (
            not isinstance(rows, list)
            or len(rows) != self.dim
            or any(not isinstance(r, list) or len(r) != self.dim for r in rows)
        ):
            raise NcdetInputError(f"expected a {self.dim}x{self.dim} matrix literal")
        return SquareMatrix(tuple(tuple(self.inner.parse(str(a)) for a in r) for r in rows))

    def name(self) -> str:
        return f"M_{self.dim}({self.inner.name()})"


@dataclass(frozen=True)
class CliffordRing:
    m: int

    def zero(self):
        return CliffordElement.zero(self.m)

    def one(self):
        return CliffordElement.scalar(self.m, 1)

    def from_int(self, k: int):
        return CliffordElement.scalar(self.m, k)

    def from_rational(self, q: Fraction):
        return CliffordElement.scalar(self.m, q)

    def characteristic(self) -> int:
        return 0

    def is_zero(self, v) -> bool:
        return not v

    def div_by_int(self, v, k: int):
        return v * Fraction(1, k)

    def render(self, v) -> str:
        return render_clifford(v)

    def parse(self, text: str):
        raise NcdetInputError("parsing Clifford literals is not supported")

    def name(self) -> str:
        return f"CL_{self.m}"


def ring_to_descriptor(ring) -> dict:
    """JSON-able description of a ring, used in CLI reports."""
    if isinstance(ring, RationalField):
        return {"kind": "rational"}
    if isinstance(ring, PrimeField):
        return {"kind": "prime-field", "p": ring.p}
    if isinstance(ring, MatrixRing):
        return {"kind": "matrix", "dim": ring.dim, "inner": ring_to_descriptor(ring.inner)}
    if isinstance(ring, CliffordRing):
        return {"kind": "clifford", "m": ring.m}
    raise NcdetInputError(f"unknown ring: {ring!r}")


def ring_from_descriptor(desc: dict):
    kind = desc.get("kind")
    if kind == "rational":
        return RationalField()
    if kind == "prime-field":
        return PrimeField(int(desc["p"]))
    if kind == "matrix":
        return MatrixRing(int(desc["dim"]), ring_from_descriptor(desc["inner"]))
    if kind == "clifford":
        return CliffordRing(int(desc["m"]))
    raise NcdetInputError(f"unknown ring kind: {kind!r}")
