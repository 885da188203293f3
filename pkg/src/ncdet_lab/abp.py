"""Layered algebraic branching programs with homogeneous linear edge labels.

An ABP is a DAG arranged in levels 0..d with a single source (level 0) and a
single sink (level d); every edge joins consecutive levels and carries a
linear form in the grid variables.  The program computes the sum over
source-to-sink paths of the product of edge labels in path order, a
homogeneous degree-d polynomial.

JSON format (consumed by the CLI for user-supplied filter programs):

    {
      "grid": {"rows": 2, "cols": 2, "letter": "x"},
      "levels": [["s"], ["v"], ["t"]],
      "edges": [["s", "v", {"x_{1,1}": "1"}], ["v", "t", {"x_{2,2}": "1"}]]
    }
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import RationalField, rational_from_str, rational_to_str
from .errors import AbpValidationError, BudgetExceededError, NcdetInputError
from .ncpoly import NCPolynomial, VarGrid

DEFAULT_TERM_BUDGET = 10**6


@dataclass(frozen=True)
class LinearForm:
    """Homogeneous linear combination of variables, Fraction coefficients."""

    coeffs: tuple

    @classmethod
    def make(cls, mapping) -> "LinearForm":
        items = tuple(
            (int(idx), Fraction(c)) for idx, c in sorted(mapping.items()) if Fraction(c)
        )
        return cls(items)

    def items(self):
        return self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def eval_in(self, assignment, ring):
        total = None
        for idx, coeff in self.coeffs:
            if idx not in assignment:
                raise NcdetInputError(f"no value assigned to variable {idx}")
            term = ring.from_rational(coeff) * assignment[idx]
            total = term if total is None else total + term
        return ring.zero() if total is None else total

    def as_polynomial(self, ring=RationalField()) -> NCPolynomial:
        return NCPolynomial(ring, {(idx,): ring.from_rational(c) for idx, c in self.coeffs})


@dataclass(frozen=True)
class TransferSet:
    """Per-variable S x S adjacency matrices of an ABP, rational entries.

    matrix_for(idx)[u][v] is the coefficient of variable idx on the edge from
    node u to node v (level-major 0-based node numbering).  Entry (1, S) of a
    product over a word gives that word's coefficient in the expanded program.
    """

    grid: VarGrid
    size: int
    matrices: dict

    def matrix_for(self, idx: int):
        mat = self.matrices.get(idx)
        if mat is None:
            zero = Fraction(0)
            mat = tuple(tuple(zero for _ in range(self.size)) for _ in range(self.size))
        return mat

    def word_readout(self, word) -> Fraction:
        """Coefficient of the word: (1, S) entry of the matrix product."""
        # track only the row vector seeded at the source
        vec = [Fraction(0)] * self.size
        vec[0] = Fraction(1)
        for idx in word:
            mat = self.matrices.get(idx)
            if mat is None:
                return Fraction(0)
            nxt = [Fraction(0)] * self.size
            for u, val in enumerate(vec):
                if val:
                    row = mat[u]
                    for v in range(self.size):
                        if row[v]:
                            nxt[v] += val * row[v]
            vec = nxt
        return vec[self.size - 1]


class Abp:
    def __init__(self, grid: VarGrid, levels, edges):
        self.grid = grid
        self.levels = tuple(tuple(str(n) for n in level) for level in levels)
        normalized = []
        for src, dst, form in edges:
            if not isinstance(form, LinearForm):
                form = LinearForm.make(form)
            normalized.append((str(src), str(dst), form))
        self.edges = tuple(normalized)
        self._level_of = {}
        self._index_of = {}
        counter = 0
        for li, level in enumerate(self.levels):
            for name in level:
                if name in self._level_of:
                    raise AbpValidationError(f"duplicate node name: {name}")
                self._level_of[name] = li
                self._index_of[name] = counter
                counter += 1
        self.size = counter
        self.validate()

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def width(self) -> int:
        return max(len(level) for level in self.levels)

    @property
    def source(self) -> str:
        return self.levels[0][0]

    @property
    def sink(self) -> str:
        return self.levels[-1][0]

    def node_index(self, name: str) -> int:
        """Level-major position, 1-based."""
        return self._index_of[name] + 1

    def validate(self) -> None:
        if len(self.levels) < 2:
            raise AbpValidationError("need at least two levels")
        if any(not level for level in self.levels):
            raise AbpValidationError("empty level")
        if len(self.levels[0]) != 1:
            raise AbpValidationError("multiple sources")
        if len(self.levels[-1]) != 1:
            raise AbpValidationError("multiple sinks")
        for src, dst, form in self.edges:
            if src not in self._level_of:
                raise AbpValidationError(f"unknown node: {src}")
            if dst not in self._level_of:
                raise AbpValidationError(f"unknown node: {dst}")
            if self._level_of[dst] != self._level_of[src] + 1:
                raise AbpValidationError(
                    f"edge {src} -> {dst} does not join consecutive levels"
                )
            if not form:
                raise AbpValidationError(f"edge {src} -> {dst} carries the zero form")
            for idx, _ in form.items():
                self.grid.pair(idx)  # raises if out of range

    def edges_from_level(self, li: int):
        for src, dst, form in self.edges:
            if self._level_of[src] == li:
                yield src, dst, form

    def expand(self, budget: int = DEFAULT_TERM_BUDGET) -> NCPolynomial:
        """Sum over all source-sink paths of the product of edge labels."""
        ring = RationalField()
        state = {self.source: NCPolynomial.one(ring)}
        for li in range(self.depth):
            nxt: dict[str, NCPolynomial] = {}
            for src, dst, form in self.edges_from_level(li):
                poly = state.get(src)
                if poly is None or not poly:
                    continue
                contribution = poly * form.as_polynomial(ring)
                acc = nxt.get(dst)
                nxt[dst] = contribution if acc is None else acc + contribution
            total_terms = sum(p.num_terms() for p in nxt.values())
            if total_terms > budget:
                raise BudgetExceededError(
                    f"expansion exceeds term budget ({total_terms} > {budget})"
                )
            state = nxt
        return state.get(self.sink, NCPolynomial.zero(ring))

    def eval_substituted(self, assignment, ring):
        """Evaluate the program at ring values, multiplying in path order."""
        state = {self.source: ring.one()}
        for li in range(self.depth):
            nxt: dict[str, object] = {}
            for src, dst, form in self.edges_from_level(li):
                val = state.get(src)
                if val is None or ring.is_zero(val):
                    continue
                contribution = val * form.eval_in(assignment, ring)
                acc = nxt.get(dst)
                nxt[dst] = contribution if acc is None else acc + contribution
            state = nxt
        return state.get(self.sink, ring.zero())

    def extract_transfer(self) -> TransferSet:
        matrices: dict[int, list] = {}
        for src, dst, form in self.edges:
            u = self._index_of[src]
            v = self._index_of[dst]
            for idx, coeff in form.items():
                mat = matrices.get(idx)
                if mat is None:
                    mat = [[Fraction(0)] * self.size for _ in range(self.size)]
                    matrices[idx] = mat
                mat[u][v] += coeff
        frozen = {idx: tuple(tuple(row) for row in mat) for idx, mat in matrices.items()}
        return TransferSet(grid=self.grid, size=self.size, matrices=frozen)

    def to_json_dict(self) -> dict:
        return {
            "grid": {"rows": self.grid.rows, "cols": self.grid.cols, "letter": self.grid.letter},
            "levels": [list(level) for level in self.levels],
            "edges": [
                [
                    src,
                    dst,
                    {self.grid.name(idx): rational_to_str(c) for idx, c in form.items()},
                ]
                for src, dst, form in self.edges
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Abp":
        try:
            gspec = data["grid"]
            grid = VarGrid(int(gspec["rows"]), int(gspec["cols"]), str(gspec.get("letter", "x")))
            levels = data["levels"]
            raw_edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise NcdetInputError(f"malformed ABP document: missing {exc}") from exc
        edges = []
        for record in raw_edges:
            try:
                src, dst, label = record
            except ValueError as exc:
                raise NcdetInputError(f"malformed ABP edge: {record!r}") from exc
            form = LinearForm.make(
                {grid.parse_name(name): rational_from_str(str(c)) for name, c in label.items()}
            )
            edges.append((src, dst, form))
        return cls(grid, levels, edges)
