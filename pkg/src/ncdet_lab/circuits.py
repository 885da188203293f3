"""Noncommutative arithmetic circuits (DAGs of +/* over variables/constants).

Gates are stored in topological order as tuples; references always point to
earlier gates, so well-formed circuits are acyclic by construction and
validate() rejects hand-built gate lists with forward or dangling references.

hadamard_circuit composes a circuit with a filter program: every variable
leaf x is replaced by (transfer block of x) * x, so evaluating the composed
circuit over S x S matrices and reading the (source, sink) = (1, S) entry
yields the coefficient-wise product of the circuit's polynomial with the
program's polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .abp import Abp
from .algebra import MatrixRing, RationalField, SquareMatrix
from .errors import BudgetExceededError, CircuitError, NcdetInputError
from .ncpoly import NCPolynomial, NCPolyRing, VarGrid

DEFAULT_TERM_BUDGET = 10**6


class NcCircuit:
    def __init__(self):
        self.gates: list[tuple] = []
        self.output: int | None = None

    def _push(self, gate: tuple) -> int:
        self.gates.append(gate)
        return len(self.gates) - 1

    def var(self, idx: int) -> int:
        if idx < 0:
            raise NcdetInputError(f"negative variable index: {idx}")
        return self._push(("var", idx))

    def const(self, value) -> int:
        if isinstance(value, int):
            value = Fraction(value)
        return self._push(("const", value))

    def add(self, a: int, b: int) -> int:
        return self._push(("add", a, b))

    def mul(self, a: int, b: int) -> int:
        return self._push(("mul", a, b))

    def set_output(self, gate: int) -> None:
        self.output = gate

    def var_indices(self) -> set[int]:
        return {g[1] for g in self.gates if g[0] == "var"}

    def validate(self) -> None:
        if self.output is None or not 0 <= self.output < len(self.gates):
            raise CircuitError("circuit has no valid output gate")
        for pos, gate in enumerate(self.gates):
            kind = gate[0]
            if kind in ("add", "mul"):
                for ref in gate[1:]:
                    if not isinstance(ref, int) or not 0 <= ref < pos:
                        raise CircuitError(
                            f"gate {pos} references {ref}: cycle or dangling reference"
                        )
            elif kind not in ("var", "const"):
                raise CircuitError(f"unknown gate kind: {kind!r}")

    def degree_sets(self) -> list[set]:
        """Set of monomial degrees potentially produced by each gate."""
        out: list[set] = []
        for gate in self.gates:
            kind = gate[0]
            if kind == "var":
                out.append({1})
            elif kind == "const":
                out.append({0})
            elif kind == "add":
                out.append(out[gate[1]] | out[gate[2]])
            else:
                out.append({a + b for a in out[gate[1]] for b in out[gate[2]]})
        return out

    def _forward(self, leaf, const, check=None):
        values = []
        for gate in self.gates:
            kind = gate[0]
            if kind == "var":
                value = leaf(gate[1])
            elif kind == "const":
                value = const(gate[1])
            elif kind == "add":
                value = values[gate[1]] + values[gate[2]]
            else:
                value = values[gate[1]] * values[gate[2]]
            if check is not None:
                check(value)
            values.append(value)
        return values[self.output]


def eval_circuit(circuit: NcCircuit, assignment, ring):
    """Forward evaluation at ring values; rational constants are embedded,
    matrix constants over Q are converted entrywise when ring is a matrix
    ring (used by hadamard_circuit compositions)."""
    circuit.validate()

    def leaf(idx):
        if idx not in assignment:
            raise NcdetInputError(f"no value assigned to variable {idx}")
        return assignment[idx]

    def const(value):
        return _convert_const(value, ring)

    return circuit._forward(leaf, const)


def _convert_const(value, ring):
    if isinstance(value, Fraction):
        return ring.from_rational(value)
    if isinstance(value, SquareMatrix) and isinstance(ring, MatrixRing):
        if value.dim != ring.dim:
            raise NcdetInputError(
                f"constant block is {value.dim}x{value.dim}, ring wants {ring.dim}"
            )
        inner = ring.inner
        return SquareMatrix(
            tuple(tuple(inner.from_rational(c) for c in row) for row in value.rows)
        )
    return value


def expand_circuit(
    circuit: NcCircuit, base_ring=None, budget: int = DEFAULT_TERM_BUDGET
) -> NCPolynomial:
    """Polynomial computed by the circuit, via evaluation over polynomials."""
    circuit.validate()
    base = RationalField() if base_ring is None else base_ring
    ring = NCPolyRing(base)

    def check(value):
        if isinstance(value, NCPolynomial) and value.num_terms() > budget:
            raise BudgetExceededError(
                f"expansion exceeds term budget ({value.num_terms()} > {budget})"
            )

    return circuit._forward(
        leaf=lambda idx: NCPolynomial.monomial(base, (idx,)),
        const=lambda value: ring.from_rational(value)
        if isinstance(value, Fraction)
        else ring.from_rational(Fraction(value)),
        check=check,
    )


def circuit_from_polynomial(poly: NCPolynomial) -> NcCircuit:
    """Sum-of-products circuit with one multiplication chain per term."""
    circuit = NcCircuit()
    total = None
    items = sorted(poly.terms.items(), key=lambda item: (len(item[0]), item[0]))
    if not items:
        circuit.set_output(circuit.const(Fraction(0)))
        return circuit
    for word, coeff in items:
        gate = circuit.const(coeff)
        for idx in word:
            gate = circuit.mul(gate, circuit.var(idx))
        total = gate if total is None else circuit.add(total, gate)
    circuit.set_output(total)
    return circuit


@dataclass(frozen=True)
class HadamardCircuit:
    """Composition of a circuit with a filter program; evaluate over S x S
    blocks and read entry (1, S)."""

    circuit: NcCircuit
    grid: VarGrid
    size: int

    def eval(self, assignment, ring):
        mring = MatrixRing(self.size, ring)
        lifted = {}
        for idx, value in assignment.items():
            lifted[idx] = mring.one().scale(value)
        result = eval_circuit(self.circuit, lifted, mring)
        return result.entry(1, self.size)

    def expand(self, budget: int = DEFAULT_TERM_BUDGET) -> NCPolynomial:
        base = RationalField()
        ring = NCPolyRing(base)
        mring = MatrixRing(self.size, ring)
        assignment = {
            idx: mring.one().scale(NCPolynomial.monomial(base, (idx,)))
            for idx in range(self.grid.nvars)
        }
        checked = 0

        def leaf(idx):
            return assignment[idx]

        def const(value):
            return _convert_const(value, mring) if isinstance(value, SquareMatrix) else (
                mring.from_rational(value)
            )

        def check(value):
            nonlocal checked
            if isinstance(value, SquareMatrix):
                checked = sum(
                    entry.num_terms()
                    for row in value.rows
                    for entry in row
                    if isinstance(entry, NCPolynomial)
                )
                if checked > budget:
                    raise BudgetExceededError(
                        f"expansion exceeds term budget ({checked} > {budget})"
                    )

        result = self.circuit._forward(leaf, const, check)
        return result.entry(1, self.size)


def hadamard_circuit(circuit: NcCircuit, filter_abp: Abp) -> HadamardCircuit:
    """Rewire variable leaves to (transfer block) * variable.

    Rejects circuits whose (homogeneous) degree differs from the program
    depth; such a composition would be identically zero.
    """
    circuit.validate()
    degrees = circuit.degree_sets()[circuit.output]
    if len(degrees) == 1 and next(iter(degrees)) != filter_abp.depth:
        raise CircuitError(
            f"degree mismatch: circuit degree {next(iter(degrees))}, "
            f"program depth {filter_abp.depth}"
        )
    transfer = filter_abp.extract_transfer()
    size = transfer.size
    composed = NcCircuit()
    mapping = {}
    for pos, gate in enumerate(circuit.gates):
        kind = gate[0]
        if kind == "var":
            idx = gate[1]
            block = SquareMatrix(transfer.matrix_for(idx))
            const_gate = composed.const(block)
            var_gate = composed.var(idx)
            mapping[pos] = composed.mul(const_gate, var_gate)
        elif kind == "const":
            mapping[pos] = composed.const(gate[1])
        elif kind == "add":
            mapping[pos] = composed.add(mapping[gate[1]], mapping[gate[2]])
        else:
            mapping[pos] = composed.mul(mapping[gate[1]], mapping[gate[2]])
    composed.set_output(mapping[circuit.output])
    return HadamardCircuit(circuit=composed, grid=filter_abp.grid, size=size)
