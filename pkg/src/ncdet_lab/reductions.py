"""Black-box reductions between permanents and noncommutative determinants.

The central tool is hadamard_eval: given a black box for a degree-d
polynomial f on an N x N variable grid and a filter program P on the same
grid, the coefficient-wise product (f o P) evaluated at scalars a is obtained
by calling f once on matrices: variable (i, j) is replaced by a(i, j) times
the transfer matrix of P for that variable, and the (source, sink) entry of
the resulting block holds the answer.

Pipelines built on it:

  perm_via_cayley    n x n permanent from one row-ordered determinant of size
                     2n over S x S matrices, S = n^2 + n + 1
  perm_via_sdet      the same from one symmetrized determinant of size 2n
                     (characteristic 0 or > 2n)
  perm_via_clifford  permanent squared from one row-ordered determinant of
                     size 2n over the Clifford algebra on 5*log2(n) generators
  hamcycles_via_moore   directed Hamiltonian cycle count from one
                     cycle-ordered determinant of size n over (n+1)-square
                     matrices
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .abp import Abp
from .algebra import MatrixRing, RationalField, SquareMatrix
from .constructions import (
    checker_abp,
    clifford_system,
    cycle_abp_moore,
    build_clifford_grid,
    sign_abp_moore,
)
from .determinants import (
    Digraph,
    RingGrid,
    cdet,
    cdet_poly,
    factorial_budget,
    hc_poly,
    mdet,
    mdet_poly,
    mperm_poly,
    sdet,
    sdet_word_coeff,
    _check_budget,
)
from .errors import BudgetExceededError, CharacteristicError, NcdetError, NcdetInputError
from .ncpoly import NCPolynomial, VarGrid
from .perm import all_perms, interleave, row_monomial, sgn_rho0

@dataclass
class ReductionReport:
    pipeline: str
    input_desc: str
    output: str
    oracle: str
    match: bool
    seconds: float
    extra: dict = field(default_factory=dict)

    def as_dict(self, include_timing: bool = True) -> dict:
        data = {
            "pipeline": self.pipeline,
            "input": self.input_desc,
            "output": self.output,
            "oracle": self.oracle,
            "match": self.match,
        }
        if self.extra:
            data["extra"] = dict(self.extra)
        if include_timing:
            data["seconds"] = round(self.seconds, 6)
        return data


def hadamard_eval(f_blackbox, filter_abp: Abp, assignment, ring):
    """Evaluate (f o filter) at scalars via one call to f on transfer blocks.

    f_blackbox receives a RingGrid over MatrixRing(S, ring) whose (i, j)
    entry is assignment[index(i,j)] times the filter's transfer matrix for
    that variable, and must return the resulting SquareMatrix.
    """
    grid = filter_abp.grid
    if grid.rows != grid.cols:
        raise NcdetInputError("filter grid must be square")
    transfer = filter_abp.extract_transfer()
    size = transfer.size
    mring = MatrixRing(size, ring)
    zero = ring.zero()
    rows = []
    for i in range(1, grid.rows + 1):
        row = []
        for j in range(1, grid.cols + 1):
            idx = grid.index(i, j)
            if idx not in assignment:
                raise NcdetInputError(f"no value assigned to variable {grid.name(idx)}")
            a = assignment[idx]
            block = transfer.matrices.get(idx)
            if block is None or ring.is_zero(a):
                row.append(mring.zero())
            else:
                row.append(
                    SquareMatrix(
                        tuple(
                            tuple(
                                ring.from_rational(c) * a if c else zero for c in brow
                            )
                            for brow in block
                        )
                    )
                )
        rows.append(tuple(row))
    result = f_blackbox(RingGrid(mring, tuple(rows)))
    if not isinstance(result, SquareMatrix) or result.dim != size:
        raise NcdetError("black box did not return an S x S matrix")
    return result.entry(1, size)


def _square_rows(rows) -> int:
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NcdetInputError("matrix must be nonempty and square")
    return n


def _grid_assignment(grid: VarGrid, rows, ring, one_elsewhere: bool):
    """Assign a(i, j) to odd rows' first-half variables, 1 elsewhere."""
    n = len(rows)
    assignment = {}
    for i in range(1, grid.rows + 1):
        for j in range(1, grid.cols + 1):
            idx = grid.index(i, j)
            if i % 2 == 1 and j <= n:
                assignment[idx] = rows[(i - 1) // 2][j - 1]
            elif one_elsewhere:
                assignment[idx] = ring.one()
    return assignment


def perm_via_cayley(rows, ring, budget=None, workers: int = 1):
    """Permanent of rows (ring values) through the row-ordered determinant."""
    n = _square_rows(rows)
    _check_budget(n, budget, "general")
    program = checker_abp(n)
    assignment = _grid_assignment(program.grid, rows, ring, one_elsewhere=True)

    def blackbox(grid: RingGrid):
        return cdet(grid, budget=2 * n, workers=workers)

    value = hadamard_eval(blackbox, program, assignment, ring)
    return ring.from_int(sgn_rho0(n)) * value


def perm_via_sdet(rows, ring, budget=None, workers: int = 1):
    """Permanent through the symmetrized determinant of size 2n; the result
    is scaled by (2n)! sgn(rho_0) to undo the symmetrization."""
    n = _square_rows(rows)
    limit = factorial_budget("sdet") if budget is None else budget
    if 2 * n > limit:
        raise BudgetExceededError(
            f"symmetrized evaluation needs size {2 * n} > budget {limit}"
        )
    q = ring.characteristic()
    if q and q <= 2 * n:
        raise CharacteristicError(f"characteristic {q} divides ({2 * n})!")
    program = checker_abp(n)
    assignment = _grid_assignment(program.grid, rows, ring, one_elsewhere=True)

    def blackbox(grid: RingGrid):
        return sdet(grid, budget=2 * n, workers=workers)

    value = hadamard_eval(blackbox, program, assignment, ring)
    return ring.from_int(sgn_rho0(n) * math.factorial(2 * n)) * value


@dataclass(frozen=True)
class CliffordPermResult:
    n: int
    ell: int
    padded_n: int
    norm_sq: Fraction
    recovered_perm_sq: Fraction
    det_multiple: Fraction


def perm_via_clifford(rows, ell=None, workers: int = 1) -> CliffordPermResult:
    """Squared permanent of a rational matrix from one size-2n' row-ordered
    determinant over a Clifford algebra, n' = 2^ell >= n (identity padding).

    The determinant must come out as a rational multiple of the system's
    idempotent; its squared norm times 2^ell recovers perm^2.
    """
    n = _square_rows(rows)
    rows = [[Fraction(v) for v in row] for row in rows]
    needed = max(1, (n - 1).bit_length())
    if ell is None:
        ell = needed
    elif (1 << ell) < n:
        raise NcdetInputError(f"2^{ell} < {n}: matrix does not fit the system")
    if ell > 3:
        raise BudgetExceededError(f"ell = {ell} exceeds the supported maximum 3")
    system = clifford_system(ell)
    padded = system.n
    if padded > n:
        for row in rows:
            row.extend([Fraction(0)] * (padded - n))
        for k in range(n, padded):
            rows.append(
                [Fraction(1) if j == k else Fraction(0) for j in range(padded)]
            )
    grid = build_clifford_grid(rows, system)
    det = cdet(grid, budget=2 * padded, workers=workers)
    idem = system.idempotent
    ref_mask, ref_coeff = next(iter(idem.terms.items()))
    multiple = det.terms.get(ref_mask, Fraction(0)) / ref_coeff
    if det != idem * multiple:
        raise NcdetError("determinant is not a rational multiple of the idempotent")
    norm = det.norm_sq()
    return CliffordPermResult(
        n=n,
        ell=ell,
        padded_n=padded,
        norm_sq=norm,
        recovered_perm_sq=norm * (1 << ell),
        det_multiple=multiple,
    )


def hamcycles_via_moore(digraph: Digraph, ring, budget=None, workers: int = 1):
    """Directed Hamiltonian cycle count through the cycle-ordered determinant."""
    n = digraph.n
    _check_budget(n, budget, "general")
    program = cycle_abp_moore(n)
    grid = program.grid
    one, zero = ring.one(), ring.zero()
    assignment = {
        grid.index(i, j): one if digraph.has_arc(i, j) else zero
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    }

    def blackbox(g: RingGrid):
        return mdet(g, budget=n, workers=workers)

    return hadamard_eval(blackbox, program, assignment, ring)


# ---------------------------------------------------------------------------
# symbolic identity checks


def _interleaved_sum(n: int) -> NCPolynomial:
    """sum over permutations p of the word of the interleaved permutation."""
    ring = RationalField()
    grid = VarGrid(2 * n, 2 * n)
    return NCPolynomial(
        ring, {row_monomial(interleave(p), grid): Fraction(1) for p in all_perms(n)}
    )


def _timed_report(pipeline: str, input_desc: str, lhs, rhs, render, extra=None):
    started = time.perf_counter()
    left = lhs()
    right = rhs()
    elapsed = time.perf_counter() - started
    return ReductionReport(
        pipeline=pipeline,
        input_desc=input_desc,
        output=render(left),
        oracle=render(right),
        match=left == right,
        seconds=elapsed,
        extra=extra or {},
    )


def verify_identities(nmax: int = 4) -> list:
    """Symbolic identities over Q, for n = 1..nmax:

    (a) row-ordered determinant o checker = sgn(rho_0) * interleaved sum
    (b) symmetrized determinant o checker = sgn(rho_0)/(2n)! * interleaved sum
    (c) cycle-ordered det o sign filter = cycle-ordered perm, and conversely
    (d) cycle-ordered det o cycle filter = Hamiltonian cycle polynomial
    """
    reports = []
    for n in range(1, nmax + 1):
        grid2 = VarGrid(2 * n, 2 * n)
        checker = checker_abp(n).expand()
        interleaved = _interleaved_sum(n)

        def render2(poly, grid=grid2):
            return poly.render(grid)

        reports.append(
            _timed_report(
                "identity-a",
                f"n={n}",
                lambda: cdet_poly(2 * n).hadamard(checker),
                lambda: interleaved.scale(Fraction(sgn_rho0(n))),
                render2,
            )
        )
        # sparse-side Hadamard: iterate checker words, coefficient decoded
        def sdet_hadamard(c=checker, n=n):
            coeffs = {
                w: sdet_word_coeff(w, VarGrid(2 * n, 2 * n)) * cw
                for w, cw in c.terms.items()
            }
            return NCPolynomial(RationalField(), coeffs)

        reports.append(
            _timed_report(
                "identity-b",
                f"n={n}",
                sdet_hadamard,
                lambda: interleaved.scale(
                    Fraction(sgn_rho0(n), math.factorial(2 * n))
                ),
                render2,
            )
        )
        gridn = VarGrid(n, n)
        sign_filter = sign_abp_moore(n).expand()

        def rendern(poly, grid=gridn):
            return poly.render(grid)

        reports.append(
            _timed_report(
                "identity-c",
                f"n={n} (det -> perm)",
                lambda: mdet_poly(n).hadamard(sign_filter),
                lambda: mperm_poly(n),
                rendern,
            )
        )
        reports.append(
            _timed_report(
                "identity-c",
                f"n={n} (perm -> det)",
                lambda: mperm_poly(n).hadamard(sign_filter),
                lambda: mdet_poly(n),
                rendern,
            )
        )
        cycle_filter = cycle_abp_moore(n).expand()
        reports.append(
            _timed_report(
                "identity-d",
                f"n={n}",
                lambda: mdet_poly(n).hadamard(cycle_filter),
                lambda: hc_poly(n),
                rendern,
            )
        )
    return reports
