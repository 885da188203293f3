"""Runtime invariant suites backing the `verify` CLI command.

Each check re-derives a contract from scratch (oracles local to this module)
and raises AssertionError on violation; the runner turns exceptions into
failing CheckResult records.  Checks deliberately go through module
attributes (perm.sign, determinants.cdet, ...) so corrupted implementations
are observable.  All randomness is seeded.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import algebra, constructions, determinants, ncpoly, perm, reductions
from .errors import NcdetError


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _rows_q(rng: random.Random, n: int, lo: int = -9, hi: int = 9):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]


def _rows_fp(rng: random.Random, n: int, field: algebra.PrimeField):
    return [
        [field.from_int(rng.randrange(field.p)) for _ in range(n)] for _ in range(n)
    ]


def _matrix_grid(rng: random.Random, n: int, size: int, inner, lo=-4, hi=4):
    ring = algebra.MatrixRing(size, inner)
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if isinstance(inner, algebra.PrimeField):
                block = [
                    [inner.from_int(rng.randrange(inner.p)) for _ in range(size)]
                    for _ in range(size)
                ]
            else:
                block = [
                    [Fraction(rng.randint(lo, hi)) for _ in range(size)]
                    for _ in range(size)
                ]
            row.append(algebra.SquareMatrix(block))
        rows.append(row)
    return determinants.RingGrid.from_rows(ring, rows)


def _random_digraph(rng: random.Random, n: int, density: float = 0.5):
    arcs = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rng.random() < density
    ]
    return determinants.Digraph.from_arcs(n, arcs)


# ---------------------------------------------------------------------------
# lemma checks


def _check_sign_multiplicative(nmax: int, rng: random.Random):
    for _ in range(200):
        n = rng.randint(1, max(2, min(nmax + 2, 6)))
        a = perm.Perm(rng.sample(range(1, n + 1), n))
        b = perm.Perm(rng.sample(range(1, n + 1), n))
        assert perm.sign(a.then(b)) == perm.sign(a) * perm.sign(b), (a, b)


def _check_sign_cycle_oracle(nmax: int, rng: random.Random):
    for n in range(1, 6):
        for p in perm.all_perms(n):
            cycles = len(perm.moore_canonical(p))
            assert perm.sign(p) == (-1) ** (n - cycles), p


def _check_interleave_sign(nmax: int, rng: random.Random):
    for n in range(1, min(nmax, 4) + 1):
        signs = {perm.sign(perm.interleave(p)) for p in perm.all_perms(n)}
        assert signs == {perm.sgn_rho0(n)}, n
        assert perm.sgn_rho0(n) == (-1) ** (n * (n - 1) // 2), n


def _check_moore_canonical(nmax: int, rng: random.Random):
    for n in range(1, 6):
        for p in perm.all_perms(n):
            cycles = perm.moore_canonical(p)
            leaders = [c[0] for c in cycles]
            assert leaders == sorted(leaders, reverse=True), p
            assert all(c[0] == min(c) for c in cycles), p
            rebuilt = {i: j for i, j in perm.moore_word_pairs(p)}
            assert all(rebuilt[i] == p(i) for i in range(1, n + 1)), p


def _check_moore_sign(nmax: int, rng: random.Random):
    for n in range(1, 6):
        for p in perm.all_perms(n):
            assert perm.moore_sign(p) == perm.sign(p), p


def _blade_oracle(seq_a, seq_b):
    """Normal form of a generator sequence by adjacent-swap rewriting."""
    seq = list(seq_a) + list(seq_b)
    sign = 1
    changed = True
    while changed:
        changed = False
        k = 0
        while k + 1 < len(seq):
            if seq[k] == seq[k + 1]:
                del seq[k : k + 2]  # e_i e_i = 1
                changed = True
            elif seq[k] > seq[k + 1]:
                seq[k], seq[k + 1] = seq[k + 1], seq[k]
                sign = -sign
                changed = True
            else:
                k += 1
    return sign, tuple(seq)


def _check_clifford_blades(nmax: int, rng: random.Random):
    universe = list(range(1, 6))
    subsets = list(
        itertools.chain.from_iterable(
            itertools.combinations(universe, k) for k in range(6)
        )
    )
    for sa in subsets:
        for sb in subsets:
            sign, mask = algebra.clifford_basis_mul(
                algebra.indices_to_mask(sa), algebra.indices_to_mask(sb)
            )
            osign, oseq = _blade_oracle(sa, sb)
            assert (sign, algebra.mask_to_indices(mask)) == (osign, oseq), (sa, sb)


def _random_clifford(rng: random.Random, m: int) -> algebra.CliffordElement:
    terms = {}
    for _ in range(rng.randint(0, 4)):
        mask = rng.randrange(1 << m)
        terms[mask] = Fraction(rng.randint(-3, 3))
    return algebra.CliffordElement(m, terms)


def _check_clifford_algebra(nmax: int, rng: random.Random):
    m = 4
    for _ in range(80):
        a = _random_clifford(rng, m)
        b = _random_clifford(rng, m)
        c = _random_clifford(rng, m)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
    for sa in range(1 << m):
        for sb in range(1 << m):
            if sa & sb == 0 and sa.bit_count() % 2 == 0 and sb.bit_count() % 2 == 0:
                ea = algebra.CliffordElement(m, {sa: Fraction(1)})
                eb = algebra.CliffordElement(m, {sb: Fraction(1)})
                assert ea * eb == eb * ea, (sa, sb)


def _check_clifford_system(nmax: int, rng: random.Random):
    for ell in (1, 2):
        system = constructions.clifford_system(ell)
        e = system.idempotent
        assert e * e == e
        assert e.norm_sq() == Fraction(1, 1 << ell), ell
        for j in range(system.n):
            assert system.left_factors[j].is_even()
            assert system.right_factors[j].is_even()
            for k in range(system.n):
                product = system.left_factors[j] * system.right_factors[k]
                if j == k:
                    assert product == e, (ell, j)
                else:
                    assert not product, (ell, j, k)


def _check_checker_abp(nmax: int, rng: random.Random):
    for n in range(1, min(nmax, 3) + 1):
        program = constructions.checker_abp(n)
        assert program.size == n * n + n + 1, n
        expanded = program.expand()
        grid = program.grid
        for p in perm.all_perms(n):
            word = perm.row_monomial(perm.interleave(p), grid)
            assert expanded.coeff(word) == 1, (n, p)
        for _ in range(100):
            sigma = perm.Perm(rng.sample(range(1, 2 * n + 1), 2 * n))
            tau = perm.Perm(rng.sample(range(1, 2 * n + 1), 2 * n))
            if sigma.is_identity():
                continue
            word = perm.row_col_monomial(sigma, tau, grid)
            assert expanded.coeff(word) == 0, (n, sigma, tau)


def _check_sign_abp(nmax: int, rng: random.Random):
    for n in range(1, min(nmax, 4) + 1):
        program = constructions.sign_abp_moore(n)
        assert program.width <= 2 * n, n
        expanded = program.expand()
        grid = program.grid
        for p in perm.all_perms(n):
            word = perm.moore_monomial(p, grid)
            assert expanded.coeff(word) == perm.sign(p), (n, p)


def _check_cycle_abp(nmax: int, rng: random.Random):
    for n in range(1, min(nmax, 4) + 1):
        program = constructions.cycle_abp_moore(n)
        assert program.width == 1, n
        expanded = program.expand()
        grid = program.grid
        expected_on_cycles = Fraction((-1) ** (n + 1))
        for p in perm.all_perms(n):
            word = perm.moore_monomial(p, grid)
            want = expected_on_cycles if len(perm.moore_canonical(p)) == 1 else 0
            assert expanded.coeff(word) == want, (n, p)


def _check_transfer_consistency(nmax: int, rng: random.Random):
    for n in (1, 2):
        program = constructions.checker_abp(n)
        transfer = program.extract_transfer()
        expanded = program.expand()
        for word in expanded.terms:
            assert transfer.word_readout(word) == expanded.coeff(word), word
        nvars = program.grid.nvars
        for _ in range(50):
            word = tuple(rng.randrange(nvars) for _ in range(2 * n))
            assert transfer.word_readout(word) == expanded.coeff(word), word
        field = algebra.PrimeField(11)
        assignment = {
            idx: field.from_int(rng.randrange(11)) for idx in range(nvars)
        }
        direct = program.eval_substituted(assignment, field)
        via_poly = expanded.substitute_scalars(assignment, field)
        assert direct == via_poly


def _check_variants_commutative(nmax: int, rng: random.Random):
    field = algebra.PrimeField(7)
    rational = algebra.RationalField()
    for n in range(1, min(nmax + 1, 4) + 1):
        for ring, rows in (
            (rational, _rows_q(rng, n)),
            (field, _rows_fp(rng, n, field)),
        ):
            grid = determinants.RingGrid.from_rows(ring, rows)
            det_oracle = determinants.commutative_det(rows)
            perm_oracle = determinants.commutative_perm(rows)
            assert determinants.cdet(grid) == det_oracle
            assert determinants.mdet(grid) == det_oracle
            assert determinants.cperm(grid) == perm_oracle
            assert determinants.mperm(grid) == perm_oracle
        if n <= 3:
            rows = _rows_q(rng, n)
            grid = determinants.RingGrid.from_rows(rational, rows)
            assert determinants.sdet(grid) == determinants.commutative_det(rows)


def _check_kernel_vs_generic(nmax: int, rng: random.Random):
    field = algebra.PrimeField(101)
    for n, size in ((2, 2), (3, 3)):
        for inner in (field, algebra.RationalField()):
            grid = _matrix_grid(rng, n, size, inner)
            assert determinants._int_grid_data(grid, 10) is not None
            assert determinants.cdet(grid) == determinants._cayley_generic(grid, True)
            assert determinants.cperm(grid) == determinants._cayley_generic(grid, False)
            assert determinants.mdet(grid) == determinants._moore_generic(grid, True)
            assert determinants.mperm(grid) == determinants._moore_generic(grid, False)
            assert determinants.sdet(grid) == determinants._sdet_generic(grid)


def _check_hadamard_properties(nmax: int, rng: random.Random):
    ring = algebra.RationalField()
    grid = ncpoly.VarGrid(2, 2)

    def rand_poly():
        terms = {}
        for _ in range(rng.randint(0, 5)):
            word = tuple(rng.randrange(grid.nvars) for _ in range(rng.randint(0, 3)))
            terms[word] = Fraction(rng.randint(-5, 5))
        return ncpoly.NCPolynomial(ring, terms)

    for _ in range(100):
        f, g, h = rand_poly(), rand_poly(), rand_poly()
        assert f.hadamard(g) == g.hadamard(f)
        assert f.hadamard(g + h) == f.hadamard(g) + f.hadamard(h)
        ones = ncpoly.NCPolynomial(ring, {w: Fraction(1) for w in f.terms})
        assert f.hadamard(ones) == f


# ---------------------------------------------------------------------------
# pipeline checks


def _check_pipeline_cayley(nmax: int, rng: random.Random):
    rational = algebra.RationalField()
    for n in range(1, min(nmax, 3) + 1):
        for _ in range(3):
            rows = _rows_q(rng, n)
            got = reductions.perm_via_cayley(rows, rational)
            assert got == determinants.commutative_perm(rows), rows
    for p in (2, 3, 7, 101):
        field = algebra.PrimeField(p)
        for n in range(1, min(nmax, 3) + 1):
            rows = _rows_fp(rng, n, field)
            got = reductions.perm_via_cayley(rows, field)
            assert got == determinants.commutative_perm(rows), (p, rows)


def _check_pipeline_sdet(nmax: int, rng: random.Random):
    rational = algebra.RationalField()
    for n in (1, 2):
        rows = _rows_q(rng, n)
        assert reductions.perm_via_sdet(rows, rational) == determinants.commutative_perm(
            rows
        )
    field = algebra.PrimeField(101)
    for n in range(1, min(nmax, 3) + 1):
        rows = _rows_fp(rng, n, field)
        got = reductions.perm_via_sdet(rows, field)
        assert got == determinants.commutative_perm(rows), rows


def _check_pipeline_clifford(nmax: int, rng: random.Random):
    for n in (2, 3, 4) if nmax >= 2 else (2,):
        rows = _rows_q(rng, n, -3, 3)
        result = reductions.perm_via_clifford(rows)
        expected = determinants.commutative_perm(rows)
        assert result.recovered_perm_sq == expected * expected, rows
        assert result.norm_sq == Fraction(
            result.recovered_perm_sq, 1 << result.ell
        ), rows


def _check_pipeline_hamcycles(nmax: int, rng: random.Random):
    rational = algebra.RationalField()
    for digraph in determinants.all_digraphs(3):
        count = determinants.ham_count(digraph)
        got = reductions.hamcycles_via_moore(digraph, rational)
        assert got == count, digraph
    field2 = algebra.PrimeField(2)
    field7 = algebra.PrimeField(7)
    for n in range(4, min(nmax + 2, 6) + 1):
        for _ in range(5):
            digraph = _random_digraph(rng, n)
            count = determinants.ham_count(digraph)
            assert reductions.hamcycles_via_moore(digraph, rational) == count
            assert reductions.hamcycles_via_moore(digraph, field2) == field2.from_int(
                count
            )
            assert reductions.hamcycles_via_moore(digraph, field7) == field7.from_int(
                count
            )


def _check_symbolic_identities(nmax: int, rng: random.Random):
    reports = reductions.verify_identities(min(nmax, 3))
    bad = [r for r in reports if not r.match]
    assert not bad, [f"{r.pipeline} {r.input_desc}" for r in bad]


LEMMA_CHECKS = [
    ("sign-multiplicative", _check_sign_multiplicative),
    ("sign-cycle-oracle", _check_sign_cycle_oracle),
    ("interleave-sign-constant", _check_interleave_sign),
    ("moore-canonical-form", _check_moore_canonical),
    ("moore-sign-inversions", _check_moore_sign),
    ("clifford-blade-products", _check_clifford_blades),
    ("clifford-ring-axioms", _check_clifford_algebra),
    ("clifford-system", _check_clifford_system),
    ("checker-abp", _check_checker_abp),
    ("sign-abp", _check_sign_abp),
    ("cycle-abp", _check_cycle_abp),
    ("abp-transfer", _check_transfer_consistency),
    ("variants-commutative", _check_variants_commutative),
    ("kernel-vs-generic", _check_kernel_vs_generic),
    ("hadamard-properties", _check_hadamard_properties),
]

PIPELINE_CHECKS = [
    ("perm-cayley", _check_pipeline_cayley),
    ("perm-sdet", _check_pipeline_sdet),
    ("perm-clifford", _check_pipeline_clifford),
    ("hamcycles-moore", _check_pipeline_hamcycles),
    ("symbolic-identities", _check_symbolic_identities),
]

SUITES = {"lemmas": LEMMA_CHECKS, "pipelines": PIPELINE_CHECKS}


def run_suite(suite: str, nmax: int = 3, seed: int = 0) -> list[CheckResult]:
    if suite not in SUITES:
        raise NcdetError(f"unknown suite: {suite!r}")
    results = []
    for name, check in SUITES[suite]:
        rng = random.Random((seed, suite, name).__repr__())
        try:
            check(nmax, rng)
            results.append(CheckResult(suite, name, True))
        except Exception as exc:  # noqa: BLE001 - reported as a failing check
            results.append(
                CheckResult(suite, name, False, f"{type(exc).__name__}: {exc}")
            )
    return results
