"""Tests for layered branching programs and their transfer matrices.

The expansion oracle used for random programs enumerates source-sink paths
directly and multiplies the edge forms as polynomials, independent of the
level-by-level dynamic program inside Abp.expand.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from ncdet_lab.abp import Abp, LinearForm, TransferSet
from ncdet_lab.algebra import PrimeField, RationalField
from ncdet_lab.errors import AbpValidationError, BudgetExceededError, NcdetInputError
from ncdet_lab.ncpoly import NCPolynomial, VarGrid

Q = RationalField()


def paths_oracle(abp: Abp) -> NCPolynomial:
    """Sum over explicit paths of products of edge-label polynomials."""
    by_src: dict[str, list] = {}
    for src, dst, form in abp.edges:
        by_src.setdefault(src, []).append((dst, form))

    total = NCPolynomial.zero(Q)

    def walk(node, poly):
        nonlocal total
        if node == abp.sink and not by_src.get(node):
            total = total + poly
            return
        for dst, form in by_src.get(node, ()):
            walk(dst, poly * form.as_polynomial(Q))

    walk(abp.source, NCPolynomial.one(Q))
    return total


def random_abp(rng: random.Random) -> Abp:
    grid = VarGrid(2, 3)
    depth = rng.randint(1, 4)
    levels = [["s"]]
    for li in range(1, depth):
        levels.append([f"v{li}_{k}" for k in range(rng.randint(1, 3))])
    levels.append(["t"])
    edges = []
    for li in range(depth):
        for src in levels[li]:
            targets = [d for d in levels[li + 1] if rng.random() < 0.8] or [levels[li + 1][0]]
            for dst in targets:
                coeffs = {}
                for idx in rng.sample(range(grid.nvars), rng.randint(1, 3)):
                    coeffs[idx] = Fraction(rng.choice([-2, -1, 1, 2, 3]))
                edges.append((src, dst, coeffs))
    return Abp(grid, levels, edges)


def two_step_abp() -> Abp:
    grid = VarGrid(2, 2)
    levels = [["s"], ["u", "v"], ["t"]]
    edges = [
        ("s", "u", {grid.index(1, 1): 1}),
        ("s", "v", {grid.index(1, 2): 1}),
        ("u", "t", {grid.index(2, 2): 1}),
        ("v", "t", {grid.index(2, 1): Fraction(-1)}),
    ]
    return Abp(grid, levels, edges)


def test_linear_form_basics():
    form = LinearForm.make({2: Fraction(1, 2), 0: 3, 5: 0})
    assert form.items() == ((0, Fraction(3)), (2, Fraction(1, 2)))
    assert bool(form)
    assert not LinearForm.make({})
    poly = form.as_polynomial()
    assert poly.terms == {(0,): Fraction(3), (2,): Fraction(1, 2)}
    f5 = PrimeField(5)
    val = form.eval_in({0: f5.from_int(1), 2: f5.from_int(2)}, f5)
    # 3*1 + (1/2)*2 = 4 in F_5
    assert val == f5.from_int(4)
    with pytest.raises(NcdetInputError):
        form.eval_in({0: f5.one()}, f5)


def test_expand_two_step():
    abp = two_step_abp()
    grid = abp.grid
    poly = abp.expand()
    assert poly.render(grid) == "x_{1,1} x_{2,2} - x_{1,2} x_{2,1}"
    assert poly == paths_oracle(abp)
    assert abp.depth == 2 and abp.width == 2 and abp.size == 4
    assert abp.node_index("s") == 1 and abp.node_index("t") == 4


def test_expand_matches_paths_oracle_random():
    rng = random.Random(20240817)
    for _ in range(25):
        abp = random_abp(rng)
        assert abp.expand() == paths_oracle(abp)


def test_eval_substituted_matches_expand():
    rng = random.Random(7)
    f7 = PrimeField(7)
    for _ in range(10):
        abp = random_abp(rng)
        assignment_q = {idx: Fraction(rng.randint(-4, 4)) for idx in range(abp.grid.nvars)}
        direct = abp.eval_substituted(assignment_q, Q)
        via_poly = abp.expand().substitute_scalars(assignment_q, Q)
        assert direct == via_poly
        assignment_p = {idx: f7.from_int(rng.randrange(7)) for idx in range(abp.grid.nvars)}
        assert abp.eval_substituted(assignment_p, f7) == abp.expand().substitute_scalars(
            assignment_p, f7
        )


def test_transfer_single_edge():
    grid = VarGrid(1, 1)
    abp = Abp(grid, [["s"], ["t"]], [("s", "t", {0: Fraction(2)})])
    transfer = abp.extract_transfer()
    assert transfer.size == 2
    assert transfer.matrix_for(0) == ((Fraction(0), Fraction(2)), (Fraction(0), Fraction(0)))
    assert transfer.word_readout((0,)) == Fraction(2)
    assert transfer.word_readout(()) == Fraction(0)
    assert transfer.word_readout((0, 0)) == Fraction(0)


def test_transfer_readout_equals_expand_coefficients():
    abp = two_step_abp()
    transfer = abp.extract_transfer()
    poly = abp.expand()
    nvars = abp.grid.nvars
    for word in itertools.product(range(nvars), repeat=abp.depth):
        assert transfer.word_readout(word) == poly.coeff(word)
    # unknown variable index reads as zero
    assert transfer.word_readout((nvars + 3,)) == Fraction(0)
    assert transfer.matrix_for(99) == tuple(
        tuple(Fraction(0) for _ in range(transfer.size)) for _ in range(transfer.size)
    )


def test_transfer_readout_random():
    rng = random.Random(99)
    for _ in range(10):
        abp = random_abp(rng)
        transfer = abp.extract_transfer()
        poly = abp.expand()
        words = set(poly.terms)
        nvars = abp.grid.nvars
        for _ in range(50):
            words.add(tuple(rng.randrange(nvars) for _ in range(abp.depth)))
        for word in words:
            assert transfer.word_readout(word) == poly.coeff(word)


def test_parallel_edges_merge_in_transfer():
    grid = VarGrid(1, 2)
    abp = Abp(
        grid,
        [["s"], ["t"]],
        [("s", "t", {0: 1, 1: 2}), ("s", "t", {0: 3})],
    )
    transfer = abp.extract_transfer()
    assert transfer.matrix_for(0)[0][1] == Fraction(4)
    assert transfer.matrix_for(1)[0][1] == Fraction(2)
    assert abp.expand().terms == {(0,): Fraction(4), (1,): Fraction(2)}


def test_validation_errors():
    grid = VarGrid(2, 2)
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"]], [])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s", "s2"], ["t"]], [("s", "t", {0: 1})])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"], ["t", "t2"]], [("s", "t", {0: 1})])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"], []], [])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"], ["s"]], [])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"], ["t"]], [("s", "x", {0: 1})])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"], ["t"]], [("x", "t", {0: 1})])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"], ["v"], ["t"]], [("s", "t", {0: 1})])
    with pytest.raises(AbpValidationError):
        Abp(grid, [["s"], ["t"]], [("s", "t", {})])
    with pytest.raises(NcdetInputError):
        Abp(grid, [["s"], ["t"]], [("s", "t", {17: 1})])


def test_expand_budget():
    grid = VarGrid(1, 2)
    levels = [["s"], ["a"], ["b"], ["t"]]
    edges = []
    form = {0: 1, 1: 1}
    for src, dst in (("s", "a"), ("a", "b"), ("b", "t")):
        edges.append((src, dst, form))
    abp = Abp(grid, levels, edges)
    assert abp.expand().num_terms() == 8
    with pytest.raises(BudgetExceededError):
        abp.expand(budget=3)


def test_json_round_trip():
    abp = two_step_abp()
    doc = abp.to_json_dict()
    again = Abp.from_json_dict(doc)
    assert again.levels == abp.levels
    assert again.edges == abp.edges
    assert again.expand() == abp.expand()
    assert doc["edges"][3][2] == {"x_{2,1}": "-1"}
    with pytest.raises(NcdetInputError):
        Abp.from_json_dict({"grid": {"rows": 1, "cols": 1}})
    with pytest.raises(NcdetInputError):
        Abp.from_json_dict(
            {"grid": {"rows": 1, "cols": 1}, "levels": [["s"], ["t"]], "edges": [["s", "t"]]}
        )


def test_sink_unreachable_gives_zero():
    grid = VarGrid(1, 1)
    # the only path dead-ends at u, so the sink is never reached
    abp = Abp(grid, [["s"], ["u", "v"], ["t"]], [("s", "u", {0: 1}), ("v", "t", {0: 1})])
    assert not abp.expand()
    assert abp.eval_substituted({0: Fraction(1)}, Q) == 0


def test_transfer_set_is_plain_data():
    transfer = two_step_abp().extract_transfer()
    assert isinstance(transfer, TransferSet)
    # matrices are immutable tuples keyed by variable index
    assert all(isinstance(m, tuple) for m in transfer.matrices.values())
