"""End-to-end tests of the command-line interface.

All invocations go through cli.main(argv) in-process; stdout must be
byte-identical across repeated runs, timings must stay on stderr, and exit
codes must follow the documented mapping (0 ok / 1 mismatch / 2 bad input /
3 refusal).
"""

from __future__ import annotations

import json

import pytest

import ncdet_lab.perm
from ncdet_lab.cli import main
from ncdet_lab.constructions import checker_abp
from ncdet_lab.ncpoly import VarGrid
from ncdet_lab.abp import Abp


def write_json(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def matrix_1234(tmp_path):
    return write_json(
        tmp_path / "m.json",
        {"n": 2, "ring": {"kind": "rational"}, "entries": ["1", "2", "3", "4"]},
    )


@pytest.fixture
def matrix_f7(tmp_path):
    return write_json(
        tmp_path / "m7.json",
        {"n": 2, "ring": {"kind": "prime-field", "p": 7}, "entries": ["1", "2", "3", "4"]},
    )


@pytest.fixture
def digraph_k3(tmp_path):
    return write_json(
        tmp_path / "g.json",
        {"n": 3, "arcs": [[i, j] for i in (1, 2, 3) for j in (1, 2, 3) if i != j]},
    )


@pytest.fixture
def det_filter_file(tmp_path):
    grid = VarGrid(2, 2)
    abp = Abp(
        grid,
        [["s"], ["u", "v"], ["t"]],
        [
            ("s", "u", {grid.index(1, 1): 1}),
            ("s", "v", {grid.index(1, 2): 1}),
            ("u", "t", {grid.index(2, 2): 1}),
            ("v", "t", {grid.index(2, 1): -1}),
        ],
    )
    return write_json(tmp_path / "f.json", abp.to_json_dict())


# -- eval ----------------------------------------------------------------------


def test_eval_variants(matrix_1234, capsys):
    for variant, expected in [
        ("cayley", "-2"),
        ("moore", "-2"),
        ("cperm", "10"),
        ("mperm", "10"),
        ("sym", "-2"),
    ]:
        assert main(["eval", variant, matrix_1234]) == 0
        captured = capsys.readouterr()
        assert captured.out == expected + "\n"
        assert "s\n" in captured.err  # timing goes to stderr only


def test_eval_ring_override(matrix_1234, capsys):
    assert main(["eval", "cayley", matrix_1234, "--ring", "fp", "--mod", "7"]) == 0
    assert capsys.readouterr().out == "5\n"  # -2 mod 7


def test_eval_prime_field_file(matrix_f7, capsys):
    assert main(["eval", "cperm", matrix_f7]) == 0
    assert capsys.readouterr().out == "3\n"  # 10 mod 7


def test_eval_characteristic_refusal(matrix_1234, capsys):
    code = main(["eval", "sym", matrix_1234, "--ring", "fp", "--mod", "2"])
    captured = capsys.readouterr()
    assert code == 3
    assert captured.out == ""
    assert "refused" in captured.err and "characteristic 2" in captured.err


def test_eval_budget_refusal(matrix_1234, capsys):
    code = main(["eval", "cayley", matrix_1234, "--budget-factorial", "1"])
    capsys.readouterr()
    assert code == 3


def test_eval_workers_same_output(matrix_1234, capsys):
    # force the generic path with a fractional entry so workers matter
    assert main(["eval", "cayley", matrix_1234]) == 0
    serial = capsys.readouterr().out
    assert main(["eval", "cayley", matrix_1234, "--workers", "2"]) == 0
    assert capsys.readouterr().out == serial


def test_eval_json_out(matrix_1234, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["eval", "cayley", matrix_1234, "--json-out", str(out)]) == 0
    capsys.readouterr()
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["command"] == "eval"
    assert data["variant"] == "cayley"
    assert data["value"] == "-2"
    assert data["n"] == 2
    assert "seconds" in data


def test_eval_stdout_deterministic(matrix_1234, capsys):
    runs = []
    for _ in range(2):
        assert main(["eval", "sym", matrix_1234]) == 0
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]


# -- bad input -----------------------------------------------------------------


def test_missing_file_is_input_error(capsys):
    assert main(["eval", "cayley", "/nonexistent/m.json"]) == 2
    assert "input error" in capsys.readouterr().err


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["eval", "cayley", str(bad)]) == 2
    capsys.readouterr()


def test_wrong_entry_count(tmp_path, capsys):
    path = write_json(
        tmp_path / "m.json",
        {"n": 2, "ring": {"kind": "rational"}, "entries": ["1", "2", "3"]},
    )
    assert main(["eval", "cayley", path]) == 2
    capsys.readouterr()


def test_bad_entry_string(tmp_path, capsys):
    path = write_json(
        tmp_path / "m.json",
        {"n": 1, "ring": {"kind": "rational"}, "entries": ["x"]},
    )
    assert main(["eval", "cayley", path]) == 2
    capsys.readouterr()


def test_fp_ring_needs_mod(matrix_1234, capsys):
    assert main(["eval", "cayley", matrix_1234, "--ring", "fp"]) == 2
    capsys.readouterr()


def test_composite_mod_rejected(matrix_1234, capsys):
    assert main(["eval", "cayley", matrix_1234, "--ring", "fp", "--mod", "6"]) == 2
    capsys.readouterr()


def test_unknown_variant_and_missing_args(capsys):
    assert main(["eval", "hyperdet", "m.json"]) == 2
    assert main(["eval"]) == 2
    assert main([]) == 2
    capsys.readouterr()


# -- reduce ----------------------------------------------------------------------


def test_reduce_perm_cayley(matrix_1234, capsys):
    assert main(["reduce", "perm-cayley", matrix_1234]) == 0
    captured = capsys.readouterr()
    record = json.loads(captured.out)
    assert record == {
        "pipeline": "perm-cayley",
        "input": "matrix n=2 over Q",
        "output": "10",
        "oracle": "10",
        "match": True,
    }
    assert "seconds" not in record  # timing only on stderr / --json-out


def test_reduce_perm_cayley_fp(matrix_f7, capsys):
    assert main(["reduce", "perm-cayley", matrix_f7]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["match"] is True
    assert record["output"] == "3"


def test_reduce_perm_sdet(matrix_1234, capsys):
    assert main(["reduce", "perm-sdet", matrix_1234]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["match"] is True and record["output"] == "10"


def test_reduce_perm_sdet_refusal(matrix_1234, capsys):
    assert main(["reduce", "perm-sdet", matrix_1234, "--ring", "fp", "--mod", "3"]) == 3
    capsys.readouterr()


def test_reduce_perm_clifford(matrix_1234, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["reduce", "perm-clifford", matrix_1234, "--json-out", str(out)]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["match"] is True
    assert record["output"] == "100"  # squared permanent
    assert record["extra"] == {"norm_sq": "50", "ell": "1", "padded_n": "2"}
    saved = json.loads(out.read_text(encoding="utf-8"))
    assert saved["match"] is True and "seconds" in saved


def test_reduce_perm_clifford_needs_rationals(matrix_f7, capsys):
    assert main(["reduce", "perm-clifford", matrix_f7]) == 2
    capsys.readouterr()


def test_reduce_hamcycles(digraph_k3, capsys):
    assert main(["reduce", "hamcycles-moore", digraph_k3]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["output"] == "2" and record["match"] is True
    assert main(["reduce", "hamcycles-moore", digraph_k3, "--ring", "fp", "--mod", "2"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["output"] == "0" and record["match"] is True


def test_reduce_bad_digraph(tmp_path, capsys):
    path = write_json(tmp_path / "g.json", {"n": 2, "arcs": [[1, 5]]})
    assert main(["reduce", "hamcycles-moore", path]) == 2
    capsys.readouterr()


def test_reduce_unknown_pipeline(matrix_1234, capsys):
    assert main(["reduce", "hyper-perm", matrix_1234]) == 2
    capsys.readouterr()


def test_reduce_stdout_deterministic(matrix_1234, capsys):
    runs = []
    for _ in range(2):
        assert main(["reduce", "perm-clifford", matrix_1234]) == 0
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]


# -- hadamard --------------------------------------------------------------------


def test_hadamard_command(matrix_1234, det_filter_file, capsys):
    # perm o det-filter = det
    code = main(
        ["hadamard", "cperm", "--abp", det_filter_file, "--input", matrix_1234]
    )
    assert code == 0
    assert capsys.readouterr().out == "-2\n"
    # det o det-filter = perm
    assert (
        main(["hadamard", "cayley", "--abp", det_filter_file, "--input", matrix_1234])
        == 0
    )
    assert capsys.readouterr().out == "10\n"


def test_hadamard_grid_mismatch(tmp_path, capsys):
    program = checker_abp(1)  # 2x2 variable grid, matrix below is 3x3
    path = write_json(tmp_path / "c.json", program.to_json_dict())
    big = write_json(
        tmp_path / "m3.json",
        {"n": 3, "ring": {"kind": "rational"}, "entries": [str(k) for k in range(1, 10)]},
    )
    assert main(["hadamard", "cayley", "--abp", path, "--input", big]) == 2
    capsys.readouterr()


def test_hadamard_checker_pipeline_by_hand(tmp_path, capsys):
    # evaluating cdet o checker on the interleaved layout reproduces the
    # permanent reduction: fill odd rows with the matrix, rest with ones
    program = checker_abp(1)
    path = write_json(tmp_path / "c.json", program.to_json_dict())
    matrix = write_json(
        tmp_path / "m2.json",
        {
            "n": 2,
            "ring": {"kind": "rational"},
            "entries": ["5", "1", "1", "1"],
        },
    )
    # n=1 checker over a 2x2 grid: (cdet_2 o checker)(a) = a_{1,1} a_{2,2}
    assert main(["hadamard", "cayley", "--abp", path, "--input", matrix]) == 0
    assert capsys.readouterr().out == "5\n"


# -- verify ----------------------------------------------------------------------


def test_verify_all_suites(capsys):
    assert main(["verify", "--nmax", "2"]) == 0
    captured = capsys.readouterr()
    out = captured.out
    assert "suite lemmas: 15 passed, 0 failed" in out
    assert "suite pipelines: 5 passed, 0 failed" in out
    assert out.rstrip().endswith("verify: OK")
    assert "FAIL" not in out
    assert "check lemmas/interleave-sign-constant: PASS" in out
    # timings never appear on stdout
    assert "seconds" not in out and "# verify" in captured.err


def test_verify_single_suite_deterministic(capsys):
    runs = []
    for _ in range(2):
        assert main(["verify", "--suites", "lemmas", "--nmax", "2", "--seed", "7"]) == 0
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]


def test_verify_json_out(tmp_path, capsys):
    out = tmp_path / "verify.json"
    assert main(["verify", "--suites", "pipelines", "--nmax", "2", "--json-out", str(out)]) == 0
    capsys.readouterr()
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["passed"] is True
    assert len(data["checks"]) == 5
    assert all(c["passed"] for c in data["checks"])


def test_verify_detects_fault_injection(monkeypatch, capsys):
    # corrupt the sign function; the lemma suite must fail and exit nonzero
    monkeypatch.setattr(ncdet_lab.perm, "sign", lambda p: 1)
    code = main(["verify", "--suites", "lemmas", "--nmax", "2"])
    captured = capsys.readouterr()
    assert code == 1
    assert "FAIL" in captured.out
    assert captured.out.rstrip().endswith("verify: FAIL")


def test_verify_unknown_suite(capsys):
    assert main(["verify", "--suites", "bogus"]) == 2
    capsys.readouterr()
