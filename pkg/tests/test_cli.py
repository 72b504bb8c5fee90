import json

import pytest

from sharbly.chains import SharblyError, compose, from_matrix, save_chain
from sharbly.cli import cohomological_degree, main
from sharbly.named import Z2, Z3, build_named, z3, z3k, z3k1


def test_build_named_examples():
    assert build_named("z3") == from_matrix(Z3)
    assert build_named("z2") == from_matrix(Z2)
    z = build_named("z3k(2)")
    (cols, _), = z.terms.items()
    assert (z.n, len(cols)) == (6, 12)
    assert build_named("z4") == compose(z3(), build_named("z1"))
    assert build_named("z3k1(2)") == compose(z3(), build_named("z4"))
    assert build_named("compose(z3, compose(z3,z1))") == z3k1(2)
    assert build_named("z9") == z3k(3)


def test_build_named_unknown():
    with pytest.raises(SharblyError, match="no named cycle"):
        build_named("z5")
    with pytest.raises(SharblyError, match="unknown chain name"):
        build_named("w7")


def test_cohomological_degrees():
    assert [cohomological_degree(3 * k + 3, 3 * k + 3) for k in range(3)] == [0, 9, 27]
    assert [cohomological_degree(3 * k + 4, 3 * k + 3) for k in range(2)] == [3, 15]
    for k in range(5):
        assert cohomological_degree(3 * k + 3, 3 * k + 3) * 2 == 9 * (k * k + k)
        assert cohomological_degree(3 * k + 4, 3 * k + 3) * 2 == 9 * k * k + 15 * k + 6


def test_verify_cycle_exit_code(capsys):
    assert main(["verify-cycle", "z3"]) == 0
    assert "verified" in capsys.readouterr().out


def test_verify_cycle_refuted(tmp_path, capsys):
    path = tmp_path / "c.json"
    save_chain(from_matrix([[1, 0, 1, 1], [0, 1, 1, 2]]), path)
    assert main(["verify-cycle", str(path)]) == 1


def test_parity_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["parity", "z2", "--json", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["exact"]["parity"] == "odd"
    assert report["status"] == "verified"


def test_depth_chart_command(capsys):
    assert main(["depth-chart", "z4", "--json", "-"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["exact"]["depth_charts"] == [0, 1, 2, 2, 3, 3, 3, 4]


def test_pliable_command(capsys):
    assert main(["pliable", "compose(z3,z3)", "--a", "3", "--json", "-"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["exact"]["pliable"]["count"] == 2


def test_vanishing_command():
    for name in ("z2z2", "z4z1", "z2z3"):
        assert main(["vanishing", name]) == 0


def test_usage_errors_exit_3():
    with pytest.raises(SystemExit) as exc:
        main(["theorem", "--case", "3k+5", "--k", "1"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 3


def test_unknown_chain_is_inconclusive(capsys):
    assert main(["verify-cycle", "no-such-chain"]) == 2


def test_pair_exact(capsys):
    assert main(["pair", "--mu", "mu1", "z1"]) == 0


def test_pair_arity_mismatch_is_inconclusive(capsys):
    assert main(["pair", "--mu", "mu1", "z3"]) == 2


def test_theorem_small_budget_inconclusive(capsys):
    assert main(["theorem", "--case", "3k+4", "--k", "0", "--time-budget", "0"]) == 2


def test_theorem_case_n4(capsys):
    assert main(["theorem", "--case", "3k+4", "--k", "0", "--json", "-"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["exact"]["cohomological_degree"] == 3
    assert data["exact"]["pliable_count"] == 1
    assert data["exact"]["term_signs"] == [1]
