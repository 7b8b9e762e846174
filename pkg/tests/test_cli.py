import json

from skewsep.cli import main

DETECT_STATE = "mix(0.8: dicke(N=6,m=3), 0.2: white(N=6,d=2))"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_detect_violation(capsys):
    code, out, _ = run(
        capsys, "detect", "--state", DETECT_STATE,
        "--criterion", "prop1", "--mode", "separable", "--k", "2", "--s", "-inf",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["violated"] is True
    assert payload["s"] == "-inf"
    assert payload["lhs"] == 19.2
    assert payload["bound"] == 18.5
    assert payload["state_spec"] == DETECT_STATE


def test_detect_expect_violation_exit_code(capsys):
    code, out, _ = run(
        capsys, "detect",
        "--state", "mix(0.5: dicke(N=6,m=3), 0.5: white(N=6,d=2))",
        "--criterion", "prop1", "--mode", "separable", "--k", "2",
        "--expect-violation",
    )
    assert code == 1
    assert json.loads(out)["violated"] is False


def test_detect_prop2(capsys):
    code, out, _ = run(
        capsys, "detect", "--state", "ghz(N=6)",
        "--criterion", "prop2", "--mode", "producible", "--k", "5",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["violated"] is True
    assert payload["bound"] == 26.0


def test_malformed_state_is_usage_error(capsys):
    code, _, err = run(capsys, "detect", "--state", "mix(0.8: dicke(N=6,m=3))")
    assert code == 2
    assert "error" in err


def test_positive_order_is_usage_error(capsys):
    code, _, _ = run(capsys, "detect", "--state", "ghz(N=2)", "--s", "0.5")
    assert code == 2


def test_unknown_flag_is_usage_error(capsys):
    assert main(["detect", "--nope"]) == 2


def test_scan_threshold(capsys):
    code, out, _ = run(
        capsys, "scan", "--criterion", "prop1", "--mode", "separable", "--k", "6",
        "--coarse-step", "0.01", "--tol", "1e-6",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] is True
    assert abs(payload["p_star"] - 0.25) < 5e-4
    lo, hi = payload["bracket"]
    assert lo <= payload["p_star"] <= hi


def test_region_csv(capsys, tmp_path):
    out_path = tmp_path / "region.csv"
    code, _, _ = run(
        capsys, "region", "--step", "0.25",
        "--configs", "prop2:separable:3,prop2:producible:2",
        "--out", str(out_path),
    )
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == "p,q,prop2-separable-k3,prop2-producible-k2"
    assert len(lines) == 1 + 15  # 5+4+3+2+1 feasible cells


def test_region_accepts_prop1_config(capsys):
    code, out, _ = run(capsys, "region", "--step", "0.5", "--configs", "prop1:separable:2")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "p,q,prop1-separable-k2"
    assert "1,0,1" in lines  # pure GHZ corner violates


def test_table1_flags_only_k5(capsys):
    code, out, err = run(capsys, "table1", "--coarse-step", "0.02")
    assert code == 0
    rows = json.loads(out)["rows"]
    flagged = {r["k"] for r in rows if r["flagged"]}
    assert flagged == {5}
    assert "k=5" in err


def test_table2_csv_format(capsys):
    code, out, _ = run(capsys, "table2", "--coarse-step", "0.02", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("k,mode,computed")
    assert len(lines) == 6


def test_bases_check(capsys):
    code, out, _ = run(capsys, "bases", "--dim", "3", "--check")
    assert code == 0
    payload = json.loads(out)
    assert payload["member_count"] == 9
    assert payload["check"] == "pass"

    code, out, _ = run(capsys, "bases", "--dim", "2", "--pad", "3", "--check")
    assert code == 0
    assert json.loads(out)["member_count"] == 9


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--quick", "--fuzz", "40")
    assert code == 0
    assert "selftest: PASS" in out
