"""CLI surface: commands, exit codes, deterministic JSON."""

import json

from folnerlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_folner_function_report(capsys):
    code, report = run_json(
        capsys, "folner-function", "--group", "zd:1", "--d", "+1", "--n", "5"
    )
    assert code == 0 and report == {"min_size": 5}


def test_folner_search_certificate(capsys):
    code, report = run_json(
        capsys, "folner-search", "--group", "zd:1", "--d", "+1,-1", "--n", "3"
    )
    assert code == 0
    cert = report["certificate"]
    assert set(cert) == {"spec", "D", "n", "F", "defects"}  # declared schema
    assert cert["spec"] == "zd:1"
    assert cert["n"] == 3 and len(cert["F"]) == 3
    assert set(cert["defects"].values()) == {"1/3"}


def test_folner_seq(capsys):
    code, report = run_json(capsys, "folner-seq", "--group", "zd:1", "--n", "3")
    assert code == 0 and report["certificate"]["D"] == [0, 1, 2]


def test_unknown_exit_code(capsys):
    code, report = run_json(
        capsys,
        "folner-search", "--group", "free:2", "--d", "a,a^-1,b,b^-1",
        "--n", "4", "--budget", "2000",
    )
    assert code == 2 and report["result"] == "UNKNOWN"
    assert report["budget"] == 2000


def test_malformed_spec_exit_code(capsys):
    assert main(["folner-search", "--group", "nope:3", "--d", "+1", "--n", "2"]) == 4
    assert main(["folner-search", "--group", "zd:1", "--d", "qq", "--n", "2"]) == 4
    assert main(["witness", "--group", "zd:1"]) == 4  # missing --k


def test_witness_command(capsys):
    code, report = run_json(capsys, "witness", "--group", "free:2", "--k", "a,b")
    assert code == 0 and report["verdict"] == "WITNESS"
    assert report["evidence"]["pair"] == [1, 3]
    code, report = run_json(capsys, "witness", "--group", "lamplighter", "--k", "s,t")
    assert report["verdict"] == "NOT_WITNESS"
    assert report["rationale"] == "amenable family"


def test_witness_refutation_flag(capsys):
    code, report = run_json(
        capsys, "witness", "--group", "zd:1", "--k", "+1", "--n", "5",
        "--size-bound", "5",
    )
    assert code == 0 and report["verdict"] == "NOT_WITNESS"
    assert len(report["refutation"]["F"]) == 5
    code, report = run_json(
        capsys, "witness", "--group", "free:2", "--k", "a,b", "--n", "4",
        "--size-bound", "2",
    )
    assert report["verdict"] == "WITNESS" and report["refutation"] is None


def test_bare_paradox_reports_key(capsys):
    code, report = run_json(
        capsys, "paradox", "--group", "free:2", "--k0", "a,a^-1,b,b^-1", "--n", "1"
    )
    assert code == 0 and report["n1"] == 2 and len(report["K"]) == 17
    assert report["resolved"] == []


def test_wp_from_folner_command(capsys):
    code, report = run_json(
        capsys, "wp-from-folner", "--group", "zd:2", "--d", "(1,0),(0,1),(1,1)"
    )
    assert code == 0 and report["equal"] is True
    code, report = run_json(
        capsys, "wp-from-folner", "--group", "zd:2", "--d", "(1,0),(0,1),(2,2)"
    )
    assert report["equal"] is False


def test_reiter_and_kappa_commands(tmp_path, capsys):
    fn = tmp_path / "f.json"
    values = {str(c): "1" for c in range(5)}
    # codes 0..4 in zd:1 are the interval -2..2
    fn.write_text(json.dumps({"support": list(range(5)), "values": values}))
    code, report = run_json(
        capsys, "reiter-check", "--group", "zd:1", "--d", "+1", "--n", "2",
        "--fn", str(fn),
    )
    assert code == 0 and report["invariant"] is True  # defect 2/5 < 1/2

    # kappa on redundant-z: support x^0..x^5 canonical words, defect 2/6
    rz_support = [0, 1, 5, 21, 85, 341]
    fn2 = tmp_path / "g.json"
    fn2.write_text(
        json.dumps({"support": rz_support, "values": {str(c): "1" for c in rz_support}})
    )
    code, report = run_json(
        capsys, "kappa", "--group", "redundant-z", "--d", "x", "--n", "3",
        "--fn", str(fn2),
    )
    assert code == 0 and report["result"] == "INVARIANT"
    code, report = run_json(
        capsys, "kappa", "--group", "redundant-z", "--d", "x", "--n", "4",
        "--fn", str(fn2),
    )
    assert code == 0 and report["result"] == "NOT_INVARIANT"
    assert main(["kappa", "--group", "zd:1", "--d", "+1", "--n", "2",
                 "--fn", str(fn2)]) == 3


def test_harem_demo(capsys):
    code, report = run_json(
        capsys, "harem-demo", "--group", "free:2", "--k", "e,a,a^-1,b,b^-1",
        "--steps", "4",
    )
    assert code == 0 and len(report["dump"]) == 8  # 4 L-lines + 4 R-lines


def test_paradox_verify_small(capsys):
    code, report = run_json(
        capsys,
        "paradox-verify", "--group", "free:2", "--k0", "a,a^-1,b,b^-1",
        "--n", "1", "--verify", "3",
    )
    assert code == 0
    assert report["n1"] == 2 and len(report["K"]) == 17
    assert report["violations"] == []
    assert [r["m"] for r in report["resolved"]] == [0, 1, 2]


def test_restrict_folner_command(capsys):
    code, report = run_json(
        capsys, "restrict-folner", "--group", "zd:2", "--k", "(1,0)", "--n", "3"
    )
    assert code == 0 and report["verified"] is True


def test_byte_identical_json(capsys):
    argv = ["folner-search", "--group", "zd:1", "--d", "+1,-1", "--n", "4", "--json"]
    code1 = main(list(argv))
    out1 = capsys.readouterr().out
    code2 = main(list(argv))
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0 and out1 == out2


def test_out_file(tmp_path, capsys):
    path = tmp_path / "cert.json"
    code, _ = run(
        capsys, "folner-search", "--group", "zd:1", "--d", "+1", "--n", "2",
        "--out", str(path),
    )
    assert code == 0
    data = json.loads(path.read_text())
    assert data["certificate"]["n"] == 2
