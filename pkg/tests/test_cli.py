import json

import pytest

from bpadams.cli import main, parse_monomial, read_sequence, read_system, InputError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_congruences_table(capsys):
    code, out, _ = run(capsys, "congruences", "--p", "3", "--n", "1")
    assert code == 0
    assert "(-1/3, 1/3)" in out


def test_congruences_json_and_check(tmp_path, capsys):
    seq = tmp_path / "mu.json"
    seq.write_text(json.dumps(["1", "4", "16"]))
    code, out, _ = run(capsys, "congruences", "--p", "3", "--n", "2",
                       "--check", str(seq), "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"][1] == ["-1/3", "1/3", "0"]
    assert payload["check"]["verdicts"] == [True, True, True]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(["0", "1", "0"]))
    code, out, _ = run(capsys, "congruences", "--p", "3", "--n", "2",
                       "--check", str(bad), "--format", "json")
    assert code == 1


def test_basis_expand_example(tmp_path, capsys):
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps(["1", "4", "16", "64"]))
    code, out, _ = run(capsys, "basis-expand", "--family", "phihat_g", "--p", "3",
                       "--in", str(seq), "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["coefficients"] == ["1", "1", "0", "0"]
    assert payload["integral"] is True


def test_verify_centre_pretty_and_exit(capsys):
    code, out, _ = run(capsys, "verify-centre", "--p", "3", "--n", "2")
    assert code == 0
    assert "S_n^BP = S_n^g: OK" in out
    assert "overall: OK" in out
    assert "warning" not in out


def test_verify_centre_weight_raised_warning(capsys):
    code, out, _ = run(capsys, "verify-centre", "--p", "3", "--n", "2",
                       "--weight", "1")
    assert code == 0
    assert "warning: requested weight bound raised to 2" in out


def test_verify_centre_json_no_timings(capsys):
    code, out, _ = run(capsys, "verify-centre", "--p", "3", "--n", "1",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] is True
    assert "elapsed" not in out and "time" not in payload


def test_verify_centre_in_process_determinism(capsys):
    _, out1, _ = run(capsys, "verify-centre", "--p", "2", "--n", "2",
                     "--format", "json")
    _, out2, _ = run(capsys, "verify-centre", "--p", "2", "--n", "2",
                     "--format", "json")
    assert out1 == out2


def test_bp_dn(capsys):
    code, out, _ = run(capsys, "bp-dn", "--p", "2", "--n", "2")
    assert code == 0
    assert "t2 + 2/7*t1^3" in out
    assert "(1/8, -5/14, 13/56)" in out


def test_bp_etar(capsys):
    code, out, _ = run(capsys, "bp-etaR", "--p", "3", "--weight", "4",
                       "--monomial", "v1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["image"] == "-24*t1 + v1"
    assert payload["all_integral"] is True


def test_lattice_command(tmp_path, capsys):
    sys_file = tmp_path / "sys.json"
    sys_file.write_text(json.dumps({"p": 3, "rows": [["-1/3", "1/3"]]}))
    code, out, _ = run(capsys, "lattice", "--system", str(sys_file),
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["basis_columns"] == [["1", "1"], ["0", "3"]]
    member = tmp_path / "mu.json"
    member.write_text(json.dumps(["1", "7"]))
    code, _, _ = run(capsys, "lattice", "--system", str(sys_file),
                     "--member", str(member))
    assert code == 0
    member.write_text(json.dumps(["1", "2"]))
    code, _, _ = run(capsys, "lattice", "--system", str(sys_file),
                     "--member", str(member))
    assert code == 1


def test_scan_and_interleave(capsys):
    code, out, _ = run(capsys, "scan-stabilization", "--p", "3", "--n", "2",
                       "--max-weight", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "weight,pivots,equals_summand_lattice"
    code, out, _ = run(capsys, "interleave-scan", "--p", "3", "--n", "4")
    assert code == 0
    assert "lattices equal: yes" in out


def test_usage_errors(tmp_path, capsys):
    code, _, err = run(capsys, "congruences", "--p", "4", "--n", "1")
    assert code == 2 and "not a prime" in err
    code, _, err = run(capsys, "congruences", "--p", "5", "--q", "7", "--n", "1")
    assert code == 2 and "not primitive" in err and "order" in err
    missing = tmp_path / "nope.json"
    code, _, err = run(capsys, "basis-expand", "--family", "phi_ku", "--p", "3",
                       "--in", str(missing))
    assert code == 2
    floats = tmp_path / "floats.json"
    floats.write_text("[0.5]")
    code, _, err = run(capsys, "basis-expand", "--family", "phi_ku", "--p", "3",
                       "--in", str(floats))
    assert code == 2 and "exact" in err


def test_parse_monomial():
    assert parse_monomial("v1^2*v2", "v") == {"v1": 2, "v2": 1}
    assert parse_monomial("1", "v") == {}
    with pytest.raises(InputError):
        parse_monomial("x1", "v")


def test_read_sequence_and_system_errors(tmp_path):
    seq = tmp_path / "seq.json"
    seq.write_text('{"sequence": ["1", "1/2"]}')
    from fractions import Fraction
    assert read_sequence(str(seq)) == [Fraction(1), Fraction(1, 2)]
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": [[1]]}')
    with pytest.raises(InputError):
        read_system(str(bad))
    ragged = tmp_path / "ragged.json"
    ragged.write_text('{"p": 3, "rows": [["1"], ["1", "2"]]}')
    with pytest.raises(InputError):
        read_system(str(ragged))


def test_csv_output_deterministic(capsys):
    _, out1, _ = run(capsys, "congruences", "--p", "3", "--n", "2", "--format", "csv")
    _, out2, _ = run(capsys, "congruences", "--p", "3", "--n", "2", "--format", "csv")
    assert out1 == out2
    assert out1.splitlines()[0] == "r,mu0,mu1,mu2"
