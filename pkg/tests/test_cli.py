import json

from braidrep.cli import main


def test_check_elliptic_exit_codes(tmp_path, capsys):
    assert main(["check-elliptic", "--n", "2", "--K", "3", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "elliptic_n2_K3.json").read_text())
    assert report["ok"]
    assert "coproduct" in report["conventions"]
    assert report["measured"]["c_V (Ytilde = c_V^n)"] == "1*s^0 / 1*s^3"


def test_check_elliptic_odd_and_trivial(capsys):
    assert main(["check-elliptic", "--n", "3", "--K", "4"]) == 0
    assert "vacuous" in capsys.readouterr().out
    assert main(["check-elliptic", "--n", "2", "--K", "0"]) == 0


def test_check_degeneration(capsys):
    assert main(["check-degeneration", "--N", "2", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "alpha: 4*k^1" in out
    assert main(["check-degeneration", "--N", "3", "--n", "2", "--k", "3/2"]) == 0


def test_usage_errors():
    import pytest

    for argv in (["check-degeneration", "--N", "1"], ["check-elliptic", "--n", "0"], ["bogus"],
                 ["export", "--eval", "t=2", "--out", "x"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_export_byte_stable(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["export", "--n", "2", "--K", "2", "--out", str(a), "--eval", "s=2"]) == 0
    assert main(["export", "--n", "2", "--K", "2", "--out", str(b), "--eval", "s=2"]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    basis = json.loads((a / "basis_n2_K2.json").read_text())
    assert basis["dim"] == 5
    assert (a / "T1_n2_K2_s=2.json").exists()
