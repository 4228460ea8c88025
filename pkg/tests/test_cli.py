import json
import subprocess
import sys

import pytest

from qmorse.cli import fmt, main
from qmorse.physchem import builtin_registry, parse_registry_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_lines(out):
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    return lines[0], lines[1:]


@pytest.mark.parametrize(
    "value, text",
    [
        (1.0, "1"),
        (0.001, "0.001"),
        (123456.789, "123456.789"),
        (1.234567891234, "1.23456789"),
        (1e6, "1e+06"),
        (0.000123, "1.23e-04"),
        (-4.544666901551505, "-4.5446669"),
        (0.0, "0"),
        (7, "7"),
        (True, "true"),
    ],
)
def test_fmt(value, text):
    assert fmt(value) == text


def test_molecules_roundtrip(capsys):
    code, out, _ = run(capsys, "molecules")
    assert code == 0
    assert parse_registry_csv(out) == builtin_registry()
    assert len(out.splitlines()) == 5


def test_molecules_json(capsys):
    code, out, _ = run(capsys, "molecules", "--format", "json")
    assert code == 0
    assert [m["name"] for m in json.loads(out)] == ["H2", "HCl", "LiH", "CO"]


def test_molecules_header_only_registry(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("name,m_amu,V0_eV,alpha_invA\n")
    code, out, _ = run(capsys, "molecules", "--registry", str(path))
    assert code == 0
    assert out == "name,m_amu,V0_eV,alpha_invA\n"


def test_registry_errors(tmp_path, capsys):
    code, _, err = run(capsys, "molecules", "--registry", str(tmp_path / "missing.csv"))
    assert code == 2 and "registry" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("name,m_amu,V0_eV,alpha_invA\nX,1,-2,3\n")
    assert run(capsys, "spectrum", "--registry", str(bad), "--molecule", "X", "--q", "1")[0] == 2


def test_spectrum_row_counts(capsys):
    code, out, _ = run(capsys, "spectrum", "--molecule", "H2", "--q", "1")
    header, rows = data_lines(out)
    assert code == 0 and header == "n,E_n_eV,deltaE_n_eV" and len(rows) == 23
    assert "# n_max: 22" in out and "# nu: " in out
    assert rows[0].startswith("0,-4.5446669,0")
    code, out, _ = run(capsys, "spectrum", "--molecule", "CO", "--q", "0.3")
    assert len(data_lines(out)[1]) == 22


def test_spectrum_no_bound_states(capsys):
    code, out, _ = run(capsys, "spectrum", "--molecule", "H2", "--q", "0.02")
    assert code == 0
    assert data_lines(out)[1] == []
    assert "no bound states" in out


def test_spectrum_lih_note(capsys):
    _, out, _ = run(capsys, "spectrum", "--molecule", "LiH", "--q", "1")
    assert "n_max=36" in out and len(data_lines(out)[1]) == 18


@pytest.mark.parametrize("q", ["0", "-0.5", "1.5", "nan"])
def test_spectrum_invalid_q(capsys, q):
    assert run(capsys, "spectrum", "--molecule", "H2", "--q", q)[0] == 4


def test_unknown_molecule(capsys):
    for argv in (["spectrum", "--molecule", "N2", "--q", "1"], ["tc", "--molecule", "N2"]):
        code, _, err = run(capsys, *argv)
        assert code == 3 and "N2" in err


def test_bad_arguments_exit_4(capsys):
    assert run(capsys)[0] == 4
    assert run(capsys, "frobnicate")[0] == 4
    assert run(capsys, "zfun", "--molecule", "H2", "--q", "1", "--beta-min", "0")[0] == 4
    assert run(capsys, "zfun", "--molecule", "H2", "--q", "1", "--beta-min", "2", "--beta-max", "1")[0] == 4
    assert run(capsys, "thermo", "--molecule", "H2", "--q", "1", "--beta-steps", "0")[0] == 4
    assert run(capsys, "thermo", "--molecule", "H2", "--q", "1", "--method", "closed_form", "--diff", "analytic")[0] == 4
    assert run(capsys, "tc", "--molecule", "H2", "--bracket", "2", "1")[0] == 4
    assert run(capsys, "molecules", "--em-order", "4")[0] == 4


def test_numerical_failure_exit_5(capsys):
    code, _, err = run(
        capsys, "thermo", "--molecule", "H2", "--q", "1", "--method", "euler_maclaurin",
        "--beta-min", "50", "--beta-max", "60", "--beta-steps", "2",
    )
    assert code == 5 and "numerical" in err


def test_zfun(capsys):
    code, out, _ = run(capsys, "zfun", "--molecule", "H2", "--q", "1", "--beta-steps", "5", "--beta-min", "0.5", "--beta-max", "2.5")
    header, rows = data_lines(out)
    assert code == 0 and header.startswith("beta,Z_direct,Z_em,Z_closed")
    assert len(rows) == 5
    for row in rows:
        _, zd, ze, zc, de, dc = map(float, row.split(","))
        assert abs(ze - zc) <= 1e-8 * zd
    code, out, _ = run(capsys, "zfun", "--molecule", "H2", "--q", "1")
    assert len(data_lines(out)[1]) == 200


def test_tc_h2(capsys):
    code, out, _ = run(capsys, "tc", "--molecule", "H2", "--q", "1")
    header, rows = data_lines(out)
    assert code == 0 and header == "molecule,q,beta_C,T_C_K,C_max" and len(rows) == 1
    assert float(rows[0].split(",")[3]) == pytest.approx(8926, rel=0.10)


def test_tc_grid_shape(capsys):
    code, out, _ = run(capsys, "tc", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 20
    assert {r["molecule"] for r in rows} == {"H2", "HCl", "LiH", "CO"}


def test_sweep_counting(capsys):
    code, out, _ = run(capsys, "sweep", "--molecule", "LiH", "--q", "0.5", "--beta-steps", "1")
    assert code == 0 and len(data_lines(out)[1]) == 1
    code, out, _ = run(capsys, "sweep", "--molecule", "H2", "--q", "1,0.5,0.02", "--beta-steps", "3", "--log-beta")
    assert len(data_lines(out)[1]) == 6 and "no bound states for q = 0.02" in out


def test_thermo_columns(capsys):
    _, out, _ = run(capsys, "thermo", "--molecule", "HCl", "--q", "0.7", "--beta-steps", "4", "--beta-max", "5", "--method", "closed_form")
    header, rows = data_lines(out)
    assert header == "q,beta,T_K,F_eV,U_eV,S_kB,C_kB,method,diff"
    assert len(rows) == 4 and all(r.endswith(",numeric") for r in rows)
    assert "# beta_units:" in out


def test_potential(capsys):
    code, out, _ = run(capsys, "potential", "--molecule", "H2", "--q", "1,0.5", "--x-steps", "11")
    assert code == 0 and len(data_lines(out)[1]) == 22


def test_single_header_and_determinism(capsys):
    argv = ["thermo", "--molecule", "CO", "--q", "0.9", "--beta-steps", "7"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert sum(1 for l in first.splitlines() if l.startswith("q,")) == 1


def test_out_file(tmp_path, capsys):
    path = tmp_path / "z.csv"
    code, out, _ = run(capsys, "spectrum", "--molecule", "H2", "--q", "1", "--out", str(path))
    assert code == 0 and out == ""
    assert len(path.read_text().splitlines()) > 23
    assert run(capsys, "molecules", "--out", str(tmp_path / "no" / "dir.csv"))[0] == 4


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--format", "json", "spectrum", "--molecule", "H2", "--q", "1")
    assert code == 0 and len(json.loads(out)["rows"]) == 23


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmorse", "molecules"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("name,")
