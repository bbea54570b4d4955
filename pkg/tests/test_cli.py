import json
import pathlib

import numpy as np
import pytest

from curvedqes.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_prints_figure_energies(capsys):
    code, out, _ = run_cli(
        ["solve", "--family", "1", "--m", "1", "--L", "1", "--lambda", "1", "--B", "1"],
        capsys,
    )
    assert code == 0
    assert "E0     = -15.5" in out
    assert "E1     = -1.5" in out


def test_solve_family2_m2(capsys):
    code, out, _ = run_cli(
        ["solve", "--family", "2", "--m", "2", "--L", "1", "--lambda", "-1", "--B", "1"],
        capsys,
    )
    assert code == 0
    assert "E0     = -4.5" in out
    assert "E1     = 37.5" in out


def test_solve_sign_mismatch_exit_code(capsys):
    code, _, err = run_cli(
        ["solve", "--family", "1", "--m", "1", "--L", "1", "--lambda", "-1", "--B", "1"],
        capsys,
    )
    assert code == 2
    assert err.splitlines()[0].startswith("SignMismatch:")


def test_solve_json_output(capsys):
    code, out, _ = run_cli(
        ["solve", "--family", "1", "--m", "1", "--L", "1", "--lambda", "1", "--B", "1",
         "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["E0"] == -15.5 and doc["E1"] == -1.5
    assert doc["spec"]["B"] == [-10.0, 1.0]
    assert doc["psi1"]["prefactor"] == [-5.0, 2.0]


def test_verify_passes_on_figure_config(capsys):
    code, out, _ = run_cli(
        ["verify", "--family", "2", "--m", "1", "--L", "1", "--lambda", "-1", "--B", "1"],
        capsys,
    )
    assert code == 0
    assert "overall: pass" in out


def test_verify_json_format(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, _, _ = run_cli(
        ["verify", "--family", "1", "--m", "1", "--L", "0", "--lambda", "1", "--B", "4",
         "--format", "json", "--out", str(target)],
        capsys,
    )
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["passed"] is True
    names = {c["name"] for c in doc["checks"]}
    assert "riccati_v1" in names and "oracle_E0" in names


def test_spectrum_command(capsys):
    code, out, _ = run_cli(
        ["spectrum", "--family", "1", "--m", "1", "--L", "1", "--lambda", "1", "--B", "1",
         "--k", "2"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "level,eigenvalue,richardson_error"
    e0 = float(lines[1].split(",")[1])
    assert abs(e0 + 15.5) < 1e-4


def test_spectrum_grid_too_coarse_exit_code(capsys):
    code, _, err = run_cli(
        ["spectrum", "--family", "1", "--m", "1", "--L", "1", "--lambda", "1", "--B", "1",
         "--grid", "2000"],
        capsys,
    )
    assert code == 2
    assert "GridTooCoarse:" in err


def test_sweep_command(capsys):
    code, out, _ = run_cli(
        ["sweep", "--family", "1", "--lambda", "1", "--m-max", "2",
         "--L-list", "0,1", "--B-list", "1"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,L,B2m,E0,E1,delta_e,r0"
    assert len(lines) == 1 + 2 * 2 * 1


def test_invalid_order_exit_code(capsys):
    code, _, err = run_cli(
        ["verify", "--family", "1", "--m", "0", "--L", "0", "--lambda", "1", "--B", "1"],
        capsys,
    )
    assert code == 2
    assert "InvalidOrder:" in err


@pytest.fixture(scope="module")
def figures_dir(tmp_path_factory):
    outdir = tmp_path_factory.mktemp("figs")
    assert main(["figures", "--out", str(outdir)]) == 0
    return outdir


def _read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# figure")
    header = lines[1].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]])
    return header, data


def test_figures_exist_and_deterministic(figures_dir, tmp_path):
    names = ["fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"]
    for name in names:
        assert (figures_dir / name).exists()
    second = tmp_path / "again"
    assert main(["figures", "--out", str(second)]) == 0
    for name in names:
        assert (figures_dir / name).read_bytes() == (second / name).read_bytes()


def test_figures_match_committed_goldens(figures_dir):
    # regenerate with: python -m curvedqes.cli figures --out tests/golden
    golden = pathlib.Path(__file__).parent / "golden"
    for name in ["fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"]:
        assert (figures_dir / name).read_bytes() == (golden / name).read_bytes()


def test_fig1_centrifugal_dominates_first_row(figures_dir):
    header, data = _read_csv(figures_dir / "fig1.csv")
    assert header == ["r", "V_m1", "V_m2"]
    assert data.shape == (1000, 3)
    r0, v1 = data[0, 0], data[0, 1]
    assert r0 == pytest.approx(0.05)
    assert abs(v1 - 800.0) / 800.0 < 0.02  # L(L+1)/r^2 = 800 dominates


def test_fig2_excited_state_changes_sign_once(figures_dir):
    _, data = _read_csv(figures_dir / "fig2.csv")
    psi1 = data[:, 2]
    signs = np.sign(psi1[np.abs(psi1) > 1e-12])
    flips = np.nonzero(signs[:-1] != signs[1:])[0]
    assert len(flips) == 1
    r_flip = data[flips[0], 0]
    assert abs(r_flip - 1.58113883) < 0.005
    # peak-normalized on a denser grid than the export grid
    assert 0.999 < np.max(np.abs(psi1)) <= 1.0


def test_fig3_wall_divergence(figures_dir):
    _, data = _read_csv(figures_dir / "fig3.csv")
    v1 = data[:, 1]
    assert v1[-1] > 1e6
    assert np.all(np.diff(v1[-50:]) > 0)


def test_fig4_node_near_closed_form(figures_dir):
    _, data = _read_csv(figures_dir / "fig4.csv")
    psi1 = data[:, 2]
    signs = np.sign(psi1[np.abs(psi1) > 1e-12])
    flips = np.nonzero(signs[:-1] != signs[1:])[0]
    assert len(flips) == 1
    assert abs(data[flips[0], 0] - 0.6822591268) < 0.005
