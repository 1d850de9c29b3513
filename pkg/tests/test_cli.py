import csv
import json
import subprocess
import sys

import pytest

from wgschwarz import cli

# golden headers per command
GOLDEN = {
    "modes": "family,index,r,beta_re,beta_im,kappa_re,kappa_im,lambda_re,lambda_im,classification,rho_limit",
    "limspec": "r,family,a_re,a_im,b_re,b_im,rho_limit,outside_theorem,skipped",
    "radius": "r,family,N,rho,rho_limit,outside_theorem,near_nilpotent,skipped",
    "simulate": "N,method,iteration,residual",
    "table": "sigma,k_re,k_im,mode_family,mode_r,N5,N10",
    "dictionary": "r,pair,a_residual,b_residual,rho_a,rho_b,rho_difference,skipped",
    "nilpotency": "family,r,N,a_abs,degree,bounded",
}
FAST = ["--r-step", "2.5", "--N-list", "5,10"]


@pytest.mark.parametrize("command", sorted(GOLDEN))
def test_headers_and_manifest(command, tmp_path):
    assert cli.run([command, *FAST, "--svg", "--out", str(tmp_path)]) == 0
    text = (tmp_path / f"{command}.csv").read_text(encoding="utf-8")
    lines = text.splitlines()
    assert lines[0] == GOLDEN[command]
    widths = {len(row) for row in csv.reader(lines)}
    assert len(widths) == 1
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    on_disk = sorted(p.name for p in tmp_path.iterdir())
    assert sorted(manifest["files"]) == on_disk
    assert manifest["command"] == command and manifest["seed"] == 0


def test_nan_only_with_skipped(tmp_path):
    assert cli.run(["limspec", "--r-step", "0.5", "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "limspec.csv").open()))
    for row in rows:
        if "nan" in row.values():
            assert row["skipped"] == "true"
    assert any(row["skipped"] == "true" for row in rows)


def test_table_layout(tmp_path):
    args = ["table", "--mode", "weak", "--sigma-list", "0,inv_k,1,k", "--k-list", "5,10", "--N-list", "5,10,20"]
    assert cli.run(args + ["--out", str(tmp_path)]) == 0
    rows = list(csv.reader((tmp_path / "table.csv").open()))
    assert rows[0][-3:] == ["N5", "N10", "N20"]
    assert [(r[0], r[1]) for r in rows[1:]] == [(s, k) for s in ("0", "inv_k", "1", "k") for k in ("5.0", "10.0")]


def test_dnc_literal(tmp_path):
    # GMRES(1) on a mode near cut-off stalls well short of 1e-5
    cfg = tmp_path / "c.ini"
    cfg.write_text("[sweep]\nrestart = 1\nmode_r = 9.9\n")
    assert cli.run(["table", "--config", str(cfg), "--N-list", "40", "--out", str(tmp_path)]) == 0
    rows = list(csv.reader((tmp_path / "table.csv").open()))
    assert rows[1][-1] == "DNC"


def test_nilpotency_dtn_check(tmp_path, capsys):
    assert cli.run(["nilpotency", "--transmission", "dtn", "--N", "7", "--r-step", "2", "--check",
                    "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "nilpotency.csv").open()))
    assert rows and all(int(r["degree"]) <= 7 for r in rows)
    assert "check nilpotency: PASS" in capsys.readouterr().out


def test_exit_codes(tmp_path):
    out = ["--out", str(tmp_path)]
    assert cli.run(["limspec", "--k-im", "0.0001", "--check", *out]) == cli.EXIT_CHECK
    assert cli.run(["limspec", "--mode", "strong", "--total-length", "12", "--L", "1", *out]) == cli.EXIT_CONFIG
    assert cli.run(["limspec", "--transmission", "pml", "--pml-sigma", "0", "--pml-len", "1", *out]) == cli.EXIT_CONFIG
    assert cli.run(["radius", "--N-list", "5,1200", "--r-step", "5", *out]) == cli.EXIT_NUMERIC
    assert cli.run(["nilpotency", "--N", "5", "--N-list", "5", *out]) == cli.EXIT_CONFIG
    with pytest.raises(SystemExit) as err:
        cli.run(["limspec", "--bogus"])
    assert err.value.code == 2


def test_dry_run_writes_nothing(tmp_path, capsys):
    target = tmp_path / "out"
    assert cli.run(["limspec", "--dry-run", "--k-im", "1", "--out", str(target)]) == 0
    assert not target.exists()
    assert "k_im = 1.0" in capsys.readouterr().out


def test_console_script_module(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "wgschwarz.cli", "modes", "--section", "disk:1",
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    rows = list(csv.DictReader((tmp_path / "modes.csv").open()))
    assert float(rows[0]["r"]) == pytest.approx(1.8411837813406593)  # j'_{1,1}


def test_mask_section(tmp_path):
    mask = tmp_path / "ring.txt"
    mask.write_text("h=0.1\n" + "\n".join(["11111", "10001", "10001", "10001", "11111"]) + "\n")
    assert cli.run(["modes", "--section", f"mask:{mask}", "--families", "te,tm,tem", "--max-modes", "3",
                    "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "modes.csv").open()))
    assert [r["family"] for r in rows].count("tem") == 1
