import json
import math

import pytest

from asymfield import __version__
from asymfield.cli import main
from asymfield.netlist import serialize
from asymfield.templates import template_ring


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rate_ring(capsys):
    code, out, _ = run(capsys, "rate", "--template", "ring", "--sigma", "0.98", "--delta0", "0")
    assert code == 0
    data = json.loads(out)
    assert data["version"] == __version__
    assert data["gamma_ratio"] == pytest.approx(99.0, abs=1e-9)
    assert math.hypot(data["f_L_re"], data["f_L_im"]) ** 2 == pytest.approx(99.0)


def test_rate_set_and_analytic(capsys):
    code, out, _ = run(capsys, "rate", "--template", "ring", "--set", "sigma=0.9", "--set", "delta0=pi",
                       "--engine", "analytic")
    assert code == 0
    assert json.loads(out)["gamma_ratio"] == pytest.approx(0.1 / 1.9)


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "rate", "--template", "ring", "--sigma", "1.2")[0] == 1
    code, _, err = run(capsys, "rate", "--template", "ring", "--sigma", "1")
    assert code == 2 and "singular" in err
    assert run(capsys, "rate", "--template", "nope")[0] == 1
    assert run(capsys, "rate", "--template", "ring", "--colour", "1")[0] == 1
    assert run(capsys, "rate", "--netlist", str(tmp_path / "missing.net"))[0] == 1
    bad = tmp_path / "bad.net"
    bad.write_text(serialize(template_ring(0.9, 0.0)).replace("sigma=0.9", "sigma=x"))
    code, _, err = run(capsys, "rate", "--netlist", str(bad))
    assert code == 1 and "line 3" in err


def test_rate_netlist(capsys, tmp_path):
    path = tmp_path / "ring.net"
    path.write_text(serialize(template_ring(0.98, 0.0)))
    code, out, _ = run(capsys, "rate", "--netlist", str(path), "--set", "c.sigma=0.9")
    assert code == 0
    assert json.loads(out)["gamma_ratio"] == pytest.approx(19.0)


def test_sweep_to_file(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--template", "ring", "--vary", "delta0=0:2pi:9", "--out", str(out),
                     "--observables", "gamma_ratio,P_L", "--check")
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "delta0,gamma_ratio,P_L,gamma_ratio_check"
    assert len(lines) == 10


def test_sweep_partial_nan(capsys):
    code, out, err = run(capsys, "sweep", "--template", "ring", "--vary", "sigma=0.5:1:3")
    assert code == 3
    assert "nan" in out and "singular" in err


def test_sweep_needs_axis(capsys):
    assert run(capsys, "sweep", "--template", "ring")[0] == 1


def test_figure_writes_sidecar(capsys, tmp_path):
    out = tmp_path / "fig5.csv"
    code, _, _ = run(capsys, "figure", "fig5", "--out", str(out), "--engine", "analytic")
    assert code == 0
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["preset"] == "fig5" and side["engine"] == "analytic" and side["rows"] == 1025
    assert len(out.read_text().splitlines()) == 1026


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    out = capsys.readouterr().out
    assert __version__ in out and "1.054571817e-34" in out


def test_selfcheck_fault_injection(capsys):
    code, out, _ = run(capsys, "selfcheck", "--debug-flip-coupler-sign")
    assert code == 4
    assert "FAIL oracle" in out
