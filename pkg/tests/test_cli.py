import json

import pytest

from chordalqc.cli import main

FAST_GRID = ["--points-per-decade", "8", "--y-count", "33", "--y-max", "10"]


def run(args):
    return main(args)


def test_maps_list_text(capsys):
    assert run(["maps-list"]) == 0
    out = capsys.readouterr().out
    for name in ("identity", "cayley", "half-strip-g", "perturbed-identity:<c>"):
        assert name in out


def test_maps_list_json(tmp_path):
    out = tmp_path / "maps.json"
    assert run(["maps-list", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert any(e["spec"] == "counterexample-f" for e in doc)


def test_eval_csv(tmp_path):
    out = tmp_path / "jet.csv"
    assert run(["eval", "--map", "square", "--z", "1+0i", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("z_re,z_im,c0_re")
    vals = [float(v) for v in lines[1].split(",")]
    assert vals[2:12:2] == [1.0, 2.0, 2.0, 0.0, 0.0]


def test_norms_identity_zero_rows(tmp_path):
    out = tmp_path / "norms.csv"
    code = run(["norms", "--map", "identity", "--t", "1,0.1,0.01", *FAST_GRID,
                "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].split(",")[:3] == ["t", "beta", "sigma"]
    assert len(lines) == 4
    for line in lines[1:]:
        t, beta, sigma = (float(v) for v in line.split(",")[:3])
        assert beta == 0.0 and sigma == 0.0


def test_horizon_json_and_failure(tmp_path):
    out = tmp_path / "h.json"
    assert run(["horizon", "--map", "perturbed-identity:0.3", "--k", "0.5",
                *FAST_GRID, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert 0 < doc["t_star"] <= 1.0

    out2 = tmp_path / "h2.json"
    code = run(["horizon", "--map", "square", "--k", "0.5", *FAST_GRID,
                "--out", str(out2)])
    assert code == 2
    assert "no horizon at level" in json.loads(out2.read_text())["error"]


def test_evolve_reproducible(tmp_path):
    args = ["evolve", "--map", "perturbed-identity:0.3", "--t", "0.02",
            "--z", "1+1i", "--step", "0.005", *FAST_GRID]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().strip().splitlines()
    assert lines[0] == "s,t,z0_re,z0_im,z_re,z_im,step,residual_estimate"
    assert len(lines) == 6  # 0.02/0.005 steps plus the start row


def test_pde_check_passes(tmp_path):
    out = tmp_path / "pde.json"
    code = run(["pde-check", "--map", "perturbed-identity:0.3", "--samples", "200",
                "--seed", "0", *FAST_GRID, "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] and doc["max_residual"] <= doc["tol"]


def test_extend_values(tmp_path):
    out = tmp_path / "ext.csv"
    code = run(["extend", "--map", "identity", "--z=-0.05+1i;0.5+0i",
                *FAST_GRID, "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3
    r0 = [float(v) for v in lines[1].split(",")]
    assert r0 == [-0.05, 1.0, -0.05, 1.0]


def test_verify_mu_pass_and_exit_codes(tmp_path):
    out = tmp_path / "mu.json"
    code = run(["verify-mu", "--map", "perturbed-identity:0.3", "--k", "0.5",
                "--nx", "9", "--ny", "9", *FAST_GRID, "--summary-only",
                "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["pass"] is True
    assert doc["summary"]["max_mu_formula"] <= 0.25 + 1e-9

    out2 = tmp_path / "mu2.json"
    code = run(["verify-mu", "--map", "square", "--tau", "0.1", "--nx", "7",
                "--ny", "9", *FAST_GRID, "--summary-only", "--out", str(out2)])
    assert code == 2
    assert json.loads(out2.read_text())["summary"]["pass"] is False


def test_trace_check(tmp_path):
    out = tmp_path / "trace.json"
    code = run(["trace-check", "--map", "counterexample-f", "--nx", "9", "--ny", "9",
                *FAST_GRID, "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] and doc["max_difference"] <= 1e-12


def test_carleson_csv_and_json(tmp_path):
    base = ["carleson", "--map", "perturbed-identity:0.3", "--density", "vmoa",
            "--scales", "1,0.25", "--positions", "0", *FAST_GRID]
    out = tmp_path / "c.csv"
    assert run(base + ["--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "scale,center_y,ratio"
    assert len(lines) == 3

    out2 = tmp_path / "c.json"
    assert run(base + ["--format", "json", "--out", str(out2)]) == 0
    doc = json.loads(out2.read_text())
    assert set(doc) >= {"norm_estimate", "per_scale_max", "vanishing"}


def test_mu_tilde_decomposition(tmp_path):
    out = tmp_path / "mt.json"
    code = run(["mu-tilde", "--map", "perturbed-identity:0.3", "--t", "0.25",
                "--scales", "0.125,0.5", *FAST_GRID, "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["boxes"]) == 2
    for box in doc["boxes"]:
        assert box["defect"] <= 1e-9


def test_config_file_defaults_and_flag_priority(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"k": 0.25, "t-max": 0.5}))
    out = tmp_path / "h.json"
    assert run(["horizon", "--map", "identity", "--config", str(cfg), *FAST_GRID,
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["k"] == 0.25 and doc["t_star"] == 0.5
    # explicit flag wins over the config value
    assert run(["horizon", "--map", "identity", "--config", str(cfg), "--k", "0.4",
                *FAST_GRID, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["k"] == 0.4


def test_usage_errors_exit_one(capsys):
    assert run(["eval", "--map", "not-a-map", "--z", "1"]) == 1
    with pytest.raises(SystemExit) as exc:
        run(["eval", "--map", "identity"])  # missing --z
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 1


def test_help_lists_module_defaults(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["verify-mu", "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    assert "1e-05" in text and "1e-06" in text  # fd defaults
    with pytest.raises(SystemExit):
        run(["horizon", "--help"])
    text = capsys.readouterr().out
    assert "0.5" in text and "257" in text and "0.0001" in text


def test_evaluation_error_exit_one(capsys):
    # jet evaluation outside the domain is an evaluation error, not a crash
    assert run(["eval", "--map", "identity", "--z=-1+0i"]) == 1
    err = capsys.readouterr().err
    assert "error" in err
