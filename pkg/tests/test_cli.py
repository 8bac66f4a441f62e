import json
import math

import pytest

from specon.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBasicCommands:
    def test_basis_zn4(self, capsys):
        code, out, _ = run_cli(capsys, "basis", "--space", "zn:N=4,d=1")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert len(doc["rows"]) == 4

    def test_basis_needs_cutoff_on_torus(self, capsys):
        code, _, err = run_cli(capsys, "basis", "--space", "torus:d=1")
        assert code == 1
        assert "cutoff" in err

    def test_weyl_single_lambda(self, capsys):
        code, out, _ = run_cli(capsys, "weyl", "--space", "torus:d=2", "--lambda", "5")
        assert code == 0
        doc = json.loads(out)
        assert doc["rows"][0]["count"] == 81

    def test_weyl_table(self, capsys):
        code, out, _ = run_cli(capsys, "weyl", "--space", "sphere2",
                               "--lambda-max", "4", "--lambda-step", "1")
        assert code == 0
        rows = json.loads(out)["rows"]
        # degrees with sqrt(l(l+1)) <= lambda: 0; 0,1; 0..2; 0..3
        assert [r["count"] for r in rows] == [1, 4, 9, 16]

    def test_homogeneity_pass_and_fail_exit_codes(self, capsys):
        code, out, _ = run_cli(capsys, "homogeneity", "--space", "sphere2",
                               "--spectrum", "level:l=2")
        assert code == 0
        assert json.loads(out)["reports"][0]["holds"]
        # an impossible tolerance flips the exit code to 2
        code, out, _ = run_cli(capsys, "homogeneity", "--space", "sphere2",
                               "--spectrum", "level:l=2", "--tol", "1e-30")
        assert code == 2

    def test_concentrate(self, capsys):
        code, out, _ = run_cli(capsys, "concentrate", "--space", "torus:d=1",
                               "--spectrum", "ball:2", "--region", "arc:0:3.141592653589793",
                               "--quad-oversample", "64")
        assert code == 0
        doc = json.loads(out)["result"]
        assert doc["size"] == 5
        assert len(doc["eigenvalues"]) == 5
        assert all(0 <= v <= 1 for v in doc["eigenvalues"])
        assert len(doc["entries"]) == 25
        assert doc["trace"] == pytest.approx(2.5, abs=1e-9)

    def test_lambda_q(self, capsys):
        code, out, _ = run_cli(capsys, "lambda-q", "--space", "zn:N=256,d=1",
                               "--n", "256", "--q", "4", "--trials", "5",
                               "--ascent-iterations", "40")
        assert code == 0
        doc = json.loads(out)["result"]
        assert doc["delta"] == pytest.approx(1 / 16)
        assert doc["c_lower"] <= doc["c_interp"] * (1 + 1e-9)

    def test_gmpt(self, capsys):
        code, out, _ = run_cli(capsys, "gmpt", "--space", "torus:d=1", "--n", "8",
                               "--trials", "8", "--subsets", "16")
        assert code == 0
        doc = json.loads(out)["result"]
        assert abs(len(doc["indices"]) - 4) <= math.sqrt(8)
        assert doc["k_observed"] >= (2 * math.pi) ** -0.5 - 1e-12

    def test_donoho_stark(self, capsys):
        code, out, _ = run_cli(capsys, "donoho-stark", "--space", "zn:N=16,d=1",
                               "--trials", "20")
        assert code == 0
        reports = json.loads(out)["reports"]
        assert len(reports) == 20
        assert all(r["holds"] for r in reports)


class TestCheckCommand:
    def test_homogeneous_acceptance_example(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--inequality", "homogeneous",
                               "--space", "sphere2", "--region", "cap:1.5708",
                               "--spectrum", "level:ℓ=1")
        assert code == 0
        rep = json.loads(out)["reports"][0]
        assert rep["holds"] is True

    def test_lca(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--inequality", "lca",
                               "--space", "zn:N=16,d=1", "--trials", "10")
        assert code == 0
        assert len(json.loads(out)["reports"]) == 10

    def test_bourgain(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--inequality", "bourgain",
                               "--space", "zn:N=64,d=1", "--q", "4",
                               "--region", "set:{0,1,2,3,4,5,6,7}", "--trials", "5")
        assert code == 0
        assert all(r["holds"] for r in json.loads(out)["reports"])

    def test_prop_supnorm_covering_joint(self, capsys):
        for name, spectrum in [("prop", "ball:2"), ("supnorm", "ball:2"),
                               ("covering", "ball:2"), ("joint", "joint:[(0,),(1,)]")]:
            code, out, _ = run_cli(capsys, "check", "--inequality", name,
                                   "--space", "torus:d=1", "--region", "arc:0:4",
                                   "--spectrum", spectrum, "--trials", "3")
            assert code == 0, f"{name} failed"
            assert all(r["holds"] or any(str(c).startswith("vacuous") for c in r["caveats"])
                       for r in json.loads(out)["reports"])

    def test_random_manifold(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--inequality", "random-manifold",
                               "--space", "torus:d=1", "--region", "arc:0:6",
                               "--n", "8", "--trials", "3", "--subsets", "8")
        assert code == 0

    def test_slepian_mode(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--inequality", "homogeneous",
                               "--space", "sphere2", "--region", "cap:1.5708",
                               "--spectrum", "level:l=1", "--f-mode", "slepian")
        assert code == 0

    def test_tails_mode(self, capsys):
        code, out, _ = run_cli(capsys, "check", "--inequality", "prop",
                               "--space", "torus:d=1", "--region", "arc:0:5",
                               "--spectrum", "ball:1", "--f-mode", "tails",
                               "--trials", "3")
        assert code == 0
        reports = json.loads(out)["reports"]
        assert any(r["inputs"]["epsilon_prime"] > 0 for r in reports)


class TestErrors:
    def test_bad_space_descriptor(self, capsys):
        code, _, err = run_cli(capsys, "basis", "--space", "moebius:d=2")
        assert code == 1
        assert "moebius:d=2" in err

    def test_bad_region_descriptor(self, capsys):
        code, _, err = run_cli(capsys, "check", "--inequality", "prop",
                               "--space", "torus:d=1", "--region", "blob:9",
                               "--spectrum", "ball:1")
        assert code == 1
        assert "blob:9" in err

    def test_bourgain_without_q(self, capsys):
        code, _, err = run_cli(capsys, "check", "--inequality", "bourgain",
                               "--space", "zn:N=16,d=1")
        assert code == 1
        assert "--q" in err


class TestDeterminismAndFormats:
    def test_byte_identical_json(self, capsys):
        args = ["check", "--inequality", "homogeneous", "--space", "sphere2",
                "--region", "cap:0.9", "--spectrum", "level:l=2", "--trials", "4",
                "--seed", "321"]
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_byte_identical_csv(self, capsys):
        args = ["donoho-stark", "--space", "zn:N=16,d=1", "--trials", "50",
                "--format", "csv", "--seed", "7"]
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2
        lines = out1.strip().split("\n")
        assert lines[0] == "schema_version,name,lhs,rhs,holds,slack,seed,inputs,caveats"
        assert len(lines) == 51

    def test_different_seeds_differ(self, capsys):
        args = ["donoho-stark", "--space", "zn:N=16,d=1", "--trials", "5"]
        _, out1, _ = run_cli(capsys, *args, "--seed", "1")
        _, out2, _ = run_cli(capsys, *args, "--seed", "2")
        assert out1 != out2

    def test_output_file_and_env_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("SPECON_OUTPUT_DIR", str(tmp_path))
        code, out, _ = run_cli(capsys, "basis", "--space", "zn:N=4,d=1",
                               "--output", "basis.json")
        assert code == 0
        assert out == ""
        assert json.loads((tmp_path / "basis.json").read_text())["rows"]

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("space = zn:N=16,d=1\ntrials = 5\nseed = 99\n")
        code, out, _ = run_cli(capsys, "donoho-stark", "--config", str(cfg))
        assert code == 0
        assert len(json.loads(out)["reports"]) == 5
        # explicit flags override config values
        code, out, _ = run_cli(capsys, "donoho-stark", "--config", str(cfg),
                               "--trials", "2")
        assert len(json.loads(out)["reports"]) == 2

    def test_json_seventeen_digit_floats(self, capsys):
        _, out, _ = run_cli(capsys, "weyl", "--space", "torus:d=1", "--lambda", "2")
        assert "0.79577471545947676" in out  # 5/(2 pi) at 17 significant digits
