"""
命令行入口测试：退出码、产物与可重跑性
"""

import json

import pytest

from liouvillekit.exceptions import ConfigFileError
from liouvillekit.main import build_parser, main
from liouvillekit.schemas.montecarlo import McConfig
from liouvillekit.schemas.run_config import DEFAULT_DT, build_model, load_run_config


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestExitCodes:
    """退出码约定"""

    def test_lambda_passes(self, tmp_path):
        assert main(["lambda", "--alpha", "2", "--f", "1", "--out", str(tmp_path)]) == 0
        report = read_json(tmp_path / "report.json")
        assert report["lhs"] == pytest.approx(0.6065306597126334)
        assert report["passed"] is True

    def test_missing_subcommand(self):
        assert main([]) == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-command"])
        assert exc.value.code == 2

    def test_size_guard(self, tmp_path):
        code = main(["identity", "--nx", "16", "--ny", "16", "--nt", "17", "--dt", "0.1", "--out", str(tmp_path)])
        assert code == 2
        assert read_json(tmp_path / "report.json")["error"] == "ConfigurationError"

    def test_stochastic_command_requires_seed(self, tmp_path):
        assert main(["mc-liouville", "--nx", "4", "--ny", "4", "--out", str(tmp_path)]) == 3

    def test_missing_config_file(self, tmp_path):
        assert main(["lambda", "--config", str(tmp_path / "absent.ini"), "--out", str(tmp_path)]) == 3

    def test_invalid_config_value(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[lattice]\nnx = 1\n", encoding="utf-8")
        assert main(["lambda", "--config", str(ini), "--out", str(tmp_path)]) == 3

    def test_invalid_parameter_value(self, tmp_path):
        assert main(["kernel", "--x0", "1;2", "--nx", "4", "--ny", "4", "--out", str(tmp_path)]) == 3

    def test_thermalization_exceeding_sweeps(self, tmp_path):
        code = main(["mc-liouville", "--nx", "4", "--ny", "4", "--sweeps", "100", "--thermalization", "200",
                     "--seed", "1", "--out", str(tmp_path)])
        assert code == 3
        report = read_json(tmp_path / "report.json")
        assert report["error"] == "ConfigFileError"
        assert any("thermalization" in msg for msg in report["errors"])

    def test_too_few_batches(self, tmp_path):
        code = main(["mc-mapped", "--nx", "4", "--ny", "4", "--sweeps", "400", "--thermalization", "100",
                     "--batches", "10", "--seed", "1", "--out", str(tmp_path)])
        assert code == 3

    def test_pinned_site_outside_lattice(self, tmp_path):
        code = main(["mc-liouville", "--nx", "4", "--ny", "4", "--x0", "9,9", "--seed", "1", "--out", str(tmp_path)])
        assert code == 3

    def test_compare_rejects_invalid_chain(self, tmp_path):
        code = main(["compare", "--nx", "4", "--ny", "4", "--sweeps", "50", "--thermalization", "50",
                     "--seed", "1", "--out", str(tmp_path)])
        assert code == 3

    def test_negative_kernel_time(self, tmp_path):
        assert main(["kernel", "--nx", "4", "--ny", "4", "--t", "-0.5", "--out", str(tmp_path)]) == 3

    def test_failed_run_updates_manifest(self, tmp_path):
        main(["identity", "--nx", "16", "--ny", "16", "--nt", "17", "--dt", "0.1", "--out", str(tmp_path)])
        manifest = read_json(tmp_path / "manifest.json")
        assert manifest["status"] == "failed"
        assert manifest["exit_code"] == 2

    def test_every_command_has_parser(self):
        parser = build_parser()
        for name in ("kernel", "walk", "identity", "detk", "lambda", "mc-liouville", "mc-mapped", "compare", "verify-all"):
            args = parser.parse_args([name])
            assert args.subcommand == name


class TestArtifacts:
    """产物与清单"""

    KERNEL_ARGS = ["kernel", "--nx", "8", "--ny", "8", "--a", "0.5", "--t", "0.1"]
    MC_ARGS = ["mc-liouville", "--nx", "4", "--ny", "4", "--b", "0.5", "--sweeps", "400",
               "--thermalization", "100", "--seed", "3"]

    def test_kernel_outputs(self, tmp_path):
        code = main(self.KERNEL_ARGS + ["--out", str(tmp_path)])
        manifest = read_json(tmp_path / "manifest.json")
        assert manifest["subcommand"] == "kernel"
        assert manifest["exit_code"] == code
        assert manifest["status"] == ("passed" if code == 0 else "failed")
        assert (tmp_path / "kernel.csv").exists()
        assert (tmp_path / "config.ini").exists()

    def test_kernel_table_is_deterministic(self, tmp_path):
        main(self.KERNEL_ARGS + ["--out", str(tmp_path / "first")])
        main(self.KERNEL_ARGS + ["--out", str(tmp_path / "second")])
        first = (tmp_path / "first" / "kernel.csv").read_bytes()
        assert first == (tmp_path / "second" / "kernel.csv").read_bytes()

    def test_mc_rerun_from_written_config(self, tmp_path):
        assert main(self.MC_ARGS + ["--out", str(tmp_path / "first")]) == 0
        config = tmp_path / "first" / "config.ini"
        assert main(["mc-liouville", "--config", str(config), "--out", str(tmp_path / "second")]) == 0
        first = (tmp_path / "first" / "observables.csv").read_bytes()
        assert first == (tmp_path / "second" / "observables.csv").read_bytes()
        report = read_json(tmp_path / "second" / "report.json")
        assert report["seed"] == 3
        assert report["kind"] == "liouville"

    def test_manifest_digest_ignores_output_timestamp(self, tmp_path):
        main(["lambda", "--out", str(tmp_path / "first")])
        main(["lambda", "--out", str(tmp_path / "second")])
        first = read_json(tmp_path / "first" / "manifest.json")
        second = read_json(tmp_path / "second" / "manifest.json")
        assert first["config"]["couplings"] == second["config"]["couplings"]
        assert first["config"]["out"] != second["config"]["out"]


class TestVerifyAll:
    """verify-all 子命令"""

    def test_selected_checks(self, tmp_path):
        code = main(["verify-all", "--checks", "lambda_identity,grand_canonical_series",
                     "--workers", "1", "--out", str(tmp_path)])
        assert code == 0
        report = read_json(tmp_path / "report.json")
        assert [c["name"] for c in report["checks"]] == ["grand_canonical_series", "lambda_identity"]
        assert report["summary"]["passed"] is True

    def test_unknown_check(self, tmp_path):
        assert main(["verify-all", "--checks", "bogus", "--out", str(tmp_path)]) == 2


class TestRunConfig:
    """运行配置的组装与校验"""

    def test_time_axis_without_step_uses_default(self):
        config = load_run_config("identity", overrides={"nx": 3, "ny": 3, "nt": 5})
        assert config.lattice.dt == DEFAULT_DT
        assert load_run_config("identity", overrides={"nt": 5, "dt": 0.05}).lattice.dt == 0.05
        assert load_run_config("identity").lattice.nt == 0

    def test_identity_with_time_axis_only(self, tmp_path):
        assert main(["identity", "--nx", "3", "--ny", "3", "--samples", "2", "--out", str(tmp_path / "implicit")]) == 0
        assert main(["identity", "--nx", "3", "--ny", "3", "--nt", "5", "--samples", "2",
                     "--out", str(tmp_path / "explicit")]) == 0
        implicit = read_json(tmp_path / "implicit" / "report.json")
        explicit = read_json(tmp_path / "explicit" / "report.json")
        assert explicit["cases"] == implicit["cases"]
        assert read_json(tmp_path / "explicit" / "manifest.json")["config"]["lattice"]["dt"] == DEFAULT_DT

    def test_build_model_reports_config_error(self):
        with pytest.raises(ConfigFileError) as exc:
            build_model(McConfig, sweeps=100, thermalization=200)
        assert exc.value.exit_code == 3
        assert exc.value.context["errors"]

    def test_timeline_rejects_negative_step(self):
        config = load_run_config("kernel", overrides={"nx": 4, "ny": 4})
        assert config.timeline(3, 0.1).spacetime_shape == (3, 4, 4)
        with pytest.raises(ConfigFileError):
            config.timeline(3, -0.1)
