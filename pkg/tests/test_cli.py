"""Exit codes, output formats, and configuration precedence of the CLI."""

import json
import shutil
import subprocess
import sys

import pytest

from pschen import acceptance, cli
from pschen.acceptance import CriterionResult
from pschen.errors import PrecisionExhaustionError


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    """Keep CLI runs away from the real home, config, and cache."""
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    monkeypatch.delenv("PSCHEN_CACHE", raising=False)
    return tmp_path


def write_config(tmp_path, body: str) -> None:
    cfg_dir = tmp_path / "xdg" / "pschen"
    cfg_dir.mkdir(parents=True, exist_ok=True)
    (cfg_dir / "config").write_text(body)


def test_pairs_text_output(capsys):
    assert cli.main(["pairs", "--iterate", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "1/30 13/15"
    assert out[1] == f"decimal: {1 / 30:.12g} {13 / 15:.12g}"


def test_pairs_eph(capsys):
    assert cli.main(["pairs", "--eph", "1/8"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "1/8 5/8"


def test_bracket_json_round_trip(capsys):
    assert cli.main(["bracket", "--xi", "0.47284", "--tol", "1e-9", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {
        "artifact_version",
        "command",
        "inputs",
        "results",
        "runtime_seconds",
    }
    assert doc["command"] == "bracket"
    assert doc["inputs"] == {"xi": 0.47284, "tol": 1e-9}
    assert doc["results"]["total"] == pytest.approx(0.000109508, abs=1e-8)
    assert doc["results"]["quad_error"] <= 1e-9
    assert isinstance(doc["runtime_seconds"], float)
    # serialization is lossless for every reported number
    assert json.loads(json.dumps(doc)) == doc


def test_level_json(capsys):
    argv = ["level", "--gamma", "274877906943/274877906944", "--json"]
    assert cli.main(argv) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["feasible"] is True
    assert 0.44 < doc["results"]["xi"] < 0.48
    assert doc["inputs"]["pair_typeI"] == "a36"


def test_level_out_of_window(capsys):
    assert cli.main(["level", "--gamma", "0.9999", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["feasible"] is False
    assert doc["results"]["xi"] == 0.0


def test_level_single_pair_name(capsys):
    assert cli.main(["level", "--gamma", "0.95", "--pairs", "eph", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["inputs"]["pair_typeI"] == "eph"
    assert doc["inputs"]["pair_typeII"] == "eph"
    assert doc["results"]["xi"] == pytest.approx(5 * 0.95 / 2 - 2, abs=1e-12)


def test_bv_csv_byte_identical(capsys):
    argv = ["bv", "--gamma", "0.9", "--x", "2000", "--D", "6", "--l", "1", "--csv"]
    assert cli.main(argv) == 0
    first = capsys.readouterr().out
    assert cli.main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "d,count,expected,abs_dev"
    assert len(lines) == 1 + 6  # l=1 is coprime to every d <= 6
    assert first.endswith("\n")


def test_sievefn_and_ndiag_text(capsys):
    assert cli.main(["sievefn", "--kind", "F", "--s", "2.5"]) == 0
    out = capsys.readouterr().out
    assert "branch = F_le3" in out
    assert cli.main(["ndiag", "--J", "8", "--N", "8", "--alpha", "0.8", "--delta", "0.5"]) == 0
    assert "count = 98" in capsys.readouterr().out


def test_exit_code_2_domain_error(capsys):
    assert cli.main(["ps-count", "--gamma", "1.5", "--x", "100"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("pschen: error:")
    assert cli.main(["bracket", "--xi", "0.2"]) == 2
    assert cli.main(["ndiag", "--J", "9999", "--N", "9999", "--alpha", "0.8", "--delta", "1"]) == 2


def test_exit_code_3_precision_exhaustion(capsys, monkeypatch):
    def explode(*a, **kw):
        raise PrecisionExhaustionError("still ambiguous at 64 bits")

    monkeypatch.setattr(cli, "pi_gamma", explode)
    assert cli.main(["ps-count", "--gamma", "0.9", "--x", "100"]) == 3
    assert "precision exhausted" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus-command"],
        ["bracket"],  # missing required --xi
        ["bracket", "--xi", "0.47", "--json", "--csv"],  # mutually exclusive
        ["ndiag", "--J", "x", "--N", "1", "--alpha", "0.8", "--delta", "1"],
    ],
)
def test_exit_code_64_usage(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 64
    capsys.readouterr()


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == "pschen 0.1.0"


def stub_results(*results):
    def fake_verify_all(quick=False):
        return list(results)

    return fake_verify_all


def test_verify_all_pass_and_fail(capsys, monkeypatch):
    good = CriterionResult("alpha", True, "ok", 0.01)
    bad = CriterionResult("beta", False, "off by 1", 0.02)
    monkeypatch.setattr(acceptance, "verify_all", stub_results(good))
    assert cli.main(["verify-all"]) == 0
    out = capsys.readouterr().out
    assert "PASS alpha (0.01s): ok" in out
    assert "1/1 criteria passed" in out

    monkeypatch.setattr(acceptance, "verify_all", stub_results(good, bad))
    assert cli.main(["verify-all"]) == 1
    out = capsys.readouterr().out
    assert "FAIL beta (0.02s): off by 1" in out
    assert "1/2 criteria passed" in out


def test_verify_all_csv_excludes_runtime(capsys, monkeypatch):
    res = CriterionResult("alpha", True, "ok", 0.4567)
    monkeypatch.setattr(acceptance, "verify_all", stub_results(res))
    assert cli.main(["verify-all", "--csv"]) == 0
    out = capsys.readouterr().out
    assert out == "name,passed,detail\nalpha,True,ok\n"


def test_verify_all_quick_flag_plumbed(monkeypatch, capsys):
    seen = {}

    def fake_verify_all(quick=False):
        seen["quick"] = quick
        return [CriterionResult("alpha", True, "ok", 0.0)]

    monkeypatch.setattr(acceptance, "verify_all", fake_verify_all)
    assert cli.main(["verify-all", "--quick"]) == 0
    capsys.readouterr()
    assert seen["quick"] is True


def test_config_file_sets_output_and_cache(tmp_path, capsys):
    cache = tmp_path / "cfg-cache"
    write_config(tmp_path, f"# comment line\noutput = json\ncache_dir = {cache}\n")
    assert cli.main(["chen-weights", "--gamma", "0.95", "--x", "1000"]) == 0
    doc = json.loads(capsys.readouterr().out)  # output=json came from the config
    assert doc["results"]["S"] >= 1
    assert (cache / "spf-1000.bin").is_file()


def test_env_overrides_config_cache(tmp_path, capsys, monkeypatch):
    cfg_cache = tmp_path / "cfg-cache"
    env_cache = tmp_path / "env-cache"
    write_config(tmp_path, f"cache_dir = {cfg_cache}\n")
    monkeypatch.setenv("PSCHEN_CACHE", str(env_cache))
    assert cli.main(["chen-weights", "--gamma", "0.95", "--x", "1000"]) == 0
    capsys.readouterr()
    assert (env_cache / "spf-1000.bin").is_file()
    assert not cfg_cache.exists()


def test_flag_overrides_env_cache(tmp_path, capsys, monkeypatch):
    env_cache = tmp_path / "env-cache"
    flag_cache = tmp_path / "flag-cache"
    monkeypatch.setenv("PSCHEN_CACHE", str(env_cache))
    argv = [
        "chen-weights",
        "--gamma",
        "0.95",
        "--x",
        "1000",
        "--cache-dir",
        str(flag_cache),
    ]
    assert cli.main(argv) == 0
    capsys.readouterr()
    assert (flag_cache / "spf-1000.bin").is_file()
    assert not env_cache.exists()


def test_csv_flag_overrides_config_output(tmp_path, capsys):
    write_config(tmp_path, "output = json\n")
    assert cli.main(["pairs", "--iterate", "0", "--csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "kappa,ell,kappa_decimal,ell_decimal"


def test_malformed_config_rejected(tmp_path, capsys):
    write_config(tmp_path, "this line has no equals sign\n")
    assert cli.main(["pairs", "--iterate", "0"]) == 2
    assert "expected key=value" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, capsys):
    write_config(tmp_path, "colour = green\n")
    assert cli.main(["pairs", "--iterate", "0"]) == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_config_tol_window_enforced(tmp_path, capsys):
    write_config(tmp_path, "default_tol = 0.1\n")
    assert cli.main(["pairs", "--iterate", "0"]) == 2
    assert "default_tol" in capsys.readouterr().err


def test_config_non_numeric_value_rejected(tmp_path, capsys):
    write_config(tmp_path, "base_precision = many\n")
    assert cli.main(["pairs", "--iterate", "0"]) == 2
    capsys.readouterr()


def test_twin_constant_and_expsum_smoke(capsys):
    assert cli.main(["twin-constant", "--prime-bound", "10000", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["value"] == pytest.approx(0.66016, abs=1e-4)
    argv = [
        "expsum",
        "--X", "1000", "--X1", "2000", "--d", "5", "--l", "2", "--h", "1",
        "--gamma", "0.9", "--json",
    ]
    assert cli.main(argv) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"]["magnitude"] <= doc["results"]["n_terms"] + 1
    assert doc["results"]["lemma_bound"] > 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pschen", "pairs", "--iterate", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "1/30 13/15"


def test_console_script_installed():
    exe = shutil.which("pschen")
    assert exe, "console script pschen not on PATH"
    proc = subprocess.run([exe, "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "pschen 0.1.0"
