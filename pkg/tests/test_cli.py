import json
import subprocess
import sys

import pytest

from stackelberg_pow.cli import EXIT_INVALID, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_attack_prob_text(capsys):
    code, out, _ = run(capsys, "attack-prob", "--h", "1", "--H", "10", "--z", "4")
    assert code == EXIT_OK
    assert out.strip() == "P(4) = 0.005456"


def test_attack_prob_simulated_json(capsys):
    code, out, _ = run(capsys, "--json", "attack-prob", "--h", "1", "--H", "10", "--z", "2",
                       "--simulate", "--trials", "20000", "--seed", "3")
    assert code == EXIT_OK
    doc = json.loads(out)
    sim = doc["simulation"]
    assert sim["trials"] == 20000 and sim["seed"] == 3
    assert abs(sim["probability"] - doc["probability"]) <= 3 * sim["half_width"]


def test_attack_prob_invalid(capsys):
    code, _, err = run(capsys, "attack-prob", "--h", "5", "--H", "2", "--z", "4")
    assert code == EXIT_INVALID
    assert err.startswith("error:")


def test_nash_symmetric_pair(capsys):
    code, out, _ = run(capsys, "nash", "--lambdas", "1,1", "--reward", "1", "--blocks-per-day", "1")
    assert code == EXIT_OK
    assert "strategies = (0.25, 0.25)" in out
    assert "participants = {0, 1}" in out


def test_nash_zero_reward_warns(capsys):
    code, _, err = run(capsys, "nash", "--lambdas", "1,2", "--reward", "0")
    assert code == EXIT_OK
    assert "warning" in err


def test_nash_bad_lambda_list(capsys):
    code, _, _ = run(capsys, "nash", "--lambdas", "1,x", "--reward", "1")
    assert code == EXIT_INVALID


def test_missing_subcommand_is_invalid(capsys):
    assert run(capsys)[0] == EXIT_INVALID


def test_stackelberg_degenerate_config(capsys, tmp_path):
    cfg = tmp_path / "low.cfg"
    cfg.write_text("alpha = 2\nbeta = 0.001\n", encoding="utf-8")
    code, out, err = run(capsys, "--json", "stackelberg", "--config", str(cfg), "--lambdas", "1,1")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["reward"] == 0.0 and doc["degenerate"]
    assert "degenerate" in err


def test_stackelberg_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("n_miners = 40\nalpha = 2\n", encoding="utf-8")
    code, out, _ = run(capsys, "--json", "stackelberg", "--config", str(cfg), "--alpha", "10000")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert len(doc["miner_profits"]) == 40
    assert doc["reward"] > 0


def test_stackelberg_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n", encoding="utf-8")
    assert run(capsys, "stackelberg", "--config", str(cfg))[0] == EXIT_INVALID


def test_stackelberg_missing_config_file(capsys, tmp_path):
    assert run(capsys, "stackelberg", "--config", str(tmp_path / "nope.cfg"))[0] == EXIT_INVALID


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "--json", "stackelberg", "--n-miners", "30", "--seed", "5")
    doc = json.loads(out)
    assert json.dumps(doc, indent=2, sort_keys=True) == out.rstrip("\n")


def test_identical_invocations_give_identical_bytes(capsys, tmp_path):
    argv = ["sweep", "--kind", "spread", "--values", "1,3", "--n-miners", "100", "--runs", "3"]
    run(capsys, *argv, "--out", str(tmp_path / "a.csv"))
    run(capsys, *argv, "--out", str(tmp_path / "b.csv"))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_sweep_writes_csv(capsys, tmp_path):
    out_file = tmp_path / "sub" / "pop.csv"
    code, out, _ = run(capsys, "sweep", "--kind", "population", "--values", "60,120",
                       "--runs", "2", "--out", str(out_file))
    assert code == EXIT_OK
    lines = out_file.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("swept_param,value,participation")
    assert len(lines) == 3
    assert "wrote 2 rows" in out


def test_sweep_attack(capsys, tmp_path):
    out_file = tmp_path / "attack.csv"
    code, _, _ = run(capsys, "sweep", "--kind", "attack", "--values", "10,20", "--out", str(out_file))
    assert code == EXIT_OK
    assert out_file.read_text(encoding="utf-8").splitlines()[1] == "10,0.005456"


def test_sweep_output_directory_override(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("STACKELBERG_POW_OUTDIR", str(tmp_path))
    code, _, _ = run(capsys, "sweep", "--kind", "attack", "--values", "10", "--out", "rel.csv")
    assert code == EXIT_OK
    assert (tmp_path / "rel.csv").exists()


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "--json", "verify", "--scenarios", "5", "--trials", "20000")
    assert code == EXIT_OK
    assert all(c["passed"] for c in json.loads(out)["checks"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stackelberg_pow", "attack-prob",
                           "--h", "1", "--H", "20", "--z", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "P(4) = 0.00038715625"
