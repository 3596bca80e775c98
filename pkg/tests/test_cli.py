import json
import math

import pytest

from modframe import GridSpec, box_window, gaussian, sine_bump
from modframe.cli import main
from modframe.config import DEFAULTS, ConfigError, parse_config, parse_config_text, with_defaults
from modframe.hilbert import BiSequence
from modframe.modspace import StftGrid
from modframe.special import rademacher
from modframe.verify import CHECK_NAMES

SMALL = ["--grid-l", "512", "--grid-dx", "0.015625"]


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# config

def test_empty_config_gives_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, "c.json", ""))
    assert cfg.grid == GridSpec(65536, 1 / 1024, -32.0)
    assert cfg.defaults == DEFAULTS
    assert cfg.seed == 0xC0FFEE
    assert parse_config(None).to_dict() == cfg.to_dict()


def test_help_documents_defaults(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for token in ("L=65536", "n_cap=512", "0xC0FFEE"):
        assert token in out


def test_config_grid_period():
    cfg = parse_config_text('{"grid": {"L": 1024, "dx": 0.015625, "t0": 0}}')
    assert cfg.grid.period == 16 and cfg.grid.t0 == 0


def test_config_rejections():
    with pytest.raises(ConfigError, match="n_cap"):
        parse_config_text('{"defaults": {"n_cap": -1}}')
    with pytest.raises(ConfigError, match="'bogus'"):
        parse_config_text('{"bogus": 1}')
    with pytest.raises(ConfigError, match="'Lx'"):
        parse_config_text('{"grid": {"Lx": 4}}')
    with pytest.raises(ConfigError, match="'nn'"):
        parse_config_text('{"rademacher": {"nn": 4}}')
    with pytest.raises(ConfigError, match="line 3"):
        parse_config_text('{\n "grid": {},\n "defaults": {,}\n}')
    with pytest.raises(ConfigError, match="tolerance"):
        parse_config_text('{"tolerances": {"box-parseval": 0}}')
    with pytest.raises(ConfigError, match="unknown check"):
        parse_config_text('{"tolerances": {"nope": 1}}')
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config("/nonexistent/cfg.json")
    with pytest.raises(ConfigError):
        with_defaults(parse_config_text(""), trials=0)


def test_flags_win_over_file():
    cfg = parse_config_text('{"defaults": {"seed": 5, "n_cap": 64}, "grid": {"L": 128, "dx": 0.5}}',
                            {"seed": 9, "n_cap": 8, "grid_l": 256, "p": 3.0})
    assert cfg.seed == 9 and cfg.defaults["n_cap"] == 8
    assert cfg.grid.L == 256 and cfg.grid.dx == 0.5 and cfg.grid.t0 == -64
    assert cfg.option("norm", "p") == 3.0 and cfg.option("hilbert", "p") == 3.0


# subcommands

def test_norm_box(tmp_path):
    g = GridSpec.centered(8, 64)
    f = write(tmp_path, "f.json", gaussian(g).to_json())
    out = tmp_path / "r.json"
    assert main(["norm", "--p", "2", "--input", f, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert abs(rep["value"] - 1) <= 1e-8 + rep["truncation_tail"]


def test_norm_piecewise_constant(tmp_path):
    f = write(tmp_path, "r.json", rademacher(2).to_json())
    out = tmp_path / "r.out"
    assert main(["norm", "--p", "2", "--input", f, "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert abs(math.hypot(rep["value"], rep["truncation_tail"]) - 1) <= 1e-8


def test_norm_stft_csv_input(tmp_path):
    g = GridSpec.centered(8, 32)
    f = write(tmp_path, "f.csv", gaussian(g).to_csv())
    out = tmp_path / "r.json"
    assert main(["norm", "--p", "2", "--method", "stft", "--input", f, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["value"] > 0


def test_norm_exit_codes(tmp_path, capsys):
    f = write(tmp_path, "f.json", gaussian(GridSpec.centered(8, 64)).to_json())
    assert main(["norm", "--p", "0.5", "--input", f]) == 2
    assert "p=0.5" in capsys.readouterr().err
    assert main(["norm", "--p", "2"]) == 2
    assert main(["norm", "--input", str(tmp_path / "missing.json")]) == 2
    bad = write(tmp_path, "bad.json", '{"L": 4, "dx": 1, "t0": 0, "samples": [[1, 0]]}')
    assert main(["norm", "--input", bad]) == 1
    assert main(["norm", "--frobnicate"]) == 2
    assert main(["norm", "--input", f, "--config", write(tmp_path, "c.json", '{"x": 1}')]) == 2


def test_rademacher_table(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["rademacher", "--n", "3", "--check-closed-form", "--k-max", "64",
                 "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "k,exact_re,exact_im,closed_re,closed_im,abs_diff"
    assert len(rows) == 1 + 129
    assert max(float(r.split(",")[-1]) for r in rows[1:]) <= 1e-12
    assert main(["rademacher", "--n", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["values"] == [[1, 0], [-1, 0], [1, 0], [-1, 0]]
    assert main(["rademacher", "--n", "25"]) == 1


def test_stft_and_gabor(tmp_path):
    g = GridSpec.centered(8, 64)
    f = write(tmp_path, "f.json", gaussian(g).to_json())
    out = tmp_path / "s.csv"
    assert main(["stft", "--input", f, "--out", str(out)]) == 0
    V = StftGrid.from_csv(out.read_text())
    assert V.values.size > 0
    out = tmp_path / "g.csv"
    assert main(["gabor", "--input", f, "--out", str(out)]) == 0
    assert out.read_text().strip()
    assert main(["gabor"]) == 2


def test_hilbert_commands(tmp_path, capsys):
    c = write(tmp_path, "c.csv", BiSequence.one_hot(3).to_csv())
    out = tmp_path / "h.csv"
    assert main(["hilbert", "--input", c, "--out", str(out)]) == 0
    h = BiSequence.from_csv(out.read_text())
    assert abs(h.at(2) - 0.5) <= 1e-15
    cfg = write(tmp_path, "cfg.json", '{"defaults": {"trials": 5}}')
    assert main(["hilbert", "--length", "64", "--config", cfg, "--seed", "3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["trials"] == 5 and rep["seed"] == 3 and 0 < rep["estimate"] <= math.pi
    assert main(["hilbert", "--p", "1", "--length", "64", "--config", cfg]) == 2


def test_wilson_command(tmp_path):
    out = tmp_path / "w.json"
    assert main(["wilson", "--n-max", "4", "--k-max", "2", "--out", str(out)] + SMALL) == 0
    rep = json.loads(out.read_text())
    assert rep["system"]["gram_deviation"] <= 1e-8
    assert rep["bumps"]["gram_deviation"] <= 1e-8
    g = GridSpec(512, 0.015625, -4.0)
    bad = write(tmp_path, "phi.json", (sine_bump(g, 0.5) * math.sqrt(2)).to_json())
    assert main(["wilson", "--input", bad, "--n-max", "2"] + SMALL) == 1


def test_translates_command(tmp_path):
    g = GridSpec(512, 0.015625, -4.0)
    lam = write(tmp_path, "lam.txt", "0\n1\n2\n3\n")
    w = write(tmp_path, "w.json", box_window(g, 0, 1).to_json())
    probe = write(tmp_path, "p.json", gaussian(g, 1.0, 0.5).to_json())
    out = tmp_path / "s.json"
    assert main(["translates", "--input", lam, "--window", w, "--probe", probe, "--N", "4",
                 "--out", str(out)] + SMALL) == 0
    rep = json.loads(out.read_text())
    assert abs(rep["sigma_min"] - 1) <= 1e-10 and abs(rep["sigma_max"] - 1) <= 1e-10
    assert 0 <= rep["residuals"]["probe"] < 1
    assert main(["translates"] + SMALL) == 2
    bad = write(tmp_path, "bad.txt", "1\n0\n")
    assert main(["translates", "--input", bad] + SMALL) == 1


def test_density_command(tmp_path, capsys):
    lam = write(tmp_path, "lam.txt", "".join(f"{k}\n" for k in range(-1024, 1025)))
    assert main(["density", "--input", lam, "--family", "dyadic:0:10"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["witness_C"] == 1 and rep["family_divergent"] is True
    assert main(["density", "--input", lam, "--family", "1,2;3,5", "--side", "negative"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["ratios"] == [1.0, 1.0] and rep["family_divergent"] is False
    assert main(["density", "--input", lam, "--family", "2,3;1,4"]) == 1


def test_verify_only(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--only", "box-parseval", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert [c["name"] for c in rep["checks"]] == ["box-parseval"]
    assert rep["summary"] == {"total": 1, "passed": 1, "failed": 0}
    assert "runtime_ms" not in rep["checks"][0]
    assert "box-parseval" in capsys.readouterr().out
    assert main(["verify", "--only", "nope"]) == 2


def test_verify_timings_flag(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--only", "khintchine", "--timings", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["checks"][0]["runtime_ms"] >= 0


def test_verify_starved_truncation(tmp_path, capsys):
    out = tmp_path / "v.json"
    cfg = write(tmp_path, "c.json", '{"defaults": {"n_cap": 8}}')
    assert main(["verify", "--config", cfg, "--only", "rademacher-norm-ratio",
                 "--out", str(out)]) == 1
    rep = json.loads(out.read_text())
    assert rep["checks"][0]["status"] == "fail"
    assert "FAIL" in capsys.readouterr().out


def test_check_names_cover_criteria():
    assert len(CHECK_NAMES) == 15 and len(set(CHECK_NAMES)) == 15
    assert CHECK_NAMES[-1] == "determinism"
