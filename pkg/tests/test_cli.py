import io as _io
from pathlib import Path

import pytest

from dtcode.cli import parse_snr_grid, run, UsageError
from dtcode.io import load_codebook

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
FIG3, FIG4, APPC = (str(CONFIGS / f"{n}.json") for n in ("fig3", "fig4", "appc"))


def call(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_pair_poly_fig3():
    code, out, _ = call("pair", "--config", FIG3, "--method", "poly")
    assert code == 0
    assert out.splitlines()[0] == "d_max=2"
    assert set(out.splitlines()[1:]) == {"u1=0,1", "u2=1,0"}


@pytest.mark.parametrize("method", ["brute", "poly", "lemma1"])
def test_pair_methods_fig4(method):
    code, out, _ = call("pair", "--config", FIG4, "--method", method)
    assert code == 0 and out.startswith("d_max=1\n")


def test_analyze_fig3():
    code, out, _ = call("analyze", "--config", FIG3)
    assert code == 0
    assert out == "i,j,d\n1,2,2\n"
    code, out, _ = call("analyze", "--config", FIG3, "--all")
    assert len(out.splitlines()) == 1 + 6


def test_analyze_codebook_spectrum():
    code, out, _ = call("analyze", "--config", FIG3, "--codebook", str(CONFIGS / "fig3_cb.json"))
    assert code == 0
    assert out == "sq_distance,count\n0,1\n"


def test_check(tmp_path):
    assert call("check", "--config", FIG3)[1] == "theorem2=true\ntheorem3=false\n"
    assert call("check", "--config", APPC)[1].startswith("theorem2=n/a\n")
    cfg = tmp_path / "wide.json"
    cfg.write_text('{"input": [0, 1], "interference": {"values": [0, 10]}}')
    assert call("check", "--config", str(cfg))[1] == "theorem2=true\ntheorem3=true\n"


def test_reduce(tmp_path):
    dst = tmp_path / "r.json"
    code, _, _ = call("reduce", "--config", FIG3, "--codebook", str(CONFIGS / "fig3_cb.json"),
                      "--out", str(dst))
    assert code == 0
    cb = load_codebook(dst)
    assert cb.codewords == (((1, 0), (0, 1)), ((0, 1), (1, 0)))


def test_simulate_zero_trials_is_usage_error():
    code, _, err = call("simulate", "--config", FIG3, "--scenario", "known", "--snr-db", "0:4:2",
                        "--trials", "0", "--seed", "1")
    assert code == 1
    assert "usage:" in err


def test_simulate_csv_identical_across_threads(tmp_path):
    outs = []
    for threads in ("1", "3"):
        dst = tmp_path / f"c{threads}.csv"
        code, _, _ = call("simulate", "--config", FIG4, "--scenario", "known", "--snr-db",
                          "0:6:3", "--trials", "30000", "--seed", "12345", "--threads", threads,
                          "--batch-size", "4096", "--out", str(dst))
        assert code == 0
        outs.append(dst.read_bytes())
    assert outs[0] == outs[1]
    lines = outs[0].decode().splitlines()
    assert lines[0] == "snr_db,sigma,trials,errors,error_rate,union_bound"
    assert [l.split(",")[0] for l in lines[1:]] == ["0", "3", "6"]


@pytest.mark.parametrize("scenario", ["unknown", "ifree"])
def test_simulate_uncoded_scenarios(scenario):
    code, out, _ = call("simulate", "--config", FIG3, "--scenario", scenario, "--snr-db", "10",
                        "--trials", "1000")
    assert code == 0 and len(out.splitlines()) == 2


def test_simulate_rejects_wrong_codebook_kind():
    code, _, err = call("simulate", "--config", FIG3, "--scenario", "unknown", "--codebook",
                        str(CONFIGS / "fig3_cb.json"), "--snr-db", "0", "--trials", "10")
    assert code == 1 and "codewords" in err


def test_search_and_budget(monkeypatch):
    code, out, _ = call("search", "--config", FIG3, "--n", "2", "--size", "2", "--symbols", "1,2")
    assert code == 0 and out.startswith("best_sq=8\n")
    monkeypatch.setenv("DTC_BUDGET", "100")
    code, _, err = call("search", "--config", FIG4, "--n", "2", "--size", "5")
    assert code == 2 and "budget" in err


def test_cap_exceeded_exit_code(monkeypatch):
    monkeypatch.setenv("DTC_BUDGET", "4")
    code, _, _ = call("analyze", "--config", FIG4)
    assert code == 2


def test_verify_appc():
    code, out, _ = call("verify-appc")
    assert code == 0
    assert "subsets = 1820" in out and "[claims]" in out


def test_power():
    code, out, _ = call("power", "--config", APPC)
    assert code == 0 and out == "power=22.75\n"
    code, out, _ = call("power", "--config", FIG3, "--codebook", str(CONFIGS / "fig3_cb.json"))
    assert out == "power=1\n"


def test_input_errors(tmp_path):
    assert call("pair", "--config", str(tmp_path / "nope.json"))[0] == 1
    assert call("bogus")[0] == 1
    assert call("simulate", "--config", FIG3, "--scenario", "known", "--snr-db", "0:4",
                "--trials", "5")[0] == 1
    assert call("simulate", "--config", FIG3, "--scenario", "known", "--snr-db", "0",
                "--trials", "5", "--seed", "-1")[0] == 1


def test_snr_grid():
    assert parse_snr_grid("0:10:2") == [0, 2, 4, 6, 8, 10]
    assert parse_snr_grid("0:1:0.1")[-1] == 1.0
    assert parse_snr_grid("5") == [5.0]
    for bad in ("0:1:0", "3:1:1", "a:b:c", "1:2"):
        with pytest.raises(UsageError):
            parse_snr_grid(bad)
