import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from bachelier import cli, figures


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    r = list(csv.reader(io.StringIO(text)))
    return r[0], np.array(r[1:], dtype=float)


def test_price_example(capsys):
    code, out, _ = run(capsys, "price", "--model", "bachelier", "--kind", "call", "--strike", "1", "--forward", "1",
                       "--vol", "0.5", "--expiry", "1")
    rep = json.loads(out)
    assert code == 0
    assert set(rep) >= {"model", "inputs", "undiscounted", "discounted", "greeks", "warnings"}
    assert str(rep["undiscounted"]).startswith("0.199471")


def test_missing_vol_is_usage_error(capsys):
    code, out, err = run(capsys, "price", "--model", "bachelier", "--strike", "1", "--forward", "1", "--expiry", "1")
    assert code == 2 and "usage" in err and "--vol" in err and out == ""


def test_dbs_beta_one_equals_bs(capsys):
    common = ["--strike", "1.2", "--forward", "1", "--vol", "0.3", "--expiry", "2"]
    for cmd in ("price", "greeks"):
        _, a, _ = run(capsys, cmd, "--model", "dbs", "--beta", "1", *common)
        _, b, _ = run(capsys, cmd, "--model", "bs", *common)
        ja, jb = json.loads(a), json.loads(b)
        for key in ("undiscounted", "discounted", "greeks"):
            assert ja[key] == jb[key]


def test_spot_and_rates_flags(capsys):
    _, out, _ = run(capsys, "price", "--model", "bachelier", "--strike", "1", "--spot", "1", "--rate", "0.05",
                    "--carry", "0.01", "--vol", "0.5", "--expiry", "1")
    rep = json.loads(out)
    assert rep["inputs"]["forward"] == pytest.approx(np.exp(0.04), rel=1e-11)
    assert rep["discounted"] == pytest.approx(rep["undiscounted"] * np.exp(-0.05), rel=1e-11)
    code, _, _ = run(capsys, "price", "--model", "bs", "--strike", "1", "--spot", "1", "--forward", "1", "--vol",
                     "0.2", "--expiry", "1")
    assert code == 2


def test_ivol_round_trip_through_cli(capsys):
    for model, extra in (("bachelier", []), ("bs", []), ("dbs", ["--beta", "0.5"])):
        _, out, _ = run(capsys, "price", "--model", model, *extra, "--kind", "put", "--strike", "0.9", "--forward",
                        "1", "--vol", "0.4", "--expiry", "1.5")
        p = json.loads(out)["undiscounted"]
        code, out, _ = run(capsys, "ivol", "--model", model, *extra, "--price", repr(p), "--kind", "put", "--strike",
                           "0.9", "--forward", "1", "--expiry", "1.5")
        assert code == 0
        assert json.loads(out)["implied_vol"] == pytest.approx(0.4, rel=1e-9)


def test_no_implied_vol_exit_three(capsys):
    code, _, err = run(capsys, "ivol", "--model", "bachelier", "--price", "0.1", "--kind", "call", "--strike", "0.5",
                       "--forward", "1", "--expiry", "1")
    assert code == 3 and "no implied volatility exists" in err


def test_convert(capsys):
    code, _, _ = run(capsys, "convert", "--from", "bachelier", "--to", "bs", "--vol", "0.5", "--strike", "0",
                     "--forward", "1", "--expiry", "1")
    assert code == 3
    code, out, _ = run(capsys, "convert", "--from", "bachelier", "--to", "bs", "--vol", "1.0", "--strike", "0.01",
                       "--forward", "1", "--expiry", "1")
    rep = json.loads(out)
    assert code == 0 and rep["lee_bound_warning"] is True and rep["warnings"]


def test_convert_reproduces_fig2(capsys):
    header, table = figures.fig2()
    for i in (0, 57, 120, 199):
        k = repr(float(table[i, 0]))
        for method, col, variant in (("exact", 1, "improved"), ("approx", 2, "improved"), ("approx", 3, "hkl")):
            _, out, _ = run(capsys, "convert", "--from", "bs", "--to", "bachelier", "--vol", "2", "--strike", k,
                            "--forward", "1", "--expiry", "1", "--method", method, "--variant", variant)
            assert json.loads(out)["vol"] == pytest.approx(table[i, col], rel=1e-11)


def test_figure_csvs(capsys, tmp_path):
    texts = {}
    for fid in figures.FIGURES:
        path = tmp_path / f"{fid}.csv"
        assert cli.main(["figure", fid, "--out", str(path)]) == 0
        raw = path.read_bytes()
        assert b"\r" not in raw
        texts[fid] = raw.decode()
        _, again, _ = run(capsys, "figure", fid)
        assert again == texts[fid]  # deterministic, byte for byte
    h, t = rows(texts["fig1"])
    i = int(np.argmin(np.abs(t[:, 0] - 1.0)))
    slope = lambda c: t[i + 1, c] - t[i - 1, c]
    assert slope(h.index("bs_vol_beta_0")) < slope(h.index("bs_vol_beta_2_3")) < 0
    h, t = rows(texts["fig3"])
    gap = np.abs(t[:, h.index("delta_beta_1")] - t[:, h.index("delta_beta_0")]).max()
    assert 0.08 <= gap <= 0.12
    h, t = rows(texts["fig4"])
    lower = t[:, 1] < 0
    assert np.all(np.diff(t[lower, 2:], axis=1) > 0) and np.all(np.diff(t[~lower, 2:], axis=1) < 0)
    h, t = rows(texts["fig5"])
    atm = t[t[:, 0] == 100.0][0, 1:]
    np.testing.assert_allclose(atm, 20.0, rtol=1e-12)


def test_figure_unwritable_path(capsys):
    code, _, err = run(capsys, "figure", "fig1", "--out", "/nonexistent-dir/fig1.csv")
    assert code == 4 and "cannot write" in err


def test_unknown_figure_is_usage_error(capsys):
    assert run(capsys, "figure", "fig9")[0] == 2


def test_mc_check_validates_before_simulating(capsys):
    code, out, err = run(capsys, "mc-check", "--scenario", "barrier-fig4", "--vol", "-0.2")
    assert code == 3 and "volatility" in err and out == ""


def test_mc_check_deterministic_and_verifying(capsys):
    argv = ["mc-check", "--scenario", "vanilla", "--seed", "42", "--paths", "20000"]
    code, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert code == 0 and a == b
    assert all(abs(c["z"]) <= 3 for c in json.loads(a)["checks"])


def test_mc_check_mismatch_exit_five(capsys, monkeypatch):
    # a wrong closed form must be caught: shift the scenario's reference price
    real = cli._check
    monkeypatch.setattr(cli, "_check", lambda label, closed, est, extra_sd=0.0: real(label, closed + 0.01, est, extra_sd))
    code, _, _ = run(capsys, "mc-check", "--scenario", "vanilla", "--paths", "20000")
    assert code == 5


def test_other_commands(capsys):
    code, out, _ = run(capsys, "greeks", "--model", "nsvh", "--vol", "20", "--rho", "0.1", "--nu", "0.2",
                       "--strike", "110", "--forward", "100", "--expiry", "1")
    rep = json.loads(out)
    assert code == 0 and rep["greeks_method"] == "finite_difference" and 0 < rep["greeks"]["delta"] < 1
    code, out, _ = run(capsys, "smile", "--model", "sabr", "--vol", "20", "--rho", "0.1", "--nu", "0.2",
                       "--forward", "100", "--expiry", "1", "--kmin", "-20", "--kmax", "180", "--n", "11", "--csv")
    h, t = rows(out.replace(",\n", ",nan\n"))
    assert code == 0 and h == ["strike", "bachelier_vol", "bs_vol"] and np.isnan(t[0, 2])
    code, out, _ = run(capsys, "barrier", "--model", "bs", "--vol", "0.5", "--kind", "put", "--direction", "down",
                       "--level", "0.7", "--strike", "1", "--forward", "1", "--expiry", "1")
    assert code == 0 and json.loads(out)["status"] == "active"
    code, out, _ = run(capsys, "exotic", "--type", "spread", "--strike", "0.1", "--f1", "1.3", "--f2", "1",
                       "--vol1", "0.3", "--vol2", "0.3", "--rho", "1", "--expiry", "1")
    assert code == 0 and json.loads(out)["undiscounted"] == pytest.approx(0.2, abs=1e-15)
    code, out, _ = run(capsys, "exotic", "--type", "basket", "--strike", "1", "--weights", "0.5,0.5",
                       "--forwards", "1,1", "--vols", "0.2,0.3", "--corr", "1,0.5,0.5,1", "--expiry", "1", "--csv")
    assert code == 0 and out.startswith("model,")
    code, _, _ = run(capsys, "exotic", "--type", "basket", "--strike", "1", "--weights", "0.5,0.5",
                     "--forwards", "1,1", "--vols", "0.2,0.3", "--corr", "1,0.5", "--expiry", "1")
    assert code == 3


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "bachelier", "figure", "fig2"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("strike,exact,improved,hkl\n")
