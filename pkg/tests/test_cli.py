"""End-to-end CLI tests: every subcommand, exit codes, and error JSON.

Commands run in-process through main(argv) so exit codes and the stderr
error objects can be asserted directly.
"""

import json
import math

import pytest

from ammvol.cli import main

CPMM_CURVE = '{"kind": "cpmm", "L": 1.0}'


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *args):
    code, out, err = run(capsys, *args)
    assert code == 0, f"exit {code}, stderr: {err}"
    return json.loads(out)


def error_of(capsys, *args):
    code, out, err = run(capsys, *args)
    assert out == ""
    return code, json.loads(err)


# ----- gen-ticks ------------------------------------------------------------------


def test_gen_ticks_writes_and_reruns_identically(tmp_path, capsys):
    path = tmp_path / "ticks.csv"
    args = ["gen-ticks", "--out", str(path), "--days", "0.01", "--interval", "5", "--seed", "3"]
    summary = run_json(capsys, *args)
    assert summary["ticks"] == int(0.01 * 86400) // 5 + 1
    first = path.read_bytes()
    run_json(capsys, *args)
    assert path.read_bytes() == first


def test_gen_ticks_zero_vol_pure_drift(tmp_path, capsys):
    path = tmp_path / "ticks.csv"
    run_json(
        capsys,
        "gen-ticks", "--out", str(path), "--sigma", "0", "--rate", "0.05",
        "--days", "0.001", "--interval", "10", "--p0", "2.0",
    )
    rows = path.read_text().splitlines()[1:]
    year = 365.25 * 86400.0
    for row in rows:
        t, bid, ask = row.split(",")
        want = 2.0 * math.exp(0.05 * int(t) / year)
        assert float(bid) == pytest.approx(want, rel=1e-12)
        assert float(bid) == float(ask)


# ----- simulate --------------------------------------------------------------------


def test_simulate_flat_stream_is_all_zeros(tmp_path, capsys):
    ticks = tmp_path / "t.csv"
    ticks.write_text(
        "timestamp,bid,ask\n0,1.0,1.0\n1,1.0,1.0\n2,1.0,1.0\n"
    )
    ledger_path = tmp_path / "ledger.csv"
    summary = run_json(
        capsys,
        "simulate", "--ticks", str(ticks), "--curve", CPMM_CURVE,
        "--ledger-out", str(ledger_path),
    )
    assert summary["fills"] == 0
    assert summary["total_fees_usd"] == 0.0
    assert summary["total_lvr_usd"] == 0.0
    assert summary["final_spot"] == 1.0
    rows = ledger_path.read_text().splitlines()
    assert len(rows) == 4
    for row in rows[1:]:
        _, spot, fees, lvr = row.split(",")
        assert float(spot) == 1.0 and float(fees) == 0.0 and float(lvr) == 0.0


def test_simulate_windows_row_count_and_determinism(tmp_path, capsys):
    ticks = tmp_path / "t.csv"
    run_json(
        capsys,
        "gen-ticks", "--out", str(ticks), "--days", "2", "--interval", "60", "--seed", "11",
    )
    windows = tmp_path / "w.csv"
    args = [
        "simulate", "--ticks", str(ticks), "--curve", CPMM_CURVE,
        "--windows-out", str(windows), "--window-days", "1", "--stride-days", "0.25",
    ]
    summary = run_json(capsys, *args)
    # (span - window) / stride + 1 rolling rows
    assert summary["windows"] == 5
    assert summary["fills"] > 0
    first = windows.read_bytes()
    run_json(capsys, *args)
    assert windows.read_bytes() == first


def test_simulate_malformed_ticks_exit_code(tmp_path, capsys):
    ticks = tmp_path / "bad.csv"
    ticks.write_text("timestamp,bid,ask\n0,1.0,1.0\n5,bogus,1.0\n")
    code, err = error_of(capsys, "simulate", "--ticks", str(ticks), "--curve", CPMM_CURVE)
    assert code == 2
    assert err["error"] == "parse_error"
    assert "line 3" in err["detail"]


def test_simulate_bad_curve_json_exit_code(tmp_path, capsys):
    ticks = tmp_path / "t.csv"
    ticks.write_text("timestamp,bid,ask\n0,1.0,1.0\n1,1.0,1.0\n")
    code, err = error_of(capsys, "simulate", "--ticks", str(ticks), "--curve", "{nope")
    assert code == 2
    assert err["error"] == "parse_error"


# ----- analyze ----------------------------------------------------------------------


WINDOW_HEADER = "start,end,fees,lvr,hist_vol,fee_vol\n"


def test_analyze_identical_columns(tmp_path, capsys):
    path = tmp_path / "w.csv"
    path.write_text(
        WINDOW_HEADER
        + "0,10,1.0,1.0,0.5,0.5\n10,20,2.0,2.0,0.5,0.5\n20,30,3.0,3.0,0.5,0.5\n"
    )
    report = run_json(capsys, "analyze", "--windows", str(path))
    assert report["windows"] == 3
    assert report["fees_vs_lvr"]["pearson"] == pytest.approx(1.0, abs=1e-12)
    assert report["fees_vs_lvr"]["slope_origin"] == pytest.approx(1.0, rel=1e-12)
    assert report["fees_vs_lvr"]["slope"] == pytest.approx(1.0, rel=1e-12)


def test_analyze_proportional_series_recovers_factor(tmp_path, capsys):
    path = tmp_path / "w.csv"
    rows = "".join(
        f"{10*k},{10*k+10},{fee},{0.97*fee},nan,nan\n" for k, fee in enumerate([1.0, 2.0, 1.5])
    )
    path.write_text(WINDOW_HEADER + rows)
    report = run_json(capsys, "analyze", "--windows", str(path))
    assert report["fees_vs_lvr"]["slope_origin"] == pytest.approx(0.97, rel=1e-12)
    # not enough finite vol pairs to regress
    assert report["fee_vol_vs_hist_vol"] is None


def test_analyze_single_row_insufficient(tmp_path, capsys):
    path = tmp_path / "w.csv"
    path.write_text(WINDOW_HEADER + "0,10,1.0,1.0,0.5,0.5\n")
    code, err = error_of(capsys, "analyze", "--windows", str(path))
    assert code == 5
    assert err["error"] == "insufficient_data"


def test_analyze_writes_report_file(tmp_path, capsys):
    path = tmp_path / "w.csv"
    path.write_text(WINDOW_HEADER + "0,10,1.0,1.1,0.4,0.5\n10,20,2.0,2.1,0.5,0.6\n")
    out = tmp_path / "report.json"
    report = run_json(capsys, "analyze", "--windows", str(path), "--out", str(out))
    assert json.loads(out.read_text()) == report
    assert report["fee_vol_vs_hist_vol"]["pearson"] == pytest.approx(1.0, abs=1e-9)


# ----- solve-vol --------------------------------------------------------------------


def test_solve_vol_golden(capsys):
    request = '{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0, "p0x": 1.0, "piBar": 1.0}'
    out = run_json(capsys, "solve-vol", request)
    assert out["sigma"] == pytest.approx(2.3548200450309493, abs=3e-6)
    assert out["stderr"] == 0.0
    assert out["iterations"] > 0
    assert out["request"]["piBar"] == 1.0


def test_solve_vol_arbitrage_exit(capsys):
    request = '{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0, "p0x": 1.0, "piBar": 2.1}'
    code, err = error_of(capsys, "solve-vol", request)
    assert code == 3
    assert err["error"] == "arbitrage_violation"


def test_solve_vol_missing_key(capsys):
    code, err = error_of(capsys, "solve-vol", '{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0}')
    assert code == 2
    assert err["error"] == "parse_error"
    assert "p0x" in err["detail"] or "piBar" in err["detail"]


def test_solve_vol_request_from_file(tmp_path, capsys):
    req = tmp_path / "req.json"
    req.write_text('{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0, "p0x": 1.0, "piBar": 0.0}')
    out = run_json(capsys, "solve-vol", str(req))
    assert out["sigma"] == 0.0 and out["iterations"] == 0


# ----- solve-corr -------------------------------------------------------------------


CORR_REQ = '{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0, "p0x": 1.0, "sigmaX": 2.0, "sigmaY": 1.0, "piBar": %s}'


def test_solve_corr_endpoints(capsys):
    out = run_json(capsys, "solve-corr", CORR_REQ % "0.2350")
    assert out["rho"] == 1.0
    assert out["sigmaBar"] == pytest.approx(1.0)
    assert out["iterations"] == 0
    out = run_json(capsys, "solve-corr", CORR_REQ % "1.3507")
    assert out["rho"] == -1.0
    assert out["sigmaBar"] == pytest.approx(3.0)


def test_solve_corr_interior_and_out_of_bounds(capsys):
    pi_mid = 2.0 * (1.0 - math.exp(-5.0 / 8.0))
    out = run_json(capsys, "solve-corr", CORR_REQ % repr(pi_mid))
    assert out["rho"] == pytest.approx(0.0, abs=2e-6)
    code, err = error_of(capsys, "solve-corr", CORR_REQ % "1.4")
    assert code == 4
    assert err["error"] == "out_of_bounds"


# ----- price-swap -------------------------------------------------------------------


def test_price_swap_direct_sigma(capsys):
    request = '{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0, "p0x": 1.0, "sigma": 1.0}'
    out = run_json(capsys, "price-swap", request)
    assert out["value"] == pytest.approx(2.0 * (1.0 - math.exp(-0.125)), rel=1e-12)
    assert out["stderr"] == 0.0


def test_price_swap_component_vols(capsys):
    request = (
        '{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0, "p0x": 1.0,'
        ' "sigmaX": 2.0, "sigmaY": 1.0, "rho": 0.0}'
    )
    out = run_json(capsys, "price-swap", request)
    assert out["sigma"] == pytest.approx(math.sqrt(5.0), rel=1e-12)
    code, err = error_of(capsys, "price-swap", '{"curve": {"kind": "cpmm", "L": 1.0}, "T": 1.0, "p0x": 1.0}')
    assert code == 2
    assert "sigma" in err["detail"]


# ----- auction ----------------------------------------------------------------------


ORDERS = (
    "order_id,side,limit_price,quantity,timestamp\n"
    "o1,offer,1.0,10,0\n"
    "o2,bid,2.0,10,1\n"
)


def test_auction_midpoint_golden(tmp_path, capsys):
    path = tmp_path / "orders.csv"
    path.write_text(ORDERS)
    out_file = tmp_path / "result.json"
    result = run_json(capsys, "auction", "--orders", str(path), "--out", str(out_file))
    assert result["clearing_price"] == "1.50000000"
    assert result["matched_quantity"] == "10.000000000000000000"
    assert json.loads(out_file.read_text()) == result


def test_auction_duplicate_id_exit(tmp_path, capsys):
    path = tmp_path / "orders.csv"
    path.write_text(ORDERS + "o1,bid,1.5,1,2\n")
    code, err = error_of(capsys, "auction", "--orders", str(path))
    assert code == 2
    assert err["error"] == "parse_error"
    assert "first seen on line 2" in err["detail"]


def test_auction_empty_book(tmp_path, capsys):
    path = tmp_path / "orders.csv"
    path.write_text("order_id,side,limit_price,quantity,timestamp\n")
    result = run_json(capsys, "auction", "--orders", str(path))
    assert result["clearing_price"] is None
    assert result["matched_quantity"] == "0.000000000000000000"
    assert result["unmatched"] == []


# ----- harness behavior ----------------------------------------------------------------


def test_unknown_command_usage_error(capsys):
    code, err = error_of(capsys, "frobnicate")
    assert code == 2
    assert err["error"] == "usage_error"


def test_missing_required_option(capsys):
    code, err = error_of(capsys, "simulate")
    assert code == 2
    assert err["error"] == "usage_error"
    assert "--ticks" in err["detail"]


def test_nonexistent_input_path(capsys, tmp_path):
    code, err = error_of(
        capsys, "simulate", "--ticks", str(tmp_path / "nope.csv"), "--curve", CPMM_CURVE
    )
    assert code == 2
    assert err["error"] == "usage_error"


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "simulate" in out and "solve-vol" in out
