"""Argument handling, output schemas, exit codes, and the result cache."""

import dataclasses
import json

import pytest

from klsign.cli import RunConfig, main, parse_args, run


def _cfg(tmp_path, name="cache", **kw):
    kw.setdefault("cache_dir", str(tmp_path / name))
    return RunConfig(**kw)


def test_parse_census_defaults():
    cfg = parse_args(["census", "--x", "10000"])
    assert cfg.command == "census"
    assert cfg.X == 10000.0
    assert cfg.rho == 5.0
    assert cfg.epsilon == 0.02
    assert cfg.eta == 0.0
    assert cfg.format == "json"
    assert cfg.seed == 20230
    assert cfg.threads == 0
    assert cfg.out is None


def test_parse_eval():
    cfg = parse_args(["eval", "--m", "1", "--n", "1", "--q", "101"])
    assert (cfg.command, cfg.m, cfg.n, cfg.q) == ("eval", 1, 1, 101)


def test_parse_rsums():
    cfg = parse_args(["rsums", "--x", "1000", "--rho", "5", "--epsilon", "0.02"])
    assert cfg.command == "rsums"
    assert (cfg.X, cfg.rho, cfg.epsilon) == (1000.0, 5.0, 0.02)


def test_parse_rejects_unknown_flags():
    with pytest.raises(SystemExit) as exc:
        parse_args(["census", "--x", "100", "--bogus", "1"])
    assert exc.value.code == 2


def test_parse_missing_required():
    for argv in (
        ["eval"],
        ["census"],
        ["rsums"],
        ["satotate"],
        ["bvprobe", "--x", "100"],
    ):
        with pytest.raises(SystemExit) as exc:
            parse_args(argv)
        assert exc.value.code == 2


def test_parse_satotate_conflicts():
    with pytest.raises(SystemExit) as exc:
        parse_args(["satotate", "--p", "101", "--x", "100"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        parse_args(["satotate", "--p", "101", "--a", "2"])
    assert exc.value.code == 2
    # each mode alone is fine
    assert parse_args(["satotate", "--p", "101"]).p == 101
    assert parse_args(["satotate", "--x", "100", "--a", "2"]).a == 2


def test_parse_negative_threads():
    with pytest.raises(SystemExit) as exc:
        parse_args(["census", "--x", "100", "--threads", "-2"])
    assert exc.value.code == 2


def test_config_file_with_flag_override(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text(
        "# sign census settings\n"
        "x = 100  # the window scale\n"
        "Rho = 6.5\n"
        "format = csv\n"
        "\n"
        "threads = 2\n"
    )
    cfg = parse_args(["rsums", "--config", str(conf)])
    assert (cfg.X, cfg.rho, cfg.format, cfg.threads) == (100.0, 6.5, "csv", 2)
    # explicit flags beat the file
    cfg = parse_args(["rsums", "--config", str(conf), "--rho", "5", "--format", "json"])
    assert (cfg.rho, cfg.format) == (5.0, "json")
    assert cfg.X == 100.0


def test_config_file_rejects_unknown_keys(tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("wavelength = 7\n")
    with pytest.raises(SystemExit) as exc:
        parse_args(["census", "--config", str(conf)])
    assert exc.value.code == 2
    conf.write_text("command = census\n")
    with pytest.raises(SystemExit):
        parse_args(["census", "--config", str(conf)])
    conf.write_text("x = not-a-number\n")
    with pytest.raises(SystemExit):
        parse_args(["census", "--config", str(conf)])
    with pytest.raises(SystemExit):
        parse_args(["census", "--config", str(tmp_path / "missing.conf")])


def test_run_eval_json_payload(tmp_path, capsysbinary):
    cfg = _cfg(tmp_path, command="eval", q=101)
    assert run(cfg) == 0
    payload = json.loads(capsysbinary.readouterr().out)
    assert payload["q"] == 101
    assert payload["value"] == pytest.approx(1.5257821766583652, rel=1e-12)
    assert payload["method"] == "direct"
    assert payload["bound_ok"] is True


def test_run_census_csv_schema(tmp_path, capsysbinary):
    cfg = _cfg(tmp_path, command="census", X=100.0, format="csv", threads=2)
    assert run(cfg) == 0
    lines = capsysbinary.readouterr().out.decode().splitlines()
    assert lines[0] == "q,omega,p1,p2,kl,sign"
    assert len(lines) == 1 + 47 + 1  # header, one row per modulus, trailer
    assert json.loads(lines[-1]) == {"flagged": 0, "neg_count": 25, "pos_count": 22}
    first = lines[1].split(",")
    assert first[0] == "101"
    assert first[3] == ""  # prime rows leave p2 blank
    assert first[5] == "positive"


def test_run_rsums_json(tmp_path, capsysbinary):
    cfg = _cfg(tmp_path, command="rsums", X=100.0, threads=2)
    assert run(cfg) == 0
    payload = json.loads(capsysbinary.readouterr().out)
    assert payload["n_terms"] == 61
    assert payload["R1"] == pytest.approx(0.2659997534330746, rel=1e-12)
    assert payload["Rminus"] == pytest.approx(0.6963772265776319, rel=1e-12)


def test_run_bvprobe_json(tmp_path, capsysbinary):
    cfg = _cfg(tmp_path, command="bvprobe", X=1000.0, q=10)
    assert run(cfg) == 0
    payload = json.loads(capsysbinary.readouterr().out)
    assert payload["value"] == pytest.approx(1.102928342558259, rel=1e-12)


def test_run_satotate_vertical_json(tmp_path, capsysbinary):
    cfg = _cfg(tmp_path, command="satotate", p=101)
    assert run(cfg) == 0
    payload = json.loads(capsysbinary.readouterr().out)
    assert payload["count"] == 100
    assert payload["discrepancy"] == pytest.approx(0.04168231359078867, rel=1e-12)


def test_run_residue_demo_json(tmp_path, capsysbinary):
    cfg = _cfg(tmp_path, command="residue-demo")
    assert run(cfg) == 0
    payload = json.loads(capsysbinary.readouterr().out)
    rows = payload["rows"]
    assert [r["log_M"] for r in rows] == [20.0, 40.0, 80.0]
    assert rows[0]["ratio"] == pytest.approx(1.0075, rel=1e-12)
    assert rows[2]["ratio"] == pytest.approx(1.00046875, rel=1e-12)
    for r in rows:
        assert r["numeric"] == pytest.approx(r["main"] * r["ratio"], rel=1e-12)


def test_run_writes_out_file(tmp_path, capsysbinary):
    out = tmp_path / "result.json"
    cfg = _cfg(tmp_path, command="eval", q=15, out=str(out))
    assert run(cfg) == 0
    assert capsysbinary.readouterr().out == b""
    payload = json.loads(out.read_bytes())
    assert payload["value"] == pytest.approx(-2.618033988749895, rel=1e-9)
    assert payload["method"] == "multiplicative"


def test_warm_cache_replays_bytes_without_compute(tmp_path, monkeypatch):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    cfg = _cfg(tmp_path, command="census", X=100.0, threads=2, out=str(out1))
    assert run(cfg) == 0

    # break the compute path: a cache hit must never reach it
    import klsign.rsums as rsums

    def boom(*a, **k):
        raise AssertionError("census recomputed on a warm cache")

    monkeypatch.setattr(rsums, "census", boom)
    # a different thread count and output path still hits the same entry
    again = dataclasses.replace(cfg, threads=7, out=str(out2))
    assert run(again) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_thread_count_never_changes_bytes(tmp_path):
    runs = []
    for i, threads in enumerate((1, 3)):
        out = tmp_path / f"r{i}.json"
        cfg = _cfg(
            tmp_path, name=f"cache{i}", command="rsums", X=200.0,
            threads=threads, out=str(out),
        )
        assert run(cfg) == 0
        runs.append(out.read_bytes())
    assert runs[0] == runs[1]


def test_formats_cached_separately(tmp_path, capsysbinary):
    base = _cfg(tmp_path, command="eval", q=101)
    assert run(base) == 0
    json_bytes = capsysbinary.readouterr().out
    assert run(dataclasses.replace(base, format="csv")) == 0
    csv_bytes = capsysbinary.readouterr().out
    assert json_bytes != csv_bytes
    assert csv_bytes.decode().splitlines()[0] == "m,n,q,value,method,bound_ok"


def test_computational_flag_exits_1_and_skips_cache(tmp_path, monkeypatch, capsys):
    import klsign.rsums as rsums

    def flagged(*a, **k):
        raise ArithmeticError("sign undefined in test")

    monkeypatch.setattr(rsums, "census", flagged)
    cfg = _cfg(tmp_path, command="census", X=100.0)
    assert run(cfg) == 1
    assert "computational flag" in capsys.readouterr().err
    assert list((tmp_path / "cache").glob("*.bin")) == []

    # after the failure nothing poisoned the cache: a clean run succeeds
    monkeypatch.undo()
    assert run(cfg) == 0


def test_invalid_parameters_exit_2(tmp_path, capsys):
    cfg = _cfg(tmp_path, command="bvprobe", X=1000.0, q=100)  # Q > sqrt(X)
    assert run(cfg) == 2
    assert "invalid parameters" in capsys.readouterr().err
    assert list((tmp_path / "cache").glob("*.bin")) == []


def test_main_end_to_end(tmp_path, capsysbinary):
    rc = main(
        ["eval", "--q", "101", "--cache-dir", str(tmp_path / "c")]
    )
    assert rc == 0
    assert json.loads(capsysbinary.readouterr().out)["q"] == 101


def test_fresh_runs_are_byte_identical(tmp_path):
    blobs = []
    for name in ("one", "two"):
        out = tmp_path / f"{name}.json"
        cfg = _cfg(
            tmp_path, name=name, command="satotate", X=200.0, a=3, out=str(out)
        )
        assert run(cfg) == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]
