import pytest

from cdperc import artifacts
from cdperc.clocks import ClockField
from cdperc.exploration import check_decoupling, explore_planar


def test_csv_round_trip(tmp_path):
    path = tmp_path / "t.csv"
    cfg = {"subcommand": "demo", "x": 3}
    artifacts.write_csv(path, ["a", "b"], [[1, 0.25], [2, 0.5]], cfg)
    config, header, rows = artifacts.read_csv(path)
    assert config["x"] == 3 and config["format_version"] == 1
    assert header == ["a", "b"]
    assert rows == [["1", "0.25"], ["2", "0.5"]]


def test_csv_float_repr_round_trips(tmp_path):
    path = tmp_path / "f.csv"
    val = 0.1 + 0.2
    artifacts.write_csv(path, ["v"], [[val]], {})
    _, _, rows = artifacts.read_csv(path)
    assert float(rows[0][0]) == val


def test_csv_missing_header_rejected(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# config={}\n")
    with pytest.raises(ValueError):
        artifacts.read_csv(path)


def test_json_round_trip(tmp_path):
    path = tmp_path / "r.json"
    artifacts.write_json(path, {"ok": True}, {"subcommand": "demo"})
    doc = artifacts.read_json(path)
    assert doc["data"] == {"ok": True}
    assert doc["config"]["subcommand"] == "demo"


def test_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(artifacts.OUT_DIR_ENV, str(tmp_path / "sub"))
    path = artifacts.write_csv("rel.csv", ["a"], [[1]], {})
    assert path == tmp_path / "sub" / "rel.csv"
    assert path.exists()


def test_trace_round_trip(tmp_path):
    _, _, _, trace = explore_planar("cubic", 5, 0.62, ClockField(3),
                                    stop_open=60, record_trace=True)
    path = artifacts.save_trace(tmp_path / "trace.txt", trace, {"t": 0.62})
    config, loaded = artifacts.load_trace(path)
    assert config["t"] == 0.62
    assert loaded == trace
    ok, _ = check_decoupling(loaded, 0.62)
    assert ok


def test_trace_malformed_line_rejected():
    with pytest.raises(ValueError):
        artifacts.trace_from_lines(['{"step": 0}'])
    with pytest.raises(ValueError):
        artifacts.trace_from_lines(["not json"])
