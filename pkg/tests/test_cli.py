import csv
import json

import pytest

from sptomo.cli import main, parse_overrides, UsageError


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_meta(obj):
    if isinstance(obj, dict):
        return {k: strip_meta(v) for k, v in obj.items() if k != "meta"}
    if isinstance(obj, list):
        return [strip_meta(v) for v in obj]
    return obj


def test_run_planted(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--state", "sps:XYZYZ:00000+depol:0.1", "--tau", "0.9", "--eps", "0.05",
        "--delta", "0.1", "--trials", "20", "--seed", "7",
    )
    report = json.loads(out)
    assert code == 0
    assert report["aggregate"]["success_rate"] >= 0.9
    assert report["oracle"]["best_fidelity"] == pytest.approx(0.903125)
    trial = report["trials"][0]
    assert set(trial["output"]) == {"axes", "signs"}
    assert trial["seed"] == 7
    assert report["aggregate"]["copies_consumed"] == sum(
        t["counters"]["copies_consumed"] for t in report["trials"]
    )


def test_run_ghz_with_overrides(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--state", "ghz:4", "--tau", "0.5", "--eps", "0.1",
        "--override", "k=3,m_clique=20", "--trials", "20",
    )
    report = json.loads(out)
    assert code == 0
    assert report["params"]["k"] == 3 and report["params"]["m_clique"] == 20
    assert report["oracle"]["best_fidelity"] == pytest.approx(0.5)
    assert report["aggregate"]["success_rate"] >= 0.9


def test_run_usage_errors(capsys):
    code, _, err = run_cli(capsys, "run", "--state", "ghz:3", "--tau", "0.05", "--eps", "0.1")
    assert code == 2
    assert len(err.strip().splitlines()) == 1
    assert run_cli(capsys, "run", "--state", "bogus", "--tau", "0.5", "--eps", "0.1")[0] == 2
    assert run_cli(capsys, "run", "--state", "ghz:2", "--tau", "0.5", "--eps", "0.1",
                   "--override", "k")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["run", "--state", "ghz:2"])
    assert info.value.code == 2


def test_guarantee_miss_exit_code(capsys):
    # a single outer iteration with one sample on the maximally mixed state is
    # far too little to beat the oracle at eps = 0.01
    code, out, _ = run_cli(
        capsys, "run", "--state", "haar:3:5", "--tau", "0.3", "--eps", "0.01",
        "--override", "m_outer=1,k=1,m_clique=1,t=0,m_est=1", "--trials", "10", "--delta", "0.01",
    )
    assert code == 1
    assert json.loads(out)["aggregate"]["success_rate"] < 0.99


def test_run_deterministic(tmp_path, monkeypatch):
    monkeypatch.setenv("SPTOMO_OUTPUT_DIR", str(tmp_path))
    args = ["run", "--state", "haar:3:1", "--tau", "0.8", "--eps", "0.1", "--trials", "3", "--seed", "4"]
    assert main(args + ["--out", "a.json"]) in (0, 1)
    assert main(args + ["--out", "b.json"]) in (0, 1)
    a = json.loads((tmp_path / "a.json").read_text())
    b = json.loads((tmp_path / "b.json").read_text())
    assert strip_meta(a) == strip_meta(b)
    assert "wall_time" in a["meta"]


def read_table(text):
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["pauli_string", "p_value", "q_value"]
    body = rows[1:-2]
    footer = {r[0]: r for r in rows[-2:]}
    return body, footer


def test_distributions_zero_state(capsys):
    code, out, _ = run_cli(capsys, "distributions", "--state", "sps:Z:0")
    body, footer = read_table(out)
    assert code == 0
    nonzero = [(r[0], float(r[2])) for r in body if float(r[2]) > 0]
    assert nonzero == [("I", 0.5), ("Z", 0.5)]
    assert float(footer["sum_q"][2]) == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("spec", ["haar:3:42", "ghz:2+depol:0.3", "sps:XY:10+mix:0.5:ghz:2"])
def test_distributions_footer(capsys, spec):
    _, out, _ = run_cli(capsys, "distributions", "--state", spec)
    body, footer = read_table(out)
    qs = [float(r[2]) for r in body]
    assert qs == sorted(qs, reverse=True)
    assert float(footer["sum_q"][2]) == pytest.approx(1, abs=1e-9)
    if spec.startswith("haar"):
        assert float(footer["sum_p"][1]) == pytest.approx(1, abs=1e-9)


def test_distributions_cap(capsys):
    assert run_cli(capsys, "distributions", "--state", "ghz:9")[0] == 2


def test_oracle(capsys):
    _, out, _ = run_cli(capsys, "oracle", "--state", "ghz:4")
    assert json.loads(out)["best_fidelity"] == pytest.approx(0.5)
    _, out, _ = run_cli(capsys, "oracle", "--state", "sps:XX:00")
    result = json.loads(out)
    assert result["best_fidelity"] == pytest.approx(1)
    assert result["witness"] == "sps:XX:00"
    _, out, _ = run_cli(capsys, "oracle", "--state", "haar:2:1")
    assert 0.25 < json.loads(out)["best_fidelity"] <= 1 + 1e-12
    assert json.loads(out)["evaluations"] == 36


def test_oracle_out_file(tmp_path, capsys):
    path = tmp_path / "sub" / "o.json"
    assert main(["oracle", "--state", "ghz:2", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["witness"].startswith("sps:")


def test_parse_overrides():
    assert parse_overrides("k=3,m_clique=20,t=1.5") == {"k": 3, "m_clique": 20, "t": 1.5}
    assert parse_overrides(None) == {}
    with pytest.raises(UsageError):
        parse_overrides("k=x")
