import json
import subprocess
import sys

import pytest

from quiverqybe.cli import main
from quiverqybe.exactmat import ExactMatrix
from quiverqybe.quiverlab import Quiver
from quiverqybe.rttgen import RelationSet

R41 = [["q", 0, 0, 0], [0, "q-q^-1", 1, 0], [0, 1, 0, 0], [0, 0, 0, "q"]]


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_qybe_worked_example(tmp_path, capsys):
    path = write(tmp_path, "q.json", {"adjacency": {"entries": [[1, 2], [2, 4]]}})
    code, out, _ = run(["check-qybe", path], capsys)
    report = json.loads(out)
    assert code == 0 and report["holds"] is True and report["mu"] == "5"


def test_negative_verdict_still_exits_zero(tmp_path, capsys):
    path = write(tmp_path, "q.json", {"adjacency": {"entries": [[1, 1], [0, 1]]}})
    code, out, _ = run(["check-qybe", path], capsys)
    assert code == 0 and json.loads(out)["holds"] is False


def test_output_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, "q.json", {"adjacency": {"entries": [[1, 1], [1, 1]]}})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["classify", path, "--out", str(a)], capsys)
    run(["classify", path, "--out", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_kron_square_round_trip(tmp_path, capsys):
    path = write(tmp_path, "q.json", {"adjacency": {"entries": [[0, 1], [1, 0]]}})
    out = tmp_path / "sq.json"
    run(["kron-square", path, "--out", str(out)], capsys)
    sq = Quiver.from_json(json.loads(out.read_text())["quiver"])
    assert len(sq.vertices) == 4
    q_only = write(tmp_path, "sq_only.json", sq.to_json())
    code, _, _ = run(["check-qybe", q_only], capsys)
    assert code == 0


def test_standard_r_then_verify(tmp_path, capsys):
    out = tmp_path / "r.json"
    run(["standard-r", "--n", "2", "--braided", "--out", str(out)], capsys)
    code, text, _ = run(["verify", str(out), "--hecke", "--braid", "--n", "2"], capsys)
    report = json.loads(text)
    assert code == 0
    assert report["hecke"]["zero"] and report["braid"]["zero"]
    assert set(report["hecke"]["numeric"].values()) == {"zero"}
    assert report["q0"] == ["2", "3", "1/2"]


def test_verify_literal_standard_r_reports_residual(tmp_path, capsys):
    out = tmp_path / "r.json"
    run(["standard-r", "--n", "2", "--out", str(out)], capsys)
    code, text, _ = run(["verify", str(out), "--q0", "5"], capsys)
    report = json.loads(text)
    assert code == 0
    assert not report["hecke"]["zero"] and report["hecke"]["numeric_agrees"]
    assert report["hecke"]["verdict"]["constraint"] == "q^2 - 1"
    assert report["q0"] == ["5"]


def test_verify_random_samples_follow_seed(tmp_path, capsys):
    path = write(tmp_path, "r.json", {"entries": R41})
    _, a, _ = run(["verify", path, "--random-samples", "3", "--seed", "7"], capsys)
    _, b, _ = run(["verify", path, "--random-samples", "3", "--seed", "7"], capsys)
    assert a == b and len(json.loads(a)["q0"]) == 6


def test_rtt_example_41(tmp_path, capsys):
    path = write(tmp_path, "r.json", {"entries": R41})
    code, out, _ = run(["rtt", "--r", path, "--layout", "diag", "--gens", "a,b"], capsys)
    report = json.loads(out)
    assert code == 0 and report["text"] == ["ab - ba"]
    assert RelationSet.from_json(report).text() == ["ab - ba"]
    code, out, _ = run(["rtt", "--r", path, "--layout", "diag", "--gens", "a,b", "--format", "text"], capsys)
    assert out == "ab - ba\n"


def test_frt_and_groupoid(capsys):
    code, out, _ = run(["frt", "--n", "2"], capsys)
    assert code == 0 and len(json.loads(out)["relations"]) == 6
    code, out, _ = run(["groupoid", "1", "2"], capsys)
    report = json.loads(out)
    assert report["global_mu"] is None
    assert [b["mu"] for b in report["blocks"]] == ["1", "2"]


def test_census(capsys):
    code, out, _ = run(["census", "--n", "3", "--mode", "loops"], capsys)
    assert code == 0 and json.loads(out)["ok"] is True
    assert run(["census", "--n", "9"], capsys)[0] == 4


def test_build_tl_and_hecke(tmp_path, capsys):
    path = write(tmp_path, "b.json", {"entries": [[0, 1], [-1, 0]]})
    code, out, _ = run(["build-tl", path], capsys)
    report = json.loads(out)
    assert report["tl"]["mu"] == "-2"
    assert report["special_q"]["constraints"] == ["q^2 - q + 1", "q^2 + q + 1"]
    code, out, _ = run(["build-hecke", path], capsys)
    assert json.loads(out)["candidate"]["q_constraints"] == ["q^2 - 2*q + 1"]


def test_projection_r(tmp_path, capsys):
    p = [["1/2", 0, 0, 0], [0, "1/2", "1/2", 0], [0, "1/2", "1/2", 0], [0, 0, 0, "1/2"]]
    path = write(tmp_path, "p.json", {"entries": p})
    code, out, _ = run(["projection-r", path], capsys)
    assert code == 4
    p = [[1, 0, 0, 0], [0, "1/2", "1/2", 0], [0, "1/2", "1/2", 0], [0, 0, 0, 1]]
    path = write(tmp_path, "p.json", {"entries": p})
    code, out, _ = run(["projection-r", path], capsys)
    assert code == 0
    m = ExactMatrix.from_json(json.loads(out)["matrix"])
    assert str(m[1, 2]) == "1/2*q + 1/2*q^-1"


def test_leavitt(tmp_path, capsys):
    q = write(tmp_path, "q.json", {"vertices": ["v"], "arrows": [
        {"name": "a", "src": "v", "dst": "v"}, {"name": "b", "src": "v", "dst": "v"}]})
    r = write(tmp_path, "r.json", {"entries": R41})
    code, out, _ = run(["leavitt", q, "--r", f"v={r}", "--vertex-layout", "v=diag",
                        "--format", "text"], capsys)
    assert code == 0
    assert "aa* + bb* - v" in out.splitlines()
    assert out.splitlines()[-1] == "ab - ba"


def test_error_exit_codes(tmp_path, capsys):
    assert run(["check-qybe", str(tmp_path / "missing.json")], capsys)[0] == 3
    bad_json = write(tmp_path, "bad.json", "{not json")
    assert run(["check-qybe", bad_json], capsys)[0] == 4
    schema = write(tmp_path, "schema.json", {"nothing": 1})
    assert run(["check-qybe", schema], capsys)[0] == 4


def test_scalar_error_reports_line_and_column(tmp_path, capsys):
    text = '{"entries": [\n  ["q", "0"],\n  ["0", "q + * 1"]\n]}'
    path = write(tmp_path, "r.json", text)
    code, _, err = run(["verify", path], capsys)
    assert code == 4
    assert f"{path}:3:14:" in err


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["standard-r"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quiverqybe", "frt", "--n", "2", "--format", "text"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "t11t12 - q*t12t11"
