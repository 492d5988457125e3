import json
import subprocess
import sys

import pytest

from treeramsey.cli import main, parse_family_key, parse_tree, replay_report, UsageError
from treeramsey.trees import chain, regular_tree


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_parse_tree_forms():
    assert parse_tree("chain:3") == chain(3)
    assert parse_tree("regular:2,2") == regular_tree(2, 2)
    assert parse_tree("[-1, 0, 0]") == regular_tree(2, 2)
    assert parse_tree('{"parent": [-1, 0]}') == chain(2)


def test_parse_tree_errors_name_position():
    with pytest.raises(UsageError, match="line 1 column"):
        parse_tree("[-1, 0,")
    with pytest.raises(UsageError):
        parse_tree("[-1, 1]")
    with pytest.raises(UsageError):
        parse_tree("regular:2")


def test_parse_family_key():
    assert parse_family_key("binom:6,3") == ("binom", 6, 3)
    assert parse_family_key('["emb", 2, [-1]]') == ("emb", 2, (-1,))
    with pytest.raises(UsageError):
        parse_family_key("binom:x")
    with pytest.raises(UsageError):
        parse_family_key("[1, 2]")


def test_enumerate(capsys):
    code, rep = run_json(capsys, "enumerate", "--S", "chain:1", "--T", "regular:2,2", "--flavor", "leaf", "--list")
    assert code == 0 and rep["results"]["count"] == 2
    assert rep["schema"] == 1 and "wall_time" in rep


def test_verify_axioms_and_conditions(capsys):
    for cond in ("AXIOMS", "POINTWISE", "A", "B", "STAR"):
        code, rep = run_json(capsys, "verify", "--instance", "classical", "--size", "4", "--condition", cond)
        assert code == 0 and rep["status"] == "PASS", cond


def test_verify_R_pass_and_fail_with_replay(capsys, tmp_path):
    code, rep = run_json(capsys, "verify", "--instance", "CLASSICAL", "--size", "6", "--condition", "R", "--F", "binom:6,3", "--P", "binom:3,2", "--d", "2")
    assert code == 0
    cert = tmp_path / "r5.json"
    code, out, _ = run(capsys, "verify", "--instance", "CLASSICAL", "--size", "5", "--condition", "R", "--F", "binom:5,3", "--P", "binom:3,2", "--d", "2", "--certificate", str(cert))
    assert code == 1 and "FAIL" in out
    data = json.loads(cert.read_text())
    assert replay_report(data) == (1, 1)
    code, out, _ = run(capsys, "replay", str(cert))
    assert code == 0


def test_replay_detects_tampering(capsys, tmp_path):
    cert = tmp_path / "r5.json"
    main(["verify", "--instance", "CLASSICAL", "--size", "5", "--condition", "R", "--F", "binom:5,3", "--P", "binom:3,2", "--d", "2", "--certificate", str(cert)])
    capsys.readouterr()
    data = json.loads(cert.read_text())
    data["certificates"][0]["coloring"] = [0] * len(data["certificates"][0]["coloring"])
    cert.write_text(json.dumps(data))
    code, _, _ = run(capsys, "replay", str(cert))
    assert code == 1


def test_verify_P(capsys):
    code, rep = run_json(capsys, "verify", "--instance", "CLASSICAL", "--size", "6", "--condition", "P", "--F", "binom:4,3", "--P", "binom:3,2", "--d", "2", "--y", "[1]", "--a", "[1]")
    assert code == 0
    code, rep = run_json(capsys, "verify", "--instance", "CLASSICAL", "--size", "6", "--condition", "P", "--F", "binom:3,3", "--P", "binom:3,2", "--d", "2", "--y", "[1]", "--a", "[1]")
    assert code == 1 and rep["certificates"]


def test_search_gen_and_hj(capsys, tmp_path):
    cert = tmp_path / "gen.json"
    code, rep = run_json(capsys, "search", "gen", "--S", "chain:1", "--T", "chain:2", "--d", "2", "--flavor", "EMB", "--certificate", str(cert))
    assert code == 0 and rep["results"]["height"] == 3
    assert replay_report(json.loads(cert.read_text()))[0] >= 1
    code, rep = run_json(capsys, "search", "hj", "--alphabet-size", "2", "--m", "1", "--d", "2")
    assert code == 0 and rep["results"]["n"] == 2 and rep["results"]["refuted"] == [0, 1]


def test_search_hl(capsys):
    code, rep = run_json(capsys, "search", "hl", "--k", "2", "--t", "1", "--m", "2", "--d", "2")
    assert code == 0 and rep["results"]["n"] == 3
    assert rep["results"]["below"]["status"] == "FAIL"


def test_translate_default_coloring(capsys):
    code, rep = run_json(capsys, "translate", "--k", "2", "--t", "1", "--m", "2", "--n", "3")
    assert code == 0 and rep["results"]["verified"]


def test_translate_coloring_file(capsys, tmp_path):
    path = tmp_path / "col.json"
    path.write_text(json.dumps([{"point": [[0]], "color": 0}, {"point": [[1]], "color": 1}]))
    code, rep = run_json(capsys, "translate", "--k", "2", "--t", "1", "--m", "2", "--n", "2", "--coloring", str(path))
    assert code == 1


def test_exit_codes(capsys):
    code, _, _ = run(capsys, "search", "hj", "--alphabet-size", "3", "--m", "1", "--d", "2")
    assert code == 2
    code, _, err = run(capsys, "search", "gen", "--S", "[-1, 0,", "--T", "chain:2", "--d", "2")
    assert code == 3 and "column" in err
    code, _, _ = run(capsys, "verify", "--instance", "CLASSICAL", "--condition", "R")
    assert code == 3
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--instance", "NOPE", "--condition", "A"])
    assert exc.value.code == 3
    capsys.readouterr()


def test_guard_override(capsys):
    code, rep = run_json(capsys, "verify", "--instance", "CLASSICAL", "--size", "6", "--condition", "R", "--F", "binom:6,3", "--P", "binom:3,2", "--d", "2", "--max-points", "10")
    assert code == 2 and rep["status"] == "UNDECIDED-AT-SCALE"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "treeramsey.cli", "enumerate", "--S", "chain:2", "--T", "chain:4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "count: 6" in proc.stdout
