import json

import pytest

from ibiskit.cli import main


def run(tmp_path, *argv, out=None):
    args = list(argv)
    if out:
        args += ["--out", str(out)]
    return main(args)


def test_analyze_sl32_ibis(tmp_path):
    out = tmp_path / "r.json"
    code = main(["analyze",
                 "--group", '{"family":"SL","d":3,"q":2}',
                 "--action", '{"kind":"projective_points","d":3,"q":2}',
                 "--task", "ibis", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema"] == 1
    assert report["verdict"]["status"] == "IBIS"
    assert report["verdict"]["rank"] == 3


def test_analyze_psp43_notibis(tmp_path):
    out = tmp_path / "r.json"
    code = main(["analyze",
                 "--group", '{"family":"Sp","d":4,"q":3}',
                 "--action", '{"kind":"projective_points","d":4,"q":3}',
                 "--task", "ibis", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["verdict"]["status"] == "NotIBIS"
    assert sorted(report["verdict"]["lengths"]) == [4, 5]


def test_analyze_jobfile_and_order(tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({
        "group": {"family": "Sp", "d": 6, "q": 2},
        "action": {"kind": "totally_singular_k", "form": "symplectic",
                   "d": 6, "q": 2, "k": 1},
        "task": "order"}))
    out = tmp_path / "r.json"
    assert main(["analyze", str(job), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["order"] == "1451520"


def test_analyze_malformed_json_exits_1_no_partial(tmp_path):
    out = tmp_path / "r.json"
    code = main(["analyze", "--group", "{not json", "--task", "ibis",
                 "--out", str(out)])
    assert code == 1
    assert not out.exists()


def test_analyze_missing_field_exits_1(tmp_path):
    code = main(["analyze", "--group", '{"family":"SL","d":3,"q":2}',
                 "--task", "ibis"])
    assert code == 1


def test_table_rows_and_consistency(tmp_path):
    out = tmp_path / "t.csv"
    code = main(["table", "--rows", "SL3,Sp4(2)'", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "group,degree,expected_b,computed_b,verdict,runtime"
    body = [ln.split(",") for ln in lines[1:]]
    assert [row[0] for row in body] == ["SL3(2) proj", "Sp4(2)' vectors"]
    assert [row[3] for row in body] == ["3", "3"]


def test_table_threads_merge_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["table", "--rows", "SL3,PGL2,SL2(4)", "--out", str(a)]) == 0
    assert main(["table", "--rows", "SL3,PGL2,SL2(4)", "--threads", "3",
                 "--out", str(b)]) == 0

    def strip_runtime(path):
        return [ln.rsplit(",", 1)[0] for ln in path.read_text().splitlines()]
    assert strip_runtime(a) == strip_runtime(b)


def test_witness_command(tmp_path):
    out = tmp_path / "w.json"
    code = main(["witness", "L3.2", "--d", "3", "--q", "3", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["ok"] and report["lemma"] == "L3.2"
    assert all(c["ok"] for c in report["checks"])


def test_witness_unknown_lemma():
    with pytest.raises(SystemExit):
        main(["witness", "L99"])


def test_e7_command(tmp_path):
    out = tmp_path / "e.json"
    assert main(["e7", "2", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["min_ell"] == 7
    assert report["degree"] == str((2**14 - 1) * (2**9 + 1) * (2**5 + 1))


def test_dump_group_roundtrip(tmp_path):
    out = tmp_path / "g.json"
    code = main(["dump-group",
                 "--group", '{"family":"SL","d":3,"q":2}',
                 "--action", '{"kind":"projective_points","d":3,"q":2}',
                 "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["order"] == "168" and data["degree"] == 7
    from ibiskit.perm import PermGroup, Permutation
    G = PermGroup(7, [Permutation(g) for g in data["generators"]])
    assert G.order() == 168


def test_dump_domain(tmp_path):
    out = tmp_path / "d.json"
    code = main(["dump-domain",
                 "--action", '{"kind":"quad_forms_minus","m":1,"q":4}',
                 "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["domain"]["N"] == 6
    assert len(data["points"]) == 6


def test_base_find_with_size(tmp_path):
    out = tmp_path / "b.json"
    job = {"group": {"family": "Sp", "d": 4, "q": 3},
           "action": {"kind": "projective_points", "d": 4, "q": 3},
           "task": "base-find", "size": 5}
    jf = tmp_path / "job.json"
    jf.write_text(json.dumps(job))
    assert main(["analyze", str(jf), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert len(rep["found"]["points"]) == 5
    # an impossible size exits 2 (absence is a value, not an error)
    job["size"] = 9
    jf.write_text(json.dumps(job))
    assert main(["analyze", str(jf), "--budget", "25", "--out", str(out)]) == 2


def test_table_contradiction_guard(monkeypatch, tmp_path):
    import ibiskit.cli as cli_mod
    wrong = [("SL3(2) proj", {"family": "SL", "d": 3, "q": 2},
              {"kind": "projective_points", "d": 3, "q": 2}, 7)]
    monkeypatch.setattr(cli_mod, "TABLE_ROWS", wrong)
    assert main(["table", "--out", str(tmp_path / "t.csv")]) == 1


def test_reports_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["analyze", "--group", '{"family":"Sp","d":4,"q":3}',
            "--action", '{"kind":"projective_points","d":4,"q":3}',
            "--task", "ibis", "--seed", "5", "--budget", "50000"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
