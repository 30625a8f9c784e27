import io
import json
import subprocess
import sys

import pytest

from corescope.cli import run_command, sanitize


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out, err)
    records = [json.loads(line) for line in out.getvalue().splitlines() if line.strip()]
    return code, records, err.getvalue(), out.getvalue()


@pytest.fixture
def files(tmp_path):
    d = tmp_path / "graphs"
    d.mkdir()
    (d / "p5.txt").write_text("a b\nb c\nc d\nd e\n")
    (d / "p5b.txt").write_text("# relabelled\n4 3\n3 2\n2 1\n1 0\n")
    (d / "k5.txt").write_text("".join(f"{i} {j}\n" for i in range(5) for j in range(i + 1, 5)))
    (tmp_path / "bad.txt").write_text("0 1\n2\n")
    (tmp_path / "two.txt").write_text("a b\nb c\nx y\nq q\n")
    return tmp_path


def test_task_example(files):
    code, recs, _, _ = run(["task", "--triplet", "constituent:quantify:diameter-endpoint", str(files / "graphs/p5.txt")])
    assert code == 0 and recs[0]["result"]["value"] == 2
    prov = recs[0]["provenance"]
    assert prov["triplet"] == "constituent:quantify:diameter-endpoint"
    assert prov["seed"] == 20250417 and len(prov["inputs"][0]["sha256"]) == 64


def test_enumerate_example():
    code, recs, _, _ = run(["enumerate", "--n", "4"])
    assert code == 0 and recs[0]["result"]["unlabelled"] == 6 and recs[0]["result"]["labelled"] == 38


def test_invalid_triplet_exit_2(files):
    code, recs, err, _ = run(["task", "--triplet", "single:compare:graph", str(files / "graphs/p5.txt")])
    assert code == 2 and not recs and "ScopeActionError" in err


def test_usage_errors_exit_1(files):
    assert run([])[0] == 1
    assert run(["frobnicate"])[0] == 1
    assert run(["group", "--metric", "hamming", str(files / "graphs")])[0] == 1
    assert run(["task", str(files / "graphs/p5.txt")])[0] == 1


def test_data_errors_exit_2(files):
    code, _, err, _ = run(["describe", str(files / "bad.txt")])
    assert code == 2 and "line 2" in err
    assert run(["describe", str(files / "missing.txt")])[0] == 2
    assert run(["group", str(files / "graphs/p5.txt"), str(files / "graphs/k5.txt")])[0] == 2
    assert run(["compare", str(files / "graphs/p5.txt")])[0] == 2


def test_ingest_components(files, tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    code, recs, _, _ = run(["ingest", str(files / "two.txt"), "--out", str(out)])
    comps = recs[0]["result"]["components"]
    assert code == 0 and [c["node_count"] for c in comps] == [3, 2, 1]
    assert (out / "two.0.txt").read_text() == "0 1\n1 2\n"


def test_directory_batch_in_input_order(files):
    code, recs, _, _ = run(["task", "--triplet", "single:classify:tree", str(files / "graphs")])
    assert code == 0
    assert [r["provenance"]["inputs"][0]["path"].rsplit("/", 1)[1] for r in recs] == ["k5.txt", "p5.txt", "p5b.txt"]
    assert [r["result"]["value"] for r in recs] == [False, True, True]


def test_workers_do_not_change_output(files):
    a = run(["describe", str(files / "graphs")])[3]
    b = run(["describe", "--workers", "2", str(files / "graphs")])[3]
    assert a == b and a


def test_compare_group_rank(files):
    g = files / "graphs"
    code, recs, _, _ = run(["compare", str(g / "p5.txt"), str(g / "p5b.txt")])
    assert recs[0]["result"]["verdict"] == "indistinguishable-by-descriptors"
    code, recs, _, _ = run(["group", "--metric", "census", str(g)])
    assert recs[0]["result"]["grouping"]["groups"] == [[0], [1, 2]]
    assert recs[0]["provenance"]["params"] == {"metric": "census", "threshold": 0.1}
    code, recs, _, _ = run(["rank", str(g)])
    assert code == 0 and len(recs[0]["result"]["ranking"]["order"]) == 3


def test_pair_and_multiple_triplets(files):
    g = files / "graphs"
    code, recs, _, _ = run(["task", "--triplet", "pair:compare:graph", str(g / "p5.txt"), str(g / "k5.txt")])
    assert code == 0 and recs[0]["result"]["variant"] == "compare-report"
    code, recs, _, _ = run(["task", "--triplet", "multiple:quantify:graph,metric=census", str(g)])
    assert code == 0 and recs[0]["result"]["value"]["metric"] == "census"


def test_chain_command(files):
    code, recs, _, _ = run(["task", "--chain", "c=subgraph:locate:clique; l=largest(c)",
                            str(files / "graphs/k5.txt")])
    assert code == 0 and recs[0]["result"]["value"]["members"] == [[0, 1, 2, 3, 4]]


def test_render_writes_svg(files, tmp_path):
    out = tmp_path / "svg"
    code, recs, _, _ = run(["render", "--encoding", "np", "--out", str(out), str(files / "graphs")])
    assert code == 0 and len(recs) == 3
    assert sorted(p.name for p in out.iterdir()) == ["k5.NP.svg", "p5.NP.svg", "p5b.NP.svg"]
    assert (out / "p5.NP.svg").read_bytes() == (out / "p5b.NP.svg").read_bytes()


def test_repeatable_output(files):
    argv = ["render", "--encoding", "NL", str(files / "graphs")]
    assert run(argv)[3] == run(argv)[3]


def test_text_format(files):
    out = io.StringIO()
    assert run_command(["enumerate", "--n", "3", "--format", "text"], out, io.StringIO()) == 0
    text = out.getvalue()
    assert "\n  " in text
    assert json.loads(text)["result"]["unlabelled"] == 2


def test_sanitize():
    import numpy as np
    assert sanitize({"a": float("nan"), "b": np.int64(3), "c": (1, np.float64(2.5)), "d": frozenset({2, 1})}) == \
        {"a": None, "b": 3, "c": [1, 2.5], "d": [1, 2]}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "corescope", "enumerate", "--n", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["result"]["unlabelled"] == 2
