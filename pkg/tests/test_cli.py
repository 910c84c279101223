"""Command-line interface: subcommands, exit codes, deterministic outputs."""

import json

import numpy as np
import pytest

from gmedian import build_graph, read_graph, save_graph
from gmedian.cli import main

GXL_TEMPLATE = """<?xml version="1.0"?>
<gxl><graph id="{gid}" edgemode="undirected">
{nodes}
{edges}
</graph></gxl>"""


@pytest.fixture
def graph_files(tmp_path):
    g = build_graph(4, [1, 2, 2, 3], [(1, 2, 1), (0, 3, 3), (1, 3, 2), (2, 3, 3)])
    g2 = build_graph(3, [1, 2, 2], [(1, 2, 1), (0, 2, 4)])
    a, b = tmp_path / "a.gmg", tmp_path / "b.gmg"
    save_graph(g, a)
    save_graph(g2, b)
    return str(a), str(b)


def _write_gxl(path, gid, labels, edges):
    nodes = "\n".join(
        f'<node id="n{i}"><attr name="lab"><int>{lab}</int></attr></node>'
        for i, lab in enumerate(labels)
    )
    edge_lines = "\n".join(
        f'<edge from="n{i}" to="n{j}"><attr name="bond"><int>{lab}</int></attr></edge>'
        for i, j, lab in edges
    )
    path.write_text(GXL_TEMPLATE.format(gid=gid, nodes=nodes, edges=edge_lines))


@pytest.fixture
def dataset(tmp_path):
    rng = np.random.default_rng(17)
    entries = []
    for ci, label_value in enumerate((1, 9)):
        for k in range(4):
            # same order everywhere: cross-class maps pay 4 substitutions,
            # within-class graphs differ by at most one edge label
            order = 4
            labels = [label_value] * order
            edges = [(i, i + 1, 1) for i in range(order - 1)]
            if rng.random() < 0.5:
                edges[-1] = (order - 2, order - 1, 2)
            name = f"c{ci}_{k}.gxl"
            _write_gxl(tmp_path / name, f"c{ci}_{k}", labels, edges)
            entries.append(f'<print file="{name}" class="class{ci}"/>')
    index = tmp_path / "index.cxl"
    index.write_text(
        '<?xml version="1.0"?><GraphCollection><prints>'
        + "".join(entries)
        + "</prints></GraphCollection>"
    )
    return str(index)


def test_ged_exact(graph_files, capsys):
    a, b = graph_files
    assert main(["ged", a, b, "--method", "exact"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "cost 11"
    assert "exact yes" in out
    assert out.splitlines()[2].startswith("map ")


def test_ged_respects_cost_flag(graph_files, capsys):
    a, _ = graph_files
    assert main(["ged", a, a, "--method", "exact", "--cost", "c_vs=2,c_es=0.5"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "cost 0"


def test_usage_errors(graph_files, capsys):
    a, b = graph_files
    assert main(["ged", a]) == 1
    assert main(["ged", a, b, "--bogus"]) == 1
    assert main(["nonsense"]) == 1
    assert main(["ged", a, b, "--cost", "c_zz=1"]) == 1
    assert main(["ged", a, b, "--cost", "c_vs=abc"]) == 1
    assert main(["sod-table"]) == 1  # --dataset is required
    capsys.readouterr()


def test_data_errors(tmp_path, graph_files, capsys):
    a, _ = graph_files
    assert main(["ged", a, str(tmp_path / "missing.gmg")]) == 2
    bad = tmp_path / "bad.gmg"
    bad.write_text("gmg 9 1 label label\nv 0 1\n")
    assert main(["ged", a, str(bad)]) == 2
    assert main(["median", "--dataset", str(tmp_path / "no_index.cxl")]) == 2
    err = capsys.readouterr().err
    assert "data error" in err


def test_cost_guard_is_usage_error(graph_files, capsys):
    a, b = graph_files
    assert main(["ged", a, b, "--cost", "c_vs=100"]) == 1
    assert "error" in capsys.readouterr().err


def test_median_writes_deterministic_file(dataset, tmp_path, capsys):
    out1 = tmp_path / "m1.gmg"
    out2 = tmp_path / "m2.gmg"
    args = ["median", "--dataset", dataset, "--multistart", "4", "--seed", "5"]
    assert main(args + ["--out", str(out1)]) == 0
    first = capsys.readouterr().out
    assert main(args + ["--out", str(out2), "--threads", "2"]) == 0
    second = capsys.readouterr().out
    assert out1.read_bytes() == out2.read_bytes()
    # stdout traces carry no timings, so they are reproducible too
    trace1 = [ln for ln in first.splitlines() if ln.startswith("iter")]
    trace2 = [ln for ln in second.splitlines() if ln.startswith("iter")]
    assert trace1 == trace2
    median = read_graph(out1.read_text())
    assert median.order > 0


def test_set_median_subcommand(dataset, tmp_path, capsys):
    out = tmp_path / "sm.gmg"
    assert main(["set-median", "--dataset", dataset, "--multistart", "4", "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "set-median index" in stdout
    assert out.exists()
    read_graph(out.read_text())


def test_sod_table_csv(dataset, tmp_path, capsys):
    out = tmp_path / "sod.csv"
    code = main(
        ["sod-table", "--dataset", dataset, "--sample", "3", "--multistart", "4",
         "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "class,repeat,sod_sm,t_sm,sod_gm,t_gm"
    assert len(lines) == 3
    for line in lines[1:]:
        parts = line.split(",")
        assert float(parts[4]) <= float(parts[2]) + 1e-9
    capsys.readouterr()


def test_classify_csv(dataset, tmp_path, capsys):
    out = tmp_path / "cls.csv"
    code = main(
        ["classify", "--dataset", dataset, "--sample", "2", "--multistart", "4",
         "--seed", "1", "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "mode,accuracy_pct,time_s,pt"
    rows = {ln.split(",")[0]: ln.split(",") for ln in lines[1:]}
    assert set(rows) == {"sm", "gm", "ts"}
    # disjoint label alphabets classify perfectly
    assert float(rows["gm"][1]) == 100.0
    capsys.readouterr()


def test_dump_config_and_overrides(dataset, capsys):
    assert main(["median", "--dataset", dataset, "--dump-config", "--cost", "c_vs=2",
                 "--phase1", "bipartite", "--sample", "0.5"]) == 0
    config = json.loads(capsys.readouterr().out)
    assert config["cost"]["c_vs"] == 2.0
    assert config["cost"]["c_er"] == 3.0
    assert config["ged"]["phase1"] == "bipartite"
    assert config["run"]["sample"] == 0.5


def test_config_file_precedence(dataset, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"cost": {"c_vs": 2.0}, "ged": {"multistart": 9}}))
    assert main(["median", "--dataset", dataset, "--dump-config", "--config", str(cfg),
                 "--cost", "c_vs=0.5"]) == 0
    config = json.loads(capsys.readouterr().out)
    assert config["cost"]["c_vs"] == 0.5  # flag beats the config file
    assert config["ged"]["multistart"] == 9


def test_config_file_errors(dataset, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert main(["median", "--dataset", dataset, "--config", str(cfg)]) == 1
    cfg.write_text(json.dumps({"wrong_section": {}}))
    assert main(["median", "--dataset", dataset, "--config", str(cfg)]) == 1
    cfg.write_text(json.dumps({"ged": {"wrong_key": 1}}))
    assert main(["median", "--dataset", dataset, "--config", str(cfg)]) == 1
    assert main(["median", "--dataset", dataset, "--config", str(tmp_path / "none.json")]) == 2
    capsys.readouterr()


def test_gxl_input_for_ged(tmp_path, capsys):
    _write_gxl(tmp_path / "x.gxl", "x", [1, 2], [(0, 1, 1)])
    _write_gxl(tmp_path / "y.gxl", "y", [1, 2], [(0, 1, 2)])
    assert main(["ged", str(tmp_path / "x.gxl"), str(tmp_path / "y.gxl"),
                 "--method", "exact"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "cost 1"


def test_log_env(monkeypatch, graph_files, capsys):
    a, b = graph_files
    monkeypatch.setenv("GMG_LOG", "info")
    assert main(["ged", a, b, "--method", "exact"]) == 0
    capsys.readouterr()
