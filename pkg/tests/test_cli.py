import json
import subprocess
import sys

import pytest

from oracles import parse_dot, read_dataset
from semantic_scene_graph import fixture_path
from semantic_scene_graph.cli import main

MAP = str(fixture_path("crossing_map.json"))
SCENE = str(fixture_path("crossing_scene.csv"))
DRIVE = str(fixture_path("crossing_drive.csv"))
HEADER = "timestamp_ms,track_id,class,x,y,psi,vx,vy,ax,ay,width,length\n"


def summary(text):
    lines = dict(line.split(": ", 1) for line in text.strip().splitlines())
    edges = dict(kv.split("=") for kv in lines["edges"].split(" (")[0].split(", "))
    return {k: int(v) for k, v in edges.items()}, lines


def test_build_both_formats(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["build", "--map", MAP, "--objects", DRIVE, "--out", str(out)]) == 0
    dots = sorted(p.name for p in out.glob("*.dot"))
    assert dots == [f"scene_{t}.dot" for t in sorted((0, 100, 200, 300, 400), key=str)]
    for p in out.glob("*.dot"):
        parse_dot(p.read_text())
    data = read_dataset(out / "scene_graphs")
    counts, lines = summary(capsys.readouterr().out)
    assert lines["scenes processed"] == "5"
    assert int(lines["nodes"]) == len(data["node_attributes"])
    # Summary edge counts equal the sums over the exported files.
    assert sum(counts.values()) == len(data["edges"])
    per_class = [sum(row[k] for row in data["edge_attributes"]) for k in range(3)]
    assert per_class == [counts["longitudinal"], counts["lateral"], counts["intersecting"]]
    dot_edges = sum(len(parse_dot(p.read_text())[2]) for p in out.glob("*.dot"))
    assert dot_edges == sum(counts.values())


def test_build_dot_only(tmp_path):
    assert main(["build", "--map", MAP, "--objects", SCENE, "--out", str(tmp_path), "--format", "dot"]) == 0
    assert [p.name for p in tmp_path.iterdir()] == ["scene_0.dot"]


def test_missing_map_names_the_path(tmp_path, caplog):
    missing = str(tmp_path / "nowhere.json")
    assert main(["build", "--map", missing, "--objects", SCENE, "--out", str(tmp_path)]) != 0
    assert missing in caplog.text


def test_range_excluding_everything(tmp_path, capsys, caplog):
    code = main(["build", "--map", MAP, "--objects", DRIVE, "--out", str(tmp_path / "o"), "--from-ms", "5000"])
    assert code == 0
    assert "no scenes" in caplog.text
    assert "scenes processed: 0" in capsys.readouterr().out
    assert list((tmp_path / "o").iterdir()) == []


def test_inverted_range_is_rejected(tmp_path):
    assert main(["build", "--map", MAP, "--objects", DRIVE, "--from-ms", "5", "--to-ms", "1"]) != 0


def test_validate_fixture_map(capsys, caplog):
    assert main(["validate-map", "--map", MAP]) == 0
    assert "consistent" in capsys.readouterr().out
    assert caplog.text == ""


def test_validate_flags_disjoint_overlap(tmp_path, caplog):
    doc = {"segments": [{"id": "a", "centerline": [[0, 0], [10, 0]]},
                        {"id": "b", "centerline": [[0, 50], [10, 50]]}],
           "edges": [{"from": "a", "to": "b", "kind": "overlapping"}]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    assert main(["validate-map", "--map", str(path)]) == 0
    assert "a -- b does not match geometry" in caplog.text


def test_validate_malformed_map(tmp_path, caplog):
    path = tmp_path / "bad.json"
    path.write_text('{"segments": [\n  {"id": "a" "centerline": []}\n]}')
    assert main(["validate-map", "--map", str(path)]) != 0
    assert "line 2" in caplog.text


def test_validate_semantic_error(tmp_path, caplog):
    path = tmp_path / "dangling.json"
    path.write_text(json.dumps({"segments": [{"id": "a", "centerline": [[0, 0], [1, 0]]}],
                                "edges": [{"from": "a", "to": "z", "kind": "adjacent"}]}))
    assert main(["validate-map", "--map", str(path)]) != 0
    assert "'z'" in caplog.text


def test_malformed_object_list(tmp_path, caplog):
    path = tmp_path / "o.csv"
    path.write_text(HEADER + "0,1,car,0,0,0,0,0,0\n")
    assert main(["build", "--map", MAP, "--objects", str(path), "--out", str(tmp_path)]) != 0
    assert "line 2" in caplog.text


def stats(capsys, objects):
    assert main(["stats", "--map", MAP, "--objects", objects, "--json"]) == 0
    return json.loads(capsys.readouterr().out)


def test_stats_fixture(capsys):
    result = stats(capsys, SCENE)
    assert all(result["relation_classes"][k] >= 1 for k in ("longitudinal", "lateral", "intersecting"))
    assert result["identities_per_participant"] == {"1": 4, "2": 1}


def test_stats_empty_recording(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text(HEADER)
    result = stats(capsys, str(path))
    assert result["scenes"] == 0
    assert set(result["relation_classes"].values()) == {0}
    assert result["d_F_histogram"] == [] and result["identities_per_participant"] == {}


def test_stats_same_lane(tmp_path, capsys):
    path = tmp_path / "lane.csv"
    # Lane F has no lateral neighbor.
    path.write_text(HEADER + "0,1,car,60,35,1.5707963,0,5,0,0,2,4\n0,2,car,60,55,1.5707963,0,5,0,0,2,4\n")
    result = stats(capsys, str(path))
    assert result["relation_classes"] == {"longitudinal": 2, "lateral": 0, "intersecting": 0}


def test_stats_text_report(capsys):
    assert main(["stats", "--map", MAP, "--objects", SCENE]) == 0
    out = capsys.readouterr().out
    assert "relation classes:" in out and "d_F histogram:" in out


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"map": MAP, "objects": SCENE, "out": str(tmp_path / "o"),
                               "format": "tudataset", "max_lateral": 0.1}))
    assert main(["build", "--config", str(cfg)]) == 0
    # Only the two vehicles sitting exactly on a centerline survive 0.1 m.
    assert "nodes: 2" in capsys.readouterr().out
    assert main(["build", "--config", str(cfg), "--max-lateral", "5"]) == 0
    assert "nodes: 5" in capsys.readouterr().out
    assert sorted(p.name for p in (tmp_path / "o").iterdir()) == sorted(
        f"scene_graphs_{k}.txt" for k in ("A", "graph_indicator", "node_attributes", "edge_attributes"))


def test_unknown_config_key(tmp_path, caplog):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"map": MAP, "sigma": 2}))
    assert main(["validate-map", "--config", str(cfg)]) != 0
    assert "sigma" in caplog.text


@pytest.mark.parametrize("module", ["semantic_scene_graph"])
def test_module_entry_point(module):
    proc = subprocess.run([sys.executable, "-m", module, "validate-map", "--map", MAP],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "segments: 7" in proc.stdout
