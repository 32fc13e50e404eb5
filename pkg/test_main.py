import json

import pytest

from main import main
from presets import list_presets
from run_database import RunDatabase

SHORT_SCENARIO = {
    "name": "cli-short",
    "plant": "unicycle",
    "world": {"dimension": 2, "obstacles": [{"type": "circle", "center": [3.0, 0.3], "radius": 0.5}]},
    "x0": [0.0, 0.0, 0.0, 0.0],
    "goals": [[6.0, 0.0]],
    "run": {"duration": 0.4, "dt": 0.005},
}


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "short.json"
    path.write_text(json.dumps(SHORT_SCENARIO), encoding='utf-8')
    return str(path)


class TestPresetsCommand:

    def test_list(self, capsys):
        assert main(["presets", "list"]) == 0
        out = capsys.readouterr().out
        for name in list_presets():
            assert name in out

    def test_show(self, capsys):
        assert main(["presets", "show", "quadrotor"]) == 0
        assert json.loads(capsys.readouterr().out)["plant"] == "quad_full"

    def test_export_then_validate(self, tmp_path, capsys):
        path = str(tmp_path / "ground.json")
        assert main(["presets", "export", "ground-360", path]) == 0
        assert main(["validate", "--scenario", path]) == 0
        assert "scenario OK" in capsys.readouterr().out

    def test_unknown_preset(self, capsys):
        assert main(["presets", "show", "mars"]) == 1
        assert "unknown preset" in capsys.readouterr().err


class TestRunCommand:

    def test_run_writes_outputs_and_history(self, scenario_file, tmp_path, capsys):
        out_dir = tmp_path / "out"
        db_path = str(tmp_path / "runs.db")
        code = main(["run", "--scenario", scenario_file, "--out", str(out_dir), "--db", db_path, "--seed", "3"])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["name"] == "cli-short"
        assert summary["steps"] == 81
        for name in ("steps.csv", "constraints.csv", "summary.json", "run.log"):
            assert (out_dir / name).exists()
        written = json.loads((out_dir / "summary.json").read_text(encoding='utf-8'))
        assert written["scenario"]["run"]["seed"] == 3
        with RunDatabase(db_path) as db:
            assert db.get_run_history()[0][1] == "cli-short"

        assert main(["history", "--db", db_path, "--name", "cli-short"]) == 0
        assert "cli-short" in capsys.readouterr().out

    def test_history_delete(self, scenario_file, tmp_path, capsys):
        db_path = str(tmp_path / "runs.db")
        assert main(["run", "--scenario", scenario_file, "--out", str(tmp_path / "out"), "--db", db_path]) == 0
        with RunDatabase(db_path) as db:
            run_id = db.get_run_history()[0][0]
        capsys.readouterr()

        assert main(["history", "--db", db_path, "--delete", str(run_id)]) == 0
        with RunDatabase(db_path) as db:
            assert db.get_run_history() == []
        assert main(["history", "--db", db_path, "--delete", str(run_id)]) == 1
        assert f"no recorded run with id {run_id}" in capsys.readouterr().err

    def test_no_history(self, scenario_file, tmp_path):
        db_path = str(tmp_path / "runs.db")
        assert main(["run", "--scenario", scenario_file, "--out", str(tmp_path / "out"), "--no-history",
                     "--db", db_path, "--lenient"]) == 0
        with RunDatabase(db_path) as db:
            assert db.get_run_history() == []

    def test_invalid_scenario_is_not_run(self, tmp_path, capsys):
        bad = dict(SHORT_SCENARIO, x0=[3.0, 0.3, 0.0, 0.0])
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad), encoding='utf-8')
        out_dir = tmp_path / "out"
        assert main(["run", "--scenario", str(path), "--out", str(out_dir), "--no-history"]) == 1
        assert "initial state unsafe" in capsys.readouterr().out
        assert not out_dir.exists()

    def test_source_is_required(self):
        with pytest.raises(SystemExit):
            main(["run", "--out", "x"])
