import pytest
from pydantic import ValidationError

from src.state.run_config import LabSettings, RunConfig
from src.tools.file_utils import read_json_file, round_floats, write_json_file


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("GRAPHONLAB_THREADS", "3")
    monkeypatch.setenv("GRAPHONLAB_LOG_LEVEL", "debug")
    monkeypatch.setenv("GRAPHONLAB_DEPTH", "12")
    settings = LabSettings.from_env()
    assert (settings.threads, settings.log_level, settings.depth) == (3, "DEBUG", 12)


def test_settings_defaults(monkeypatch):
    for key in ("GRAPHONLAB_THREADS", "GRAPHONLAB_LOG_LEVEL", "GRAPHONLAB_DEPTH"):
        monkeypatch.delenv(key, raising=False)
    settings = LabSettings.from_env()
    assert settings.threads >= 1
    assert settings.depth == 30


def test_run_config_validation():
    assert RunConfig(command="heatmap").seed is None
    with pytest.raises(ValidationError):
        RunConfig(command="verify")
    with pytest.raises(ValidationError):
        RunConfig(command="density", seed=1, method="simpson")
    with pytest.raises(ValidationError):
        RunConfig(command="density", seed=1, format="xml")
    with pytest.raises(ValidationError):
        RunConfig(command="verify", seed=1, depth=60)


def test_json_reports_are_rounded(tmp_path):
    assert round_floats({"a": [1 / 3]}) == {"a": [0.333333333333]}
    path = str(tmp_path / "nested" / "r.json")
    write_json_file(path, {"value": 2 / 3})
    assert read_json_file(path) == {"value": 0.666666666667}
