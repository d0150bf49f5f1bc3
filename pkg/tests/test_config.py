from fractions import Fraction

import pytest

from rootlab.config import (
    DEFAULT_BITS,
    Settings,
    get_config,
    get_settings,
    load_config_file,
    settings_as_dict,
)
from rootlab.errors import ConfigError


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("ROOTLAB_BITS", raising=False)
    monkeypatch.delenv("ROOTLAB_WORKERS", raising=False)


def _make_config(tmp_path, text):
    path = tmp_path / "rootlab.conf"
    path.write_text(text)
    return path


def test_defaults():
    settings = get_settings()
    assert settings.bits == DEFAULT_BITS == 4096
    assert settings.tnfe == 12
    assert settings.kappa == Fraction(1, 100)
    assert settings.output_format == "text"
    assert settings.workers == 1
    assert settings.truncation is None


def test_environment(monkeypatch):
    monkeypatch.setenv("ROOTLAB_BITS", "256")
    monkeypatch.setenv("ROOTLAB_WORKERS", "4")
    settings = Settings.from_env()
    assert (settings.bits, settings.workers) == (256, 4)
    assert get_config() == {"ROOTLAB_BITS": "256", "ROOTLAB_WORKERS": "4"}


def test_bad_environment_value(monkeypatch):
    monkeypatch.setenv("ROOTLAB_BITS", "lots")
    with pytest.raises(ConfigError) as exc:
        Settings.from_env()
    assert exc.value.key == "bits"


def test_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("ROOTLAB_BITS", "256")
    path = _make_config(tmp_path, "bits=512\ntnfe=8\nformat=csv\n")

    from_file = get_settings(path)
    assert (from_file.bits, from_file.tnfe, from_file.output_format) == (512, 8, "csv")

    from_flags = get_settings(path, {"bits": 1024, "tnfe": None})
    assert (from_flags.bits, from_flags.tnfe) == (1024, 8)


def test_config_file_values(tmp_path):
    path = _make_config(tmp_path, "kappa=1/10\ncoc-slack=0.1\ntruncation=\n")
    assert load_config_file(path) == {"kappa": "1/10", "coc-slack": "0.1"}
    settings = get_settings(path)
    assert settings.kappa == Fraction(1, 10)
    assert settings.coc_slack == 0.1


@pytest.mark.parametrize(
    "values",
    [{"colour": "red"}, {"bits": "32"}, {"kappa": "0"}, {"format": "xml"}, {"tnfe": "many"}],
)
def test_invalid_values(values):
    with pytest.raises(ConfigError):
        Settings().merged(values)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        get_settings(tmp_path / "absent.conf")


def test_settings_as_dict():
    settings = settings_as_dict(Settings())
    assert settings["bits"] == 4096
    assert set(settings) >= {"bits", "tnfe", "kappa", "output_format", "workers", "truncation"}
